#include "fmr/energy.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fmr
{

namespace
{

void check_box(const Interval &theta, const Interval &phi, const Interval &h)
{
    if (!theta.is_bounded() || !phi.is_bounded() || !h.is_bounded()) {
        throw std::domain_error("energy: box components must be bounded and non-empty");
    }
    if (theta.lo() < 0 || theta.hi() > Interval::pi().hi()) {
        throw std::domain_error("energy: theta outside [0, pi]");
    }
    if (phi.lo() < 0 || phi.hi() > Interval::two_pi().hi()) {
        throw std::domain_error("energy: phi outside [0, 2pi]");
    }
    if (h.lo() < 0) {
        throw std::domain_error("energy: negative field magnitude");
    }
}

// Trig factors shared by every expression over one box.
struct box_trig {
    Interval st, ct;   // sin, cos of theta
    Interval sd, cd;   // sin, cos of (phi - phi_h)
    Interval s2t, c2t; // sin, cos of 2 theta
    Interval mh;       // M_s H
    Interval proj;     // cosine of the angle between M and H
    Interval a;        // pi M_s^2 + K_u
    Interval k4;

    box_trig(const Interval &theta, const Interval &phi, const Interval &h, const FieldDirection &dir,
             const MaterialParams &p)
    {
        check_box(theta, phi, h);
        st = sin(theta);
        ct = cos(theta);
        const Interval dphi = phi - Interval(dir.phi_h());
        sd = sin(dphi);
        cd = cos(dphi);
        const Interval two_theta = 2.0 * theta;
        s2t = sin(two_theta);
        c2t = cos(two_theta);
        const Interval m = p.m_s();
        mh = m * h;
        proj = st * dir.sin_theta_h() * cd + ct * dir.cos_theta_h();
        a = Interval(p.k_u);
        if (p.demag) {
            a = a + Interval::pi() * sqr(m);
        }
        k4 = Interval(p.k_4);
    }
};

} // namespace

MaterialParams MaterialParams::from_frequency_ghz(double freq_ghz, double g, double four_pi_ms, double k_u,
                                                  double k_4)
{
    MaterialParams p;
    p.g = g;
    p.four_pi_ms = four_pi_ms;
    p.k_u = k_u;
    p.k_4 = k_4;
    p.omega_exp = 2 * std::numbers::pi * freq_ghz * 1e9;
    return p;
}

void MaterialParams::validate() const
{
    const auto positive = [](double x) { return std::isfinite(x) && x > 0; };
    if (!positive(g)) {
        throw std::invalid_argument("MaterialParams: g must be positive");
    }
    if (!positive(four_pi_ms)) {
        throw std::invalid_argument("MaterialParams: 4 pi M_s must be positive");
    }
    if (!positive(omega_exp)) {
        throw std::invalid_argument("MaterialParams: omega_exp must be positive");
    }
    if (!std::isfinite(k_u) || !std::isfinite(k_4)) {
        throw std::invalid_argument("MaterialParams: anisotropy constants must be finite");
    }
}

Interval MaterialParams::gamma() const
{
    return Interval(g) * Interval(gamma_per_g);
}

Interval MaterialParams::m_s() const
{
    return Interval(four_pi_ms) / (4.0 * Interval::pi());
}

Interval MaterialParams::target_omega_over_gamma_sq() const
{
    return sqr(Interval(omega_exp) / gamma());
}

FieldDirection::FieldDirection(double theta_h, double phi_h) : theta_h_(theta_h), phi_h_(phi_h)
{
    if (!(theta_h >= 0 && theta_h <= std::numbers::pi)) {
        throw std::invalid_argument("FieldDirection: theta_h outside [0, pi]");
    }
    if (!(phi_h >= 0 && phi_h < 2 * std::numbers::pi)) {
        throw std::invalid_argument("FieldDirection: phi_h outside [0, 2pi)");
    }
    if (theta_h == 0) {
        sin_theta_h_ = Interval(0.0);
        cos_theta_h_ = Interval(1.0);
    } else if (theta_h == std::numbers::pi) {
        sin_theta_h_ = Interval(0.0);
        cos_theta_h_ = Interval(-1.0);
    } else {
        sin_theta_h_ = sin(Interval(theta_h));
        cos_theta_h_ = cos(Interval(theta_h));
    }
}

FieldDirection FieldDirection::from_degrees(double theta_deg, double phi_deg)
{
    if (!(theta_deg >= 0 && theta_deg <= 180)) {
        throw std::invalid_argument("FieldDirection: theta outside [0, 180] degrees");
    }
    if (!std::isfinite(phi_deg)) {
        throw std::invalid_argument("FieldDirection: phi must be finite");
    }
    double phi_wrapped = std::fmod(phi_deg, 360.0);
    if (phi_wrapped < 0) {
        phi_wrapped += 360.0;
    }
    double phi_rad = phi_wrapped * std::numbers::pi / 180.0;
    if (phi_rad >= 2 * std::numbers::pi) {
        phi_rad = 0.0;
    }

    const double theta_rad = theta_deg * std::numbers::pi / 180.0;
    FieldDirection dir(theta_deg == 180 ? std::numbers::pi : theta_rad, phi_rad);
    if (theta_deg == 90) {
        dir.sin_theta_h_ = Interval(1.0);
        dir.cos_theta_h_ = Interval(0.0);
    } else if (theta_deg != 0 && theta_deg != 180) {
        const Interval t = Interval(theta_deg) * Interval::pi() / 180.0;
        dir.sin_theta_h_ = sin(t);
        dir.cos_theta_h_ = cos(t);
    }
    return dir;
}

Interval energy(const Interval &theta, const Interval &phi, const Interval &h, const FieldDirection &dir,
                const MaterialParams &p)
{
    const box_trig t(theta, phi, h, dir, p);
    const Interval s2 = sqr(t.st);
    return -(t.mh * t.proj) + t.a * s2 + t.k4 * sqr(s2);
}

EnergyDerivatives derivatives(const Interval &theta, const Interval &phi, const Interval &h,
                              const FieldDirection &dir, const MaterialParams &p)
{
    const box_trig t(theta, phi, h, dir, p);
    const Interval s2 = sqr(t.st);
    const Interval mh_sh = t.mh * dir.sin_theta_h();

    EnergyDerivatives d;
    d.e_theta = -(t.mh * (t.ct * dir.sin_theta_h() * t.cd - t.st * dir.cos_theta_h())) + t.a * t.s2t
                + 4.0 * t.k4 * pow(t.st, 3) * t.ct;
    d.e_phi = mh_sh * t.st * t.sd;
    d.e_tt = t.mh * t.proj + 2.0 * t.a * t.c2t + t.k4 * (3.0 * sqr(t.s2t) - 4.0 * sqr(s2));
    d.e_pp = mh_sh * t.st * t.cd;
    d.e_tp = mh_sh * t.ct * t.sd;
    return d;
}

SphereTerms sphere_terms(const Interval &theta, const Interval &phi, const Interval &h, const FieldDirection &dir,
                         const MaterialParams &p)
{
    const box_trig t(theta, phi, h, dir, p);
    const Interval s2 = sqr(t.st);
    const Interval zeeman = t.mh * t.proj;

    SphereTerms s;
    s.e_theta = -(t.mh * (t.ct * dir.sin_theta_h() * t.cd - t.st * dir.cos_theta_h())) + t.a * t.s2t
                + 4.0 * t.k4 * pow(t.st, 3) * t.ct;
    s.torque_phi = t.mh * dir.sin_theta_h() * t.sd;
    s.stiff_theta = zeeman + 2.0 * t.a * t.c2t + t.k4 * (3.0 * sqr(t.s2t) - 4.0 * sqr(s2));
    s.stiff_phi = zeeman + sqr(t.ct) * (2.0 * t.a + 4.0 * t.k4 * s2);
    return s;
}

} // namespace fmr
