#ifndef FMR_ENERGY_HPP
#define FMR_ENERGY_HPP

#include "fmr/interval.hpp"

namespace fmr
{

// Gyromagnetic ratio per unit Lande factor, mu_B / hbar in rad s^-1 G^-1.
inline constexpr double gamma_per_g = 8.7941e6;

// Physics constants of one run, CGS units throughout.
struct MaterialParams {
    double g = 2.0;             // Lande factor
    double four_pi_ms = 6400.0; // 4 pi M_s, G
    double k_u = 0.0;           // uniaxial constant, erg/cm^3
    double k_4 = 0.0;           // fourth-order constant, erg/cm^3
    double omega_exp = 0.0;     // microwave angular frequency, rad/s
    // Shape (demagnetizing) term switch. Only tests turn it off.
    bool demag = true;

    static MaterialParams from_frequency_ghz(double freq_ghz, double g, double four_pi_ms, double k_u, double k_4);

    // Throws std::invalid_argument unless g, four_pi_ms and omega_exp are positive and finite.
    void validate() const;

    [[nodiscard]] Interval gamma() const;
    // M_s = 4 pi M_s / (4 pi), emu/cm^3.
    [[nodiscard]] Interval m_s() const;
    // (omega_exp / gamma)^2 in Oe^2.
    [[nodiscard]] Interval target_omega_over_gamma_sq() const;
};

// Orientation of the external field in the wire frame (polar axis = wire axis).
//
// The sine and cosine of the polar angle are stored as enclosures. Directions
// that lie on the wire axis have sin(theta_h) == [0, 0] exactly; the solver
// relies on that to detect the axially symmetric case.
class FieldDirection
{
public:
    FieldDirection() : FieldDirection(0.0, 0.0) {}
    // Radians; theta_h in [0, pi], phi_h in [0, 2pi). The double nearest to
    // pi denotes the antiparallel axis direction.
    FieldDirection(double theta_h, double phi_h);
    // Degrees; multiples of 90 degrees get exact trig values.
    static FieldDirection from_degrees(double theta_deg, double phi_deg);

    [[nodiscard]] double theta_h() const noexcept { return theta_h_; }
    [[nodiscard]] double phi_h() const noexcept { return phi_h_; }
    [[nodiscard]] const Interval &sin_theta_h() const noexcept { return sin_theta_h_; }
    [[nodiscard]] const Interval &cos_theta_h() const noexcept { return cos_theta_h_; }
    // Field parallel or antiparallel to the wire axis.
    [[nodiscard]] bool axial() const noexcept { return sin_theta_h_ == Interval(0.0); }

private:
    double theta_h_;
    double phi_h_;
    Interval sin_theta_h_;
    Interval cos_theta_h_;
};

// Enclosures of the angular partial derivatives of E over a box.
struct EnergyDerivatives {
    Interval e_theta; // dE/dtheta
    Interval e_phi;   // dE/dphi
    Interval e_tt;    // d2E/dtheta2
    Interval e_pp;    // d2E/dphi2
    Interval e_tp;    // d2E/dtheta dphi
};

// Pole-regular quantities on the unit sphere, in an orthonormal (theta, phi) frame.
//
//   torque_phi  = (dE/dphi) / sin(theta)
//   stiff_theta = d2E/dtheta2
//   stiff_phi   = (d2E/dphi2 + sin(theta) cos(theta) dE/dtheta) / sin^2(theta)
//
// The mixed covariant term (d2E/dtheta dphi - cot(theta) dE/dphi) / sin(theta)
// vanishes identically for this energy. All three are finite at theta = 0, pi,
// and at stationary points away from the poles stiff_theta * stiff_phi equals
// e_tt * e_pp - e_tp^2 divided by sin^2(theta).
struct SphereTerms {
    Interval e_theta;
    Interval torque_phi;
    Interval stiff_theta;
    Interval stiff_phi;
};

// Free-energy density (erg/cm^3) of a magnetized infinite cylinder:
//
//   E = -M_s H [sin t sin t_H cos(p - p_H) + cos t cos t_H]
//       + (pi M_s^2 + K_u) sin^2 t + K_4 sin^4 t
//
// Preconditions on the box: theta within [0, pi], phi within [0, 2pi],
// h.lo >= 0. Violations throw std::domain_error.
Interval energy(const Interval &theta, const Interval &phi, const Interval &h, const FieldDirection &dir,
                const MaterialParams &p);

EnergyDerivatives derivatives(const Interval &theta, const Interval &phi, const Interval &h,
                              const FieldDirection &dir, const MaterialParams &p);

SphereTerms sphere_terms(const Interval &theta, const Interval &phi, const Interval &h, const FieldDirection &dir,
                         const MaterialParams &p);

} // namespace fmr

#endif
