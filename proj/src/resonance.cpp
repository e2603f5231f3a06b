#include "fmr/resonance.hpp"

namespace fmr
{

bool contains(const Box3 &box, double phi, double theta, double h) noexcept
{
    return contains(box.phi, phi) && contains(box.theta, theta) && contains(box.h, h);
}

std::string_view to_string(TestId id) noexcept
{
    switch (id) {
        case TestId::none:
            return "none";
        case TestId::phi_stationarity:
            return "T1";
        case TestId::theta_stationarity:
            return "T2";
        case TestId::stability:
            return "T3";
        case TestId::frequency:
            return "T4";
    }
    return "?";
}

std::string_view to_string(Verdict v) noexcept
{
    switch (v) {
        case Verdict::eliminate:
            return "eliminate";
        case Verdict::keep:
            return "keep";
        case Verdict::indeterminate:
            return "indeterminate";
    }
    return "?";
}

Interval omega_over_gamma_sq(const Box3 &box, const FieldDirection &dir, const MaterialParams &p)
{
    const EnergyDerivatives d = derivatives(box.theta, box.phi, box.h, dir, p);
    const Interval numerator = d.e_tt * d.e_pp - sqr(d.e_tp);
    return div_extended(numerator, sqr(p.m_s() * sin(box.theta)));
}

Interval omega_over_gamma_sq_regular(const Box3 &box, const FieldDirection &dir, const MaterialParams &p)
{
    const SphereTerms s = sphere_terms(box.theta, box.phi, box.h, dir, p);
    return s.stiff_theta * s.stiff_phi / sqr(p.m_s());
}

TestOutcome test_box(const Box3 &box, const FieldDirection &dir, const MaterialParams &p)
{
    return test_box(box, dir, p, p.target_omega_over_gamma_sq());
}

TestOutcome test_box(const Box3 &box, const FieldDirection &dir, const MaterialParams &p, const Interval &target)
{
    const SphereTerms s = sphere_terms(box.theta, box.phi, box.h, dir, p);
    if (!contains_zero(s.torque_phi)) {
        return {Verdict::eliminate, TestId::phi_stationarity};
    }
    if (!contains_zero(s.e_theta)) {
        return {Verdict::eliminate, TestId::theta_stationarity};
    }
    const Interval rhs = s.stiff_theta * s.stiff_phi / sqr(p.m_s());
    if (!(rhs.hi() > 0 && s.stiff_theta.hi() > 0 && s.stiff_phi.hi() > 0)) {
        return {Verdict::eliminate, TestId::stability};
    }
    if (!overlaps(rhs, target)) {
        return {Verdict::eliminate, TestId::frequency};
    }
    if (contains_zero(sin(box.theta))) {
        return {Verdict::indeterminate, TestId::none};
    }
    return {Verdict::keep, TestId::none};
}

} // namespace fmr
