#ifndef FMR_RESONANCE_HPP
#define FMR_RESONANCE_HPP

#include <cstdint>
#include <string_view>

#include "fmr/energy.hpp"
#include "fmr/interval.hpp"

namespace fmr
{

// Branch-and-bound search unit: phi x theta x H.
struct Box3 {
    Interval phi;   // rad
    Interval theta; // rad
    Interval h;     // Oe
};

bool contains(const Box3 &box, double phi, double theta, double h) noexcept;

// Which elimination test decided the outcome.
enum class TestId : std::uint8_t {
    none,
    phi_stationarity,   // T1: 0 in dE/dphi
    theta_stationarity, // T2: 0 in dE/dtheta
    stability,          // T3: r.h.s. contains positive numbers at a possible minimum
    frequency,          // T4: (omega_exp / gamma)^2 in the r.h.s.
};

enum class Verdict : std::uint8_t {
    eliminate,
    keep,
    // Survives every test, but the resonance condition in its angular form is
    // singular on the box (sin theta contains 0); the pole limit decided it.
    indeterminate,
};

struct TestOutcome {
    Verdict verdict = Verdict::keep;
    TestId reason = TestId::none;
};

std::string_view to_string(TestId id) noexcept;
std::string_view to_string(Verdict v) noexcept;

// (omega / gamma)^2 = [E_tt E_pp - E_tp^2] / (M_s sin theta)^2 over the box, Oe^2.
// Unbounded whenever sin(theta) contains zero.
Interval omega_over_gamma_sq(const Box3 &box, const FieldDirection &dir, const MaterialParams &p);

// The same quantity written as stiff_theta * stiff_phi / M_s^2 (see SphereTerms).
// Identical to omega_over_gamma_sq at every stationary point off the poles and
// finite everywhere, including the poles.
Interval omega_over_gamma_sq_regular(const Box3 &box, const FieldDirection &dir, const MaterialParams &p);

// Applies T1..T4 in order and reports the first failing test.
//
// T1 uses the azimuthal torque (dE/dphi)/sin(theta), whose zero set equals that
// of dE/dphi away from the poles; at a pole it is the physical condition.
// T3 requires stiff_theta, stiff_phi and their product to reach above zero.
// T4 compares squared quantities.
TestOutcome test_box(const Box3 &box, const FieldDirection &dir, const MaterialParams &p);

// Same as test_box with a precomputed target (omega_exp / gamma)^2.
TestOutcome test_box(const Box3 &box, const FieldDirection &dir, const MaterialParams &p, const Interval &target);

} // namespace fmr

#endif
