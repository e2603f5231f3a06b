#ifndef FMR_ORACLE_HPP
#define FMR_ORACLE_HPP

#include <stdexcept>
#include <vector>

#include "fmr/energy.hpp"

// Classical point-arithmetic reference: find the equilibrium of M for a fixed
// field, compute the resonance frequency there, and scan the field magnitude
// for coincidences with omega_exp. Slow and non-rigorous; used to cross-check
// the interval solver.
//
// The energy is evaluated on the unit vector m (wire axis = z) and its
// curvature is taken in an orthonormal tangent frame, so poles need no
// special treatment.
namespace fmr::oracle
{

struct Equilibrium {
    double theta = 0.0;
    double phi = 0.0;
};

struct OracleRoot {
    double h_res = 0.0; // Oe
    double theta_eq = 0.0;
    double phi_eq = 0.0;
    double omega_residual = 0.0; // rad/s, omega(h_res) - omega_exp
    int branch = 0;
    // Final bisection bracket; h_res is its midpoint.
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
};

// An equilibrium branch could not be followed continuously in H.
class BranchJump : public std::runtime_error
{
public:
    explicit BranchJump(double h);
    [[nodiscard]] double field() const noexcept { return h_; }

private:
    double h_;
};

struct ScanOptions {
    double refine_tol = 1e-3;        // Oe, root bracket width
    double rescan_interval = 200.0;  // Oe between dense grid scans
    double min_step = 1e-3;          // Oe, smallest tracking sub-step
    double max_move = 0.05;          // rad, largest accepted equilibrium shift per sub-step
    double fold_ratio = 0.05;        // stiffness ratio below which a lost branch counts as a fold
};

// Grid dimensions of the dense equilibrium scan over [0, pi] x [0, 2pi].
inline constexpr int grid_theta = 721;
inline constexpr int grid_phi = 1441;

// All local minima of E(theta, phi) at field magnitude h, refined to 1e-10 rad.
// For a field on the wire axis the scan runs along the meridian phi = phi_h.
// Sorted by theta, then phi.
std::vector<Equilibrium> equilibrium(const FieldDirection &dir, const MaterialParams &p, double h);

// (omega / gamma)^2 at a given magnetization direction, Oe^2. Meaningful at equilibria.
double omega_over_gamma_sq_at(const FieldDirection &dir, const MaterialParams &p, double h, const Equilibrium &eq);

// Resonance fields in (0, h_max] found by tracking every equilibrium branch
// on the grid H = step, 2 step, ... and bisecting sign changes of
// omega - omega_exp. Sorted by h_res. Throws BranchJump.
std::vector<OracleRoot> scan_resonances(const FieldDirection &dir, const MaterialParams &p, double h_max,
                                        double step = 0.5, const ScanOptions &opts = {});

} // namespace fmr::oracle

#endif
