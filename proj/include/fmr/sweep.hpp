#ifndef FMR_SWEEP_HPP
#define FMR_SWEEP_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fmr/energy.hpp"
#include "fmr/oracle.hpp"
#include "fmr/solver.hpp"

namespace fmr
{

struct SweepSpec {
    double theta_start = 0.0; // degrees
    double theta_stop = 180.0;
    double theta_step = 2.0;
    double phi_ext = 0.0;
    MaterialParams params = MaterialParams::from_frequency_ghz(9.243, 2.0, 6400.0, 0.0, 0.0);
    SolverConfig cfg;
    bool run_oracle = false;
    double oracle_step = 0.5; // Oe
    std::uint64_t seed = 0;
    unsigned threads = 0; // 0: hardware concurrency

    void validate() const;
    // theta_start, theta_start + step, ... up to theta_stop (inclusive within 1e-9 step).
    [[nodiscard]] std::vector<double> orientations() const;
};

struct OrientationReport {
    double theta_ext_deg = 0.0;
    std::vector<ResonanceResult> results;
    // Filled only when the oracle ran.
    std::vector<oracle::OracleRoot> oracle_roots;
    bool oracle_jump = false;
    double seconds = 0.0;
};

struct SweepReport {
    std::vector<OrientationReport> orientations;
    double wall_seconds = 0.0;

    [[nodiscard]] std::size_t result_count() const noexcept;
};

class SweepOverflow : public std::runtime_error
{
public:
    SweepOverflow(double theta_ext_deg, std::size_t limit);
    [[nodiscard]] double theta_ext_deg() const noexcept { return theta_; }

private:
    double theta_;
};

// Throws SweepOverflow if any orientation overflows its work list.
SweepReport run_sweep(const SweepSpec &spec);

// Shortest decimal that reads back to the same double (at most 17 digits).
std::string format_double(double x);
// Angles: like format_double, but integral values keep a ".0".
std::string format_angle(double x);

inline constexpr const char *csv_header = "theta_ext_deg,branch_index,h_lo_oe,h_hi_oe,status,boxes_merged";

void write_csv(const SweepReport &report, std::ostream &out);
void emit_csv(const SweepReport &report, const std::filesystem::path &path);

// Inverse of write_csv for the columns it writes. Angular hulls are not
// serialized and come back as the empty interval. Throws std::runtime_error
// on malformed input.
SweepReport parse_csv(std::istream &in);

void write_svg(const SweepReport &report, std::ostream &out, int width = 800, int height = 600);
void emit_svg(const SweepReport &report, const std::filesystem::path &path);

} // namespace fmr

#endif
