#ifndef FMR_SOLVER_HPP
#define FMR_SOLVER_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <queue>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "fmr/energy.hpp"
#include "fmr/interval.hpp"
#include "fmr/resonance.hpp"

namespace fmr
{

struct SolverConfig {
    double h_max = 10000.0;   // Oe
    double tol_angle = 2e-6;  // rad
    double tol_field = 0.005; // Oe
    std::size_t max_list = 100000;
    double glue_gap = 0.01; // Oe, 2 * tol_field by default

    // Throws std::invalid_argument unless every field is positive and finite.
    void validate() const;
};

class ListOverflow : public std::runtime_error
{
public:
    explicit ListOverflow(std::size_t limit);
    [[nodiscard]] std::size_t limit() const noexcept { return limit_; }

private:
    std::size_t limit_;
};

enum class ResonanceStatus : std::uint8_t { resonance, indeterminate };

std::string_view to_string(ResonanceStatus s) noexcept;

// One glued resonance enclosure.
struct ResonanceResult {
    Interval h_res;
    Interval theta_hull;
    // May extend below 0 when the cluster straddles phi = 0 (mod 2pi).
    Interval phi_hull;
    ResonanceStatus status = ResonanceStatus::resonance;
    std::size_t boxes_merged = 0;
};

// A box whose normalized widths are all <= 1, with its test verdict.
struct ConvergedBox {
    Box3 box;
    bool indeterminate = false;
};

// Receives every tested box and its outcome, in test order.
using TestObserver = std::function<void(const Box3 &, const TestOutcome &)>;

// Test-and-bisect driver over a work list ordered by normalized width.
//
// Normalized width of a dimension is width / tolerance. The box with the
// largest maximum normalized width is taken first (earliest insertion wins
// ties) and split along its widest normalized dimension (ties: phi, theta, H).
// When the field lies on the wire axis the energy does not depend on phi, and
// the phi dimension is collapsed to the point phi_h.
class BranchAndBound
{
public:
    BranchAndBound(const FieldDirection &dir, const MaterialParams &p, const SolverConfig &cfg,
                   TestObserver observer = {});

    // Processes one box. Returns false once the work list is empty.
    // Throws ListOverflow when the work list grows past cfg.max_list.
    bool step();
    void run();

    [[nodiscard]] bool done() const noexcept { return queue_.empty(); }
    [[nodiscard]] std::size_t worklist_size() const noexcept { return queue_.size(); }
    [[nodiscard]] std::size_t max_worklist_size() const noexcept { return max_size_; }
    [[nodiscard]] std::size_t boxes_tested() const noexcept { return tested_; }
    [[nodiscard]] const std::vector<ConvergedBox> &converged() const noexcept { return converged_; }
    // Snapshot of the work list boxes (unordered).
    [[nodiscard]] std::vector<Box3> worklist() const;

    [[nodiscard]] double normalized_width(const Box3 &b) const noexcept;
    // Sum over work-list and converged boxes of the product of normalized widths
    // of the non-degenerate dimensions.
    [[nodiscard]] double normalized_measure() const;

private:
    struct entry {
        Box3 box;
        double key;
        std::uint64_t seq;
    };
    struct entry_order {
        bool operator()(const entry &a, const entry &b) const noexcept
        {
            if (a.key != b.key) {
                return a.key < b.key;
            }
            return a.seq > b.seq;
        }
    };
    // Exposes the container for snapshots.
    struct queue_type : std::priority_queue<entry, std::vector<entry>, entry_order> {
        [[nodiscard]] const std::vector<entry> &items() const noexcept { return c; }
    };

    void consider(const Box3 &b);
    [[nodiscard]] double box_measure(const Box3 &b) const noexcept;

    FieldDirection dir_;
    MaterialParams params_;
    SolverConfig cfg_;
    Interval target_;
    TestObserver observer_;
    queue_type queue_;
    std::vector<ConvergedBox> converged_;
    std::uint64_t next_seq_ = 0;
    std::size_t max_size_ = 0;
    std::size_t tested_ = 0;
};

// Merges converged boxes into resonance enclosures, sorted by h_res midpoint.
//
// Two boxes join when their H intervals overlap or are at most cfg.glue_gap
// apart and their angular ranges touch within one angular tolerance (phi is
// compared modulo 2pi; boxes touching the same pole always touch in angle).
std::vector<ResonanceResult> glue(const std::vector<ConvergedBox> &boxes, const SolverConfig &cfg);

// All resonance fields up to cfg.h_max for one field orientation.
std::vector<ResonanceResult> solve_orientation(const FieldDirection &dir, const MaterialParams &p,
                                               const SolverConfig &cfg);

} // namespace fmr

#endif
