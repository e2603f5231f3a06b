#include "fmr/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>
#include <tuple>

namespace fmr
{

namespace
{

// Gap between two intervals on a line; 0 when they overlap or touch.
double gap(const Interval &a, const Interval &b) noexcept
{
    return std::max(0.0, std::max(a.lo(), b.lo()) - std::min(a.hi(), b.hi()));
}

double circular_gap(const Interval &a, const Interval &b) noexcept
{
    constexpr double two_pi = 2 * std::numbers::pi;
    const Interval shifted_up = Interval::from_sorted(b.lo() + two_pi, b.hi() + two_pi);
    const Interval shifted_down = Interval::from_sorted(b.lo() - two_pi, b.hi() - two_pi);
    return std::min({gap(a, b), gap(a, shifted_up), gap(a, shifted_down)});
}

bool touches_north(const Box3 &b) noexcept
{
    return b.theta.lo() <= 0;
}

bool touches_south(const Box3 &b) noexcept
{
    return b.theta.hi() >= std::numbers::pi;
}

bool angles_touch(const Box3 &a, const Box3 &b, double tol_angle) noexcept
{
    if (gap(a.theta, b.theta) > tol_angle) {
        return false;
    }
    if ((touches_north(a) && touches_north(b)) || (touches_south(a) && touches_south(b))) {
        return true;
    }
    return circular_gap(a.phi, b.phi) <= tol_angle;
}

struct disjoint_sets {
    std::vector<std::size_t> parent;

    explicit disjoint_sets(std::size_t n) : parent(n)
    {
        std::iota(parent.begin(), parent.end(), std::size_t{0});
    }

    std::size_t find(std::size_t i)
    {
        while (parent[i] != i) {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        return i;
    }

    void join(std::size_t a, std::size_t b)
    {
        a = find(a);
        b = find(b);
        if (a != b) {
            parent[std::max(a, b)] = std::min(a, b);
        }
    }
};

Interval phi_hull_of(const std::vector<const ConvergedBox *> &cluster)
{
    constexpr double pi = std::numbers::pi;
    Interval plain = Interval::empty();
    for (const auto *c : cluster) {
        plain = hull(plain, c->box.phi);
    }
    if (width(plain) <= pi) {
        return plain;
    }
    // Try the representation centred on phi = 0.
    Interval wrapped = Interval::empty();
    for (const auto *c : cluster) {
        const Interval &p = c->box.phi;
        wrapped = hull(wrapped, p.lo() >= pi ? Interval::from_sorted(p.lo() - 2 * pi, p.hi() - 2 * pi) : p);
    }
    return width(wrapped) < width(plain) ? wrapped : plain;
}

ResonanceResult summarize(const std::vector<const ConvergedBox *> &cluster)
{
    ResonanceResult r;
    r.h_res = Interval::empty();
    r.theta_hull = Interval::empty();
    bool all_indeterminate = true;
    for (const auto *c : cluster) {
        r.h_res = hull(r.h_res, c->box.h);
        r.theta_hull = hull(r.theta_hull, c->box.theta);
        all_indeterminate = all_indeterminate && c->indeterminate;
    }
    r.phi_hull = phi_hull_of(cluster);
    r.status = all_indeterminate ? ResonanceStatus::indeterminate : ResonanceStatus::resonance;
    r.boxes_merged = cluster.size();
    return r;
}

bool on_same_track(const ResonanceResult &a, const ResonanceResult &b, const SolverConfig &cfg) noexcept
{
    const double h_gap = gap(a.h_res, b.h_res);
    const double h_span = std::max(width(a.h_res), width(b.h_res));
    if (h_gap > h_span) {
        return false;
    }
    // Angular drift per Oe along each cluster.
    const auto rate = [](const Interval &angle, const Interval &h) { return width(angle) / std::max(width(h), 1e-300); };
    const double theta_allow = cfg.tol_angle + h_gap * std::max(rate(a.theta_hull, a.h_res), rate(b.theta_hull, b.h_res));
    const double phi_allow = cfg.tol_angle + h_gap * std::max(rate(a.phi_hull, a.h_res), rate(b.phi_hull, b.h_res));
    if (gap(a.theta_hull, b.theta_hull) > theta_allow) {
        return false;
    }
    const bool north = a.theta_hull.lo() <= 0 && b.theta_hull.lo() <= 0;
    const bool south = a.theta_hull.hi() >= std::numbers::pi && b.theta_hull.hi() >= std::numbers::pi;
    return north || south || circular_gap(a.phi_hull, b.phi_hull) <= phi_allow;
}

} // namespace

void SolverConfig::validate() const
{
    const auto positive = [](double x) { return std::isfinite(x) && x > 0; };
    if (!positive(h_max) || !positive(tol_angle) || !positive(tol_field) || !positive(glue_gap)) {
        throw std::invalid_argument("SolverConfig: h_max, tolerances and glue_gap must be positive");
    }
    if (max_list == 0) {
        throw std::invalid_argument("SolverConfig: max_list must be positive");
    }
}

ListOverflow::ListOverflow(std::size_t limit)
    : std::runtime_error("work list exceeded " + std::to_string(limit) + " boxes"), limit_(limit)
{
}

std::string_view to_string(ResonanceStatus s) noexcept
{
    return s == ResonanceStatus::resonance ? "resonance" : "indeterminate";
}

BranchAndBound::BranchAndBound(const FieldDirection &dir, const MaterialParams &p, const SolverConfig &cfg,
                               TestObserver observer)
    : dir_(dir), params_(p), cfg_(cfg), observer_(std::move(observer))
{
    params_.validate();
    cfg_.validate();
    target_ = params_.target_omega_over_gamma_sq();

    Box3 initial;
    initial.phi = dir_.axial() ? Interval(dir_.phi_h()) : Interval::from_sorted(0.0, Interval::two_pi().hi());
    initial.theta = Interval::from_sorted(0.0, Interval::pi().hi());
    initial.h = Interval(0.0, cfg_.h_max);
    consider(initial);
}

double BranchAndBound::normalized_width(const Box3 &b) const noexcept
{
    return std::max({width(b.phi) / cfg_.tol_angle, width(b.theta) / cfg_.tol_angle, width(b.h) / cfg_.tol_field});
}

double BranchAndBound::box_measure(const Box3 &b) const noexcept
{
    double m = 1.0;
    for (const double w : {width(b.phi) / cfg_.tol_angle, width(b.theta) / cfg_.tol_angle, width(b.h) / cfg_.tol_field}) {
        if (w > 0) {
            m *= w;
        }
    }
    return m;
}

double BranchAndBound::normalized_measure() const
{
    double total = 0.0;
    for (const auto &e : queue_.items()) {
        total += box_measure(e.box);
    }
    for (const auto &c : converged_) {
        total += box_measure(c.box);
    }
    return total;
}

std::vector<Box3> BranchAndBound::worklist() const
{
    std::vector<Box3> out;
    out.reserve(queue_.size());
    for (const auto &e : queue_.items()) {
        out.push_back(e.box);
    }
    return out;
}

void BranchAndBound::consider(const Box3 &b)
{
    const TestOutcome outcome = test_box(b, dir_, params_, target_);
    ++tested_;
    if (observer_) {
        observer_(b, outcome);
    }
    if (outcome.verdict == Verdict::eliminate) {
        return;
    }
    const double key = normalized_width(b);
    if (key <= 1.0) {
        converged_.push_back({b, outcome.verdict == Verdict::indeterminate});
        return;
    }
    queue_.push({b, key, next_seq_++});
    max_size_ = std::max(max_size_, queue_.size());
    if (queue_.size() > cfg_.max_list) {
        throw ListOverflow(cfg_.max_list);
    }
}

bool BranchAndBound::step()
{
    if (queue_.empty()) {
        return false;
    }
    const Box3 box = queue_.top().box;
    queue_.pop();

    const double wp = width(box.phi) / cfg_.tol_angle;
    const double wt = width(box.theta) / cfg_.tol_angle;
    const double wh = width(box.h) / cfg_.tol_field;
    Box3 left = box;
    Box3 right = box;
    if (wp >= wt && wp >= wh) {
        std::tie(left.phi, right.phi) = bisect(box.phi);
    } else if (wt >= wh) {
        std::tie(left.theta, right.theta) = bisect(box.theta);
    } else {
        std::tie(left.h, right.h) = bisect(box.h);
    }
    consider(left);
    consider(right);
    return !queue_.empty();
}

void BranchAndBound::run()
{
    while (step()) {
    }
}

std::vector<ResonanceResult> glue(const std::vector<ConvergedBox> &boxes, const SolverConfig &cfg)
{
    std::vector<std::size_t> order(boxes.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return boxes[a].box.h.lo() < boxes[b].box.h.lo(); });

    disjoint_sets sets(boxes.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        const Box3 &a = boxes[order[i]].box;
        for (std::size_t j = i + 1; j < order.size(); ++j) {
            const Box3 &b = boxes[order[j]].box;
            if (b.h.lo() - a.h.hi() > cfg.glue_gap) {
                break;
            }
            if (angles_touch(a, b, cfg.tol_angle)) {
                sets.join(order[i], order[j]);
            }
        }
    }

    std::vector<std::vector<const ConvergedBox *>> clusters;
    std::vector<std::size_t> cluster_of(boxes.size(), static_cast<std::size_t>(-1));
    for (std::size_t i = 0; i < boxes.size(); ++i) {
        const std::size_t root = sets.find(i);
        if (cluster_of[root] == static_cast<std::size_t>(-1)) {
            cluster_of[root] = clusters.size();
            clusters.emplace_back();
        }
        clusters[cluster_of[root]].push_back(&boxes[i]);
    }

    std::vector<ResonanceResult> results;
    results.reserve(clusters.size());
    for (const auto &cluster : clusters) {
        results.push_back(summarize(cluster));
    }

    // Continuation pass: a fragment separated from a larger cluster by less
    // than that cluster's own H extent, and lying on its angular track, is
    // the same resonance.
    for (bool merged = true; merged;) {
        merged = false;
        for (std::size_t i = 0; i < results.size() && !merged; ++i) {
            for (std::size_t j = i + 1; j < results.size() && !merged; ++j) {
                if (on_same_track(results[i], results[j], cfg)) {
                    clusters[i].insert(clusters[i].end(), clusters[j].begin(), clusters[j].end());
                    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(j));
                    results.erase(results.begin() + static_cast<std::ptrdiff_t>(j));
                    results[i] = summarize(clusters[i]);
                    merged = true;
                }
            }
        }
    }

    std::sort(results.begin(), results.end(), [](const ResonanceResult &a, const ResonanceResult &b) {
        const double ma = midpoint(a.h_res);
        const double mb = midpoint(b.h_res);
        if (ma != mb) {
            return ma < mb;
        }
        if (a.theta_hull.lo() != b.theta_hull.lo()) {
            return a.theta_hull.lo() < b.theta_hull.lo();
        }
        return a.phi_hull.lo() < b.phi_hull.lo();
    });
    return results;
}

std::vector<ResonanceResult> solve_orientation(const FieldDirection &dir, const MaterialParams &p,
                                               const SolverConfig &cfg)
{
    BranchAndBound bb(dir, p, cfg);
    bb.run();
    return glue(bb.converged(), cfg);
}

} // namespace fmr
