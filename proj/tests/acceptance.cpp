// Acceptance runner: one PASS/FAIL line per criterion, exit status 0 only if all pass.
//
//   acceptance            all criteria
//   acceptance 1 3 7      a subset

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fmr/cli.hpp"
#include "fmr/presets.hpp"
#include "fmr/resonance.hpp"
#include "fmr/solver.hpp"
#include "fmr/sweep.hpp"
#include "support/interval_props.hpp"
#include "support/reference.hpp"

using fmr::FieldDirection;
using fmr::Interval;
using fmr::MaterialParams;

namespace
{

// Pinned tolerances and budgets.
constexpr double kittel_max_width = 0.05;        // Oe
constexpr double derivative_rel_tol = 1e-4;
constexpr double derivative_abs_floor = 10.0;    // erg/cm^3 per rad^k; FD noise floor
constexpr double agreement_fraction = 0.95;
constexpr double budget_interval_s = 5.0;
constexpr double budget_kittel_s = 10.0;
constexpr double budget_derivative_s = 5.0;
constexpr double budget_corpus_s = 15 * 60.0;
constexpr double budget_sweep_s = 60.0;

struct verdict {
    bool pass = false;
    std::string detail;
};

using clock_type = std::chrono::steady_clock;

double since(clock_type::time_point t0)
{
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

std::string num(double x, int prec = 6)
{
    std::ostringstream os;
    os.precision(prec);
    os << x;
    return os.str();
}

// Results of the corpus run, shared by criteria 5 and 6.
struct corpus_run {
    bool done = false;
    std::vector<fmr::SweepReport> reports;
    double seconds = 0;
};

corpus_run &corpus()
{
    static corpus_run run;
    if (!run.done) {
        const auto t0 = clock_type::now();
        for (const fmr::Preset &p : fmr::presets()) {
            fmr::SweepSpec s;
            s.params = p.params();
            s.run_oracle = true;
            const auto t1 = clock_type::now();
            run.reports.push_back(fmr::run_sweep(s));
            std::cerr << "  corpus set " << p.id << ": " << num(since(t1), 3) << " s\n";
        }
        run.seconds = since(t0);
        run.done = true;
    }
    return run;
}

verdict interval_exactness()
{
    const bool a = sqr(Interval(-2, 3)) == Interval(0, 9);
    const bool b = Interval(-2, 3) + Interval(0, 1) == Interval(-2, 4);
    const bool c = Interval(0, 1) - Interval(0, 1) == Interval(-1, 1);
    return {a && b && c, std::string("sqr ") + (a ? "ok" : "wrong") + ", add " + (b ? "ok" : "wrong") + ", sub " +
                             (c ? "ok" : "wrong")};
}

verdict interval_properties()
{
    const auto t0 = clock_type::now();
    const props::tally c = props::containment(ref::seed(), 200, 50);
    const props::tally m = props::monotonicity(ref::seed() + 1, 1000);
    const double s = since(t0);
    std::string detail = std::to_string(c.cases) + " containment samples, " + std::to_string(m.cases) +
                         " nested pairs, " + num(s, 3) + " s";
    if (c.failures) {
        detail += "; first containment failure: " + c.first_failure;
    }
    if (m.failures) {
        detail += "; first monotonicity failure: " + m.first_failure;
    }
    return {c.failures == 0 && m.failures == 0 && s < budget_interval_s, detail};
}

verdict kittel()
{
    const auto t0 = clock_type::now();
    const MaterialParams p = MaterialParams::from_frequency_ghz(9.243, 2.0, 6400.0, 0, 0);
    const double h_par = static_cast<double>(ref::kittel_parallel(9.243, 2.0, 6400.0));
    const double h_perp = static_cast<double>(ref::kittel_perpendicular(9.243, 2.0, 6400.0));
    const auto par = fmr::solve_orientation(FieldDirection::from_degrees(0, 0), p, {});
    const auto perp = fmr::solve_orientation(FieldDirection::from_degrees(90, 0), p, {});
    const auto ok = [](const std::vector<fmr::ResonanceResult> &r, double h) {
        return r.size() == 1 && fmr::contains(r[0].h_res, h) && width(r[0].h_res) <= kittel_max_width;
    };
    const double s = since(t0);
    std::ostringstream d;
    d.precision(12);
    d << "parallel " << h_par << " Oe in ";
    for (const auto &r : par) {
        d << r.h_res << ' ';
    }
    d << "(" << par.size() << " enclosure(s)); perpendicular " << h_perp << " Oe in ";
    for (const auto &r : perp) {
        d << r.h_res << ' ';
    }
    d << "(" << perp.size() << " enclosure(s)); " << num(s, 3) << " s";
    return {ok(par, h_par) && ok(perp, h_perp) && s < budget_kittel_s, d.str()};
}

verdict derivatives()
{
    const auto t0 = clock_type::now();
    std::mt19937_64 rng(ref::seed() + 4);
    std::uniform_real_distribution<double> u(0, 1);
    int points = 0, failures = 0;
    double worst = 0;
    const auto check = [&](const Interval &r, long double x) {
        const long double d = x < r.lo() ? r.lo() - x : (x > r.hi() ? x - r.hi() : 0.0L);
        const double rel = static_cast<double>(d / std::max<long double>(std::fabs(x), derivative_abs_floor));
        worst = std::max(worst, rel);
        failures += rel > derivative_rel_tol;
    };
    for (int set = 0; set < 5; ++set) {
        const double ku = -8e5 + 16e5 * u(rng), k4 = -8e5 + 16e5 * u(rng), ms = 1000 + 9000 * u(rng);
        const MaterialParams p = MaterialParams::from_frequency_ghz(9.243, 2.0, ms, ku, k4);
        const ref::material m{ms, ku, k4, true};
        for (int i = 0; i < 100; ++i) {
            const FieldDirection dir(std::numbers::pi * u(rng), 2 * std::numbers::pi * u(rng) * 0.999);
            const double t = 0.01 + (std::numbers::pi - 0.02) * u(rng);
            const double f = 0.01 + (2 * std::numbers::pi - 0.02) * u(rng);
            const double h = 1e4 * u(rng);
            const auto d = fmr::derivatives(Interval(t), Interval(f), Interval(h), dir, p);
            const auto fd = ref::finite_differences(t, f, h, dir.theta_h(), dir.phi_h(), m);
            check(d.e_theta, fd.e_t);
            check(d.e_phi, fd.e_p);
            check(d.e_tt, fd.e_tt);
            check(d.e_pp, fd.e_pp);
            check(d.e_tp, fd.e_tp);
            ++points;
        }
    }
    const double s = since(t0);
    return {failures == 0 && points == 500 && s < budget_derivative_s,
            std::to_string(points) + " points x 5 partials, " + std::to_string(failures) +
                " outside tolerance, worst relative excess " + num(worst, 3) + ", " + num(s, 3) + " s"};
}

verdict corpus_completeness()
{
    const corpus_run &run = corpus();
    int orientations = 0, agree = 0, excused = 0, unexcused = 0, roots = 0, missed = 0, jumps = 0;
    std::string first_problem;
    for (std::size_t set = 0; set < run.reports.size(); ++set) {
        for (const auto &o : run.reports[set].orientations) {
            ++orientations;
            jumps += o.oracle_jump;
            for (const auto &root : o.oracle_roots) {
                ++roots;
                bool inside = false;
                for (const auto &r : o.results) {
                    inside = inside || fmr::overlaps(r.h_res, Interval(root.bracket_lo, root.bracket_hi));
                }
                if (!inside) {
                    ++missed;
                    if (first_problem.empty()) {
                        first_problem = "set " + std::to_string(set + 1) + " theta " +
                                        fmr::format_angle(o.theta_ext_deg) + ": root " + num(root.h_res, 10) +
                                        " outside all enclosures";
                    }
                }
            }
            if (!o.oracle_jump && o.oracle_roots.size() == o.results.size()) {
                ++agree;
                continue;
            }
            bool indeterminate = o.oracle_jump;
            for (const auto &r : o.results) {
                indeterminate = indeterminate || r.status == fmr::ResonanceStatus::indeterminate;
            }
            if (indeterminate) {
                ++excused;
            } else {
                ++unexcused;
                if (first_problem.empty()) {
                    first_problem = "set " + std::to_string(set + 1) + " theta " + fmr::format_angle(o.theta_ext_deg) +
                                    ": solver " + std::to_string(o.results.size()) + " vs oracle " +
                                    std::to_string(o.oracle_roots.size());
                }
            }
        }
    }
    const double frac = orientations ? static_cast<double>(agree) / orientations : 0.0;
    std::string detail = std::to_string(orientations) + " orientations, counts agree at " + std::to_string(agree) +
                         " (" + num(100 * frac, 4) + "%), excused " + std::to_string(excused) + ", unexcused " +
                         std::to_string(unexcused) + ", oracle roots " + std::to_string(roots) + " (" +
                         std::to_string(missed) + " outside), branch jumps " + std::to_string(jumps) + ", " +
                         num(run.seconds, 4) + " s";
    if (!first_problem.empty()) {
        detail += "; first problem: " + first_problem;
    }
    return {orientations == 12 * 91 && missed == 0 && unexcused == 0 && frac >= agreement_fraction &&
                run.seconds < budget_corpus_s,
            detail};
}

verdict multiplicity()
{
    const corpus_run &run = corpus();
    int sets_with = 0, orientations_with = 0;
    std::string example;
    for (std::size_t set = 0; set < run.reports.size(); ++set) {
        bool any = false;
        for (const auto &o : run.reports[set].orientations) {
            if (o.oracle_roots.size() >= 2) {
                any = true;
                ++orientations_with;
                if (example.empty()) {
                    example = "set " + std::to_string(set + 1) + " at " + fmr::format_angle(o.theta_ext_deg) +
                              " deg: oracle " + std::to_string(o.oracle_roots.size()) + " roots, solver " +
                              std::to_string(o.results.size()) + " enclosures";
                }
            }
        }
        sets_with += any;
    }
    return {orientations_with > 0, std::to_string(sets_with) + " set(s), " + std::to_string(orientations_with) +
                                       " orientation(s) with >= 2 branches" +
                                       (example.empty() ? "" : "; e.g. " + example)};
}

int cli(const std::vector<std::string> &args, std::string &out)
{
    std::vector<const char *> argv{"fmr-sweep"};
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream o, e;
    const int code = fmr::run_cli(static_cast<int>(argv.size()), argv.data(), o, e);
    out = o.str();
    return code;
}

verdict determinism()
{
    const std::vector<std::string> args{"--preset", "9"};
    std::string a, b;
    const int ca = cli(args, a);
    const int cb = cli(args, b);
    const bool identical = ca == 0 && cb == 0 && a == b;

    std::istringstream in(a);
    const fmr::SweepReport parsed = fmr::parse_csv(in);
    std::ostringstream again;
    fmr::write_csv(parsed, again);

    // Field-by-field comparison against a direct sweep.
    fmr::SweepSpec s;
    s.params = fmr::preset(9).params();
    const fmr::SweepReport direct = fmr::run_sweep(s);
    bool equal = true;
    std::size_t k = 0;
    for (const auto &o : direct.orientations) {
        if (o.results.empty()) {
            continue;
        }
        if (k >= parsed.orientations.size()) {
            equal = false;
            break;
        }
        const auto &p = parsed.orientations[k++];
        equal = equal && p.theta_ext_deg == o.theta_ext_deg && p.results.size() == o.results.size();
        for (std::size_t i = 0; equal && i < o.results.size(); ++i) {
            equal = p.results[i].h_res == o.results[i].h_res && p.results[i].status == o.results[i].status &&
                    p.results[i].boxes_merged == o.results[i].boxes_merged;
        }
    }
    equal = equal && k == parsed.orientations.size();
    return {identical && again.str() == a && equal,
            std::string("two runs ") + (identical ? "byte-identical" : "DIFFER") + " (" + std::to_string(a.size()) +
                " bytes), re-emitted csv " + (again.str() == a ? "identical" : "DIFFERS") + ", parsed report " +
                (equal ? "equals" : "DIFFERS FROM") + " the direct sweep"};
}

verdict performance()
{
    double worst = 0;
    int worst_id = 0;
    std::string per;
    for (const fmr::Preset &p : fmr::presets()) {
        fmr::SweepSpec s;
        s.params = p.params();
        s.threads = 1;
        const fmr::SweepReport r = fmr::run_sweep(s);
        per += (per.empty() ? "" : " ") + num(r.wall_seconds, 3);
        if (r.wall_seconds > worst) {
            worst = r.wall_seconds;
            worst_id = p.id;
        }
    }
    return {worst < budget_sweep_s, "single-thread 91-orientation sweeps, s per set: " + per + "; slowest set " +
                                        std::to_string(worst_id) + " at " + num(worst, 3) + " s"};
}

} // namespace

int main(int argc, char **argv)
{
    const std::vector<std::pair<std::string, std::function<verdict()>>> criteria = {
        {"interval exactness", interval_exactness},
        {"containment and monotonicity", interval_properties},
        {"closed-form resonance fields", kittel},
        {"derivative correctness", derivatives},
        {"corpus completeness against the oracle", corpus_completeness},
        {"multiple resonance branches", multiplicity},
        {"determinism and csv round trip", determinism},
        {"performance envelope", performance},
    };

    std::set<int> selected;
    for (int i = 1; i < argc; ++i) {
        const int n = std::atoi(argv[i]);
        if (n < 1 || n > static_cast<int>(criteria.size())) {
            std::cerr << "usage: acceptance [criterion numbers 1-" << criteria.size() << "]\n";
            return 2;
        }
        selected.insert(n);
    }

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int n = static_cast<int>(i) + 1;
        if (!selected.empty() && !selected.count(n)) {
            continue;
        }
        verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception &e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        failed += !v.pass;
        std::cout << "criterion " << n << " " << (v.pass ? "PASS" : "FAIL") << "  " << criteria[i].first << ": "
                  << v.detail << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
