#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "fmr/oracle.hpp"
#include "fmr/solver.hpp"
#include "support/reference.hpp"

using fmr::Box3;
using fmr::ConvergedBox;
using fmr::FieldDirection;
using fmr::Interval;
using fmr::MaterialParams;
using fmr::ResonanceStatus;
using fmr::SolverConfig;

namespace
{

const MaterialParams plain = MaterialParams::from_frequency_ghz(9.243, 2.0, 6400.0, 0, 0);

MaterialParams corpus(int i)
{
    return MaterialParams::from_frequency_ghz(9.243, 2.0, 6400.0, ref::corpus[i][0] * 1e5, ref::corpus[i][1] * 1e5);
}

bool same(const fmr::ResonanceResult &a, const fmr::ResonanceResult &b)
{
    return a.h_res == b.h_res && a.theta_hull == b.theta_hull && a.phi_hull == b.phi_hull && a.status == b.status &&
           a.boxes_merged == b.boxes_merged;
}

} // namespace

TEST_CASE("parallel field without anisotropy")
{
    const long double expect = ref::kittel_parallel(9.243, 2.0, 6400.0);
    const auto r = fmr::solve_orientation(FieldDirection::from_degrees(0, 0), plain, {});
    REQUIRE(r.size() == 1);
    CHECK(fmr::contains(r[0].h_res, static_cast<double>(expect)));
    CHECK(width(r[0].h_res) <= 0.05);
    CHECK(r[0].theta_hull.lo() == 0.0);
}

TEST_CASE("perpendicular field without anisotropy")
{
    const long double expect = ref::kittel_perpendicular(9.243, 2.0, 6400.0);
    const auto r = fmr::solve_orientation(FieldDirection::from_degrees(90, 0), plain, {});
    REQUIRE(r.size() == 1);
    CHECK(fmr::contains(r[0].h_res, static_cast<double>(expect)));
    CHECK(width(r[0].h_res) <= 0.05);
    CHECK(r[0].status == ResonanceStatus::resonance);
    CHECK(fmr::contains(r[0].theta_hull, std::numbers::pi / 2));
}

TEST_CASE("antiparallel axis mirrors the parallel case")
{
    const auto a = fmr::solve_orientation(FieldDirection::from_degrees(0, 0), plain, {});
    const auto b = fmr::solve_orientation(FieldDirection::from_degrees(180, 0), plain, {});
    REQUIRE(a.size() == 1);
    REQUIRE(b.size() == 1);
    CHECK(a[0].h_res == b[0].h_res);
}

TEST_CASE("no resonance below a small field ceiling")
{
    SolverConfig cfg;
    cfg.h_max = 1.0;
    for (int i = 0; i < 12; ++i) {
        CHECK(fmr::solve_orientation(FieldDirection::from_degrees(40, 0), corpus(i), cfg).empty());
    }
}

TEST_CASE("configuration validation")
{
    SolverConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.tol_angle = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.max_list = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.h_max = NAN;
    CHECK_THROWS_AS(fmr::BranchAndBound(FieldDirection(), plain, cfg), std::invalid_argument);
}

TEST_CASE("work list cap raises")
{
    SolverConfig cfg;
    cfg.max_list = 4;
    CHECK_THROWS_AS(fmr::solve_orientation(FieldDirection::from_degrees(50, 0), corpus(3), cfg), fmr::ListOverflow);
}

TEST_CASE("split follows the widest normalized dimension")
{
    std::vector<Box3> seen;
    const auto record = [&](const Box3 &b, const fmr::TestOutcome &) { seen.push_back(b); };

    SolverConfig by_field;
    by_field.tol_angle = 10.0;
    fmr::BranchAndBound a(FieldDirection(1.0, 0.0), plain, by_field, record);
    a.step();
    REQUIRE(seen.size() == 3);
    CHECK(seen[1].phi == seen[0].phi);
    CHECK(seen[1].theta == seen[0].theta);
    CHECK(seen[1].h.hi() == seen[2].h.lo());

    // phi spans 2pi against theta's pi, so with a loose field tolerance phi goes first.
    seen.clear();
    SolverConfig by_angle;
    by_angle.tol_field = 1e6;
    fmr::BranchAndBound b(FieldDirection(1.0, 0.0), plain, by_angle, record);
    b.step();
    REQUIRE(seen.size() == 3);
    CHECK(seen[1].theta == seen[0].theta);
    CHECK(seen[1].phi.hi() == seen[2].phi.lo());
}

TEST_CASE("axial field collapses the azimuth")
{
    std::vector<Box3> seen;
    fmr::BranchAndBound bb(FieldDirection::from_degrees(0, 0), plain, {},
                           [&](const Box3 &b, const fmr::TestOutcome &) { seen.push_back(b); });
    bb.run();
    for (const Box3 &b : seen) {
        CHECK(b.phi.is_point());
    }
}

TEST_CASE("work list changes by kept children minus one")
{
    int kept = 0;
    fmr::BranchAndBound bb(FieldDirection::from_degrees(36, 0), corpus(4), {},
                           [&](const Box3 &, const fmr::TestOutcome &o) {
                               kept += o.verdict != fmr::Verdict::eliminate;
                           });
    int shrinks = 0;
    for (int i = 0; i < 3000 && !bb.done(); ++i) {
        const auto before = static_cast<long>(bb.worklist_size());
        const auto converged_before = static_cast<long>(bb.converged().size());
        kept = 0;
        bb.step();
        const long converged = static_cast<long>(bb.converged().size()) - converged_before;
        CHECK(static_cast<long>(bb.worklist_size()) - before == kept - converged - 1);
        shrinks += kept == 0;
    }
    CHECK(shrinks > 0);
}

TEST_CASE("normalized measure never grows and drops on elimination")
{
    bool eliminated = false;
    fmr::BranchAndBound bb(FieldDirection::from_degrees(64, 0), corpus(1), {},
                           [&](const Box3 &, const fmr::TestOutcome &o) {
                               eliminated = eliminated || o.verdict == fmr::Verdict::eliminate;
                           });
    double measure = bb.normalized_measure();
    int drops = 0;
    for (int i = 0; i < 1500 && !bb.done(); ++i) {
        eliminated = false;
        bb.step();
        const double now = bb.normalized_measure();
        CHECK(now <= measure * (1 + 1e-12));
        if (eliminated) {
            CHECK(now < measure);
            ++drops;
        }
        measure = now;
    }
    CHECK(drops > 0);
}

TEST_CASE("planted resonances survive every ancestor box")
{
    struct planted {
        FieldDirection dir;
        double phi;
        Interval theta;
        long double h;
    };
    const planted cases[] = {
        {FieldDirection::from_degrees(90, 0), 0.0, Interval::half_pi(), ref::kittel_perpendicular(9.243, 2, 6400)},
        {FieldDirection::from_degrees(0, 0), 0.0, Interval(0), ref::kittel_parallel(9.243, 2, 6400)},
    };
    for (const planted &c : cases) {
        // The planted H is known to ~1e-12 relative; require ancestors to hold a small neighbourhood.
        const Interval h(static_cast<double>(c.h) * (1 - 1e-13), static_cast<double>(c.h) * (1 + 1e-13));
        int ancestors = 0;
        int lost = 0;
        fmr::BranchAndBound bb(c.dir, plain, {}, [&](const Box3 &b, const fmr::TestOutcome &o) {
            if (fmr::contains(b.phi, c.phi) && fmr::subset(c.theta, b.theta) && fmr::subset(h, b.h)) {
                ++ancestors;
                lost += o.verdict == fmr::Verdict::eliminate;
            }
        });
        bb.run();
        CHECK(ancestors > 10);
        CHECK(lost == 0);
    }
}

TEST_CASE("points inside eliminated boxes are eliminated too")
{
    std::mt19937_64 rng(ref::seed() + 30);
    std::uniform_real_distribution<double> u(0, 1);
    const FieldDirection dir = FieldDirection::from_degrees(52, 0);
    const MaterialParams p = corpus(7);
    std::vector<Box3> eliminated;
    fmr::BranchAndBound bb(dir, p, {}, [&](const Box3 &b, const fmr::TestOutcome &o) {
        if (o.verdict == fmr::Verdict::eliminate && (eliminated.size() < 400 || u(rng) < 0.01)) {
            eliminated.push_back(b);
        }
    });
    bb.run();
    int failures = 0;
    const auto pick = [&](const Interval &a) { return a.lo() + (a.hi() - a.lo()) * u(rng); };
    for (const Box3 &b : eliminated) {
        for (int k = 0; k < 100; ++k) {
            const Box3 point{Interval(pick(b.phi)), Interval(pick(b.theta)), Interval(pick(b.h))};
            failures += fmr::test_box(point, dir, p).verdict != fmr::Verdict::eliminate;
        }
    }
    CHECK(eliminated.size() > 400);
    CHECK(failures == 0);
}

TEST_CASE("identical inputs give identical results")
{
    for (const int deg : {0, 26, 90, 144}) {
        const auto a = fmr::solve_orientation(FieldDirection::from_degrees(deg, 0), corpus(9), {});
        const auto b = fmr::solve_orientation(FieldDirection::from_degrees(deg, 0), corpus(9), {});
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(same(a[i], b[i]));
        }
    }
}

TEST_CASE("glue merges touching boxes")
{
    SolverConfig cfg;
    const Interval th(1.0, 1.000001), ph(0.5, 0.500001);
    std::vector<ConvergedBox> boxes = {
        {{ph, th, Interval(100.005, 100.010)}, false},
        {{ph, th, Interval(100.000, 100.005)}, false},
    };
    const auto r = fmr::glue(boxes, cfg);
    REQUIRE(r.size() == 1);
    CHECK(r[0].h_res == Interval(100.000, 100.010));
    CHECK(r[0].boxes_merged == 2);
    CHECK(r[0].status == ResonanceStatus::resonance);
}

TEST_CASE("glue keeps far clusters apart and sorts them")
{
    SolverConfig cfg;
    const Interval th(1.0, 1.000001), ph(0.5, 0.500001);
    std::vector<ConvergedBox> boxes = {
        {{ph, th, Interval(5269.180, 5269.185)}, false},
        {{ph, th, Interval(102.000, 102.005)}, false},
    };
    const auto r = fmr::glue(boxes, cfg);
    REQUIRE(r.size() == 2);
    CHECK(r[0].h_res.lo() == 102.0);
    CHECK(r[1].h_res.lo() == 5269.18);
}

TEST_CASE("glue separates boxes at different angles")
{
    SolverConfig cfg;
    std::vector<ConvergedBox> boxes = {
        {{Interval(0.5, 0.500001), Interval(1.0, 1.000001), Interval(300, 300.004)}, false},
        {{Interval(0.5, 0.500001), Interval(2.0, 2.000001), Interval(300.004, 300.008)}, false},
    };
    CHECK(fmr::glue(boxes, cfg).size() == 2);
}

TEST_CASE("glue joins across phi = 0")
{
    SolverConfig cfg;
    const double top = Interval::two_pi().lo();
    std::vector<ConvergedBox> boxes = {
        {{Interval(0, 1e-6), Interval(1.0, 1.000001), Interval(300, 300.004)}, false},
        {{Interval(top - 1e-6, top), Interval(1.0, 1.000001), Interval(300.004, 300.008)}, false},
    };
    const auto r = fmr::glue(boxes, cfg);
    REQUIRE(r.size() == 1);
    CHECK(r[0].phi_hull.lo() < 0);
    CHECK(r[0].phi_hull.hi() == 1e-6);
}

TEST_CASE("glued status is indeterminate only when every box is")
{
    SolverConfig cfg;
    const Interval ph(0.0);
    std::vector<ConvergedBox> mixed = {
        {{ph, Interval(0, 1e-6), Interval(300, 300.004)}, true},
        {{ph, Interval(1e-6, 2e-6), Interval(300.004, 300.008)}, false},
    };
    CHECK(fmr::glue(mixed, cfg).at(0).status == ResonanceStatus::resonance);
    mixed[1].indeterminate = true;
    CHECK(fmr::glue(mixed, cfg).at(0).status == ResonanceStatus::indeterminate);
    CHECK(fmr::glue({}, cfg).empty());
}

TEST_CASE("result invariants and oracle completeness on random orientations")
{
    std::mt19937_64 rng(ref::seed() + 31);
    std::uniform_real_distribution<double> u(0, 1);
    const SolverConfig cfg;
    for (int set = 0; set < 12; ++set) {
        const MaterialParams p = corpus(set);
        const FieldDirection dir = FieldDirection::from_degrees(180 * u(rng), 0);
        CAPTURE(set);
        CAPTURE(dir.theta_h());
        const auto results = fmr::solve_orientation(dir, p, cfg);
        for (const auto &r : results) {
            if (width(r.h_res) >= cfg.tol_field) {
                CHECK(r.boxes_merged > 1);
            }
            CHECK(r.h_res.lo() >= 0);
            CHECK(r.h_res.hi() <= cfg.h_max);
        }
        for (std::size_t i = 1; i < results.size(); ++i) {
            CHECK(midpoint(results[i - 1].h_res) <= midpoint(results[i].h_res));
        }
        try {
            for (const auto &root : fmr::oracle::scan_resonances(dir, p, cfg.h_max)) {
                bool inside = false;
                for (const auto &r : results) {
                    inside = inside || fmr::overlaps(r.h_res, Interval(root.bracket_lo, root.bracket_hi));
                }
                CHECK(inside);
            }
        } catch (const fmr::oracle::BranchJump &) {
            MESSAGE("oracle lost a branch; completeness not checked here");
        }
    }
}
