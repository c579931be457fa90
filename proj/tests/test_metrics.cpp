#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "cganopt/metrics/front_history.hpp"
#include "cganopt/metrics/hypervolume.hpp"
#include "cganopt/metrics/indicators.hpp"
#include "cganopt/metrics/scaling.hpp"
#include "test_support.hpp"

using namespace cganopt;
using namespace cganopt::metrics;
using district::Direction;
using district::ObjectiveTriple;

namespace {

std::vector<Point3> random_front(Rng& rng, std::size_t n) {
    std::vector<Point3> pts(n);
    for (auto& p : pts)
        for (auto& v : p) v = rng.uniform();
    return pts;
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("hypervolume examples") {
    CHECK(hypervolume(std::vector<Point3>{{0, 0, 0}}) == doctest::Approx(1.0));
    CHECK(hypervolume(std::vector<Point3>{{1, 1, 1}}) == 0.0);
    CHECK(hypervolume(std::vector<Point3>{}) == 0.0);
    const std::vector<Point3> two{{0.5, 0.5, 0.5}, {0.2, 0.8, 0.9}};
    CHECK(std::abs(hypervolume(two) - 0.131) < 1e-9);
    CHECK(std::abs(hypervolume_oracle(two) - 0.131) < 1e-9);
}

TEST_CASE("oracle: duplicates and dominated points change nothing") {
    const std::vector<Point3> base{{0.3, 0.6, 0.2}, {0.7, 0.1, 0.5}};
    auto dup = base;
    dup.push_back(base[0]);
    CHECK(hypervolume_oracle(dup) == doctest::Approx(hypervolume_oracle(base)).epsilon(1e-14));
    auto dom = base;
    dom.push_back({0.8, 0.7, 0.9});
    CHECK(hypervolume_oracle(dom) == doctest::Approx(hypervolume_oracle(base)).epsilon(1e-14));
    CHECK_THROWS(hypervolume_oracle(std::vector<Point3>(kMaxOraclePoints + 1, Point3{0.5, 0.5, 0.5})));
}

TEST_CASE("sweep equals inclusion-exclusion on random fronts") {
    Rng rng(77);
    for (int trial = 0; trial < 300; ++trial) {
        const auto pts = random_front(rng, static_cast<std::size_t>(rng.uniform_int(1, 10)));
        CHECK(std::abs(hypervolume(pts) - hypervolume_oracle(pts)) < 1e-9);
    }
}

TEST_CASE("hypervolume properties: monotone, permutation invariant, bounded") {
    Rng rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        auto pts = random_front(rng, static_cast<std::size_t>(rng.uniform_int(1, 40)));
        const double hv = hypervolume(pts);
        CHECK(hv >= 0.0);
        CHECK(hv <= 1.0);
        auto shuffled = pts;
        std::reverse(shuffled.begin(), shuffled.end());
        CHECK(hypervolume(shuffled) == doctest::Approx(hv).epsilon(1e-12));
        CHECK(hypervolume(nondominated(pts)) == doctest::Approx(hv).epsilon(1e-12));
        pts.push_back(random_front(rng, 1)[0]);
        CHECK(hypervolume(pts) >= hv - 1e-15);
    }
}

TEST_CASE("points outside the reference box contribute nothing") {
    CHECK(hypervolume(std::vector<Point3>{{1.5, 0, 0}}) == 0.0);
    CHECK(hypervolume(std::vector<Point3>{{0.5, 0.5, 0.5}, {2, 2, 2}}) == doctest::Approx(0.125));
}

TEST_CASE("nondominated keeps exactly the undominated points") {
    const std::vector<Point3> pts{{0.1, 0.1, 0.1}, {0.2, 0.2, 0.2}, {0.05, 0.9, 0.3}, {0.1, 0.1, 0.1}};
    const auto nd = nondominated(pts);
    CHECK(nd.size() == 2);
}

TEST_CASE("minmax scaling examples and inverse") {
    std::vector<ObjectiveTriple> train{{100, 1.0, 10}, {300, 3.0, 0}, {200, 2.0, 5}};
    const auto a = fit_anchors(train);
    CHECK(a.best == ObjectiveTriple{100, 1.0, 10});
    CHECK(a.worst == ObjectiveTriple{300, 3.0, 0});
    const auto s = minmax_scale(train, a);
    CHECK(s.points[0] == Point3{0, 0, 0});
    CHECK(s.points[1] == Point3{1, 1, 1});
    CHECK(s.points[2] == Point3{0.5, 0.5, 0.5});
    CHECK(s.warnings.empty());

    Rng rng(4);
    for (int i = 0; i < 200; ++i) {
        const ObjectiveTriple o{100 + 200 * rng.uniform(), 1 + 2 * rng.uniform(), 10 * rng.uniform()};
        const auto p = minmax_scale(std::vector<ObjectiveTriple>{o}, a).points[0];
        const auto back = unscale(p, a);
        CHECK(std::abs(back.lcc - o.lcc) < 1e-12 * 300);
        CHECK(std::abs(back.ghg - o.ghg) < 1e-12);
        CHECK(std::abs(back.walkscore - o.walkscore) < 1e-12);
    }

    const ObjectiveTriple better{50, 0.5, 15};
    const auto out = minmax_scale(std::vector<ObjectiveTriple>{better}, a);
    CHECK(out.points[0][0] < 0.0);
    CHECK(out.clamped()[0] == Point3{0, 0, 0});
}

TEST_CASE("degenerate scaling axes map to 0 with a warning") {
    std::vector<ObjectiveTriple> train{{100, 1.0, 0}, {300, 3.0, 0}};
    const auto s = minmax_scale(train, fit_anchors(train));
    REQUIRE(s.warnings.size() == 1);
    CHECK(s.warnings[0].find("walkscore") != std::string::npos);
    CHECK(s.points[0][2] == 0.0);
    CHECK_THROWS(fit_anchors(std::vector<ObjectiveTriple>{}));
}

TEST_CASE("improvement formula") {
    CHECK(improvement_pct(-4281, -7648, Direction::minimize) == doctest::Approx(3367.0 / 4281.0 * 100.0));
    CHECK(improvement_pct(0.0, 15.0, Direction::maximize) == 100.0);
    CHECK(improvement_pct(0.76, 0.76, Direction::maximize) == 0.0);
    CHECK(improvement_pct(0.76, 0.76, Direction::minimize) == 0.0);
    CHECK(improvement_pct(0.631, 0.997, Direction::maximize) == doctest::Approx(58.0031696));
    CHECK(improvement_pct(2.0, 1.0, Direction::minimize) == doctest::Approx(50.0));
    CHECK(improvement_pct(0.0, 0.0, Direction::minimize) == 0.0);
}

TEST_CASE("extract_best against a linear scan") {
    const std::vector<ObjectiveTriple> one{{5, 2, 10}};
    const auto b1 = extract_best(one);
    CHECK(b1.min_lcc == 5);
    CHECK(b1.min_ghg == 2);
    CHECK(b1.max_walkscore == 10);

    Rng rng(9);
    std::vector<ObjectiveTriple> objs(100);
    for (auto& o : objs) o = {rng.normal() * 100, rng.uniform(), 5.0 * rng.uniform_int(0, 3)};
    const auto b = extract_best(objs);
    double lcc = objs[0].lcc, ghg = objs[0].ghg, ws = objs[0].walkscore;
    for (const auto& o : objs) {
        lcc = std::min(lcc, o.lcc);
        ghg = std::min(ghg, o.ghg);
        ws = std::max(ws, o.walkscore);
    }
    CHECK(b.min_lcc == lcc);
    CHECK(b.min_ghg == ghg);
    CHECK(b.max_walkscore == ws);
    CHECK(objs[b.min_lcc_index].lcc == lcc);

    const auto a = fit_anchors(objs);
    CHECK(a.best.lcc == lcc);
    CHECK(a.best.ghg == ghg);
    CHECK(a.best.walkscore == ws);
    CHECK_THROWS(extract_best(std::vector<ObjectiveTriple>{}));
}

TEST_CASE("cumulative front hypervolume is non-decreasing on a GA archive") {
    const auto& archive = testsupport::small_archive(32, 12, 5);
    const auto history = cumulative_hypervolume(archive);
    REQUIRE(history.size() == 13);
    for (std::size_t g = 1; g < history.size(); ++g) {
        CHECK(history[g].generation == static_cast<int>(g));
        CHECK(history[g].hypervolume >= history[g - 1].hypervolume);
        CHECK(history[g].feasible_seen >= history[g - 1].feasible_seen);
    }
    CHECK(history.back().hypervolume > 0.0);
}

}
