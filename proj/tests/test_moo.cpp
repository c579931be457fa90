#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <set>

#include "cganopt/moo/archive_io.hpp"
#include "cganopt/moo/nsga2.hpp"
#include "cganopt/moo/operators.hpp"
#include "cganopt/moo/sorting.hpp"
#include "test_support.hpp"

using namespace cganopt;
using namespace cganopt::moo;

namespace {

// Rank by repeated removal of the brute-force non-dominated set.
std::vector<std::size_t> brute_force_ranks(const std::vector<MinVector>& pts) {
    std::vector<std::size_t> rank(pts.size(), 0);
    std::vector<bool> done(pts.size(), false);
    std::size_t remaining = pts.size();
    for (std::size_t r = 0; remaining > 0; ++r) {
        std::vector<std::size_t> front;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (done[i]) continue;
            bool dominated = false;
            for (std::size_t j = 0; j < pts.size() && !dominated; ++j)
                dominated = !done[j] && dominates(pts[j], pts[i]);
            if (!dominated) front.push_back(i);
        }
        for (auto i : front) {
            done[i] = true;
            rank[i] = r;
        }
        remaining -= front.size();
    }
    return rank;
}

std::vector<std::size_t> ranks_of(const Fronts& fronts, std::size_t n) {
    std::vector<std::size_t> rank(n, std::numeric_limits<std::size_t>::max());
    for (std::size_t r = 0; r < fronts.size(); ++r)
        for (auto i : fronts[r]) rank[i] = r;
    return rank;
}

std::vector<MinVector> random_points(Rng& rng, std::size_t n, bool coarse) {
    std::vector<MinVector> pts(n);
    for (auto& p : pts)
        for (auto& v : p) v = coarse ? rng.uniform_int(0, 4) : rng.uniform();
    return pts;
}

auto scripted(std::deque<double> values) {
    return [values]() mutable {
        REQUIRE_FALSE(values.empty());
        const double v = values.front();
        values.pop_front();
        return v;
    };
}

DecisionVector base_vector() {
    DecisionVector d;
    d.node_use = {1, 5, 2, 0};
    d.chp_type = 3;
    d.chiller_type = 2;
    d.hot_water_temp = 70;
    d.hot_water_summer_reset = 4;
    d.cold_water_temp = 5;
    d.cold_water_winter_reset = 1;
    return d;
}

}  // namespace

TEST_SUITE("moo") {

TEST_CASE("dominance") {
    CHECK(dominates({1, 1, 1}, {2, 2, 2}));
    CHECK(dominates({1, 1, 1}, {1, 1, 2}));
    CHECK_FALSE(dominates({1, 1, 1}, {1, 1, 1}));
    CHECK_FALSE(dominates({1, 2, 1}, {2, 1, 1}));
    const auto m = to_minimization({10.0, 2.0, 5.0});
    CHECK(m == MinVector{10.0, 2.0, -5.0});
}

TEST_CASE("non_dominated_sort examples") {
    std::vector<MinVector> one{{3, 2, 1}};
    CHECK(non_dominated_sort(one) == Fronts{{0}});

    std::vector<MinVector> pts{{1, 1, 1}, {2, 2, 2}, {1, 2, 3}, {3, 1, 2}};
    const auto fronts = non_dominated_sort(pts);
    REQUIRE(fronts.size() == 2);
    CHECK(fronts[0] == std::vector<std::size_t>{0});
    CHECK(std::set<std::size_t>(fronts[1].begin(), fronts[1].end()) == std::set<std::size_t>{1, 2, 3});

    std::vector<MinVector> same(5, MinVector{0.5, 0.5, 0.5});
    const auto flat = non_dominated_sort(same);
    REQUIRE(flat.size() == 1);
    CHECK(flat[0].size() == 5);
}

TEST_CASE("non_dominated_sort matches the brute-force oracle; serial and parallel agree") {
    Rng rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        const auto n = static_cast<std::size_t>(rng.uniform_int(1, 200));
        const auto pts = random_points(rng, n, trial % 2 == 0);
        const auto fast = non_dominated_sort(pts);
        CHECK(ranks_of(fast, n) == brute_force_ranks(pts));
        CHECK(fast == serial::non_dominated_sort(pts));
    }
}

TEST_CASE("infeasible solutions trail every feasible front, grouped by violation count") {
    std::vector<Solution> pop(4);
    pop[0].objectives = district::ObjectiveTriple{1, 1, 1};
    pop[1].violation_count = 2;
    pop[2].violation_count = 1;
    pop[3].objectives = district::ObjectiveTriple{2, 2, 0};
    const auto fronts = non_dominated_sort(std::span<const Solution>(pop));
    REQUIRE(fronts.size() == 4);
    CHECK(fronts[0] == std::vector<std::size_t>{0});
    CHECK(fronts[1] == std::vector<std::size_t>{3});
    CHECK(fronts[2] == std::vector<std::size_t>{2});
    CHECK(fronts[3] == std::vector<std::size_t>{1});
}

TEST_CASE("crowding distance examples") {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<MinVector> two{{0, 0, 0}, {1, 1, 1}};
    CHECK(crowding_distance(two) == std::vector<double>{inf, inf});
    std::vector<MinVector> single{{0, 0, 0}};
    CHECK(crowding_distance(single) == std::vector<double>{inf});

    std::vector<MinVector> line{{0, 5, 5}, {1, 5, 5}, {2, 5, 5}};
    const auto d = crowding_distance(line);
    CHECK(d[0] == inf);
    CHECK(d[2] == inf);
    CHECK(d[1] == doctest::Approx(1.0));

    // The middle copy of three duplicates has equal neighbours on every objective.
    std::vector<MinVector> dup{{0, 0, 0}, {1, 1, 1}, {1, 1, 1}, {1, 1, 1}, {2, 2, 2}};
    const auto dd = crowding_distance(dup);
    CHECK(dd[2] == 0.0);
    CHECK(std::isfinite(dd[1]));
    CHECK(std::isfinite(dd[3]));
}

TEST_CASE("tournament never prefers a higher rank") {
    Rng rng(5);
    for (int i = 0; i < 500; ++i) {
        Solution a, b;
        a.rank = static_cast<std::size_t>(rng.uniform_int(0, 3));
        b.rank = static_cast<std::size_t>(rng.uniform_int(0, 3));
        a.crowding = rng.uniform();
        b.crowding = rng.uniform();
        const auto& w = tournament_winner(a, b);
        CHECK(w.rank == std::min(a.rank, b.rank));
        if (a.rank == b.rank) CHECK(w.crowding == std::max(a.crowding, b.crowding));
    }
}

TEST_CASE("SBX: identical parents and unit spread reproduce the parents") {
    const auto a = base_vector();
    Rng rng(9);
    for (int i = 0; i < 50; ++i) {
        auto [c1, c2] = sbx_crossover(a, a, 2.5, [&] { return rng.uniform(); });
        CHECK(c1 == a);
        CHECK(c2 == a);
    }
    // Spread factor 1 at u = 1/alpha leaves both children on the parents.
    const double x1 = 60, x2 = 80, lo = 50, hi = 95, eta = 2.5;
    const double beta_lo = 1.0 + 2.0 * (x1 - lo) / (x2 - x1);
    const double alpha = 2.0 - std::pow(beta_lo, -(eta + 1.0));
    CHECK(sbx_spread_factor(1.0 / alpha, (x1 - lo) / (x2 - x1), eta) == doctest::Approx(1.0));
    const auto kids = sbx_field(x1, x2, lo, hi, 1.0 / alpha, eta);
    CHECK(kids.low == doctest::Approx(x1));
}

TEST_CASE("SBX pinned draw on hot_water_temp 50 vs 94") {
    auto a = base_vector();
    auto b = base_vector();
    a.hot_water_temp = 50;
    b.hot_water_temp = 94;
    const double u = 0.3, eta = 2.5;
    // Gate draws for fields 0..5 (equal fields skip after the gate), then field 6: gate, u, swap.
    std::deque<double> draws{0.9, 0.9, 0.9, 0.9, 0.9, 0.9, 0.1, u, 0.7, 0.9, 0.9, 0.9};
    auto [c1, c2] = sbx_crossover(a, b, eta, scripted(draws));

    const double spread = 44.0;
    auto bq = [&](double gap) {
        const double beta = 1.0 + 2.0 * gap / spread;
        const double alpha = 2.0 - std::pow(beta, -(eta + 1.0));
        return u <= 1.0 / alpha ? std::pow(u * alpha, 1.0 / (eta + 1.0))
                                : std::pow(1.0 / (2.0 - u * alpha), 1.0 / (eta + 1.0));
    };
    const double low = 0.5 * (144.0 - bq(0.0) * spread);
    const double high = 0.5 * (144.0 + bq(1.0) * spread);
    const int expect_low = std::clamp(static_cast<int>(std::lround(low)), 50, 95);
    const int expect_high = std::clamp(static_cast<int>(std::lround(high)), 50, 95);
    // Swap draw 0.7 >= 0.5: first child takes the low value.
    CHECK(c1.hot_water_temp == expect_low);
    CHECK(c2.hot_water_temp == expect_high);
    for (int v : {c1.hot_water_temp, c2.hot_water_temp}) {
        CHECK(v >= 50);
        CHECK(v <= 95);
    }
    auto rest1 = c1, rest2 = c2;
    rest1.hot_water_temp = rest2.hot_water_temp = 0;
    auto ra = a;
    ra.hot_water_temp = 0;
    CHECK(rest1 == ra);
    CHECK(rest2 == ra);
}

TEST_CASE("polynomial mutation examples") {
    const auto d = base_vector();
    Rng rng(1);
    CHECK(polynomial_mutation(d, 2.5, 0.0, [&] { return rng.uniform(); }) == d);

    CHECK(polynomial_mutate_value(70, 50, 95, 0.5, 2.5) == doctest::Approx(70.0));

    for (double u : {0.0, 0.01, 0.2, 0.49}) {
        const double v = polynomial_mutate_value(50, 50, 95, u, 2.5);
        CHECK(v >= 50.0);
        CHECK(v <= 95.0);
    }
    // Always-mutate with u = 0.5 everywhere leaves every field unchanged.
    CHECK(polynomial_mutation(d, 2.5, 1.0, [] { return 0.5; }) == d);
    // Mutated integer fields stay in range.
    for (int i = 0; i < 2000; ++i) {
        const auto m = polynomial_mutation(testsupport::random_decision(rng), 2.5, 0.5, [&] { return rng.uniform(); });
        const auto f = m.to_array();
        for (std::size_t k = 0; k < district::kFieldCount; ++k) {
            CHECK(f[k] >= district::kFieldBounds[k].lo);
            CHECK(f[k] <= district::kFieldBounds[k].hi);
        }
    }
}

TEST_CASE("GA config validation") {
    GaConfig cfg;
    CHECK_NOTHROW(cfg.check());
    cfg.population_size = 0;
    CHECK_THROWS(cfg.check());
    cfg = GaConfig{};
    cfg.crossover_prob = 1.5;
    CHECK_THROWS(cfg.check());
    cfg = GaConfig{};
    cfg.generations = -1;
    CHECK_THROWS(cfg.check());
}

TEST_CASE("generations = 0 keeps only the initial population") {
    GaConfig cfg;
    cfg.population_size = 16;
    cfg.generations = 0;
    const auto archive = run_nsga2(cfg, testsupport::evaluator());
    CHECK(archive.size() == 16);
    CHECK(archive.last_generation() == 0);
}

TEST_CASE("archive bookkeeping and marker consistency") {
    const auto& archive = testsupport::small_archive(24, 10, 3);
    CHECK(archive.size() == 24u * 11u);
    for (const auto& e : archive.entries()) {
        const bool valid = district::validate(e.solution.decision).feasible();
        CHECK(valid == e.solution.feasible());
        CHECK((e.solution.feasible() ? e.solution.violation_count == 0 : e.solution.violation_count > 0));
    }
    CHECK(archive.feasible_solutions().size() > 0);
}

TEST_CASE("same seed twice gives identical archives, byte for byte on disk") {
    GaConfig cfg;
    cfg.population_size = 20;
    cfg.generations = 6;
    cfg.rng_seed = 77;
    const auto dir = testsupport::scratch_dir("moo_det");
    write_archive(dir / "a.csv", run_nsga2(cfg, testsupport::evaluator()));
    write_archive(dir / "b.csv", run_nsga2(cfg, testsupport::evaluator()));
    CHECK(testsupport::slurp(dir / "a.csv") == testsupport::slurp(dir / "b.csv"));

    const auto back = read_archive(dir / "a.csv");
    write_archive(dir / "c.csv", back);
    CHECK(testsupport::slurp(dir / "a.csv") == testsupport::slurp(dir / "c.csv"));
}

TEST_CASE("serial and parallel population evaluation agree") {
    Rng rng(8);
    std::vector<DecisionVector> ds;
    for (int i = 0; i < 300; ++i) ds.push_back(testsupport::random_decision(rng));
    const auto eval = testsupport::evaluator();
    const auto a = evaluate_population(ds, eval);
    const auto b = serial::evaluate_population(ds, eval);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].decision == b[i].decision);
        CHECK(a[i].objectives == b[i].objectives);
        CHECK(a[i].violation_count == b[i].violation_count);
    }
}

TEST_CASE("environmental selection is elitist") {
    const auto& archive = testsupport::small_archive(24, 10, 3);
    std::vector<Solution> all;
    for (const auto& e : archive.entries()) all.push_back(e.solution);
    const auto survivors = environmental_selection(all, 24);
    CHECK(survivors.size() == 24);
    std::vector<MinVector> feasible_pts;
    for (const auto& s : all)
        if (s.feasible()) feasible_pts.push_back(to_minimization(*s.objectives));
    const auto first = non_dominated_sort(feasible_pts)[0];
    // Every survivor from rank 0 must be non-dominated in the whole set.
    for (const auto& s : survivors) {
        if (s.rank != 0) continue;
        REQUIRE(s.feasible());
        const auto p = to_minimization(*s.objectives);
        for (const auto& q : feasible_pts) CHECK_FALSE(dominates(q, p));
    }
    CHECK(first.size() > 0);
}

}
