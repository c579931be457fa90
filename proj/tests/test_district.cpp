#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

#include "cganopt/district/catalog.hpp"
#include "cganopt/district/decision.hpp"
#include "cganopt/district/reference_model.hpp"
#include "test_support.hpp"

using namespace cganopt;
using namespace cganopt::district;

namespace {

DecisionVector make(std::array<int, 4> nodes, int chp = 1, int chiller = 1, int hw = 50, int hw_reset = 0,
                    int cw = 1, int cw_reset = 0) {
    DecisionVector d;
    d.node_use = nodes;
    d.chp_type = chp;
    d.chiller_type = chiller;
    d.hot_water_temp = hw;
    d.hot_water_summer_reset = hw_reset;
    d.cold_water_temp = cw;
    d.cold_water_winter_reset = cw_reset;
    return d;
}

}  // namespace

TEST_SUITE("district") {

TEST_CASE("validate examples") {
    CHECK(validate(make({1, 5, 0, 0})).feasible());

    const auto none = validate(make({0, 5, 0, 0}));
    CHECK_FALSE(none.feasible());
    CHECK(none.has(ViolationKind::no_building));

    const auto no_plant = validate(make({1, 2, 3, 4}));
    CHECK(no_plant.has(ViolationKind::no_plant));
    CHECK(no_plant.has(ViolationKind::too_many_buildings));

    CHECK(validate(make({1, 5, 5, 0})).has(ViolationKind::multiple_plants));

    auto bad = make({1, 5, 0, 0});
    bad.hot_water_temp = 96;
    const auto v = validate(bad);
    REQUIRE(v.violations.size() == 1);
    CHECK(v.violations[0].kind == ViolationKind::field_out_of_range);
    CHECK(v.violations[0].field == 6);
    CHECK_FALSE(v.violations[0].describe().empty());
}

TEST_CASE("decision vector array round trip") {
    Rng rng(3);
    for (int i = 0; i < 100; ++i) {
        const auto d = testsupport::random_decision(rng);
        CHECK(DecisionVector::from_array(d.to_array()) == d);
    }
    CHECK(kFieldNames.size() == kFieldCount);
}

TEST_CASE("is_duplicate") {
    const auto d = make({1, 5, 2, 0}, 3, 2, 70);
    std::vector<DecisionVector> archive{make({1, 5, 0, 0}), d};
    CHECK(is_duplicate(d, archive));
    auto e = d;
    e.cold_water_temp += 1;
    CHECK_FALSE(is_duplicate(e, archive));
    CHECK_FALSE(is_duplicate(d, std::span<const DecisionVector>{}));
}

TEST_CASE("catalog loads and rejects malformed input") {
    const auto& cat = testsupport::model().catalog();
    CHECK(cat.seasons.size() == 3);
    CHECK(cat.pipes.size() == 5);
    CHECK(cat.constants.grid_emission_factor_t_per_mwh > 0.0);
    CHECK_THROWS(parse_catalog("{}"));
    CHECK_THROWS(parse_catalog("not json"));
}

TEST_CASE("pipe network: single building enumerates all five options") {
    const auto& m = testsupport::model();
    const auto& cat = m.catalog();
    const auto d = make({5, 1, 0, 0}, 1, 1, 70, 5);  // building 100 m from the plant
    const auto net = solve_pipe_network(d, m.geometry(), cat);
    REQUIRE(net.pipe_types.size() == 1);
    CHECK(net.lengths[0] == doctest::Approx(100.0));

    const double excess = mean_supply_excess(d, cat);
    double hours = 0, weighted = 0;
    for (const auto& s : cat.seasons) {
        hours += s.hours;
        weighted += s.hours * (70 - (s.summer ? 5 : 0) - cat.constants.ground_temp_c);
    }
    CHECK(excess == doctest::Approx(weighted / hours).epsilon(1e-14));

    int best = 0;
    double best_cost = std::numeric_limits<double>::infinity();
    for (int p = 0; p < 5; ++p) {
        const auto& pipe = cat.pipes[static_cast<std::size_t>(p)];
        const double cost = pipe.unit_cost_per_m * 100.0 +
                            pipe.loss_coefficient_w_per_mk * 100.0 * excess * cat.constants.heat_loss_price_factor_per_w;
        if (cost < best_cost) {
            best_cost = cost;
            best = p + 1;
        }
    }
    CHECK(net.pipe_types[0] == best);
    CHECK(net.cost == doctest::Approx(best_cost).epsilon(1e-12));
}

TEST_CASE("pipe network: infeasible input is an error") {
    const auto& m = testsupport::model();
    CHECK_THROWS_AS(solve_pipe_network(make({0, 5, 0, 0}), m.geometry(), m.catalog()), std::invalid_argument);
}

TEST_CASE("pipe network: three buildings equal the per-edge minima and the 125-way brute force") {
    const auto& m = testsupport::model();
    const auto& cat = m.catalog();
    for (int hw : {50, 72, 95}) {
        const auto d = make({1, 2, 5, 3}, 2, 2, hw, 3);
        const auto net = solve_pipe_network(d, m.geometry(), cat);
        REQUIRE(net.pipe_types.size() == 3);
        const double excess = mean_supply_excess(d, cat);

        double per_edge = 0.0;
        for (double len : net.lengths) {
            double lo = std::numeric_limits<double>::infinity();
            for (const auto& p : cat.pipes) lo = std::min(lo, pipe_edge_cost(p, len, excess, cat.constants));
            per_edge += lo;
        }
        double brute = std::numeric_limits<double>::infinity();
        for (int a = 0; a < 5; ++a)
            for (int b = 0; b < 5; ++b)
                for (int c = 0; c < 5; ++c) {
                    const double cost = pipe_edge_cost(cat.pipes[a], net.lengths[0], excess, cat.constants) +
                                        pipe_edge_cost(cat.pipes[b], net.lengths[1], excess, cat.constants) +
                                        pipe_edge_cost(cat.pipes[c], net.lengths[2], excess, cat.constants);
                    brute = std::min(brute, cost);
                }
        CHECK(net.cost == doctest::Approx(per_edge).epsilon(1e-12));
        CHECK(net.cost == doctest::Approx(brute).epsilon(1e-12));
    }
}

TEST_CASE("pipe heat-loss term is monotone in supply temperature") {
    const auto& m = testsupport::model();
    const auto& cat = m.catalog();
    double prev = -1.0;
    for (int hw = 50; hw <= 95; ++hw) {
        const double loss = pipe_edge_cost(cat.pipes[0], 100.0, mean_supply_excess(make({1, 5, 0, 0}, 1, 1, hw), cat),
                                           cat.constants) -
                            cat.pipes[0].unit_cost_per_m * 100.0;
        CHECK(loss >= prev);
        prev = loss;
    }
}

TEST_CASE("walkscore examples") {
    CHECK(walkscore(make({1, 5, 1, 1})) == 0.0);
    CHECK(walkscore(make({2, 5, 0, 0})) == 0.0);
    CHECK(walkscore(make({1, 5, 2, 0})) == 5.0);
    CHECK(walkscore(make({1, 5, 2, 3})) == 10.0);
}

TEST_CASE("reference model golden values") {
    // Pinned against an independent re-implementation of the model formulas.
    const auto& m = testsupport::model();
    const auto a = m.evaluate(make({1, 5, 2, 3}, 3, 2, 70, 5, 6, 2));
    REQUIRE(a);
    CHECK(a->lcc == doctest::Approx(352.7011283719012).epsilon(1e-12));
    CHECK(a->ghg == doctest::Approx(1.3716493243015162).epsilon(1e-12));
    CHECK(a->walkscore == 10.0);

    const auto b = m.evaluate(make({1, 5, 0, 0}));
    REQUIRE(b);
    CHECK(b->lcc == doctest::Approx(528.407656120898).epsilon(1e-12));
    CHECK(b->ghg == doctest::Approx(1.0645054335986954).epsilon(1e-12));
    CHECK(b->walkscore == 0.0);
}

TEST_CASE("evaluate is pure and defined exactly on the feasible set") {
    const auto& m = testsupport::model();
    Rng rng(11);
    int feasible = 0;
    for (int i = 0; i < 3000; ++i) {
        auto d = testsupport::random_decision(rng);
        if (i % 3 == 0) d.node_use[static_cast<std::size_t>(i % 4)] = 7;  // out of range
        const auto o1 = m.evaluate(d);
        const auto o2 = m.evaluate(d);
        CHECK(validate(d).feasible() == o1.has_value());
        if (!o1) continue;
        ++feasible;
        REQUIRE(o2);
        CHECK(std::memcmp(&*o1, &*o2, sizeof(ObjectiveTriple)) == 0);
        CHECK(o1->ghg > 0.0);
        CHECK((o1->walkscore == 0.0 || o1->walkscore == 5.0 || o1->walkscore == 10.0 || o1->walkscore == 15.0));
        CHECK(std::isfinite(o1->lcc));
    }
    CHECK(feasible > 100);
}

}
