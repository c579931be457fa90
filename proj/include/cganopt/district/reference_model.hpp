#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "cganopt/district/catalog.hpp"
#include "cganopt/district/decision.hpp"

namespace cganopt::district {

struct Point2 {
    double x;
    double y;
};

// The four grid nodes, in meters.
class GridGeometry {
public:
    GridGeometry() = default;

    const std::array<Point2, kNodeCount>& nodes() const { return nodes_; }
    double distance(std::size_t a, std::size_t b) const;

private:
    std::array<Point2, kNodeCount> nodes_{{{0.0, 0.0}, {0.0, 100.0}, {100.0, 0.0}, {200.0, 100.0}}};
};

enum class Direction { minimize, maximize };

struct ObjectiveTriple {
    double lcc;        // $/m2
    double ghg;        // t-CO2eq/m2
    double walkscore;  // [0, 15]

    friend bool operator==(const ObjectiveTriple&, const ObjectiveTriple&) = default;
};

inline constexpr std::array<Direction, 3> kObjectiveDirections{Direction::minimize, Direction::minimize,
                                                               Direction::maximize};

struct PipeNetwork {
    std::vector<std::size_t> building_nodes;  // node indices, ascending
    std::vector<int> pipe_types;              // 1-based catalog index per building edge
    std::vector<double> lengths;              // meters
    double cost = 0.0;                        // $ over the analysis horizon
};

// Hours-weighted mean of (hot water supply - ground temperature), accounting
// for the summer reset.
double mean_supply_excess(const DecisionVector& d, const Catalog& catalog);

// Capital plus monetized heat loss of one plant-to-building edge.
double pipe_edge_cost(const PipeSpec& pipe, double length_m, double supply_excess_c,
                      const ModelConstants& constants);

// Cost-minimal pipe types over the plant-to-building star, by enumerating
// every assignment. Throws std::invalid_argument when d is infeasible.
PipeNetwork solve_pipe_network(const DecisionVector& d, const GridGeometry& geometry, const Catalog& catalog);

double walkscore(const DecisionVector& d);

// Annual energy totals and cost terms behind one evaluation.
struct EnergyBalance {
    double total_floor_area_m2 = 0.0;
    double chp_fuel_kwh = 0.0;
    double boiler_fuel_kwh = 0.0;
    double chp_electricity_kwh = 0.0;
    double import_kwh = 0.0;
    double export_kwh = 0.0;
    double annual_emissions_t = 0.0;
    double chiller_capacity_kw = 0.0;
    double plant_capital = 0.0;
    double pipe_cost = 0.0;
    double annual_operating_cost = 0.0;
    double annual_export_revenue = 0.0;
};

class ReferenceModel {
public:
    explicit ReferenceModel(Catalog catalog, GridGeometry geometry = {});

    // Loads the shipped catalog.
    static ReferenceModel load_default();

    // std::nullopt marks an infeasible vector.
    std::optional<ObjectiveTriple> evaluate(const DecisionVector& d) const;
    std::optional<EnergyBalance> energy_balance(const DecisionVector& d) const;

    const Catalog& catalog() const { return catalog_; }
    const GridGeometry& geometry() const { return geometry_; }

private:
    Catalog catalog_;
    GridGeometry geometry_;
};

}  // namespace cganopt::district
