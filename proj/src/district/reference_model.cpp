#include "cganopt/district/reference_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

namespace cganopt::district {

namespace {

constexpr double kKelvin = 273.15;

double carnot_ratio(double supply_c, double ambient_c, double approach_c) {
    const double lift = std::max(1.0, ambient_c + approach_c - supply_c);
    return (supply_c + kKelvin) / lift;
}

}  // namespace

double GridGeometry::distance(std::size_t a, std::size_t b) const {
    const auto& p = nodes_.at(a);
    const auto& q = nodes_.at(b);
    return std::hypot(p.x - q.x, p.y - q.y);
}

double mean_supply_excess(const DecisionVector& d, const Catalog& catalog) {
    double weighted = 0.0;
    double hours = 0.0;
    for (const auto& s : catalog.seasons) {
        const double supply = d.hot_water_temp - (s.summer ? d.hot_water_summer_reset : 0);
        weighted += s.hours * (supply - catalog.constants.ground_temp_c);
        hours += s.hours;
    }
    return weighted / hours;
}

double pipe_edge_cost(const PipeSpec& pipe, double length_m, double supply_excess_c,
                      const ModelConstants& constants) {
    const double capital = pipe.unit_cost_per_m * length_m;
    const double loss = pipe.loss_coefficient_w_per_mk * length_m * supply_excess_c *
                        constants.heat_loss_price_factor_per_w;
    return capital + loss;
}

PipeNetwork solve_pipe_network(const DecisionVector& d, const GridGeometry& geometry, const Catalog& catalog) {
    if (!validate(d).feasible())
        throw std::invalid_argument("solve_pipe_network: infeasible decision vector " + to_string(d));

    const auto plant = static_cast<std::size_t>(
        std::find(d.node_use.begin(), d.node_use.end(), kPlantNode) - d.node_use.begin());

    PipeNetwork net;
    for (std::size_t n = 0; n < kNodeCount; ++n) {
        if (d.node_use[n] >= 1 && d.node_use[n] <= 4) {
            net.building_nodes.push_back(n);
            net.lengths.push_back(geometry.distance(plant, n));
        }
    }

    const double excess = mean_supply_excess(d, catalog);
    const std::size_t edges = net.building_nodes.size();
    const std::size_t options = catalog.pipes.size();

    // Odometer over options^edges assignments; the first strict minimum wins.
    std::vector<std::size_t> assignment(edges, 0);
    std::vector<std::size_t> best = assignment;
    double best_cost = std::numeric_limits<double>::infinity();
    while (true) {
        double cost = 0.0;
        for (std::size_t e = 0; e < edges; ++e)
            cost += pipe_edge_cost(catalog.pipes[assignment[e]], net.lengths[e], excess, catalog.constants);
        if (cost < best_cost) {
            best_cost = cost;
            best = assignment;
        }
        std::size_t e = 0;
        while (e < edges && ++assignment[e] == options) assignment[e++] = 0;
        if (e == edges) break;
    }

    net.cost = best_cost;
    for (auto idx : best) net.pipe_types.push_back(static_cast<int>(idx) + 1);
    return net;
}

double walkscore(const DecisionVector& d) {
    std::set<int> types;
    for (int u : d.node_use)
        if (u >= 1 && u <= 4) types.insert(u);
    if (types.empty()) return 0.0;
    const double score = 15.0 * (static_cast<double>(types.size()) - 1.0) / 3.0;
    return std::clamp(score, 0.0, 15.0);
}

ReferenceModel::ReferenceModel(Catalog catalog, GridGeometry geometry)
    : catalog_(std::move(catalog)), geometry_(geometry) {}

ReferenceModel ReferenceModel::load_default() { return ReferenceModel(load_catalog(default_catalog_path())); }

std::optional<EnergyBalance> ReferenceModel::energy_balance(const DecisionVector& d) const {
    if (!validate(d).feasible()) return std::nullopt;

    const auto& k = catalog_.constants;
    const auto& chp = catalog_.chp(d.chp_type);
    const auto& chiller = catalog_.chiller(d.chiller_type);

    EnergyBalance eb;
    double heating = 0.0, cooling = 0.0, electric = 0.0;
    for (int u : d.node_use) {
        if (u < 1 || u > 4) continue;
        const auto& b = catalog_.building(u);
        eb.total_floor_area_m2 += b.floor_area_m2;
        heating += b.floor_area_m2 * b.heating_kwh_m2;
        cooling += b.floor_area_m2 * b.cooling_kwh_m2;
        electric += b.floor_area_m2 * b.electric_kwh_m2;
    }

    const double ref_carnot =
        carnot_ratio(k.chiller_reference_supply_c, k.chiller_reference_ambient_c, k.condenser_approach_c);
    double peak_chiller_kw = 0.0;

    for (const auto& s : catalog_.seasons) {
        const double hot_supply = d.hot_water_temp - (s.summer ? d.hot_water_summer_reset : 0);
        const double cold_supply = d.cold_water_temp + (s.winter ? d.cold_water_winter_reset : 0);

        const double heat = heating * s.heating_share;
        const double cool = cooling * s.cooling_share;
        const double base_electric = electric * s.hours / 8760.0;

        // Heat the network cannot deliver at this supply temperature is boosted locally.
        const double boost_fraction =
            std::clamp((s.required_supply_c - hot_supply) / (s.required_supply_c - k.return_temp_c), 0.0, 1.0);
        const double boosted = heat * boost_fraction;
        const double network_heat = heat - boosted;

        // Heat-led CHP with part-load efficiency loss; the boiler tops up.
        const double recovery = std::max(0.0, 1.0 - k.heat_recovery_derate_per_c * (hot_supply - 50.0));
        const double chp_heat_max =
            chp.capacity_kwe * s.hours * chp.thermal_efficiency * recovery / chp.electric_efficiency;
        const double plr = chp_heat_max > 0.0 ? std::min(1.0, network_heat / chp_heat_max) : 0.0;
        const double chp_electricity = plr * chp.capacity_kwe * s.hours;
        const double part_load = 1.0 - k.part_load_coefficient * (1.0 - plr) * (1.0 - plr);
        const double chp_fuel = plr > 0.0 ? chp_electricity / (chp.electric_efficiency * part_load) : 0.0;
        const double boiler_fuel = (network_heat - plr * chp_heat_max) / k.boiler_efficiency;

        // Warm chilled water forgoes dehumidification, covered by local units.
        const double dehumid_fraction =
            std::clamp((cold_supply - k.required_cold_supply_c) / k.dehumidification_span_c, 0.0, 1.0);
        const double local_cool = cool * dehumid_fraction;
        const double central_cool = cool - local_cool;
        const double cop = std::min(k.chiller_cop_cap,
                                    chiller.cop * carnot_ratio(cold_supply, s.ambient_c, k.condenser_approach_c) /
                                        ref_carnot);
        const double chiller_electric = central_cool / cop + local_cool / k.local_cooling_cop;
        peak_chiller_kw = std::max(peak_chiller_kw, central_cool / s.hours);

        const double demand = base_electric + chiller_electric + boosted / k.booster_cop;
        const double net = chp_electricity - demand;

        eb.chp_fuel_kwh += chp_fuel;
        eb.boiler_fuel_kwh += boiler_fuel;
        eb.chp_electricity_kwh += chp_electricity;
        eb.export_kwh += std::max(0.0, net);
        eb.import_kwh += std::max(0.0, -net);
    }

    eb.annual_emissions_t = (eb.chp_fuel_kwh * chp.emission_factor_t_per_mwh +
                             eb.boiler_fuel_kwh * k.boiler_emission_factor_t_per_mwh +
                             eb.import_kwh * k.grid_emission_factor_t_per_mwh) /
                            1000.0;
    eb.chiller_capacity_kw = k.chiller_peak_factor * peak_chiller_kw;
    eb.plant_capital =
        chp.capacity_kwe * chp.unit_cost_per_kwe + eb.chiller_capacity_kw * chiller.unit_cost_per_kw;
    eb.pipe_cost = solve_pipe_network(d, geometry_, catalog_).cost;
    eb.annual_operating_cost = (eb.chp_fuel_kwh + eb.boiler_fuel_kwh) * k.fuel_price_per_kwh +
                               eb.import_kwh * k.electricity_import_price_per_kwh;
    eb.annual_export_revenue = eb.export_kwh * k.electricity_export_price_per_kwh;
    return eb;
}

std::optional<ObjectiveTriple> ReferenceModel::evaluate(const DecisionVector& d) const {
    const auto eb = energy_balance(d);
    if (!eb) return std::nullopt;
    const auto& k = catalog_.constants;
    const double lifetime_cost = eb->plant_capital + eb->pipe_cost +
                                 k.horizon_years * (eb->annual_operating_cost - eb->annual_export_revenue);
    return ObjectiveTriple{lifetime_cost / eb->total_floor_area_m2,
                           eb->annual_emissions_t * k.horizon_years / eb->total_floor_area_m2, walkscore(d)};
}

}  // namespace cganopt::district
