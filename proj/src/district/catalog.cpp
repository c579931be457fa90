#include "cganopt/district/catalog.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace cganopt::district {

namespace {

using nlohmann::json;

double positive(const json& j, const char* key) {
    const double v = j.at(key).get<double>();
    if (!(v > 0.0)) throw std::runtime_error(std::string("catalog: '") + key + "' must be positive");
    return v;
}

double non_negative(const json& j, const char* key) {
    const double v = j.at(key).get<double>();
    if (!(v >= 0.0)) throw std::runtime_error(std::string("catalog: '") + key + "' must not be negative");
    return v;
}

template <std::size_t N>
const json& sized_array(const json& root, const char* key) {
    const json& arr = root.at(key);
    if (!arr.is_array() || arr.size() != N)
        throw std::runtime_error(std::string("catalog: '") + key + "' must hold " + std::to_string(N) +
                                 " entries");
    return arr;
}

}  // namespace

Catalog parse_catalog(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(std::string("catalog: malformed JSON: ") + e.what());
    }
    if (root.value("version", 0) != 1) throw std::runtime_error("catalog: unsupported version");

    Catalog c{};
    try {
        const auto& buildings = sized_array<4>(root, "buildings");
        for (std::size_t i = 0; i < 4; ++i) {
            const auto& b = buildings[i];
            c.buildings[i] = {b.value("name", std::string{}), positive(b, "floor_area_m2"),
                              positive(b, "heating_kwh_m2"), positive(b, "cooling_kwh_m2"),
                              positive(b, "electric_kwh_m2")};
        }
        const auto& chps = sized_array<6>(root, "chp");
        for (std::size_t i = 0; i < 6; ++i) {
            const auto& e = chps[i];
            c.chps[i] = {positive(e, "capacity_kwe"), positive(e, "electric_efficiency"),
                         positive(e, "thermal_efficiency"), positive(e, "unit_cost_per_kwe"),
                         positive(e, "emission_factor_t_per_mwh")};
        }
        const auto& chillers = sized_array<3>(root, "chillers");
        for (std::size_t i = 0; i < 3; ++i)
            c.chillers[i] = {positive(chillers[i], "cop"), positive(chillers[i], "unit_cost_per_kw")};
        const auto& pipes = sized_array<5>(root, "pipes");
        for (std::size_t i = 0; i < 5; ++i)
            c.pipes[i] = {positive(pipes[i], "diameter_mm"), positive(pipes[i], "unit_cost_per_m"),
                          positive(pipes[i], "loss_coefficient_w_per_mk")};

        double hours = 0.0;
        for (const auto& s : root.at("seasons")) {
            c.seasons.push_back({s.at("name").get<std::string>(), positive(s, "hours"),
                                 s.at("ambient_c").get<double>(), s.at("heating_share").get<double>(),
                                 s.at("cooling_share").get<double>(), positive(s, "required_supply_c"),
                                 s.at("summer").get<bool>(), s.at("winter").get<bool>()});
            hours += c.seasons.back().hours;
        }
        if (c.seasons.empty() || std::abs(hours - 8760.0) > 1e-9)
            throw std::runtime_error("catalog: season hours must sum to 8760");

        const auto& k = root.at("constants");
        c.constants = {
            k.at("ground_temp_c").get<double>(),
            positive(k, "horizon_years"),
            positive(k, "fuel_price_per_kwh"),
            positive(k, "electricity_import_price_per_kwh"),
            positive(k, "electricity_export_price_per_kwh"),
            positive(k, "heat_loss_price_factor_per_w"),
            positive(k, "boiler_efficiency"),
            positive(k, "boiler_emission_factor_t_per_mwh"),
            non_negative(k, "grid_emission_factor_t_per_mwh"),
            positive(k, "heat_recovery_derate_per_c"),
            positive(k, "part_load_coefficient"),
            positive(k, "return_temp_c"),
            positive(k, "booster_cop"),
            positive(k, "chiller_cop_cap"),
            positive(k, "condenser_approach_c"),
            positive(k, "chiller_reference_ambient_c"),
            positive(k, "chiller_reference_supply_c"),
            positive(k, "required_cold_supply_c"),
            positive(k, "dehumidification_span_c"),
            positive(k, "local_cooling_cop"),
            positive(k, "chiller_peak_factor"),
        };
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("catalog: ") + e.what());
    }
    return c;
}

Catalog load_catalog(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("catalog: cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_catalog(buffer.str());
}

std::filesystem::path default_catalog_path() {
    return std::filesystem::path(CGANOPT_DATA_DIR) / "reference_model.json";
}

}  // namespace cganopt::district
