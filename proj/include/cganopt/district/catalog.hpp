#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

namespace cganopt::district {

struct BuildingSpec {
    std::string name;
    double floor_area_m2;
    double heating_kwh_m2;
    double cooling_kwh_m2;
    double electric_kwh_m2;
};

struct ChpSpec {
    double capacity_kwe;
    double electric_efficiency;
    double thermal_efficiency;
    double unit_cost_per_kwe;
    double emission_factor_t_per_mwh;
};

struct ChillerSpec {
    double cop;
    double unit_cost_per_kw;
};

struct PipeSpec {
    double diameter_mm;
    double unit_cost_per_m;
    double loss_coefficient_w_per_mk;
};

// A block of hours with constant ambient conditions. Heating/cooling shares
// distribute each building's annual demand across seasons.
struct Season {
    std::string name;
    double hours;
    double ambient_c;
    double heating_share;
    double cooling_share;
    double required_supply_c;
    bool summer;
    bool winter;
};

struct ModelConstants {
    double ground_temp_c;
    double horizon_years;
    double fuel_price_per_kwh;
    double electricity_import_price_per_kwh;
    double electricity_export_price_per_kwh;
    double heat_loss_price_factor_per_w;
    double boiler_efficiency;
    double boiler_emission_factor_t_per_mwh;
    double grid_emission_factor_t_per_mwh;  // imported electricity
    double heat_recovery_derate_per_c;
    double part_load_coefficient;
    double return_temp_c;
    double booster_cop;
    double chiller_cop_cap;
    double condenser_approach_c;
    double chiller_reference_ambient_c;
    double chiller_reference_supply_c;
    double required_cold_supply_c;
    double dehumidification_span_c;
    double local_cooling_cop;
    double chiller_peak_factor;
};

struct Catalog {
    std::array<BuildingSpec, 4> buildings;
    std::array<ChpSpec, 6> chps;
    std::array<ChillerSpec, 3> chillers;
    std::array<PipeSpec, 5> pipes;
    std::vector<Season> seasons;
    ModelConstants constants;

    const BuildingSpec& building(int type) const { return buildings.at(static_cast<std::size_t>(type - 1)); }
    const ChpSpec& chp(int type) const { return chps.at(static_cast<std::size_t>(type - 1)); }
    const ChillerSpec& chiller(int type) const { return chillers.at(static_cast<std::size_t>(type - 1)); }
};

// Throws std::runtime_error on missing file, malformed JSON, wrong counts,
// non-positive catalog entries or seasons not summing to a full year.
Catalog load_catalog(const std::filesystem::path& path);
Catalog parse_catalog(const std::string& json_text);

// Path of the catalog shipped with the repository.
std::filesystem::path default_catalog_path();

}  // namespace cganopt::district
