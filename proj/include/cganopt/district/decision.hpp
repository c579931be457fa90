#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cganopt::district {

inline constexpr std::size_t kNodeCount = 4;
inline constexpr std::size_t kFieldCount = 10;
inline constexpr int kEmptyNode = 0;
inline constexpr int kPlantNode = 5;

struct FieldBounds {
    int lo;
    int hi;
};

// Field order is the column order of every CSV and of the C-GAN feature vector.
inline constexpr std::array<FieldBounds, kFieldCount> kFieldBounds{{
    {0, 5}, {0, 5}, {0, 5}, {0, 5},  // node use
    {1, 6},                          // CHP type
    {1, 3},                          // chiller type
    {50, 95},                        // hot water supply temperature
    {0, 10},                         // hot water summer reset
    {1, 8},                          // cold water supply temperature
    {0, 3},                          // cold water winter reset
}};

inline constexpr std::array<std::string_view, kFieldCount> kFieldNames{
    "node1", "node2", "node3", "node4", "chp_type", "chiller_type",
    "hot_water_temp", "hot_water_summer_reset", "cold_water_temp", "cold_water_winter_reset",
};

using FieldArray = std::array<int, kFieldCount>;

struct DecisionVector {
    std::array<int, kNodeCount> node_use{};
    int chp_type = 1;
    int chiller_type = 1;
    int hot_water_temp = 50;
    int hot_water_summer_reset = 0;
    int cold_water_temp = 1;
    int cold_water_winter_reset = 0;

    FieldArray to_array() const;
    static DecisionVector from_array(const FieldArray& fields);
    static DecisionVector from_span(std::span<const int> fields);

    friend auto operator<=>(const DecisionVector&, const DecisionVector&) = default;
};

std::string to_string(const DecisionVector& d);

enum class ViolationKind {
    field_out_of_range,
    no_building,
    too_many_buildings,
    no_plant,
    multiple_plants,
};

struct Violation {
    ViolationKind kind;
    std::size_t field = 0;  // only meaningful for field_out_of_range

    std::string describe() const;
    friend bool operator==(const Violation&, const Violation&) = default;
};

struct Verdict {
    std::vector<Violation> violations;

    bool feasible() const { return violations.empty(); }
    bool has(ViolationKind kind) const;
};

// Checks the three constraint groups: field ranges, 1-3 buildings, exactly one plant.
Verdict validate(const DecisionVector& d);

int building_count(const DecisionVector& d);

bool is_duplicate(const DecisionVector& d, std::span<const DecisionVector> archive);

}  // namespace cganopt::district
