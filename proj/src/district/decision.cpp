#include "cganopt/district/decision.hpp"

#include <algorithm>
#include <sstream>

namespace cganopt::district {

FieldArray DecisionVector::to_array() const {
    return {node_use[0], node_use[1], node_use[2], node_use[3], chp_type, chiller_type,
            hot_water_temp, hot_water_summer_reset, cold_water_temp, cold_water_winter_reset};
}

DecisionVector DecisionVector::from_array(const FieldArray& f) {
    DecisionVector d;
    d.node_use = {f[0], f[1], f[2], f[3]};
    d.chp_type = f[4];
    d.chiller_type = f[5];
    d.hot_water_temp = f[6];
    d.hot_water_summer_reset = f[7];
    d.cold_water_temp = f[8];
    d.cold_water_winter_reset = f[9];
    return d;
}

DecisionVector DecisionVector::from_span(std::span<const int> fields) {
    FieldArray f{};
    std::copy_n(fields.begin(), std::min(fields.size(), kFieldCount), f.begin());
    return from_array(f);
}

std::string to_string(const DecisionVector& d) {
    std::ostringstream os;
    os << '(';
    const auto f = d.to_array();
    for (std::size_t i = 0; i < f.size(); ++i) os << (i ? "," : "") << f[i];
    os << ')';
    return os.str();
}

std::string Violation::describe() const {
    switch (kind) {
        case ViolationKind::field_out_of_range: {
            const auto& b = kFieldBounds[field];
            return std::string(kFieldNames[field]) + " outside [" + std::to_string(b.lo) + "," +
                   std::to_string(b.hi) + "]";
        }
        case ViolationKind::no_building:
            return "at least one node must be occupied by a building";
        case ViolationKind::too_many_buildings:
            return "at most three nodes may be occupied by buildings";
        case ViolationKind::no_plant:
            return "no central plant placed";
        case ViolationKind::multiple_plants:
            return "more than one central plant placed";
    }
    return "unknown violation";
}

bool Verdict::has(ViolationKind kind) const {
    return std::any_of(violations.begin(), violations.end(),
                       [kind](const Violation& v) { return v.kind == kind; });
}

int building_count(const DecisionVector& d) {
    return static_cast<int>(std::count_if(d.node_use.begin(), d.node_use.end(),
                                          [](int u) { return u >= 1 && u <= 4; }));
}

Verdict validate(const DecisionVector& d) {
    Verdict verdict;
    const auto fields = d.to_array();
    for (std::size_t i = 0; i < kFieldCount; ++i) {
        if (fields[i] < kFieldBounds[i].lo || fields[i] > kFieldBounds[i].hi)
            verdict.violations.push_back({ViolationKind::field_out_of_range, i});
    }

    const int buildings = building_count(d);
    if (buildings == 0) verdict.violations.push_back({ViolationKind::no_building});
    if (buildings > 3) verdict.violations.push_back({ViolationKind::too_many_buildings});

    const auto plants = std::count(d.node_use.begin(), d.node_use.end(), kPlantNode);
    if (plants == 0) verdict.violations.push_back({ViolationKind::no_plant});
    if (plants > 1) verdict.violations.push_back({ViolationKind::multiple_plants});
    return verdict;
}

bool is_duplicate(const DecisionVector& d, std::span<const DecisionVector> archive) {
    return std::find(archive.begin(), archive.end(), d) != archive.end();
}

}  // namespace cganopt::district
