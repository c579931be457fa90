#pragma once

#include <cstddef>
#include <span>

#include "cganopt/district/reference_model.hpp"

namespace cganopt::metrics {

// Improvement of `gen` over `train` in percent, positive when `gen` is better
// in the given direction. The denominator is |train|, or |gen| when train is 0.
double improvement_pct(double train_value, double gen_value, district::Direction direction);

struct BestObjectives {
    double min_ghg;
    double min_lcc;
    double max_walkscore;
    std::size_t min_ghg_index;
    std::size_t min_lcc_index;
    std::size_t max_walkscore_index;
};

// First achieving index wins ties. Throws std::invalid_argument when empty.
BestObjectives extract_best(std::span<const district::ObjectiveTriple> objectives);

}  // namespace cganopt::metrics
