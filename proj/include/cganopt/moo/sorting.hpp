#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cganopt/moo/solution.hpp"

namespace cganopt::moo {

using Fronts = std::vector<std::vector<std::size_t>>;

// Fast non-dominated sort. Feasible members fill the leading fronts;
// infeasible ones follow, one front per violation count (ascending).
// Indices inside each front are ascending.
Fronts non_dominated_sort(std::span<const Solution> population);
Fronts non_dominated_sort(std::span<const MinVector> points);

// Boundary points per objective get +inf; interior points sum the
// neighbour gaps normalized by the objective's range.
std::vector<double> crowding_distance(std::span<const MinVector> front);

// Writes rank and crowding into every member.
void assign_rank_and_crowding(std::vector<Solution>& population);

namespace serial {

// Single-threaded reference for the domination-count pass.
Fronts non_dominated_sort(std::span<const MinVector> points);

}  // namespace serial

}  // namespace cganopt::moo
