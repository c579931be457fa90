#pragma once

#include <functional>
#include <span>
#include <vector>

#include "cganopt/moo/solution.hpp"
#include "cganopt/rng.hpp"

namespace cganopt::moo {

// Evaluates every decision in place of `out` with OpenMP; results do not
// depend on the thread count because the evaluator is pure.
std::vector<Solution> evaluate_population(std::span<const DecisionVector> decisions, const Evaluator& evaluate);

namespace serial {
std::vector<Solution> evaluate_population(std::span<const DecisionVector> decisions, const Evaluator& evaluate);
}

// Binary tournament: lower rank wins, then larger crowding, then the first pick.
const Solution& tournament_winner(const Solution& a, const Solution& b);

// Keeps `count` members: whole fronts first, the split front by descending crowding.
std::vector<Solution> environmental_selection(std::vector<Solution> combined, std::size_t count);

// Called after each generation's offspring are archived (generation 0 is the
// initial population).
using GenerationObserver = std::function<void(int generation, const std::vector<Solution>& population)>;

SolutionArchive run_nsga2(const GaConfig& cfg, const Evaluator& evaluate, const GenerationObserver& observer = {});

}  // namespace cganopt::moo
