#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "cganopt/district/decision.hpp"
#include "cganopt/district/reference_model.hpp"

namespace cganopt::moo {

using district::DecisionVector;
using district::ObjectiveTriple;

// Objectives rewritten so that every component is minimized.
using MinVector = std::array<double, 3>;

inline MinVector to_minimization(const ObjectiveTriple& o) { return {o.lcc, o.ghg, -o.walkscore}; }

// a no worse than b everywhere and strictly better somewhere.
inline bool dominates(const MinVector& a, const MinVector& b) {
    bool strictly = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) return false;
        if (a[i] < b[i]) strictly = true;
    }
    return strictly;
}

struct Solution {
    DecisionVector decision;
    std::optional<ObjectiveTriple> objectives;  // present iff feasible
    int violation_count = 0;
    std::size_t rank = 0;
    double crowding = 0.0;

    bool feasible() const { return objectives.has_value(); }
};

struct GaConfig {
    int population_size = 128;
    int generations = 512;
    double mutation_prob = 0.05;
    double crossover_prob = 0.75;
    double eta = 2.5;
    std::uint64_t rng_seed = 1;

    // Throws std::invalid_argument on out-of-range settings.
    void check() const;
};

struct ArchiveEntry {
    Solution solution;
    int generation = 0;
};

// Every evaluated individual in evaluation order. Append-only.
class SolutionArchive {
public:
    void append(const Solution& s, int generation) { entries_.push_back({s, generation}); }

    const std::vector<ArchiveEntry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    std::vector<DecisionVector> decisions() const;
    std::vector<Solution> feasible_solutions() const;
    int last_generation() const { return entries_.empty() ? -1 : entries_.back().generation; }

private:
    std::vector<ArchiveEntry> entries_;
};

// Must be safe to call concurrently. nullopt marks infeasible.
using Evaluator = std::function<std::optional<ObjectiveTriple>(const DecisionVector&)>;

Evaluator make_evaluator(const district::ReferenceModel& model);

}  // namespace cganopt::moo
