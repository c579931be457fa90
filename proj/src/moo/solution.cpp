#include "cganopt/moo/solution.hpp"

#include <stdexcept>

namespace cganopt::moo {

void GaConfig::check() const {
    if (population_size < 2) throw std::invalid_argument("population_size must be >= 2");
    if (generations < 0) throw std::invalid_argument("generations must be >= 0");
    if (!(mutation_prob >= 0.0 && mutation_prob <= 1.0)) throw std::invalid_argument("mutation_prob outside [0,1]");
    if (!(crossover_prob >= 0.0 && crossover_prob <= 1.0))
        throw std::invalid_argument("crossover_prob outside [0,1]");
    if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");
}

std::vector<DecisionVector> SolutionArchive::decisions() const {
    std::vector<DecisionVector> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back(e.solution.decision);
    return out;
}

std::vector<Solution> SolutionArchive::feasible_solutions() const {
    std::vector<Solution> out;
    for (const auto& e : entries_)
        if (e.solution.feasible()) out.push_back(e.solution);
    return out;
}

Evaluator make_evaluator(const district::ReferenceModel& model) {
    return [&model](const DecisionVector& d) { return model.evaluate(d); };
}

}  // namespace cganopt::moo
