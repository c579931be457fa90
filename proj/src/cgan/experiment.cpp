#include "cganopt/cgan/experiment.hpp"

#include <stdexcept>

namespace cganopt::cgan {

std::string_view experiment_name(Experiment e) {
    switch (e) {
        case Experiment::worst_half_ghg: return "WorstHalfGHG";
        case Experiment::worst_half_lcc: return "WorstHalfLCC";
        case Experiment::worst_half_walkscore: return "WorstHalfWalkScore";
        case Experiment::worst_half_all: return "WorstHalfAll";
        case Experiment::best_half_all: return "BestHalfAll";
        case Experiment::full_data: return "FullData";
    }
    return "unknown";
}

Experiment parse_experiment(std::string_view name) {
    for (auto e : kAllExperiments)
        if (experiment_name(e) == name) return e;
    throw std::invalid_argument("unknown experiment '" + std::string(name) +
                                "' (expected WorstHalfGHG, WorstHalfLCC, WorstHalfWalkScore, WorstHalfAll, "
                                "BestHalfAll or FullData)");
}

bool is_single_objective(Experiment e) {
    return e == Experiment::worst_half_ghg || e == Experiment::worst_half_lcc ||
           e == Experiment::worst_half_walkscore;
}

}  // namespace cganopt::cgan
