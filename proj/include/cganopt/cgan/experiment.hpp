#pragma once

#include <array>
#include <string>
#include <string_view>

namespace cganopt::cgan {

enum class Experiment {
    worst_half_ghg,
    worst_half_lcc,
    worst_half_walkscore,
    worst_half_all,
    best_half_all,
    full_data,
};

inline constexpr std::array<Experiment, 6> kAllExperiments{
    Experiment::worst_half_ghg, Experiment::worst_half_lcc, Experiment::worst_half_walkscore,
    Experiment::worst_half_all, Experiment::best_half_all,  Experiment::full_data,
};

std::string_view experiment_name(Experiment e);

// Accepts the canonical names (e.g. "BestHalfAll"); throws std::invalid_argument otherwise.
Experiment parse_experiment(std::string_view name);

// True for the three experiments that target a single objective.
bool is_single_objective(Experiment e);

}  // namespace cganopt::cgan
