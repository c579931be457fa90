#pragma once

#include <vector>

#include "cganopt/metrics/scaling.hpp"
#include "cganopt/moo/solution.hpp"

namespace cganopt::metrics {

struct GenerationHypervolume {
    int generation;
    std::size_t feasible_seen;
    double hypervolume;
};

// Hypervolume of the non-dominated front of every feasible solution evaluated
// up to and including each generation. All generations share one set of
// anchors fitted on the whole archive.
std::vector<GenerationHypervolume> cumulative_hypervolume(const moo::SolutionArchive& archive);

}  // namespace cganopt::metrics
