#pragma once

#include <array>
#include <string_view>
#include <vector>

#include "cganopt/cgan/experiment.hpp"

namespace cganopt::cgan {

// Normalized (LCC, GHG, WalkScore) conditioning label.
using Label = std::array<double, 3>;

// Inclusive [start, end] walked in |step| increments toward `end`.
struct LabelRange {
    double start;
    double end;
    double step;
};

struct GridRanges {
    LabelRange lcc;
    LabelRange ghg;
    LabelRange walkscore;
};

struct LabelGrid {
    std::vector<Label> labels;

    std::size_t size() const { return labels.size(); }
};

std::vector<double> expand_range(const LabelRange& range);

// Per-objective ranges of the custom generation labels for one experiment.
GridRanges label_ranges(Experiment e);

// Cartesian product of the experiment's ranges (LCC outermost). The
// all-objective experiments also append the three single-objective grids.
LabelGrid build_label_grid(Experiment e);
LabelGrid build_label_grid(std::string_view experiment_name);

}  // namespace cganopt::cgan
