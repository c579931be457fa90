#include "cganopt/cgan/label_grid.hpp"

#include <cmath>

namespace cganopt::cgan {

namespace {

constexpr LabelRange kFullSweep{-1.0, 1.0, 0.5};
constexpr LabelRange kLowLcc{-1.0, -1.2, 0.1};
constexpr LabelRange kLowGhg{-1.0, -1.2, 0.05};
constexpr LabelRange kHighWalkScore{1.0, 1.2, 0.1};

// Strips accumulated binary noise so grid values compare exactly to their decimal form.
double tidy(double v) { return std::round(v * 1e10) / 1e10; }

void append_product(const GridRanges& r, std::vector<Label>& out) {
    for (double lcc : expand_range(r.lcc))
        for (double ghg : expand_range(r.ghg))
            for (double ws : expand_range(r.walkscore)) out.push_back({lcc, ghg, ws});
}

}  // namespace

std::vector<double> expand_range(const LabelRange& range) {
    const double step = std::abs(range.step);
    const double direction = range.end >= range.start ? 1.0 : -1.0;
    const auto count = static_cast<std::size_t>(std::floor(std::abs(range.end - range.start) / step + 1e-9)) + 1;
    std::vector<double> values;
    values.reserve(count);
    for (std::size_t k = 0; k < count; ++k) values.push_back(tidy(range.start + direction * step * static_cast<double>(k)));
    return values;
}

GridRanges label_ranges(Experiment e) {
    switch (e) {
        case Experiment::worst_half_ghg: return {kFullSweep, kLowGhg, kFullSweep};
        case Experiment::worst_half_lcc: return {kLowLcc, kFullSweep, kFullSweep};
        case Experiment::worst_half_walkscore: return {kFullSweep, kFullSweep, kHighWalkScore};
        case Experiment::worst_half_all:
        case Experiment::best_half_all:
        case Experiment::full_data: return {kLowLcc, kLowGhg, kHighWalkScore};
    }
    return {kFullSweep, kFullSweep, kFullSweep};
}

LabelGrid build_label_grid(Experiment e) {
    LabelGrid grid;
    append_product(label_ranges(e), grid.labels);
    if (!is_single_objective(e)) {
        append_product(label_ranges(Experiment::worst_half_ghg), grid.labels);
        append_product(label_ranges(Experiment::worst_half_lcc), grid.labels);
        append_product(label_ranges(Experiment::worst_half_walkscore), grid.labels);
    }
    return grid;
}

LabelGrid build_label_grid(std::string_view experiment_name) { return build_label_grid(parse_experiment(experiment_name)); }

}  // namespace cganopt::cgan
