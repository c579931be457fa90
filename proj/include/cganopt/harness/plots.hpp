#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "cganopt/cgan/trainer.hpp"
#include "cganopt/district/reference_model.hpp"

namespace cganopt::harness {

inline constexpr std::size_t kRunningWindow = 10;
inline constexpr double kScatterLccLimit = 10000.0;  // $/m2

// Trailing mean over `window` values; the first entries average the prefix.
std::vector<double> running_average(std::span<const double> values, std::size_t window = kRunningWindow);

struct PlotInputs {
    struct Run {
        std::string id;
        std::vector<cgan::IterationStats> series;
    };
    std::vector<Run> runs;
    std::vector<district::ObjectiveTriple> train;
    std::vector<district::ObjectiveTriple> generated;
};

// Writes series_<run>.csv, {ghg,walkscore}_vs_lcc_{train,gen}[_lcc_le_10k].csv
// and, when `svg`, one image per series and per scatter pair.
// Returns the written paths.
std::vector<std::filesystem::path> emit_plots(const PlotInputs& in, const std::filesystem::path& dir, bool svg = true);

}  // namespace cganopt::harness
