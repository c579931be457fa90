#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "cganopt/moo/solution.hpp"

namespace cganopt::moo {

// Archive CSV schema, also the C-GAN training-set format:
//   node1..node4, chp_type, chiller_type, hot_water_temp, hot_water_summer_reset,
//   cold_water_temp, cold_water_winter_reset, lcc, ghg, walkscore, feasible, generation
// Objective cells are empty for infeasible rows.
std::vector<std::string> archive_header();

void write_archive(const std::filesystem::path& path, const SolutionArchive& archive);
SolutionArchive read_archive(const std::filesystem::path& path);

}  // namespace cganopt::moo
