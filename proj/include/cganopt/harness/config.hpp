#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "json.hpp"

#include "cganopt/cgan/experiment.hpp"
#include "cganopt/cgan/trainer.hpp"
#include "cganopt/moo/solution.hpp"

namespace cganopt::harness {

// Everything that determines the output of a run, apart from the archive.
struct HarnessConfig {
    moo::GaConfig ga;
    cgan::CganConfig cgan;
    std::size_t short_run_single_objective = 300;
    std::size_t short_run_all_objectives = 300;
    // Candidate pools are Table-2 sized #Gen targets divided by this.
    double pool_scale = 10.0;
    std::uint64_t gan_seed = 1;
    std::string catalog;  // empty: bundled reference model
    bool paper_scale = false;

    // GA 64x64, short run 300, long run 10 epochs, pools / 10.
    static HarnessConfig desk();
    // GA 128x512, short runs 800 / 2000, long run 155 epochs, full pools.
    static HarnessConfig paper();

    std::size_t short_run_iterations(cgan::Experiment e) const;
    // Pre-vetting pool target for the experiment (875 / 2750 / 5000 / 4000 with --paper-scale).
    double pool_target(cgan::Experiment e) const;
    void set_seed(std::uint64_t seed);
    void check() const;

    nlohmann::json to_json() const;
    // Missing keys keep the values of `base`.
    static HarnessConfig from_json(const nlohmann::json& j, const HarnessConfig& base);
    static HarnessConfig load(const std::filesystem::path& path, const HarnessConfig& base);
    void save(const std::filesystem::path& path) const;

    // FNV-1a of the canonical JSON text, hex.
    std::string hash() const;
};

}  // namespace cganopt::harness
