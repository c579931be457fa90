#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "cganopt/cgan/label_grid.hpp"
#include "cganopt/cgan/normalization.hpp"
#include "cganopt/cgan/trainer.hpp"
#include "cganopt/district/decision.hpp"

namespace cganopt::cgan {

struct Candidate {
    std::string run_id;
    std::size_t iteration = 0;
    Label label{};
    std::array<double, kFeatureWidth> raw{};
    district::FieldArray decision{};
};

struct GenerationRequest {
    std::string run_id;
    std::size_t iteration = 0;
    std::size_t latent_dim = 3;
    std::size_t count_per_label = 1;
    std::uint64_t seed = 1;
};

// Samples count_per_label outputs for every label. Label i draws its noise
// from a stream derived from (seed, i), so the result does not depend on the
// thread count. Output is ordered by label, then sample.
std::vector<Candidate> generate(const nn::Network& generator, const NormalizationSpec& norm,
                                std::span<const Label> labels, const GenerationRequest& request);

namespace serial {
std::vector<Candidate> generate(const nn::Network& generator, const NormalizationSpec& norm,
                                std::span<const Label> labels, const GenerationRequest& request);
}

// Union (in input order) of the top quartile by real accuracy and the bottom
// quartiles by discriminator loss, fake accuracy and generator loss. A
// quartile is the ceil(n/4) best entries plus any tied with the last one.
std::vector<std::size_t> select_candidate_snapshots(std::span<const TrainingSnapshot> snapshots);

std::vector<Candidate> combine_runs(std::span<const Candidate> short_run, std::span<const Candidate> long_run);

void write_candidates(const std::filesystem::path& path, std::span<const Candidate> candidates);
std::vector<Candidate> read_candidates(const std::filesystem::path& path);

}  // namespace cganopt::cgan
