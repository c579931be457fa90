#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <vector>

#include "cganopt/nn/adam.hpp"
#include "cganopt/nn/network.hpp"

namespace cganopt::cgan {

inline constexpr std::size_t kFeatureWidth = 10;
inline constexpr std::size_t kLabelWidth = 3;

struct CganConfig {
    std::size_t latent_dim = 3;
    std::vector<std::size_t> generator_widths{64, 128, 64};
    std::vector<std::size_t> discriminator_widths{128, 64, 32};
    std::size_t batch_size = 64;
    std::size_t snapshot_interval = 100;
    std::size_t short_run_iterations = 800;
    double long_run_epochs = 155.0;
    double leaky_alpha = 0.2;
    double dropout_prob = 0.4;
    nn::BatchNormConfig batchnorm{0.8, 1e-3};
    nn::OptimizerConfig optimizer{};
    std::uint64_t rng_seed = 1;

    // Iterations of a long run: ceil(rows / batch_size) per epoch.
    std::size_t long_run_iterations(std::size_t training_rows) const;
    void check() const;
};

// noise||label -> widths (dense, leaky-relu, batchnorm) -> 10 features (tanh).
nn::Network build_generator(const CganConfig& cfg, Rng& init_rng);
// features||label -> widths (dense, batchnorm, leaky-relu, dropout) -> 1 (sigmoid).
nn::Network build_discriminator(const CganConfig& cfg, Rng& init_rng);

struct IterationStats {
    std::size_t iteration;  // 1-based
    double discriminator_loss;
    double generator_loss;
    double accuracy_real;
    double accuracy_fake;
};

struct TrainingSnapshot {
    std::size_t iteration = 0;
    nn::Network generator;
    nn::Network discriminator;
    double discriminator_loss = 0.0;
    double generator_loss = 0.0;
    double accuracy_real = 0.0;
    double accuracy_fake = 0.0;
};

// Forward/backward passes and optimizer updates performed by train().
struct PassCounters {
    std::size_t discriminator_batches = 0;  // discriminator updates (real and fake)
    std::size_t generator_batches = 0;      // generator updates
    std::size_t discriminator_forward = 0;
    std::size_t discriminator_backward = 0;
    std::size_t generator_forward = 0;
    std::size_t generator_backward = 0;
};

struct TrainingResult {
    nn::Network generator;
    nn::Network discriminator;
    std::vector<IterationStats> series;
    std::vector<TrainingSnapshot> snapshots;
    PassCounters counters;
};

class TrainingDiverged : public std::runtime_error {
public:
    TrainingDiverged(const std::string& what, TrainingSnapshot diagnostic)
        : std::runtime_error(what), diagnostic_(std::move(diagnostic)) {}
    const TrainingSnapshot& diagnostic() const { return diagnostic_; }

private:
    TrainingSnapshot diagnostic_;
};

// Adversarial training on normalized rows. Each iteration updates the
// discriminator on a real batch (target 1) and a generated batch (target 0),
// then the generator through the frozen discriminator (target 1). Snapshots
// are taken every snapshot_interval iterations and after the last one.
// Batches are drawn with replacement, so sets smaller than a batch work.
// Throws std::invalid_argument on an empty set and
// TrainingDiverged on a non-finite loss.
TrainingResult train(const CganConfig& cfg, const nn::Matrix& features, const nn::Matrix& labels,
                     std::size_t iterations, std::uint64_t seed);

// Discriminator output for rows of features||label, eval mode.
nn::Matrix discriminate(const nn::Network& discriminator, const nn::Matrix& features, const nn::Matrix& labels);

void save_snapshot(const std::filesystem::path& path, const TrainingSnapshot& snapshot);
TrainingSnapshot load_snapshot(const std::filesystem::path& path);

}  // namespace cganopt::cgan
