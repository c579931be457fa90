#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "cganopt/nn/matrix.hpp"
#include "cganopt/rng.hpp"

namespace cganopt::nn {

struct Dense {
    Matrix weight;  // in x out
    std::vector<double> bias;
};

struct BatchNorm {
    std::vector<double> gamma;
    std::vector<double> beta;
    std::vector<double> running_mean;
    std::vector<double> running_var;
    double momentum = 0.8;
    double epsilon = 1e-3;
};

struct LeakyRelu {
    double alpha = 0.2;
};

// Inverted dropout: kept units are scaled by 1/(1-rate) at train time.
struct Dropout {
    double rate = 0.4;
};

struct Tanh {};
struct Sigmoid {};

using Layer = std::variant<Dense, BatchNorm, LeakyRelu, Dropout, Tanh, Sigmoid>;

enum class Activation { none, leaky_relu, tanh, sigmoid };

struct BatchNormConfig {
    double momentum = 0.8;
    double epsilon = 1e-3;
};

// Where batch normalization sits relative to the activation in a block.
enum class BlockOrder { norm_then_activation, activation_then_norm };

// One dense block: Dense(width) followed by activation, optional batchnorm
// (placed per `order`) and optional dropout.
struct LayerConfig {
    std::size_t width = 0;
    Activation activation = Activation::none;
    double leaky_alpha = 0.2;
    double dropout_prob = 0.0;
    std::optional<BatchNormConfig> batchnorm;
    BlockOrder order = BlockOrder::norm_then_activation;
};

enum class Mode { train, eval };

// Per-layer values captured by a forward pass for the backward pass.
struct LayerCache {
    Matrix input;
    Matrix output;
    Matrix normalized;            // batchnorm x-hat
    std::vector<double> inv_std;  // batchnorm 1/sqrt(var + eps)
    Matrix mask;                  // dropout scale per unit
    Mode mode = Mode::eval;
};

struct ForwardCache {
    std::vector<LayerCache> layers;
    std::uint64_t network_version = 0;
    std::uint64_t network_id = 0;
};

// Trainable tensors in parameter order: per Dense (weight, bias), per
// BatchNorm (gamma, beta).
using Gradients = std::vector<std::vector<double>>;

struct BackwardResult {
    Gradients parameters;
    Matrix input;  // gradient w.r.t. the network input
};

class Network {
public:
    Network() = default;
    Network(std::size_t input_width, std::vector<Layer> layers);
    Network(const Network& other);
    Network& operator=(const Network& other);
    Network(Network&&) noexcept = default;
    Network& operator=(Network&&) noexcept = default;

    std::size_t input_width() const { return input_width_; }
    std::size_t output_width() const;
    const std::vector<Layer>& layers() const { return layers_; }

    // Mutable access invalidates every existing ForwardCache.
    std::vector<Layer>& mutable_layers();
    std::vector<std::span<double>> parameters();
    std::vector<std::span<const double>> parameters() const;
    std::size_t parameter_count() const;

    // Train mode samples dropout masks from `rng` and, when
    // `update_running_stats`, folds batch statistics into the batchnorm state.
    Matrix forward(const Matrix& input, Mode mode, Rng& rng, ForwardCache& cache, bool update_running_stats = true);

    // Eval-mode inference; consumes no randomness and is safe to call concurrently.
    Matrix predict(const Matrix& input) const;

    // Throws std::logic_error when `cache` does not come from the current
    // parameters of this network.
    BackwardResult backward(const ForwardCache& cache, const Matrix& upstream) const;

    std::uint64_t version() const { return version_; }

    friend bool operator==(const Network& a, const Network& b);

private:
    void check_input(const Matrix& input) const;

    std::size_t input_width_ = 0;
    std::vector<Layer> layers_;
    std::uint64_t version_ = 0;
    std::uint64_t id_ = 0;
};

// Glorot-uniform weights, zero biases, identity batchnorm.
Network build_mlp(std::size_t input_width, std::span<const LayerConfig> blocks, Rng& init_rng);

// Versioned text record of the architecture and every value.
void save_network(std::ostream& out, const Network& net);
Network load_network(std::istream& in);
void save_network(const std::filesystem::path& path, const Network& net);
Network load_network(const std::filesystem::path& path);

inline constexpr int kNetworkFormatVersion = 1;

}  // namespace cganopt::nn
