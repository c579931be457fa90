#include "cganopt/harness/config.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace cganopt::harness {

using nlohmann::json;

HarnessConfig HarnessConfig::desk() {
    HarnessConfig c;
    c.ga.population_size = 64;
    c.ga.generations = 64;
    c.cgan.long_run_epochs = 10.0;
    return c;
}

HarnessConfig HarnessConfig::paper() {
    HarnessConfig c;
    c.ga.population_size = 128;
    c.ga.generations = 512;
    c.cgan.long_run_epochs = 155.0;
    c.short_run_single_objective = 800;
    c.short_run_all_objectives = 2000;
    c.pool_scale = 1.0;
    c.paper_scale = true;
    return c;
}

std::size_t HarnessConfig::short_run_iterations(cgan::Experiment e) const {
    return cgan::is_single_objective(e) ? short_run_single_objective : short_run_all_objectives;
}

double HarnessConfig::pool_target(cgan::Experiment e) const {
    double target = 0.0;
    switch (e) {
        case cgan::Experiment::worst_half_ghg:
        case cgan::Experiment::worst_half_lcc:
        case cgan::Experiment::worst_half_walkscore: target = 875.0; break;
        case cgan::Experiment::worst_half_all: target = 2750.0; break;
        case cgan::Experiment::best_half_all: target = 5000.0; break;
        case cgan::Experiment::full_data: target = 4000.0; break;
    }
    return target / pool_scale;
}

void HarnessConfig::set_seed(std::uint64_t seed) {
    ga.rng_seed = seed;
    gan_seed = seed;
}

void HarnessConfig::check() const {
    ga.check();
    cgan.check();
    if (!(pool_scale > 0.0)) throw std::invalid_argument("config: pool_scale must be positive");
    if (!(cgan.long_run_epochs >= 0.0)) throw std::invalid_argument("config: long_run_epochs must be >= 0");
}

json HarnessConfig::to_json() const {
    return json{
        {"ga",
         {{"population_size", ga.population_size},
          {"generations", ga.generations},
          {"mutation_prob", ga.mutation_prob},
          {"crossover_prob", ga.crossover_prob},
          {"eta", ga.eta},
          {"seed", ga.rng_seed}}},
        {"cgan",
         {{"latent_dim", cgan.latent_dim},
          {"generator_widths", cgan.generator_widths},
          {"discriminator_widths", cgan.discriminator_widths},
          {"batch_size", cgan.batch_size},
          {"snapshot_interval", cgan.snapshot_interval},
          {"short_run_single_objective", short_run_single_objective},
          {"short_run_all_objectives", short_run_all_objectives},
          {"long_run_epochs", cgan.long_run_epochs},
          {"leaky_alpha", cgan.leaky_alpha},
          {"dropout", cgan.dropout_prob},
          {"batchnorm_momentum", cgan.batchnorm.momentum},
          {"batchnorm_epsilon", cgan.batchnorm.epsilon},
          {"learning_rate", cgan.optimizer.learning_rate},
          {"beta1", cgan.optimizer.beta1},
          {"beta2", cgan.optimizer.beta2},
          {"adam_epsilon", cgan.optimizer.epsilon},
          {"seed", gan_seed}}},
        {"pool_scale", pool_scale},
        {"catalog", catalog},
        {"paper_scale", paper_scale},
    };
}

namespace {

template <class T>
void take(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

HarnessConfig HarnessConfig::from_json(const json& j, const HarnessConfig& base) {
    HarnessConfig c = base;
    if (j.contains("ga")) {
        const auto& g = j.at("ga");
        take(g, "population_size", c.ga.population_size);
        take(g, "generations", c.ga.generations);
        take(g, "mutation_prob", c.ga.mutation_prob);
        take(g, "crossover_prob", c.ga.crossover_prob);
        take(g, "eta", c.ga.eta);
        take(g, "seed", c.ga.rng_seed);
    }
    if (j.contains("cgan")) {
        const auto& g = j.at("cgan");
        take(g, "latent_dim", c.cgan.latent_dim);
        take(g, "generator_widths", c.cgan.generator_widths);
        take(g, "discriminator_widths", c.cgan.discriminator_widths);
        take(g, "batch_size", c.cgan.batch_size);
        take(g, "snapshot_interval", c.cgan.snapshot_interval);
        take(g, "short_run_single_objective", c.short_run_single_objective);
        take(g, "short_run_all_objectives", c.short_run_all_objectives);
        take(g, "long_run_epochs", c.cgan.long_run_epochs);
        take(g, "leaky_alpha", c.cgan.leaky_alpha);
        take(g, "dropout", c.cgan.dropout_prob);
        take(g, "batchnorm_momentum", c.cgan.batchnorm.momentum);
        take(g, "batchnorm_epsilon", c.cgan.batchnorm.epsilon);
        take(g, "learning_rate", c.cgan.optimizer.learning_rate);
        take(g, "beta1", c.cgan.optimizer.beta1);
        take(g, "beta2", c.cgan.optimizer.beta2);
        take(g, "adam_epsilon", c.cgan.optimizer.epsilon);
        take(g, "seed", c.gan_seed);
    }
    take(j, "pool_scale", c.pool_scale);
    take(j, "catalog", c.catalog);
    take(j, "paper_scale", c.paper_scale);
    c.check();
    return c;
}

HarnessConfig HarnessConfig::load(const std::filesystem::path& path, const HarnessConfig& base) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw std::runtime_error("config " + path.string() + ": " + e.what());
    }
    return from_json(j, base);
}

void HarnessConfig::save(const std::filesystem::path& path) const {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << to_json().dump(2) << '\n';
}

std::string HarnessConfig::hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : to_json().dump()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace cganopt::harness
