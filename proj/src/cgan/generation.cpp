#include "cganopt/cgan/generation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "cganopt/csv.hpp"
#include "cganopt/rng.hpp"

namespace cganopt::cgan {

namespace {

void generate_label(const nn::Network& generator, const NormalizationSpec& norm, const Label& label,
                    std::size_t label_index, const GenerationRequest& req, Candidate* out) {
    const std::size_t n = req.count_per_label;
    Rng rng(mix_seed(req.seed, label_index));
    nn::Matrix input(n, req.latent_dim + kLabelWidth);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < req.latent_dim; ++c) input(r, c) = rng.normal();
        for (std::size_t c = 0; c < kLabelWidth; ++c) input(r, req.latent_dim + c) = label[c];
    }
    const nn::Matrix raw = generator.predict(input);
    for (std::size_t r = 0; r < n; ++r) {
        Candidate& cand = out[r];
        cand.run_id = req.run_id;
        cand.iteration = req.iteration;
        cand.label = label;
        for (std::size_t c = 0; c < kFeatureWidth; ++c) cand.raw[c] = raw(r, c);
        cand.decision = norm.denormalize_features(cand.raw);
    }
}

void check_request(const nn::Network& generator, const GenerationRequest& req) {
    if (generator.input_width() != req.latent_dim + kLabelWidth || generator.output_width() != kFeatureWidth)
        throw std::invalid_argument("generate: generator shape does not match latent_dim + 3 -> 10");
}

}  // namespace

std::vector<Candidate> generate(const nn::Network& generator, const NormalizationSpec& norm,
                                std::span<const Label> labels, const GenerationRequest& req) {
    check_request(generator, req);
    std::vector<Candidate> out(labels.size() * req.count_per_label);
    if (req.count_per_label == 0) return out;
    const auto count = static_cast<std::ptrdiff_t>(labels.size());
#pragma omp parallel for schedule(dynamic, 4)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        generate_label(generator, norm, labels[idx], idx, req, out.data() + idx * req.count_per_label);
    }
    return out;
}

namespace serial {
std::vector<Candidate> generate(const nn::Network& generator, const NormalizationSpec& norm,
                                std::span<const Label> labels, const GenerationRequest& req) {
    check_request(generator, req);
    std::vector<Candidate> out(labels.size() * req.count_per_label);
    if (req.count_per_label == 0) return out;
    for (std::size_t i = 0; i < labels.size(); ++i)
        generate_label(generator, norm, labels[i], i, req, out.data() + i * req.count_per_label);
    return out;
}
}  // namespace serial

namespace {

// Indices of the ceil(n/4) smallest keys plus ties with the cutoff.
std::vector<bool> bottom_quartile(const std::vector<double>& keys) {
    std::vector<double> sorted = keys;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t k = (keys.size() + 3) / 4;
    const double cutoff = sorted[k - 1];
    std::vector<bool> chosen(keys.size());
    for (std::size_t i = 0; i < keys.size(); ++i) chosen[i] = keys[i] <= cutoff;
    return chosen;
}

}  // namespace

std::vector<std::size_t> select_candidate_snapshots(std::span<const TrainingSnapshot> snapshots) {
    if (snapshots.empty()) return {};
    auto keys = [&](const std::function<double(const TrainingSnapshot&)>& key) {
        std::vector<double> out;
        for (const auto& s : snapshots) out.push_back(key(s));
        return out;
    };
    const auto a = bottom_quartile(keys([](const auto& s) { return -s.accuracy_real; }));
    const auto b = bottom_quartile(keys([](const auto& s) { return s.discriminator_loss; }));
    const auto c = bottom_quartile(keys([](const auto& s) { return s.accuracy_fake; }));
    const auto d = bottom_quartile(keys([](const auto& s) { return s.generator_loss; }));
    std::vector<std::size_t> selected;
    for (std::size_t i = 0; i < snapshots.size(); ++i)
        if (a[i] || b[i] || c[i] || d[i]) selected.push_back(i);
    return selected;
}

std::vector<Candidate> combine_runs(std::span<const Candidate> short_run, std::span<const Candidate> long_run) {
    std::vector<Candidate> pool(short_run.begin(), short_run.end());
    pool.insert(pool.end(), long_run.begin(), long_run.end());
    return pool;
}

namespace {

std::vector<std::string> candidate_header() {
    std::vector<std::string> h{"run", "iteration", "label_lcc", "label_ghg", "label_walkscore"};
    for (std::size_t c = 0; c < kFeatureWidth; ++c) h.push_back("raw_" + std::string(district::kFieldNames[c]));
    for (const auto& name : district::kFieldNames) h.emplace_back(name);
    return h;
}

}  // namespace

void write_candidates(const std::filesystem::path& path, std::span<const Candidate> candidates) {
    csv::Writer w(path, candidate_header());
    for (const auto& c : candidates) {
        w.cell(c.run_id).cell(static_cast<long long>(c.iteration));
        for (double v : c.label) w.cell(v);
        for (double v : c.raw) w.cell(v);
        for (int v : c.decision) w.cell(static_cast<long long>(v));
        w.end_row();
    }
}

std::vector<Candidate> read_candidates(const std::filesystem::path& path) {
    const auto table = csv::read(path);
    if (table.header != candidate_header()) throw std::runtime_error("candidates: unexpected header in " + path.string());
    std::vector<Candidate> out;
    for (const auto& row : table.rows) {
        Candidate c;
        c.run_id = row[0];
        c.iteration = static_cast<std::size_t>(csv::parse_int(row[1]));
        for (std::size_t i = 0; i < 3; ++i) c.label[i] = csv::parse_double(row[2 + i]);
        for (std::size_t i = 0; i < kFeatureWidth; ++i) c.raw[i] = csv::parse_double(row[5 + i]);
        for (std::size_t i = 0; i < kFeatureWidth; ++i)
            c.decision[i] = static_cast<int>(csv::parse_int(row[5 + kFeatureWidth + i]));
        out.push_back(std::move(c));
    }
    return out;
}

}  // namespace cganopt::cgan
