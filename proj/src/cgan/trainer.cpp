#include "cganopt/cgan/trainer.hpp"

#include <cmath>
#include <fstream>
#include <string>

#include "cganopt/csv.hpp"
#include "cganopt/nn/loss.hpp"

namespace cganopt::cgan {

std::size_t CganConfig::long_run_iterations(std::size_t training_rows) const {
    const std::size_t per_epoch = (training_rows + batch_size - 1) / batch_size;
    return static_cast<std::size_t>(std::ceil(static_cast<double>(per_epoch) * long_run_epochs));
}

void CganConfig::check() const {
    if (latent_dim == 0 || batch_size == 0 || snapshot_interval == 0)
        throw std::invalid_argument("cgan config: latent_dim, batch_size and snapshot_interval must be positive");
    if (generator_widths.empty() || discriminator_widths.empty())
        throw std::invalid_argument("cgan config: hidden widths must not be empty");
    if (!(dropout_prob >= 0.0 && dropout_prob < 1.0)) throw std::invalid_argument("cgan config: dropout outside [0,1)");
}

nn::Network build_generator(const CganConfig& cfg, Rng& init_rng) {
    std::vector<nn::LayerConfig> blocks;
    for (auto w : cfg.generator_widths)
        blocks.push_back({w, nn::Activation::leaky_relu, cfg.leaky_alpha, 0.0, cfg.batchnorm,
                          nn::BlockOrder::activation_then_norm});
    nn::LayerConfig out;
    out.width = kFeatureWidth;
    out.activation = nn::Activation::tanh;
    blocks.push_back(out);
    return nn::build_mlp(cfg.latent_dim + kLabelWidth, blocks, init_rng);
}

nn::Network build_discriminator(const CganConfig& cfg, Rng& init_rng) {
    std::vector<nn::LayerConfig> blocks;
    for (auto w : cfg.discriminator_widths)
        blocks.push_back({w, nn::Activation::leaky_relu, cfg.leaky_alpha, cfg.dropout_prob, cfg.batchnorm,
                          nn::BlockOrder::norm_then_activation});
    nn::LayerConfig out;
    out.width = 1;
    out.activation = nn::Activation::sigmoid;
    blocks.push_back(out);
    return nn::build_mlp(kFeatureWidth + kLabelWidth, blocks, init_rng);
}

nn::Matrix discriminate(const nn::Network& discriminator, const nn::Matrix& features, const nn::Matrix& labels) {
    return discriminator.predict(nn::hconcat(features, labels));
}

namespace {

nn::Matrix gather_rows(const nn::Matrix& m, const std::vector<std::size_t>& rows) {
    nn::Matrix out(rows.size(), m.cols());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        auto src = m.row(rows[r]);
        std::copy(src.begin(), src.end(), out.row(r).begin());
    }
    return out;
}

nn::Matrix gaussian(std::size_t rows, std::size_t cols, Rng& rng) {
    nn::Matrix z(rows, cols);
    for (auto& v : z.values()) v = rng.normal();
    return z;
}

nn::Matrix leading_columns(const nn::Matrix& m, std::size_t count) {
    nn::Matrix out(m.rows(), count);
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < count; ++c) out(r, c) = m(r, c);
    return out;
}

}  // namespace

TrainingResult train(const CganConfig& cfg, const nn::Matrix& features, const nn::Matrix& labels,
                     std::size_t iterations, std::uint64_t seed) {
    cfg.check();
    if (features.cols() != kFeatureWidth || labels.cols() != kLabelWidth || features.rows() != labels.rows())
        throw std::invalid_argument("train: expected n x 10 features and n x 3 labels");
    if (features.rows() == 0) throw std::invalid_argument("train: empty training set");

    Rng init_rng(mix_seed(seed, 0));
    Rng rng(mix_seed(seed, 1));
    TrainingResult result;
    result.generator = build_generator(cfg, init_rng);
    result.discriminator = build_discriminator(cfg, init_rng);
    auto& gen = result.generator;
    auto& disc = result.discriminator;
    nn::Adam gen_opt(gen, cfg.optimizer);
    nn::Adam disc_opt(disc, cfg.optimizer);
    auto& count = result.counters;

    const std::size_t batch = cfg.batch_size;
    const std::vector<double> ones(batch, 1.0), zeros(batch, 0.0);
    const int last_row = static_cast<int>(features.rows()) - 1;
    nn::ForwardCache disc_cache, gen_cache;

    auto sample_rows = [&] {
        std::vector<std::size_t> idx(batch);
        for (auto& i : idx) i = static_cast<std::size_t>(rng.uniform_int(0, last_row));
        return idx;
    };

    for (std::size_t it = 1; it <= iterations; ++it) {
        const auto rows = sample_rows();
        const auto real_x = gather_rows(features, rows);
        const auto real_y = gather_rows(labels, rows);
        const auto noise = gaussian(batch, cfg.latent_dim, rng);
        const auto fake_x = gen.predict(nn::hconcat(noise, real_y));
        ++count.generator_forward;

        // Discriminator: one update on real rows, one on generated rows.
        const auto real_out = disc.forward(nn::hconcat(real_x, real_y), nn::Mode::train, rng, disc_cache);
        const auto real_loss = nn::bce_loss(real_out, ones);
        disc_opt.step(disc, disc.backward(disc_cache, real_loss.gradient).parameters);
        const auto fake_out = disc.forward(nn::hconcat(fake_x, real_y), nn::Mode::train, rng, disc_cache);
        const auto fake_loss = nn::bce_loss(fake_out, zeros);
        disc_opt.step(disc, disc.backward(disc_cache, fake_loss.gradient).parameters);
        count.discriminator_forward += 2;
        count.discriminator_backward += 2;
        count.discriminator_batches += 2;

        // Generator: push D(G(z|y)|y) toward 1; D's weights and running stats stay frozen.
        const auto g_labels = gather_rows(labels, sample_rows());
        const auto g_noise = gaussian(batch, cfg.latent_dim, rng);
        const auto g_out = gen.forward(nn::hconcat(g_noise, g_labels), nn::Mode::train, rng, gen_cache);
        const auto judged = disc.forward(nn::hconcat(g_out, g_labels), nn::Mode::train, rng, disc_cache, false);
        const auto gen_loss = nn::bce_loss(judged, ones);
        const auto through_disc = disc.backward(disc_cache, gen_loss.gradient);
        gen_opt.step(gen, gen.backward(gen_cache, leading_columns(through_disc.input, kFeatureWidth)).parameters);
        count.generator_forward += 1;
        count.generator_backward += 1;
        count.discriminator_forward += 1;
        count.discriminator_backward += 1;
        count.generator_batches += 1;

        IterationStats stats{it, 0.5 * (real_loss.loss + fake_loss.loss), gen_loss.loss,
                             nn::binary_accuracy(real_out, ones), nn::binary_accuracy(fake_out, zeros)};
        result.series.push_back(stats);

        auto snapshot = [&] {
            return TrainingSnapshot{it, gen, disc, stats.discriminator_loss, stats.generator_loss,
                                    stats.accuracy_real, stats.accuracy_fake};
        };
        if (!std::isfinite(stats.discriminator_loss) || !std::isfinite(stats.generator_loss))
            throw TrainingDiverged("train: non-finite loss at iteration " + std::to_string(it), snapshot());
        if (it % cfg.snapshot_interval == 0 || it == iterations) result.snapshots.push_back(snapshot());
    }
    return result;
}

void save_snapshot(const std::filesystem::path& path, const TrainingSnapshot& s) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "cganopt-snapshot 1\n";
    out << "iteration " << s.iteration << '\n';
    out << "discriminator_loss " << csv::format_double(s.discriminator_loss) << '\n';
    out << "generator_loss " << csv::format_double(s.generator_loss) << '\n';
    out << "accuracy_real " << csv::format_double(s.accuracy_real) << '\n';
    out << "accuracy_fake " << csv::format_double(s.accuracy_fake) << '\n';
    out << "generator\n";
    nn::save_network(out, s.generator);
    out << "discriminator\n";
    nn::save_network(out, s.discriminator);
}

TrainingSnapshot load_snapshot(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::string key, value;
    in >> key >> value;
    if (key != "cganopt-snapshot" || value != "1") throw std::runtime_error("snapshot: bad header in " + path.string());
    TrainingSnapshot s;
    auto field = [&](const char* expected) {
        if (!(in >> key >> value) || key != expected)
            throw std::runtime_error(std::string("snapshot: expected ") + expected + " in " + path.string());
        return value;
    };
    s.iteration = static_cast<std::size_t>(std::stoull(field("iteration")));
    s.discriminator_loss = csv::parse_double(field("discriminator_loss"));
    s.generator_loss = csv::parse_double(field("generator_loss"));
    s.accuracy_real = csv::parse_double(field("accuracy_real"));
    s.accuracy_fake = csv::parse_double(field("accuracy_fake"));
    if (!(in >> key) || key != "generator") throw std::runtime_error("snapshot: missing generator");
    s.generator = nn::load_network(in);
    if (!(in >> key) || key != "discriminator") throw std::runtime_error("snapshot: missing discriminator");
    s.discriminator = nn::load_network(in);
    return s;
}

}  // namespace cganopt::cgan
