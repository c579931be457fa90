#include "cganopt/nn/network.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "cganopt/csv.hpp"
#include "cganopt/nn/kernels.hpp"

namespace cganopt::nn {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::uint64_t next_network_id() {
    static std::atomic<std::uint64_t> counter{1};
    return counter.fetch_add(1);
}

std::string layer_name(const Layer& layer) {
    return std::visit(overloaded{[](const Dense&) { return "dense"; }, [](const BatchNorm&) { return "batchnorm"; },
                                 [](const LeakyRelu&) { return "leaky_relu"; },
                                 [](const Dropout&) { return "dropout"; }, [](const Tanh&) { return "tanh"; },
                                 [](const Sigmoid&) { return "sigmoid"; }},
                      layer);
}

// Width a layer produces given its input width.
std::size_t output_width_of(const Layer& layer, std::size_t in) {
    if (const auto* d = std::get_if<Dense>(&layer)) return d->weight.cols();
    return in;
}

void batchnorm_eval(const BatchNorm& bn, const Matrix& x, Matrix& xhat, std::vector<double>& inv_std, Matrix& y) {
    const std::size_t n = x.rows(), w = x.cols();
    inv_std.resize(w);
    for (std::size_t j = 0; j < w; ++j) inv_std[j] = 1.0 / std::sqrt(bn.running_var[j] + bn.epsilon);
    xhat = Matrix(n, w);
    y = Matrix(n, w);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < w; ++j) {
            xhat(i, j) = (x(i, j) - bn.running_mean[j]) * inv_std[j];
            y(i, j) = bn.gamma[j] * xhat(i, j) + bn.beta[j];
        }
}

void batchnorm_train(BatchNorm& bn, const Matrix& x, bool update, Matrix& xhat, std::vector<double>& inv_std,
                     Matrix& y) {
    const std::size_t n = x.rows(), w = x.cols();
    inv_std.assign(w, 0.0);
    xhat = Matrix(n, w);
    y = Matrix(n, w);
    for (std::size_t j = 0; j < w; ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean += x(i, j);
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (std::size_t i = 0; i < n; ++i) var += (x(i, j) - mean) * (x(i, j) - mean);
        var /= static_cast<double>(n);
        inv_std[j] = 1.0 / std::sqrt(var + bn.epsilon);
        for (std::size_t i = 0; i < n; ++i) {
            xhat(i, j) = (x(i, j) - mean) * inv_std[j];
            y(i, j) = bn.gamma[j] * xhat(i, j) + bn.beta[j];
        }
        if (update) {
            const double unbiased = n > 1 ? var * static_cast<double>(n) / static_cast<double>(n - 1) : var;
            bn.running_mean[j] = bn.momentum * bn.running_mean[j] + (1.0 - bn.momentum) * mean;
            bn.running_var[j] = bn.momentum * bn.running_var[j] + (1.0 - bn.momentum) * unbiased;
        }
    }
}

double sigmoid(double v) { return v >= 0.0 ? 1.0 / (1.0 + std::exp(-v)) : std::exp(v) / (1.0 + std::exp(v)); }

Matrix map(const Matrix& x, auto&& f) {
    Matrix y(x.rows(), x.cols());
    auto src = x.values();
    auto dst = y.values();
    for (std::size_t k = 0; k < src.size(); ++k) dst[k] = f(src[k]);
    return y;
}

}  // namespace

Network::Network(std::size_t input_width, std::vector<Layer> layers)
    : input_width_(input_width), layers_(std::move(layers)), id_(next_network_id()) {
    std::size_t width = input_width_;
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        if (const auto* d = std::get_if<Dense>(&layers_[i])) {
            if (d->weight.rows() != width || d->bias.size() != d->weight.cols())
                throw std::invalid_argument("layer " + std::to_string(i) + " (dense): shape does not chain");
        } else if (const auto* bn = std::get_if<BatchNorm>(&layers_[i])) {
            if (bn->gamma.size() != width || bn->beta.size() != width || bn->running_mean.size() != width ||
                bn->running_var.size() != width)
                throw std::invalid_argument("layer " + std::to_string(i) + " (batchnorm): width mismatch");
            if (std::any_of(bn->running_var.begin(), bn->running_var.end(), [](double v) { return !(v > 0.0); }))
                throw std::invalid_argument("layer " + std::to_string(i) + " (batchnorm): running variance <= 0");
        }
        width = output_width_of(layers_[i], width);
    }
}

Network::Network(const Network& other)
    : input_width_(other.input_width_), layers_(other.layers_), version_(other.version_), id_(next_network_id()) {}

Network& Network::operator=(const Network& other) {
    if (this != &other) {
        input_width_ = other.input_width_;
        layers_ = other.layers_;
        version_ = other.version_ + 1;
        id_ = next_network_id();
    }
    return *this;
}

std::size_t Network::output_width() const {
    std::size_t width = input_width_;
    for (const auto& l : layers_) width = output_width_of(l, width);
    return width;
}

std::vector<Layer>& Network::mutable_layers() {
    ++version_;
    return layers_;
}

std::vector<std::span<double>> Network::parameters() {
    ++version_;
    std::vector<std::span<double>> out;
    for (auto& l : layers_) {
        if (auto* d = std::get_if<Dense>(&l)) {
            out.emplace_back(d->weight.values());
            out.emplace_back(d->bias);
        } else if (auto* bn = std::get_if<BatchNorm>(&l)) {
            out.emplace_back(bn->gamma);
            out.emplace_back(bn->beta);
        }
    }
    return out;
}

std::vector<std::span<const double>> Network::parameters() const {
    std::vector<std::span<const double>> out;
    for (const auto& l : layers_) {
        if (const auto* d = std::get_if<Dense>(&l)) {
            out.emplace_back(d->weight.values());
            out.emplace_back(d->bias);
        } else if (const auto* bn = std::get_if<BatchNorm>(&l)) {
            out.emplace_back(bn->gamma);
            out.emplace_back(bn->beta);
        }
    }
    return out;
}

std::size_t Network::parameter_count() const {
    std::size_t n = 0;
    for (const auto& p : parameters()) n += p.size();
    return n;
}

void Network::check_input(const Matrix& input) const {
    if (input.cols() != input_width_)
        throw std::invalid_argument("layer 0 (" + (layers_.empty() ? std::string("input") : layer_name(layers_[0])) +
                                    "): expected input width " + std::to_string(input_width_) + ", got " +
                                    std::to_string(input.cols()));
}

Matrix Network::forward(const Matrix& input, Mode mode, Rng& rng, ForwardCache& cache, bool update_running_stats) {
    check_input(input);
    cache.layers.assign(layers_.size(), {});
    Matrix x = input;
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        LayerCache& lc = cache.layers[i];
        lc.mode = mode;
        std::visit(overloaded{
                       [&](Dense& d) {
                           lc.input = x;
                           x = kernels::affine(x, d.weight, d.bias);
                       },
                       [&](BatchNorm& bn) {
                           Matrix y;
                           if (mode == Mode::train) batchnorm_train(bn, x, update_running_stats, lc.normalized, lc.inv_std, y);
                           else batchnorm_eval(bn, x, lc.normalized, lc.inv_std, y);
                           x = std::move(y);
                       },
                       [&](LeakyRelu& a) {
                           lc.input = x;
                           x = map(x, [alpha = a.alpha](double v) { return v > 0.0 ? v : alpha * v; });
                       },
                       [&](Dropout& dr) {
                           if (mode != Mode::train || dr.rate <= 0.0) return;
                           lc.mask = Matrix(x.rows(), x.cols());
                           const double scale = 1.0 / (1.0 - dr.rate);
                           for (auto& m : lc.mask.values()) m = rng.uniform() < dr.rate ? 0.0 : scale;
                           auto xv = x.values();
                           auto mv = lc.mask.values();
                           for (std::size_t k = 0; k < xv.size(); ++k) xv[k] *= mv[k];
                       },
                       [&](Tanh&) {
                           x = map(x, [](double v) { return std::tanh(v); });
                           lc.output = x;
                       },
                       [&](Sigmoid&) {
                           x = map(x, sigmoid);
                           lc.output = x;
                       },
                   },
                   layers_[i]);
    }
    cache.network_version = version_;
    cache.network_id = id_;
    return x;
}

Matrix Network::predict(const Matrix& input) const {
    check_input(input);
    Matrix x = input;
    for (const auto& layer : layers_) {
        std::visit(overloaded{
                       [&](const Dense& d) { x = kernels::affine(x, d.weight, d.bias); },
                       [&](const BatchNorm& bn) {
                           Matrix xhat, y;
                           std::vector<double> inv_std;
                           batchnorm_eval(bn, x, xhat, inv_std, y);
                           x = std::move(y);
                       },
                       [&](const LeakyRelu& a) {
                           x = map(x, [alpha = a.alpha](double v) { return v > 0.0 ? v : alpha * v; });
                       },
                       [&](const Dropout&) {},
                       [&](const Tanh&) { x = map(x, [](double v) { return std::tanh(v); }); },
                       [&](const Sigmoid&) { x = map(x, sigmoid); },
                   },
                   layer);
    }
    return x;
}

BackwardResult Network::backward(const ForwardCache& cache, const Matrix& upstream) const {
    if (cache.network_id != id_ || cache.network_version != version_ || cache.layers.size() != layers_.size())
        throw std::logic_error("backward: stale forward cache (parameters changed since the forward pass)");

    // Parameter slots of each layer, in parameter order.
    std::vector<std::size_t> slot(layers_.size(), 0);
    std::size_t tensors = 0;
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        slot[i] = tensors;
        if (std::holds_alternative<Dense>(layers_[i]) || std::holds_alternative<BatchNorm>(layers_[i])) tensors += 2;
    }

    BackwardResult result;
    result.parameters.resize(tensors);
    Matrix g = upstream;
    for (std::size_t r = layers_.size(); r-- > 0;) {
        const LayerCache& lc = cache.layers[r];
        std::visit(overloaded{
                       [&](const Dense& d) {
                           if (g.cols() != d.weight.cols() || g.rows() != lc.input.rows())
                               throw std::invalid_argument("layer " + std::to_string(r) +
                                                           " (dense): upstream gradient shape mismatch");
                           Matrix dw = kernels::matmul_tn(lc.input, g);
                           std::vector<double> db(g.cols(), 0.0);
                           for (std::size_t i = 0; i < g.rows(); ++i)
                               for (std::size_t j = 0; j < g.cols(); ++j) db[j] += g(i, j);
                           result.parameters[slot[r]].assign(dw.values().begin(), dw.values().end());
                           result.parameters[slot[r] + 1] = std::move(db);
                           g = kernels::matmul_nt(g, d.weight);
                       },
                       [&](const BatchNorm& bn) {
                           const std::size_t n = g.rows(), w = g.cols();
                           std::vector<double> dgamma(w, 0.0), dbeta(w, 0.0);
                           for (std::size_t i = 0; i < n; ++i)
                               for (std::size_t j = 0; j < w; ++j) {
                                   dgamma[j] += g(i, j) * lc.normalized(i, j);
                                   dbeta[j] += g(i, j);
                               }
                           Matrix dx(n, w);
                           if (lc.mode == Mode::train) {
                               const double nn = static_cast<double>(n);
                               for (std::size_t j = 0; j < w; ++j) {
                                   double sum_dxhat = 0.0, sum_dxhat_xhat = 0.0;
                                   for (std::size_t i = 0; i < n; ++i) {
                                       const double dxhat = g(i, j) * bn.gamma[j];
                                       sum_dxhat += dxhat;
                                       sum_dxhat_xhat += dxhat * lc.normalized(i, j);
                                   }
                                   for (std::size_t i = 0; i < n; ++i) {
                                       const double dxhat = g(i, j) * bn.gamma[j];
                                       dx(i, j) = lc.inv_std[j] / nn *
                                                  (nn * dxhat - sum_dxhat - lc.normalized(i, j) * sum_dxhat_xhat);
                                   }
                               }
                           } else {
                               for (std::size_t i = 0; i < n; ++i)
                                   for (std::size_t j = 0; j < w; ++j) dx(i, j) = g(i, j) * bn.gamma[j] * lc.inv_std[j];
                           }
                           result.parameters[slot[r]] = std::move(dgamma);
                           result.parameters[slot[r] + 1] = std::move(dbeta);
                           g = std::move(dx);
                       },
                       [&](const LeakyRelu& a) {
                           auto gv = g.values();
                           auto xv = lc.input.values();
                           for (std::size_t k = 0; k < gv.size(); ++k)
                               if (!(xv[k] > 0.0)) gv[k] *= a.alpha;
                       },
                       [&](const Dropout&) {
                           if (lc.mask.size() == 0) return;
                           auto gv = g.values();
                           auto mv = lc.mask.values();
                           for (std::size_t k = 0; k < gv.size(); ++k) gv[k] *= mv[k];
                       },
                       [&](const Tanh&) {
                           auto gv = g.values();
                           auto yv = lc.output.values();
                           for (std::size_t k = 0; k < gv.size(); ++k) gv[k] *= 1.0 - yv[k] * yv[k];
                       },
                       [&](const Sigmoid&) {
                           auto gv = g.values();
                           auto yv = lc.output.values();
                           for (std::size_t k = 0; k < gv.size(); ++k) gv[k] *= yv[k] * (1.0 - yv[k]);
                       },
                   },
                   layers_[r]);
    }
    result.input = std::move(g);
    return result;
}

bool operator==(const Network& a, const Network& b) {
    if (a.input_width_ != b.input_width_ || a.layers_.size() != b.layers_.size()) return false;
    for (std::size_t i = 0; i < a.layers_.size(); ++i) {
        const auto& la = a.layers_[i];
        const auto& lb = b.layers_[i];
        if (la.index() != lb.index()) return false;
        const bool same = std::visit(
            overloaded{
                [&](const Dense& d) {
                    const auto& e = std::get<Dense>(lb);
                    return d.weight == e.weight && d.bias == e.bias;
                },
                [&](const BatchNorm& n) {
                    const auto& m = std::get<BatchNorm>(lb);
                    return n.gamma == m.gamma && n.beta == m.beta && n.running_mean == m.running_mean &&
                           n.running_var == m.running_var && n.momentum == m.momentum && n.epsilon == m.epsilon;
                },
                [&](const LeakyRelu& r) { return r.alpha == std::get<LeakyRelu>(lb).alpha; },
                [&](const Dropout& d) { return d.rate == std::get<Dropout>(lb).rate; },
                [](const Tanh&) { return true; },
                [](const Sigmoid&) { return true; },
            },
            la);
        if (!same) return false;
    }
    return true;
}

Network build_mlp(std::size_t input_width, std::span<const LayerConfig> blocks, Rng& init_rng) {
    std::vector<Layer> layers;
    std::size_t width = input_width;
    for (const auto& b : blocks) {
        if (b.width == 0) throw std::invalid_argument("build_mlp: zero-width block");
        Dense d{Matrix(width, b.width), std::vector<double>(b.width, 0.0)};
        const double limit = std::sqrt(6.0 / static_cast<double>(width + b.width));
        for (auto& w : d.weight.values()) w = (2.0 * init_rng.uniform() - 1.0) * limit;
        layers.emplace_back(std::move(d));
        width = b.width;

        auto push_norm = [&] {
            if (!b.batchnorm) return;
            BatchNorm bn;
            bn.gamma.assign(width, 1.0);
            bn.beta.assign(width, 0.0);
            bn.running_mean.assign(width, 0.0);
            bn.running_var.assign(width, 1.0);
            bn.momentum = b.batchnorm->momentum;
            bn.epsilon = b.batchnorm->epsilon;
            layers.emplace_back(std::move(bn));
        };
        auto push_activation = [&] {
            switch (b.activation) {
                case Activation::none: break;
                case Activation::leaky_relu: layers.emplace_back(LeakyRelu{b.leaky_alpha}); break;
                case Activation::tanh: layers.emplace_back(Tanh{}); break;
                case Activation::sigmoid: layers.emplace_back(Sigmoid{}); break;
            }
        };
        if (b.order == BlockOrder::norm_then_activation) {
            push_norm();
            push_activation();
        } else {
            push_activation();
            push_norm();
        }
        if (b.dropout_prob > 0.0) layers.emplace_back(Dropout{b.dropout_prob});
    }
    return Network(input_width, std::move(layers));
}

namespace {

void write_values(std::ostream& out, std::span<const double> values) {
    for (std::size_t i = 0; i < values.size(); ++i) out << (i ? " " : "") << csv::format_double(values[i]);
    out << '\n';
}

std::vector<double> read_values(std::istream& in, std::size_t count) {
    std::vector<double> v(count);
    std::string token;
    for (auto& x : v) {
        if (!(in >> token)) throw std::runtime_error("network record: truncated values");
        x = csv::parse_double(token);
    }
    return v;
}

template <class T>
T read_token(std::istream& in, const char* what) {
    T value{};
    if (!(in >> value)) throw std::runtime_error(std::string("network record: expected ") + what);
    return value;
}

}  // namespace

void save_network(std::ostream& out, const Network& net) {
    out << "cganopt-mlp " << kNetworkFormatVersion << '\n';
    out << "input " << net.input_width() << '\n';
    out << "layers " << net.layers().size() << '\n';
    for (const auto& layer : net.layers()) {
        std::visit(overloaded{
                       [&](const Dense& d) {
                           out << "dense " << d.weight.rows() << ' ' << d.weight.cols() << '\n';
                           write_values(out, d.weight.values());
                           write_values(out, d.bias);
                       },
                       [&](const BatchNorm& bn) {
                           out << "batchnorm " << bn.gamma.size() << ' ' << csv::format_double(bn.momentum) << ' '
                               << csv::format_double(bn.epsilon) << '\n';
                           write_values(out, bn.gamma);
                           write_values(out, bn.beta);
                           write_values(out, bn.running_mean);
                           write_values(out, bn.running_var);
                       },
                       [&](const LeakyRelu& a) { out << "leaky_relu " << csv::format_double(a.alpha) << '\n'; },
                       [&](const Dropout& d) { out << "dropout " << csv::format_double(d.rate) << '\n'; },
                       [&](const Tanh&) { out << "tanh\n"; },
                       [&](const Sigmoid&) { out << "sigmoid\n"; },
                   },
                   layer);
    }
}

Network load_network(std::istream& in) {
    if (read_token<std::string>(in, "magic") != "cganopt-mlp") throw std::runtime_error("network record: bad magic");
    if (read_token<int>(in, "version") != kNetworkFormatVersion)
        throw std::runtime_error("network record: unsupported version");
    if (read_token<std::string>(in, "'input'") != "input") throw std::runtime_error("network record: expected input");
    const auto input_width = read_token<std::size_t>(in, "input width");
    if (read_token<std::string>(in, "'layers'") != "layers") throw std::runtime_error("network record: expected layers");
    const auto count = read_token<std::size_t>(in, "layer count");

    std::vector<Layer> layers;
    for (std::size_t i = 0; i < count; ++i) {
        const auto kind = read_token<std::string>(in, "layer kind");
        if (kind == "dense") {
            const auto rows = read_token<std::size_t>(in, "rows");
            const auto cols = read_token<std::size_t>(in, "cols");
            Dense d{Matrix(rows, cols, read_values(in, rows * cols)), read_values(in, cols)};
            layers.emplace_back(std::move(d));
        } else if (kind == "batchnorm") {
            const auto width = read_token<std::size_t>(in, "width");
            BatchNorm bn;
            bn.momentum = csv::parse_double(read_token<std::string>(in, "momentum"));
            bn.epsilon = csv::parse_double(read_token<std::string>(in, "epsilon"));
            bn.gamma = read_values(in, width);
            bn.beta = read_values(in, width);
            bn.running_mean = read_values(in, width);
            bn.running_var = read_values(in, width);
            layers.emplace_back(std::move(bn));
        } else if (kind == "leaky_relu") {
            layers.emplace_back(LeakyRelu{csv::parse_double(read_token<std::string>(in, "alpha"))});
        } else if (kind == "dropout") {
            layers.emplace_back(Dropout{csv::parse_double(read_token<std::string>(in, "rate"))});
        } else if (kind == "tanh") {
            layers.emplace_back(Tanh{});
        } else if (kind == "sigmoid") {
            layers.emplace_back(Sigmoid{});
        } else {
            throw std::runtime_error("network record: unknown layer kind '" + kind + "'");
        }
    }
    return Network(input_width, std::move(layers));
}

void save_network(const std::filesystem::path& path, const Network& net) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    save_network(out, net);
}

Network load_network(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return load_network(in);
}

}  // namespace cganopt::nn
