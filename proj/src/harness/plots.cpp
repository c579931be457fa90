#include "cganopt/harness/plots.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include "cganopt/csv.hpp"

namespace cganopt::harness {

namespace fs = std::filesystem;

std::vector<double> running_average(std::span<const double> values, std::size_t window) {
    if (window == 0) window = 1;
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const std::size_t first = i + 1 >= window ? i + 1 - window : 0;
        double sum = 0.0;
        for (std::size_t k = first; k <= i; ++k) sum += values[k];
        out[i] = sum / static_cast<double>(i + 1 - first);
    }
    return out;
}

namespace {

struct Series {
    std::string name;
    std::vector<double> x, y;
    std::string color;
};

class Svg {
public:
    Svg(std::string title, std::string xlabel, std::string ylabel)
        : title_(std::move(title)), xlabel_(std::move(xlabel)), ylabel_(std::move(ylabel)) {}

    void write(const fs::path& path, const std::vector<Series>& series, bool lines) const {
        double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
        for (const auto& s : series) {
            for (double v : s.x) x0 = std::min(x0, v), x1 = std::max(x1, v);
            for (double v : s.y) y0 = std::min(y0, v), y1 = std::max(y1, v);
        }
        if (!(x1 >= x0)) x0 = 0, x1 = 1;
        if (!(y1 >= y0)) y0 = 0, y1 = 1;
        if (x1 == x0) x1 = x0 + 1;
        if (y1 == y0) y1 = y0 + 1;
        const double w = 640, h = 420, l = 70, r = 20, t = 40, b = 50;
        auto px = [&](double v) { return l + (v - x0) / (x1 - x0) * (w - l - r); };
        auto py = [&](double v) { return h - b - (v - y0) / (y1 - y0) * (h - t - b); };

        std::ostringstream o;
        o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n";
        o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
        o << "<text x=\"" << w / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << title_ << "</text>\n";
        o << "<line x1=\"" << l << "\" y1=\"" << h - b << "\" x2=\"" << w - r << "\" y2=\"" << h - b
          << "\" stroke=\"black\"/>\n";
        o << "<line x1=\"" << l << "\" y1=\"" << t << "\" x2=\"" << l << "\" y2=\"" << h - b << "\" stroke=\"black\"/>\n";
        o << "<text x=\"" << (l + w - r) / 2 << "\" y=\"" << h - 12 << "\" text-anchor=\"middle\" font-size=\"12\">"
          << xlabel_ << "</text>\n";
        o << "<text x=\"16\" y=\"" << (t + h - b) / 2 << "\" font-size=\"12\" transform=\"rotate(-90 16 "
          << (t + h - b) / 2 << ")\" text-anchor=\"middle\">" << ylabel_ << "</text>\n";
        for (int k = 0; k <= 4; ++k) {
            const double xv = x0 + (x1 - x0) * k / 4, yv = y0 + (y1 - y0) * k / 4;
            o << "<text x=\"" << px(xv) << "\" y=\"" << h - b + 16 << "\" font-size=\"10\" text-anchor=\"middle\">"
              << csv::format_double(std::round(xv * 1000) / 1000) << "</text>\n";
            o << "<text x=\"" << l - 6 << "\" y=\"" << py(yv) + 4 << "\" font-size=\"10\" text-anchor=\"end\">"
              << csv::format_double(std::round(yv * 1000) / 1000) << "</text>\n";
        }
        double legend_y = t + 6;
        for (const auto& s : series) {
            if (lines) {
                o << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.2\" points=\"";
                for (std::size_t i = 0; i < s.x.size(); ++i) o << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
                o << "\"/>\n";
            } else {
                for (std::size_t i = 0; i < s.x.size(); ++i) {
                    const double cx = px(s.x[i]), cy = py(s.y[i]);
                    o << "<path d=\"M" << cx - 3 << ' ' << cy - 3 << " L" << cx + 3 << ' ' << cy + 3 << " M"
                      << cx - 3 << ' ' << cy + 3 << " L" << cx + 3 << ' ' << cy - 3 << "\" stroke=\"" << s.color
                      << "\" stroke-width=\"1\"/>\n";
                }
            }
            o << "<text x=\"" << w - r - 150 << "\" y=\"" << legend_y << "\" font-size=\"11\" fill=\"" << s.color
              << "\">" << s.name << "</text>\n";
            legend_y += 14;
        }
        o << "</svg>\n";
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + path.string());
        out << o.str();
    }

private:
    std::string title_, xlabel_, ylabel_;
};

using Getter = std::function<double(const district::ObjectiveTriple&)>;

void write_scatter(const fs::path& path, std::span<const district::ObjectiveTriple> pts, const char* yname,
                   const Getter& y, bool limit) {
    csv::Writer w(path, {"lcc", yname});
    for (const auto& p : pts) {
        if (limit && p.lcc > kScatterLccLimit) continue;
        w.cell(p.lcc).cell(y(p));
        w.end_row();
    }
}

Series scatter_series(const std::string& name, std::span<const district::ObjectiveTriple> pts, const Getter& y,
                      const std::string& color) {
    Series s{name, {}, {}, color};
    for (const auto& p : pts) {
        if (p.lcc > kScatterLccLimit) continue;
        s.x.push_back(p.lcc);
        s.y.push_back(y(p));
    }
    return s;
}

}  // namespace

std::vector<fs::path> emit_plots(const PlotInputs& in, const fs::path& dir, bool svg) {
    fs::create_directories(dir);
    std::vector<fs::path> written;

    for (const auto& run : in.runs) {
        std::vector<double> it, dl, gl, ar, af;
        for (const auto& s : run.series) {
            it.push_back(static_cast<double>(s.iteration));
            dl.push_back(s.discriminator_loss);
            gl.push_back(s.generator_loss);
            ar.push_back(s.accuracy_real);
            af.push_back(s.accuracy_fake);
        }
        const auto dl_avg = running_average(dl), gl_avg = running_average(gl);
        const auto ar_avg = running_average(ar), af_avg = running_average(af);
        const auto path = dir / ("series_" + run.id + ".csv");
        csv::Writer w(path, {"iteration", "discriminator_loss", "generator_loss", "accuracy_real", "accuracy_fake",
                             "discriminator_loss_avg", "generator_loss_avg", "accuracy_real_avg", "accuracy_fake_avg"});
        for (std::size_t i = 0; i < it.size(); ++i) {
            w.cell(run.series[i].iteration).cell(dl[i]).cell(gl[i]).cell(ar[i]).cell(af[i]);
            w.cell(dl_avg[i]).cell(gl_avg[i]).cell(ar_avg[i]).cell(af_avg[i]);
            w.end_row();
        }
        written.push_back(path);
        if (svg) {
            const auto loss_svg = dir / ("loss_" + run.id + ".svg");
            Svg("Loss (" + run.id + " run, running average)", "iteration", "loss")
                .write(loss_svg, {{"discriminator", it, dl_avg, "#1f77b4"}, {"generator", it, gl_avg, "#d62728"}}, true);
            const auto acc_svg = dir / ("accuracy_" + run.id + ".svg");
            Svg("Discriminator accuracy (" + run.id + " run, running average)", "iteration", "accuracy")
                .write(acc_svg, {{"real batch", it, ar_avg, "#1f77b4"}, {"generated batch", it, af_avg, "#d62728"}},
                       true);
            written.push_back(loss_svg);
            written.push_back(acc_svg);
        }
    }

    const std::pair<const char*, Getter> axes[] = {
        {"ghg", [](const district::ObjectiveTriple& o) { return o.ghg; }},
        {"walkscore", [](const district::ObjectiveTriple& o) { return o.walkscore; }},
    };
    for (const auto& [name, get] : axes) {
        for (bool limit : {false, true}) {
            const std::string suffix = limit ? "_lcc_le_10k.csv" : ".csv";
            const auto train_path = dir / (std::string(name) + "_vs_lcc_train" + suffix);
            const auto gen_path = dir / (std::string(name) + "_vs_lcc_gen" + suffix);
            write_scatter(train_path, in.train, name, get, limit);
            write_scatter(gen_path, in.generated, name, get, limit);
            written.push_back(train_path);
            written.push_back(gen_path);
        }
        if (svg) {
            const auto path = dir / (std::string(name) + "_vs_lcc.svg");
            Svg(std::string(name) + " vs LCC (LCC <= 10k)", "LCC ($/m2)", name)
                .write(path,
                       {scatter_series("train", in.train, get, "#1f77b4"),
                        scatter_series("generated", in.generated, get, "#d62728")},
                       false);
            written.push_back(path);
        }
    }
    return written;
}

}  // namespace cganopt::harness
