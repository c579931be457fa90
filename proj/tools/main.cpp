// Command-line front end: optimize, train, generate, experiment, report, plots.
#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "cganopt/cgan/experiment.hpp"
#include "cganopt/csv.hpp"
#include "cganopt/district/catalog.hpp"
#include "cganopt/district/reference_model.hpp"
#include "cganopt/harness/config.hpp"
#include "cganopt/harness/pipeline.hpp"
#include "cganopt/harness/plots.hpp"
#include "cganopt/metrics/front_history.hpp"
#include "cganopt/moo/archive_io.hpp"
#include "cganopt/moo/nsga2.hpp"

namespace fs = std::filesystem;
using namespace cganopt;

namespace {

struct GlobalOptions {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out = "out";
    bool paper_scale = false;
    std::string catalog;
    std::string archive;

    fs::path archive_path() const { return archive.empty() ? fs::path(out) / "archive.csv" : fs::path(archive); }
};

harness::HarnessConfig make_config(const GlobalOptions& g) {
    auto base = g.paper_scale ? harness::HarnessConfig::paper() : harness::HarnessConfig::desk();
    auto cfg = g.config.empty() ? base : harness::HarnessConfig::load(g.config, base);
    if (g.seed) cfg.set_seed(*g.seed);
    if (!g.catalog.empty()) cfg.catalog = g.catalog;
    cfg.check();
    return cfg;
}

district::ReferenceModel make_model(const harness::HarnessConfig& cfg) {
    if (cfg.catalog.empty()) return district::ReferenceModel::load_default();
    return district::ReferenceModel(district::load_catalog(cfg.catalog));
}

moo::SolutionArchive optimize(const harness::HarnessConfig& cfg, const moo::Evaluator& evaluate,
                              const fs::path& archive_path, double* seconds_out = nullptr) {
    const auto t0 = std::chrono::steady_clock::now();
    auto archive = moo::run_nsga2(cfg.ga, evaluate);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    moo::write_archive(archive_path, archive);
    harness::write_ga_seconds(archive_path, seconds);
    csv::Writer w(archive_path.parent_path() / "hv_by_generation.csv", {"generation", "feasible_seen", "hypervolume"});
    for (const auto& g : metrics::cumulative_hypervolume(archive)) {
        w.cell(g.generation).cell(g.feasible_seen).cell(g.hypervolume);
        w.end_row();
    }
    std::cout << "archive: " << archive.size() << " evaluations, " << archive.feasible_solutions().size()
              << " feasible, " << seconds << " s -> " << archive_path.string() << '\n';
    if (seconds_out) *seconds_out = seconds;
    return archive;
}

moo::SolutionArchive load_archive(const fs::path& path) {
    if (!fs::exists(path)) throw std::runtime_error("archive " + path.string() + " not found; run `optimize` first");
    return moo::read_archive(path);
}

std::string cell_or_dash(const std::string& s) { return s.empty() ? "-" : s; }

void print_report(const fs::path& dir) {
    const auto t = harness::read_report(dir / "report.csv");
    const auto& row = t.rows[0];
    std::cout << row[0] << '\n';
    for (std::size_t i = 1; i < t.header.size(); ++i)
        std::cout << "  " << t.header[i] << ": " << cell_or_dash(row[i]) << '\n';
    const auto timing_path = dir / "timings.csv";
    if (fs::exists(timing_path)) {
        const auto tm = harness::read_timings(timing_path);
        std::cout << "  gan_seconds: " << tm.gan_seconds() << '\n';
        const auto ratio = tm.runtime_ratio();
        std::cout << "  runtime_ratio: " << (ratio ? csv::format_double(*ratio) : std::string("-")) << '\n';
    }
}

harness::PlotInputs plot_inputs_from_disk(const harness::ExperimentPaths& paths) {
    harness::PlotInputs in;
    for (const char* id : {"short", "long"}) {
        const auto series = paths.run_dir(id) / "series.csv";
        if (fs::exists(series)) in.runs.push_back({id, harness::read_series(series)});
    }
    for (const auto& s : harness::read_training_set(paths.training_set())) in.train.push_back(*s.objectives);
    if (fs::exists(paths.vetted()))
        for (const auto& v : harness::read_vetted(paths.vetted())) in.generated.push_back(v.objectives);
    return in;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"District energy NSGA-II archive augmentation with a conditional GAN"};
    app.require_subcommand(1);
    GlobalOptions g;
    app.add_option("--config", g.config, "JSON configuration file")->check(CLI::ExistingFile);
    app.add_option("--seed", g.seed, "seed for both the GA and the GAN");
    app.add_option("--out", g.out, "output directory")->capture_default_str();
    app.add_flag("--paper-scale", g.paper_scale, "paper-sized GA, training runs and pools");
    app.add_option("--catalog", g.catalog, "reference-model catalog JSON");
    app.add_option("--archive", g.archive, "archive CSV (default <out>/archive.csv)");
    app.fallthrough();

    std::string experiment_name;
    std::string training_set;
    bool no_svg = false;

    auto* optimize_cmd = app.add_subcommand("optimize", "run NSGA-II and write the archive");
    auto* train_cmd = app.add_subcommand("train", "filter, normalize and run both training runs");
    train_cmd->add_option("experiment", experiment_name, "experiment name")->required();
    train_cmd->add_option("--training-set", training_set, "training set CSV replacing the median filter");
    auto* generate_cmd = app.add_subcommand("generate", "generate candidates from saved snapshots");
    generate_cmd->add_option("experiment", experiment_name, "experiment name")->required();
    auto* experiment_cmd = app.add_subcommand("experiment", "run one experiment end to end");
    experiment_cmd->add_option("name", experiment_name, "experiment name")->required();
    experiment_cmd->add_option("--training-set", training_set, "training set CSV replacing the median filter");
    experiment_cmd->add_flag("--no-svg", no_svg, "skip SVG rendering");
    auto* report_cmd = app.add_subcommand("report", "print experiment reports found under --out");
    report_cmd->add_option("experiment", experiment_name, "only this experiment");
    auto* plots_cmd = app.add_subcommand("plots", "write plot data for an experiment");
    plots_cmd->add_option("experiment", experiment_name, "experiment name")->required();
    plots_cmd->add_flag("--no-svg", no_svg, "skip SVG rendering");

    CLI11_PARSE(app, argc, argv);

    std::string stage = "config";
    try {
        const auto cfg = make_config(g);
        stage = "model";
        const auto model = make_model(cfg);
        const auto evaluate = moo::make_evaluator(model);
        const fs::path out = g.out;
        std::optional<cgan::Experiment> exp;
        if (!experiment_name.empty()) {
            stage = "config";
            exp = cgan::parse_experiment(experiment_name);
        }
        std::optional<std::vector<moo::Solution>> override_set;
        if (!training_set.empty()) override_set = harness::read_training_set(training_set);

        if (optimize_cmd->parsed()) {
            stage = "optimize";
            optimize(cfg, evaluate, g.archive_path());
        } else if (train_cmd->parsed()) {
            stage = "archive";
            const auto archive = load_archive(g.archive_path());
            const auto paths = harness::experiment_paths(out, *exp);
            cfg.save(paths.config());
            const auto r = harness::train_stage(cfg, *exp, archive, paths, override_set);
            for (const auto& run : r.runs)
                std::cout << run.id << " run: " << run.iterations << " iterations, " << run.snapshots.size()
                          << " snapshots, " << run.selected.size() << " selected\n";
        } else if (generate_cmd->parsed()) {
            const auto paths = harness::experiment_paths(out, *exp);
            const auto pool = harness::generate_from_disk(cfg, *exp, paths);
            std::cout << pool.size() << " candidates -> " << paths.candidates().string() << '\n';
        } else if (experiment_cmd->parsed()) {
            stage = "optimize";
            std::optional<moo::SolutionArchive> archive;
            std::optional<double> ga_seconds;
            const auto archive_path = g.archive_path();
            if (fs::exists(archive_path)) {
                archive = moo::read_archive(archive_path);
                ga_seconds = harness::read_ga_seconds(archive_path);
            } else {
                double s = 0.0;
                archive = optimize(cfg, evaluate, archive_path, &s);
                ga_seconds = s;
            }
            harness::ExperimentOptions opts{out, override_set, ga_seconds};
            const auto report = harness::run_experiment(cfg, *exp, *archive, evaluate, opts);
            stage = "plots";
            const auto paths = harness::experiment_paths(out, *exp);
            harness::PlotInputs in;
            for (const auto& run : report.runs) in.runs.push_back({run.id, run.series});
            for (const auto& s : report.training) in.train.push_back(*s.objectives);
            for (const auto& v : report.vetted.admissible) in.generated.push_back(v.objectives);
            harness::emit_plots(in, paths.plots(), !no_svg);
            print_report(paths.root);
        } else if (report_cmd->parsed()) {
            stage = "report";
            bool any = false;
            for (auto e : cgan::kAllExperiments) {
                if (exp && *exp != e) continue;
                const auto paths = harness::experiment_paths(out, e);
                if (!fs::exists(paths.report())) continue;
                print_report(paths.root);
                any = true;
            }
            if (!any) throw std::runtime_error("no report.csv found under " + out.string());
        } else if (plots_cmd->parsed()) {
            stage = "plots";
            const auto paths = harness::experiment_paths(out, *exp);
            const auto files = harness::emit_plots(plot_inputs_from_disk(paths), paths.plots(), !no_svg);
            std::cout << files.size() << " files -> " << paths.plots().string() << '\n';
        }
    } catch (const harness::StageError& e) {
        std::cerr << "error in stage " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error in stage " << stage << ": " << e.what() << '\n';
        return 2;
    }
    return 0;
}
