#include "cganopt/harness/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "cganopt/cgan/label_grid.hpp"
#include "cganopt/metrics/hypervolume.hpp"
#include "cganopt/metrics/scaling.hpp"
#include "cganopt/rng.hpp"

namespace cganopt::harness {

namespace fs = std::filesystem;
using district::ObjectiveTriple;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<ObjectiveTriple> objectives_of(std::span<const moo::Solution> solutions) {
    std::vector<ObjectiveTriple> out;
    out.reserve(solutions.size());
    for (const auto& s : solutions) out.push_back(*s.objectives);
    return out;
}

// Runs `body`, turning any exception into a StageError for `stage`.
template <class F>
auto staged(const std::string& stage, F&& body) {
    try {
        return body();
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError(stage, e.what());
    }
}

}  // namespace

double median(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("median of an empty list");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

ObjectiveMedians objective_medians(std::span<const moo::Solution> feasible) {
    std::vector<double> lcc, ghg, ws;
    for (const auto& s : feasible) {
        lcc.push_back(s.objectives->lcc);
        ghg.push_back(s.objectives->ghg);
        ws.push_back(s.objectives->walkscore);
    }
    return {median(lcc), median(ghg), median(ws)};
}

bool in_training_set(cgan::Experiment e, const ObjectiveTriple& o, const ObjectiveMedians& med) {
    const bool worst_ghg = o.ghg >= med.ghg;
    const bool worst_lcc = o.lcc >= med.lcc;
    const bool worst_ws = o.walkscore <= med.walkscore;
    switch (e) {
        case cgan::Experiment::worst_half_ghg: return worst_ghg;
        case cgan::Experiment::worst_half_lcc: return worst_lcc;
        case cgan::Experiment::worst_half_walkscore: return worst_ws;
        case cgan::Experiment::worst_half_all: return worst_ghg && worst_lcc && worst_ws;
        case cgan::Experiment::best_half_all: return !worst_ghg && !worst_lcc && !worst_ws;
        case cgan::Experiment::full_data: return true;
    }
    return false;
}

std::vector<moo::Solution> filter_training_set(const moo::SolutionArchive& archive, cgan::Experiment e) {
    const auto feasible = archive.feasible_solutions();
    if (feasible.size() < 2)
        throw StageError("filter", "archive holds " + std::to_string(feasible.size()) +
                                       " feasible solutions; at least 2 are needed");
    const auto med = objective_medians(feasible);
    std::vector<moo::Solution> out;
    for (const auto& s : feasible)
        if (in_training_set(e, *s.objectives, med)) out.push_back(s);
    if (out.empty())
        throw StageError("filter", std::string("the ") + std::string(cgan::experiment_name(e)) +
                                       " subset is empty; try FullData or a larger archive");
    return out;
}

std::optional<double> VetResult::ratio() const {
    if (pool_size == 0) return std::nullopt;
    return static_cast<double>(admissible.size()) / static_cast<double>(pool_size);
}

VetResult vet_candidates(std::span<const cgan::Candidate> pool, const moo::SolutionArchive& archive,
                         const moo::Evaluator& evaluate) {
    VetResult r;
    r.pool_size = pool.size();
    const auto known_list = archive.decisions();
    const std::set<district::DecisionVector> known(known_list.begin(), known_list.end());
    std::set<district::DecisionVector> kept;
    for (const auto& c : pool) {
        const auto d = district::DecisionVector::from_array(c.decision);
        if (!district::validate(d).feasible()) {
            ++r.invalid;
            continue;
        }
        if (known.contains(d)) {
            ++r.archive_duplicates;
            continue;
        }
        if (kept.contains(d)) {
            ++r.pool_duplicates;
            continue;
        }
        std::optional<ObjectiveTriple> o;
        try {
            o = evaluate(d);
        } catch (const std::exception&) {
            o.reset();
        }
        if (!o) {
            ++r.invalid;
            continue;
        }
        kept.insert(d);
        r.admissible.push_back({d, *o, c});
    }
    return r;
}

std::optional<double> Timings::runtime_ratio() const {
    if (!ga_seconds || !(*ga_seconds > 0.0)) return std::nullopt;
    return gan_seconds() / *ga_seconds;
}

std::optional<double> report_runtime_ratio(const RunReport& report) { return report.timings.runtime_ratio(); }

ExperimentPaths experiment_paths(const fs::path& out_dir, cgan::Experiment e) {
    return {out_dir / std::string(cgan::experiment_name(e))};
}

namespace {

fs::path snapshot_file(const fs::path& run_dir, std::size_t iteration) {
    char name[32];
    std::snprintf(name, sizeof name, "iter_%06zu.snap", iteration);
    return run_dir / "snapshots" / name;
}

std::vector<std::string> snapshot_index_header() {
    return {"iteration", "discriminator_loss", "generator_loss", "accuracy_real", "accuracy_fake", "selected"};
}

void persist_run(const RunArtifacts& run, const fs::path& dir) {
    write_series(dir / "series.csv", run.series);
    csv::Writer w(dir / "snapshots.csv", snapshot_index_header());
    for (std::size_t i = 0; i < run.snapshots.size(); ++i) {
        const auto& s = run.snapshots[i];
        const bool sel = std::find(run.selected.begin(), run.selected.end(), i) != run.selected.end();
        w.cell(s.iteration).cell(s.discriminator_loss).cell(s.generator_loss).cell(s.accuracy_real)
            .cell(s.accuracy_fake).cell(sel ? 1 : 0);
        w.end_row();
        if (sel) cgan::save_snapshot(snapshot_file(dir, s.iteration), s);
    }
}

RunArtifacts train_run(const HarnessConfig& cfg, const std::string& id, std::size_t iterations, std::uint64_t seed,
                       const nn::Matrix& features, const nn::Matrix& labels) {
    RunArtifacts run;
    run.id = id;
    run.iterations = iterations;
    try {
        auto result = cgan::train(cfg.cgan, features, labels, iterations, seed);
        run.series = std::move(result.series);
        run.snapshots = std::move(result.snapshots);
    } catch (const cgan::TrainingDiverged& e) {
        throw StageError("train", std::string(e.what()) + " (" + id + " run)");
    }
    run.selected = cgan::select_candidate_snapshots(run.snapshots);
    return run;
}

}  // namespace

TrainStageResult train_stage(const HarnessConfig& cfg, cgan::Experiment e, const moo::SolutionArchive& archive,
                             const ExperimentPaths& paths,
                             const std::optional<std::vector<moo::Solution>>& training_override) {
    TrainStageResult out;
    out.training = training_override ? *training_override : filter_training_set(archive, e);
    for (const auto& s : out.training)
        if (!s.feasible()) throw StageError("filter", "training set contains an infeasible solution");
    staged("filter", [&] {
        write_training_set(paths.training_set(), out.training);
        return 0;
    });

    const auto t0 = Clock::now();
    staged("normalize", [&] {
        const auto objs = objectives_of(out.training);
        out.normalization = cgan::NormalizationSpec::fit(objs);
        out.normalization.save(paths.normalization());
        return 0;
    });
    staged("train", [&] {
        std::vector<district::DecisionVector> decisions;
        for (const auto& s : out.training) decisions.push_back(s.decision);
        const auto objs = objectives_of(out.training);
        const auto features = out.normalization.feature_matrix(decisions);
        const auto labels = out.normalization.label_matrix(objs);
        const std::size_t rows = out.training.size();
        out.runs.push_back(train_run(cfg, "short", cfg.short_run_iterations(e), mix_seed(cfg.gan_seed, 1), features,
                                     labels));
        out.runs.push_back(train_run(cfg, "long", cfg.cgan.long_run_iterations(rows), mix_seed(cfg.gan_seed, 2),
                                     features, labels));
        return 0;
    });
    out.seconds = seconds_since(t0);
    staged("train", [&] {
        for (const auto& run : out.runs) persist_run(run, paths.run_dir(run.id));
        return 0;
    });
    return out;
}

std::size_t count_per_label(const HarnessConfig& cfg, cgan::Experiment e, std::size_t labels,
                            std::size_t selected_snapshots) {
    if (labels == 0 || selected_snapshots == 0) return 0;
    const double per = cfg.pool_target(e) / static_cast<double>(labels * selected_snapshots);
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(per)));
}

std::vector<cgan::Candidate> generate_stage(const HarnessConfig& cfg, cgan::Experiment e,
                                            const cgan::NormalizationSpec& norm, std::span<const RunArtifacts> runs,
                                            const ExperimentPaths& paths) {
    return staged("generate", [&] {
        const auto grid = cgan::build_label_grid(e);
        std::size_t selected = 0;
        for (const auto& run : runs) selected += run.selected.size();
        const std::size_t per_label = count_per_label(cfg, e, grid.size(), selected);

        std::vector<cgan::Candidate> pool;
        for (std::size_t r = 0; r < runs.size(); ++r) {
            const auto& run = runs[r];
            std::vector<cgan::Candidate> produced;
            for (auto idx : run.selected) {
                const auto& snap = run.snapshots[idx];
                cgan::GenerationRequest req{run.id, snap.iteration, cfg.cgan.latent_dim, per_label,
                                            mix_seed(mix_seed(cfg.gan_seed, 100 + r), snap.iteration)};
                auto batch = cgan::generate(snap.generator, norm, grid.labels, req);
                produced.insert(produced.end(), batch.begin(), batch.end());
            }
            pool = cgan::combine_runs(pool, produced);
        }
        cgan::write_candidates(paths.candidates(), pool);
        return pool;
    });
}

std::vector<cgan::Candidate> generate_from_disk(const HarnessConfig& cfg, cgan::Experiment e,
                                                const ExperimentPaths& paths) {
    auto [norm, runs] = staged("generate", [&] {
        auto norm = cgan::NormalizationSpec::load(paths.normalization());
        std::vector<RunArtifacts> runs;
        for (const char* id : {"short", "long"}) {
            RunArtifacts run;
            run.id = id;
            const auto dir = paths.run_dir(id);
            const auto index = csv::read(dir / "snapshots.csv");
            const auto it_col = index.column("iteration");
            const auto sel_col = index.column("selected");
            for (const auto& row : index.rows) {
                if (csv::parse_int(row[sel_col]) == 0) continue;
                const auto iteration = static_cast<std::size_t>(csv::parse_int(row[it_col]));
                run.selected.push_back(run.snapshots.size());
                run.snapshots.push_back(cgan::load_snapshot(snapshot_file(dir, iteration)));
            }
            runs.push_back(std::move(run));
        }
        return std::pair{std::move(norm), std::move(runs)};
    });
    return generate_stage(cfg, e, norm, runs, paths);
}

namespace {

std::string reported_columns(cgan::Experiment e) {
    switch (e) {
        case cgan::Experiment::worst_half_ghg: return "ghg;hv";
        case cgan::Experiment::worst_half_lcc: return "lcc;hv";
        case cgan::Experiment::worst_half_walkscore: return "walkscore;hv";
        default: return "ghg;lcc;walkscore;hv";
    }
}

}  // namespace

ReportRow build_report_row(const HarnessConfig& cfg, cgan::Experiment e, std::span<const moo::Solution> training,
                           std::size_t pool_size, const VetResult& vetted) {
    using district::Direction;
    ReportRow row;
    row.experiment = std::string(cgan::experiment_name(e));
    row.n_train = training.size();
    row.n_pool = pool_size;
    row.n_vetted = vetted.admissible.size();
    row.admissible = vetted.ratio();
    row.reported_columns = reported_columns(e);
    row.ga_seed = cfg.ga.rng_seed;
    row.gan_seed = cfg.gan_seed;
    row.config_hash = cfg.hash();

    const auto train_obj = objectives_of(training);
    const auto best_train = metrics::extract_best(train_obj);
    row.train_min_ghg = best_train.min_ghg;
    row.train_min_lcc = best_train.min_lcc;
    row.train_max_walkscore = best_train.max_walkscore;
    const auto anchors = metrics::fit_anchors(train_obj);
    const auto train_scaled = metrics::minmax_scale(train_obj, anchors);
    row.warnings = train_scaled.warnings;
    row.train_hv = metrics::hypervolume(metrics::nondominated(train_scaled.clamped()));

    if (!vetted.admissible.empty()) {
        std::vector<ObjectiveTriple> gen_obj;
        for (const auto& v : vetted.admissible) gen_obj.push_back(v.objectives);
        const auto best_gen = metrics::extract_best(gen_obj);
        row.gen_min_ghg = best_gen.min_ghg;
        row.gen_min_lcc = best_gen.min_lcc;
        row.gen_max_walkscore = best_gen.max_walkscore;
        row.improved_ghg = metrics::improvement_pct(row.train_min_ghg, best_gen.min_ghg, Direction::minimize);
        row.improved_lcc = metrics::improvement_pct(row.train_min_lcc, best_gen.min_lcc, Direction::minimize);
        row.improved_walkscore =
            metrics::improvement_pct(row.train_max_walkscore, best_gen.max_walkscore, Direction::maximize);
        const auto gen_scaled = metrics::minmax_scale(gen_obj, anchors);
        row.gen_hv = metrics::hypervolume(metrics::nondominated(gen_scaled.clamped()));
        row.improved_hv = metrics::improvement_pct(row.train_hv, *row.gen_hv, Direction::maximize);
    }
    return row;
}

namespace {

void write_status(const ExperimentPaths& paths, const std::string& text) {
    fs::create_directories(paths.root);
    std::ofstream out(paths.status(), std::ios::trunc);
    out << text << '\n';
}

}  // namespace

RunReport run_experiment(const HarnessConfig& cfg, cgan::Experiment e, const moo::SolutionArchive& archive,
                         const moo::Evaluator& evaluate, const ExperimentOptions& options) {
    const auto paths = experiment_paths(options.out_dir, e);
    fs::create_directories(paths.root);
    cfg.save(paths.config());
    write_status(paths, "running");
    try {
        RunReport report;
        report.timings.ga_seconds = options.ga_seconds;
        auto trained = train_stage(cfg, e, archive, paths, options.training_override);
        report.timings.train_seconds = trained.seconds;

        const auto t_gen = Clock::now();
        const auto pool = generate_stage(cfg, e, trained.normalization, trained.runs, paths);
        report.timings.generate_seconds = seconds_since(t_gen);

        const auto t_vet = Clock::now();
        report.vetted = staged("vet", [&] {
            auto v = vet_candidates(pool, archive, evaluate);
            write_vetted(paths.vetted(), v.admissible);
            return v;
        });
        report.timings.vet_seconds = seconds_since(t_vet);

        report.row = staged("report", [&] {
            auto row = build_report_row(cfg, e, trained.training, pool.size(), report.vetted);
            for (const auto& w : trained.normalization.warnings()) row.warnings.push_back(w);
            write_report(paths.report(), row);
            write_timings(paths.timings(), report.timings);
            return row;
        });
        report.training = std::move(trained.training);
        report.runs = std::move(trained.runs);
        write_status(paths, "ok");
        return report;
    } catch (const StageError& err) {
        write_status(paths, "failed at " + err.stage() + ": " + err.what());
        throw;
    }
}

// --- persistence ---

namespace {

std::vector<std::string> decision_objective_header() {
    std::vector<std::string> h(district::kFieldNames.begin(), district::kFieldNames.end());
    h.insert(h.end(), {"lcc", "ghg", "walkscore"});
    return h;
}

void write_decision(csv::Writer& w, const district::DecisionVector& d) {
    for (int v : d.to_array()) w.cell(v);
}

void write_objectives(csv::Writer& w, const ObjectiveTriple& o) { w.cell(o.lcc).cell(o.ghg).cell(o.walkscore); }

district::DecisionVector parse_decision(const std::vector<std::string>& row) {
    district::FieldArray f{};
    for (std::size_t i = 0; i < district::kFieldCount; ++i) f[i] = csv::parse_int(row[i]);
    return district::DecisionVector::from_array(f);
}

ObjectiveTriple parse_objectives(const std::vector<std::string>& row, std::size_t offset) {
    return {csv::parse_double(row[offset]), csv::parse_double(row[offset + 1]), csv::parse_double(row[offset + 2])};
}

void expect_header(const csv::Table& t, const std::vector<std::string>& h, const fs::path& path) {
    if (t.header != h) throw std::runtime_error("unexpected header in " + path.string());
}

std::string join(const std::vector<std::string>& parts, char sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        for (char c : parts[i]) out += (c == ',' ? ' ' : c);
    }
    return out;
}

void optional_cell(csv::Writer& w, const std::optional<double>& v) { w.cell(csv::format_optional(v)); }

}  // namespace

void write_training_set(const fs::path& path, std::span<const moo::Solution> training) {
    csv::Writer w(path, decision_objective_header());
    for (const auto& s : training) {
        write_decision(w, s.decision);
        write_objectives(w, *s.objectives);
        w.end_row();
    }
}

std::vector<moo::Solution> read_training_set(const fs::path& path) {
    const auto t = csv::read(path);
    expect_header(t, decision_objective_header(), path);
    std::vector<moo::Solution> out;
    for (const auto& row : t.rows) {
        moo::Solution s;
        s.decision = parse_decision(row);
        s.objectives = parse_objectives(row, district::kFieldCount);
        out.push_back(s);
    }
    return out;
}

namespace {
const std::vector<std::string> kSeriesHeader{"iteration", "discriminator_loss", "generator_loss", "accuracy_real",
                                             "accuracy_fake"};
}

void write_series(const fs::path& path, std::span<const cgan::IterationStats> series) {
    csv::Writer w(path, kSeriesHeader);
    for (const auto& s : series) {
        w.cell(s.iteration).cell(s.discriminator_loss).cell(s.generator_loss).cell(s.accuracy_real).cell(s.accuracy_fake);
        w.end_row();
    }
}

std::vector<cgan::IterationStats> read_series(const fs::path& path) {
    const auto t = csv::read(path);
    expect_header(t, kSeriesHeader, path);
    std::vector<cgan::IterationStats> out;
    for (const auto& r : t.rows)
        out.push_back({static_cast<std::size_t>(csv::parse_int(r[0])), csv::parse_double(r[1]),
                       csv::parse_double(r[2]), csv::parse_double(r[3]), csv::parse_double(r[4])});
    return out;
}

namespace {
std::vector<std::string> vetted_header() {
    auto h = decision_objective_header();
    h.insert(h.end(), {"run", "iteration", "label_lcc", "label_ghg", "label_walkscore"});
    return h;
}
}  // namespace

void write_vetted(const fs::path& path, std::span<const VettedSolution> vetted) {
    csv::Writer w(path, vetted_header());
    for (const auto& v : vetted) {
        write_decision(w, v.decision);
        write_objectives(w, v.objectives);
        w.cell(v.origin.run_id).cell(v.origin.iteration);
        for (double l : v.origin.label) w.cell(l);
        w.end_row();
    }
}

std::vector<VettedSolution> read_vetted(const fs::path& path) {
    const auto t = csv::read(path);
    expect_header(t, vetted_header(), path);
    std::vector<VettedSolution> out;
    const std::size_t base = district::kFieldCount + 3;
    for (const auto& r : t.rows) {
        VettedSolution v;
        v.decision = parse_decision(r);
        v.objectives = parse_objectives(r, district::kFieldCount);
        v.origin.run_id = r[base];
        v.origin.iteration = static_cast<std::size_t>(csv::parse_int(r[base + 1]));
        for (std::size_t i = 0; i < 3; ++i) v.origin.label[i] = csv::parse_double(r[base + 2 + i]);
        v.origin.decision = v.decision.to_array();
        out.push_back(v);
    }
    return out;
}

std::vector<std::string> report_header() {
    return {"experiment",        "n_train",           "n_gen_pool",       "n_gen_admissible", "admissible",
            "min_ghg_train",     "min_ghg_gen",       "min_ghg_improved", "min_lcc_train",    "min_lcc_gen",
            "min_lcc_improved",  "max_walkscore_train", "max_walkscore_gen", "max_walkscore_improved",
            "hv_train",          "hv_gen",            "hv_improved",      "reported_columns",    "ga_seed",
            "gan_seed",          "config_hash",       "warnings"};
}

void write_report(const fs::path& path, const ReportRow& r) {
    csv::Writer w(path, report_header());
    w.cell(r.experiment).cell(r.n_train).cell(r.n_pool).cell(r.n_vetted);
    optional_cell(w, r.admissible);
    w.cell(r.train_min_ghg);
    optional_cell(w, r.gen_min_ghg);
    optional_cell(w, r.improved_ghg);
    w.cell(r.train_min_lcc);
    optional_cell(w, r.gen_min_lcc);
    optional_cell(w, r.improved_lcc);
    w.cell(r.train_max_walkscore);
    optional_cell(w, r.gen_max_walkscore);
    optional_cell(w, r.improved_walkscore);
    w.cell(r.train_hv);
    optional_cell(w, r.gen_hv);
    optional_cell(w, r.improved_hv);
    w.cell(r.reported_columns).cell(std::to_string(r.ga_seed)).cell(std::to_string(r.gan_seed)).cell(r.config_hash);
    w.cell(join(r.warnings, '|'));
    w.end_row();
}

csv::Table read_report(const fs::path& path) {
    auto t = csv::read(path);
    expect_header(t, report_header(), path);
    if (t.rows.size() != 1) throw std::runtime_error("report " + path.string() + " must hold one row");
    return t;
}

namespace {
const std::vector<std::string> kTimingHeader{"ga_seconds",  "train_seconds", "generate_seconds",
                                             "vet_seconds", "gan_seconds",   "runtime_ratio"};
}

void write_timings(const fs::path& path, const Timings& t) {
    csv::Writer w(path, kTimingHeader);
    optional_cell(w, t.ga_seconds);
    w.cell(t.train_seconds).cell(t.generate_seconds).cell(t.vet_seconds).cell(t.gan_seconds());
    optional_cell(w, t.runtime_ratio());
    w.end_row();
}

Timings read_timings(const fs::path& path) {
    const auto t = csv::read(path);
    expect_header(t, kTimingHeader, path);
    if (t.rows.size() != 1) throw std::runtime_error("timings " + path.string() + " must hold one row");
    const auto& r = t.rows[0];
    Timings out;
    if (!r[0].empty()) out.ga_seconds = csv::parse_double(r[0]);
    out.train_seconds = csv::parse_double(r[1]);
    out.generate_seconds = csv::parse_double(r[2]);
    out.vet_seconds = csv::parse_double(r[3]);
    return out;
}

namespace {
fs::path ga_timing_path(const fs::path& archive_path) {
    return archive_path.parent_path() / (archive_path.stem().string() + "_timing.csv");
}
}  // namespace

std::optional<double> read_ga_seconds(const fs::path& archive_path) {
    const auto p = ga_timing_path(archive_path);
    if (!fs::exists(p)) return std::nullopt;
    const auto t = csv::read(p);
    if (t.rows.empty()) return std::nullopt;
    return csv::parse_double(t.rows[0][t.column("ga_seconds")]);
}

void write_ga_seconds(const fs::path& archive_path, double seconds) {
    csv::Writer w(ga_timing_path(archive_path), {"ga_seconds"});
    w.cell(seconds);
    w.end_row();
}

}  // namespace cganopt::harness
