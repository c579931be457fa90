#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "cganopt/csv.hpp"
#include "cganopt/harness/config.hpp"
#include "cganopt/harness/pipeline.hpp"
#include "cganopt/harness/plots.hpp"
#include "cganopt/metrics/indicators.hpp"
#include "test_support.hpp"

using namespace cganopt;
using namespace cganopt::harness;
using cgan::Experiment;
using district::ObjectiveTriple;

namespace fs = std::filesystem;

namespace {

moo::Solution feasible_solution(int chp, ObjectiveTriple o) {
    moo::Solution s;
    s.decision.node_use = {1, 5, 0, 0};
    s.decision.chp_type = chp;
    s.objectives = o;
    return s;
}

moo::SolutionArchive archive_of(const std::vector<moo::Solution>& sols) {
    moo::SolutionArchive a;
    for (const auto& s : sols) a.append(s, 0);
    return a;
}

HarnessConfig tiny_config() {
    auto cfg = HarnessConfig::desk();
    cfg.ga.population_size = 32;
    cfg.ga.generations = 12;
    cfg.ga.rng_seed = 5;
    cfg.short_run_single_objective = 30;
    cfg.short_run_all_objectives = 30;
    cfg.cgan.snapshot_interval = 10;
    cfg.cgan.long_run_epochs = 2;
    cfg.pool_scale = 20.0;
    return cfg;
}

cgan::Candidate candidate_for(const district::DecisionVector& d) {
    cgan::Candidate c;
    c.run_id = "short";
    c.decision = d.to_array();
    return c;
}

std::vector<fs::path> csv_files(const fs::path& root) {
    std::vector<fs::path> out;
    for (const auto& e : fs::recursive_directory_iterator(root))
        if (e.is_regular_file() && e.path().extension() == ".csv" && e.path().filename() != "timings.csv")
            out.push_back(fs::relative(e.path(), root));
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("median convention") {
    CHECK(median({3.0, 1.0, 2.0}) == 2.0);
    CHECK(median({4.0, 1.0, 3.0, 2.0}) == 2.5);
    CHECK(median({7.0}) == 7.0);
    CHECK_THROWS(median({}));
}

TEST_CASE("filter: four distinct GHG values keep the two at or above the median") {
    std::vector<moo::Solution> sols{feasible_solution(1, {10, 1.0, 5}), feasible_solution(2, {20, 2.0, 5}),
                                    feasible_solution(3, {30, 3.0, 5}), feasible_solution(4, {40, 4.0, 5})};
    const auto kept = filter_training_set(archive_of(sols), Experiment::worst_half_ghg);
    REQUIRE(kept.size() == 2);
    CHECK(kept[0].objectives->ghg == 3.0);
    CHECK(kept[1].objectives->ghg == 4.0);
}

TEST_CASE("filter: FullData keeps every feasible solution; infeasible entries are ignored") {
    const auto& archive = testsupport::small_archive(32, 12, 5);
    const auto all = filter_training_set(archive, Experiment::full_data);
    CHECK(all.size() == archive.feasible_solutions().size());
    for (const auto& s : all) CHECK(s.feasible());
}

TEST_CASE("filter: WorstHalfAll and BestHalfAll never overlap") {
    const auto& archive = testsupport::small_archive(32, 12, 5);
    const auto med = objective_medians(archive.feasible_solutions());
    for (const auto& s : archive.feasible_solutions())
        CHECK_FALSE((in_training_set(Experiment::worst_half_all, *s.objectives, med) &&
                     in_training_set(Experiment::best_half_all, *s.objectives, med)));
    // Boundary points belong to the worst half only.
    const ObjectiveTriple at{med.lcc, med.ghg, med.walkscore};
    CHECK(in_training_set(Experiment::worst_half_all, at, med));
    CHECK_FALSE(in_training_set(Experiment::best_half_all, at, med));
}

TEST_CASE("filter errors") {
    CHECK_THROWS_AS(filter_training_set(archive_of({feasible_solution(1, {1, 1, 1})}), Experiment::full_data),
                    StageError);
    // Perfectly anti-correlated objectives leave BestHalfAll empty.
    std::vector<moo::Solution> sols{feasible_solution(1, {10, 4.0, 0}), feasible_solution(2, {20, 3.0, 5}),
                                    feasible_solution(3, {30, 2.0, 10}), feasible_solution(4, {40, 1.0, 15})};
    try {
        filter_training_set(archive_of(sols), Experiment::best_half_all);
        FAIL("expected an error");
    } catch (const StageError& e) {
        CHECK(e.stage() == "filter");
        CHECK(std::string(e.what()).find("FullData") != std::string::npos);
    }
}

TEST_CASE("vetting examples") {
    const auto& archive = testsupport::small_archive(32, 12, 5);
    const auto eval = testsupport::evaluator();

    std::vector<cgan::Candidate> copies;
    std::set<district::DecisionVector> seen;
    for (const auto& s : archive.feasible_solutions())
        if (seen.insert(s.decision).second && copies.size() < 10) copies.push_back(candidate_for(s.decision));
    REQUIRE(copies.size() == 10);
    const auto none = vet_candidates(copies, archive, eval);
    CHECK(none.admissible.empty());
    REQUIRE(none.ratio());
    CHECK(*none.ratio() == 0.0);
    CHECK(none.archive_duplicates == 10);

    Rng rng(31);
    district::DecisionVector novel;
    const auto decisions = archive.decisions();
    do novel = testsupport::random_feasible(rng);
    while (district::is_duplicate(novel, decisions));
    auto bad = novel;
    bad.hot_water_temp = 120;
    const auto half = vet_candidates(std::vector{candidate_for(novel), candidate_for(bad)}, archive, eval);
    REQUIRE(half.ratio());
    CHECK(*half.ratio() == 0.5);
    CHECK(half.invalid == 1);
    REQUIRE(half.admissible.size() == 1);
    CHECK(half.admissible[0].objectives == *testsupport::model().evaluate(novel));

    const auto dup = vet_candidates(std::vector{candidate_for(novel), candidate_for(novel)}, archive, eval);
    CHECK(dup.admissible.size() == 1);
    CHECK(dup.pool_duplicates == 1);

    const auto empty = vet_candidates(std::vector<cgan::Candidate>{}, archive, eval);
    CHECK_FALSE(empty.ratio());
}

TEST_CASE("runtime ratio") {
    Timings t;
    t.ga_seconds = 2096 * 60.0;
    t.train_seconds = 59 * 60.0;
    REQUIRE(t.runtime_ratio());
    CHECK(*t.runtime_ratio() == doctest::Approx(0.028).epsilon(0.01));

    Timings zero;
    zero.ga_seconds = 10.0;
    CHECK(*zero.runtime_ratio() == doctest::Approx(0.0));
    CHECK_FALSE(Timings{}.runtime_ratio());

    const auto dir = testsupport::scratch_dir("timings");
    write_timings(dir / "t.csv", t);
    const auto back = read_timings(dir / "t.csv");
    CHECK(*back.runtime_ratio() == *t.runtime_ratio());
    const auto table = csv::read(dir / "t.csv");
    CHECK(csv::parse_double(table.rows[0][table.column("runtime_ratio")]) == *t.runtime_ratio());

    write_ga_seconds(dir / "archive.csv", 12.5);
    CHECK(read_ga_seconds(dir / "archive.csv") == 12.5);
    CHECK_FALSE(read_ga_seconds(dir / "other.csv"));
}

TEST_CASE("running average") {
    const std::vector<double> flat(25, 0.7);
    const auto avg = running_average(flat);
    for (double v : avg) CHECK(v == doctest::Approx(0.7));

    const std::vector<double> ramp{1, 2, 3, 4};
    CHECK(running_average(ramp) == std::vector<double>{1.0, 1.5, 2.0, 2.5});

    std::vector<double> long_ramp(15);
    for (std::size_t i = 0; i < 15; ++i) long_ramp[i] = static_cast<double>(i);
    const auto la = running_average(long_ramp);
    CHECK(la[9] == doctest::Approx(4.5));
    CHECK(la[14] == doctest::Approx(9.5));
}

TEST_CASE("plot files: scatter row counts equal set sizes") {
    PlotInputs in;
    in.runs.push_back({"short", {{1, 0.7, 0.8, 0.5, 0.4}, {2, 0.6, 0.9, 0.6, 0.5}}});
    in.train = {{100, 1, 0}, {20000, 2, 5}, {300, 3, 10}};
    in.generated = {{50, 0.5, 10}, {40, 0.4, 5}};
    const auto dir = testsupport::scratch_dir("plots");
    const auto files = emit_plots(in, dir, true);
    CHECK_FALSE(files.empty());
    CHECK(csv::read(dir / "ghg_vs_lcc_train.csv").rows.size() == 3);
    CHECK(csv::read(dir / "ghg_vs_lcc_train_lcc_le_10k.csv").rows.size() == 2);
    CHECK(csv::read(dir / "walkscore_vs_lcc_gen.csv").rows.size() == 2);
    CHECK(csv::read(dir / "series_short.csv").rows.size() == 2);
    CHECK(fs::exists(dir / "loss_short.svg"));
}

TEST_CASE("config JSON round trip and hashing") {
    auto cfg = HarnessConfig::desk();
    cfg.set_seed(42);
    cfg.cgan.generator_widths = {32, 16};
    const auto back = HarnessConfig::from_json(cfg.to_json(), HarnessConfig::paper());
    CHECK(back.to_json() == cfg.to_json());
    CHECK(back.hash() == cfg.hash());
    CHECK(back.ga.rng_seed == 42);
    CHECK(back.gan_seed == 42);

    auto other = cfg;
    other.pool_scale = 3.0;
    CHECK(other.hash() != cfg.hash());

    const auto partial = HarnessConfig::from_json(nlohmann::json::parse(R"({"ga": {"generations": 3}})"),
                                                  HarnessConfig::desk());
    CHECK(partial.ga.generations == 3);
    CHECK(partial.ga.population_size == 64);
    CHECK_THROWS(HarnessConfig::from_json(nlohmann::json::parse(R"({"pool_scale": 0})"), HarnessConfig::desk()));

    const auto dir = testsupport::scratch_dir("config");
    cfg.save(dir / "c.json");
    CHECK(HarnessConfig::load(dir / "c.json", HarnessConfig::desk()).hash() == cfg.hash());
}

TEST_CASE("scale presets") {
    const auto desk = HarnessConfig::desk();
    CHECK(desk.ga.population_size == 64);
    CHECK(desk.ga.generations == 64);
    CHECK(desk.short_run_iterations(Experiment::worst_half_ghg) == 300);
    CHECK(desk.pool_target(Experiment::best_half_all) == doctest::Approx(500.0));
    const auto paper = HarnessConfig::paper();
    CHECK(paper.ga.population_size == 128);
    CHECK(paper.ga.generations == 512);
    CHECK(paper.short_run_iterations(Experiment::worst_half_ghg) == 800);
    CHECK(paper.short_run_iterations(Experiment::full_data) == 2000);
    CHECK(paper.cgan.long_run_epochs == 155.0);
    CHECK(count_per_label(paper, Experiment::worst_half_ghg, 125, 7) == 1);
    CHECK(count_per_label(desk, Experiment::full_data, 320, 0) == 0);
}

TEST_CASE("end to end: artifacts, internal consistency, no label leakage, determinism") {
    const auto cfg = tiny_config();
    const auto& archive = testsupport::small_archive(32, 12, 5);
    const auto eval = testsupport::evaluator();
    const auto dir_a = testsupport::scratch_dir("e2e_a");
    const auto dir_b = testsupport::scratch_dir("e2e_b");

    const auto report = run_experiment(cfg, Experiment::full_data, archive, eval, {dir_a, std::nullopt, 1.0});
    run_experiment(cfg, Experiment::full_data, archive, eval, {dir_b, std::nullopt, 1.0});
    const auto paths = experiment_paths(dir_a, Experiment::full_data);

    CHECK(testsupport::slurp(paths.status()) == "ok\n");
    for (const auto& p : {paths.training_set(), paths.normalization(), paths.config(), paths.candidates(),
                          paths.vetted(), paths.report(), paths.timings()})
        CHECK(fs::exists(p));

    // Determinism of every CSV except wall-clock timings.
    const auto files = csv_files(dir_a / "FullData");
    CHECK(files == csv_files(dir_b / "FullData"));
    for (const auto& f : files)
        CHECK_MESSAGE(testsupport::slurp(dir_a / "FullData" / f) == testsupport::slurp(dir_b / "FullData" / f),
                      f.string());

    // Vetted objectives come from the evaluator.
    const auto vetted = read_vetted(paths.vetted());
    CHECK(vetted.size() == report.row.n_vetted);
    for (const auto& v : vetted) CHECK(v.objectives == *testsupport::model().evaluate(v.decision));

    // Report is recomputable from persisted artifacts.
    const auto training = read_training_set(paths.training_set());
    CHECK(training.size() == report.row.n_train);
    const auto pool = cgan::read_candidates(paths.candidates());
    VetResult recomputed = vet_candidates(pool, archive, eval);
    const auto row = build_report_row(cfg, Experiment::full_data, training, pool.size(), recomputed);
    CHECK(row.train_hv == report.row.train_hv);
    CHECK(row.gen_hv == report.row.gen_hv);
    CHECK(row.admissible == report.row.admissible);

    // Improved cells follow the formula applied to the row's own cells.
    const auto t = read_report(paths.report());
    const auto& r = t.rows[0];
    auto cell = [&](const char* name) { return csv::parse_double(r[t.column(name)]); };
    using district::Direction;
    if (report.row.gen_min_lcc) {
        CHECK(cell("min_lcc_improved") ==
              metrics::improvement_pct(cell("min_lcc_train"), cell("min_lcc_gen"), Direction::minimize));
        CHECK(cell("min_ghg_improved") ==
              metrics::improvement_pct(cell("min_ghg_train"), cell("min_ghg_gen"), Direction::minimize));
        CHECK(cell("max_walkscore_improved") == metrics::improvement_pct(cell("max_walkscore_train"),
                                                                         cell("max_walkscore_gen"),
                                                                         Direction::maximize));
        CHECK(cell("hv_improved") == metrics::improvement_pct(cell("hv_train"), cell("hv_gen"), Direction::maximize));
    }
    CHECK(r[t.column("config_hash")] == cfg.hash());

    // Regenerating from disk reproduces the pool.
    const auto again = generate_from_disk(cfg, Experiment::full_data, paths);
    REQUIRE(again.size() == pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i) CHECK(again[i].raw == pool[i].raw);
}

TEST_CASE("all-zero WalkScore training set: zero train max and degeneracy warnings") {
    auto cfg = tiny_config();
    const auto& archive = testsupport::small_archive(32, 12, 5);
    std::vector<moo::Solution> zero;
    for (const auto& s : archive.feasible_solutions())
        if (s.objectives->walkscore == 0.0) zero.push_back(s);
    REQUIRE(zero.size() >= 2);
    const auto dir = testsupport::scratch_dir("ws0");
    const auto report =
        run_experiment(cfg, Experiment::worst_half_walkscore, archive, testsupport::evaluator(), {dir, zero, {}});
    CHECK(report.row.train_max_walkscore == 0.0);
    CHECK_FALSE(report.row.warnings.empty());
    const auto t = read_report(experiment_paths(dir, Experiment::worst_half_walkscore).report());
    CHECK(t.rows[0][t.column("warnings")].find("walkscore") != std::string::npos);
}

TEST_CASE("a failing stage leaves a status naming it") {
    auto cfg = tiny_config();
    const auto dir = testsupport::scratch_dir("fail");
    const auto archive = archive_of({feasible_solution(1, {1, 1, 1})});
    CHECK_THROWS_AS(run_experiment(cfg, Experiment::full_data, archive, testsupport::evaluator(), {dir, {}, {}}),
                    StageError);
    const auto status = testsupport::slurp(experiment_paths(dir, Experiment::full_data).status());
    CHECK(status.rfind("failed at filter", 0) == 0);
}

TEST_CASE("training set and series files round-trip") {
    const auto& archive = testsupport::small_archive(32, 12, 5);
    const auto sols = archive.feasible_solutions();
    const auto dir = testsupport::scratch_dir("rt");
    write_training_set(dir / "t.csv", sols);
    const auto back = read_training_set(dir / "t.csv");
    REQUIRE(back.size() == sols.size());
    for (std::size_t i = 0; i < sols.size(); ++i) {
        CHECK(back[i].decision == sols[i].decision);
        CHECK(back[i].objectives == sols[i].objectives);
    }
    std::vector<cgan::IterationStats> series{{1, 0.5, 0.7, 0.25, 0.75}, {2, 0.4, 0.8, 0.5, 0.5}};
    write_series(dir / "s.csv", series);
    const auto s = read_series(dir / "s.csv");
    REQUIRE(s.size() == 2);
    CHECK(s[1].generator_loss == 0.8);
    CHECK(s[0].accuracy_fake == 0.75);
}

}
