#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cganopt/cgan/generation.hpp"
#include "cganopt/csv.hpp"
#include "cganopt/district/reference_model.hpp"
#include "cganopt/harness/config.hpp"
#include "cganopt/metrics/indicators.hpp"
#include "cganopt/moo/solution.hpp"

namespace cganopt::harness {

// Failure of one pipeline stage; the CLI prints the stage and exits nonzero.
class StageError : public std::runtime_error {
public:
    StageError(std::string stage, const std::string& message)
        : std::runtime_error(stage + ": " + message), stage_(std::move(stage)) {}
    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

// numpy-style median: the mean of the two middle values for even counts.
double median(std::vector<double> values);

struct ObjectiveMedians {
    double lcc;
    double ghg;
    double walkscore;
};
ObjectiveMedians objective_medians(std::span<const moo::Solution> feasible);

// Filter predicate for one solution. WorstHalf* use inclusive comparisons
// against the medians, BestHalfAll the strict complement of all three.
bool in_training_set(cgan::Experiment e, const district::ObjectiveTriple& o, const ObjectiveMedians& med);

// Feasible archive members selected by the experiment, in archive order.
// Throws StageError("filter") when fewer than two are feasible or the subset is empty.
std::vector<moo::Solution> filter_training_set(const moo::SolutionArchive& archive, cgan::Experiment e);

struct VettedSolution {
    district::DecisionVector decision;
    district::ObjectiveTriple objectives;  // from the evaluator, never the label
    cgan::Candidate origin;
};

struct VetResult {
    std::vector<VettedSolution> admissible;
    std::size_t pool_size = 0;
    std::size_t invalid = 0;             // fails validation or evaluation
    std::size_t archive_duplicates = 0;  // already in the archive
    std::size_t pool_duplicates = 0;     // repeats an earlier candidate
    // kept / pool; nullopt for an empty pool.
    std::optional<double> ratio() const;
};

VetResult vet_candidates(std::span<const cgan::Candidate> pool, const moo::SolutionArchive& archive,
                         const moo::Evaluator& evaluate);

// Outputs of one training run, as persisted under runs/<id>/.
struct RunArtifacts {
    std::string id;  // "short" or "long"
    std::size_t iterations = 0;
    std::vector<cgan::IterationStats> series;
    std::vector<cgan::TrainingSnapshot> snapshots;
    std::vector<std::size_t> selected;  // indices into snapshots
};

// One Table-2-shaped row. Optional cells are empty when the generated set is.
struct ReportRow {
    std::string experiment;
    std::size_t n_train = 0;
    std::size_t n_pool = 0;     // pre-vetting candidates
    std::size_t n_vetted = 0;   // admissible candidates
    std::optional<double> admissible;
    double train_min_ghg = 0, train_min_lcc = 0, train_max_walkscore = 0;
    std::optional<double> gen_min_ghg, gen_min_lcc, gen_max_walkscore;
    std::optional<double> improved_ghg, improved_lcc, improved_walkscore;
    double train_hv = 0;
    std::optional<double> gen_hv, improved_hv;
    std::string reported_columns;  // column groups reported for this experiment
    std::uint64_t ga_seed = 0;
    std::uint64_t gan_seed = 0;
    std::string config_hash;
    std::vector<std::string> warnings;
};

struct Timings {
    std::optional<double> ga_seconds;
    double train_seconds = 0.0;
    double generate_seconds = 0.0;
    double vet_seconds = 0.0;

    double gan_seconds() const { return train_seconds + generate_seconds; }
    // GAN train+generate over GA wall-clock; nullopt without a GA timing.
    std::optional<double> runtime_ratio() const;
};

struct RunReport {
    ReportRow row;
    Timings timings;
    std::vector<RunArtifacts> runs;
    std::vector<moo::Solution> training;
    VetResult vetted;
};

std::optional<double> report_runtime_ratio(const RunReport& report);

struct ExperimentOptions {
    std::filesystem::path out_dir;  // artifacts go to out_dir/<experiment name>
    // Replaces the median filter when set (e.g. a WalkScore-free subset).
    std::optional<std::vector<moo::Solution>> training_override;
    std::optional<double> ga_seconds;
};

struct ExperimentPaths {
    std::filesystem::path root;
    std::filesystem::path training_set() const { return root / "training_set.csv"; }
    std::filesystem::path normalization() const { return root / "normalization.json"; }
    std::filesystem::path config() const { return root / "config.json"; }
    std::filesystem::path run_dir(const std::string& id) const { return root / "runs" / id; }
    std::filesystem::path candidates() const { return root / "candidates.csv"; }
    std::filesystem::path vetted() const { return root / "vetted.csv"; }
    std::filesystem::path report() const { return root / "report.csv"; }
    std::filesystem::path timings() const { return root / "timings.csv"; }
    std::filesystem::path status() const { return root / "status.txt"; }
    std::filesystem::path plots() const { return root / "plots"; }
};
ExperimentPaths experiment_paths(const std::filesystem::path& out_dir, cgan::Experiment e);

// --- stages, each persisting its outputs ---

struct TrainStageResult {
    std::vector<moo::Solution> training;
    cgan::NormalizationSpec normalization;
    std::vector<RunArtifacts> runs;
    double seconds = 0.0;
};

TrainStageResult train_stage(const HarnessConfig& cfg, cgan::Experiment e, const moo::SolutionArchive& archive,
                             const ExperimentPaths& paths,
                             const std::optional<std::vector<moo::Solution>>& training_override = std::nullopt);

// Candidates per label for every selected snapshot.
std::size_t count_per_label(const HarnessConfig& cfg, cgan::Experiment e, std::size_t labels,
                            std::size_t selected_snapshots);

// Generates from the selected snapshots of both runs and writes candidates.csv.
std::vector<cgan::Candidate> generate_stage(const HarnessConfig& cfg, cgan::Experiment e,
                                            const cgan::NormalizationSpec& norm, std::span<const RunArtifacts> runs,
                                            const ExperimentPaths& paths);

// Reloads normalization and selected snapshots written by train_stage.
std::vector<cgan::Candidate> generate_from_disk(const HarnessConfig& cfg, cgan::Experiment e,
                                                const ExperimentPaths& paths);

ReportRow build_report_row(const HarnessConfig& cfg, cgan::Experiment e, std::span<const moo::Solution> training,
                           std::size_t pool_size, const VetResult& vetted);

// Full pipeline: filter, normalize, short and long runs, snapshot selection,
// generation, combination, vetting and metrics. On failure the artifacts
// written so far stay, status.txt names the stage and StageError is thrown.
RunReport run_experiment(const HarnessConfig& cfg, cgan::Experiment e, const moo::SolutionArchive& archive,
                         const moo::Evaluator& evaluate, const ExperimentOptions& options);

// --- persistence ---

void write_training_set(const std::filesystem::path& path, std::span<const moo::Solution> training);
std::vector<moo::Solution> read_training_set(const std::filesystem::path& path);
void write_series(const std::filesystem::path& path, std::span<const cgan::IterationStats> series);
std::vector<cgan::IterationStats> read_series(const std::filesystem::path& path);
void write_vetted(const std::filesystem::path& path, std::span<const VettedSolution> vetted);
std::vector<VettedSolution> read_vetted(const std::filesystem::path& path);
std::vector<std::string> report_header();
void write_report(const std::filesystem::path& path, const ReportRow& row);
// Returns header and the single data row as text cells.
csv::Table read_report(const std::filesystem::path& path);
void write_timings(const std::filesystem::path& path, const Timings& t);
Timings read_timings(const std::filesystem::path& path);

// Seconds recorded by the optimize command next to the archive, if any.
std::optional<double> read_ga_seconds(const std::filesystem::path& archive_path);
void write_ga_seconds(const std::filesystem::path& archive_path, double seconds);

}  // namespace cganopt::harness
