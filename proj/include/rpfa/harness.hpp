#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rpfa/evaluation.hpp"
#include "rpfa/simulators.hpp"

namespace rpfa {

enum class Metric { aic, cv_pe, cv_zero_one };
const char* metric_name(Metric m);
Metric parse_metric(const std::string& name);

/// Decay grid for one model family. Families with two decayed terms sweep
/// the cross product unless equal_decays ties the two grids.
struct SweepGrid {
    std::string family = "r-pfa";  // r-pfa | pfa | s-only | r-only | r-afm
    std::vector<double> success_grid;  // d for S or R; defaults to 0.1..1.0
    std::vector<double> failure_grid;  // d for F; ignored for families without F
    bool equal_decays = false;
    int ghost_count = 3;

    static std::vector<double> default_grid();  // {0.1, 0.2, ..., 1.0}
    void validate() const;
};

struct Provenance {
    std::uint64_t seed = 0;
    std::string version;
    double wall_seconds = 0;
};

struct SweepCell {
    double success_decay = 0;
    double failure_decay = 0;
    double value = 0;
    bool ok = false;
    bool converged = false;
    std::string error;  // set when ok == false
};

struct SweepReport {
    SweepGrid grid;
    Metric metric = Metric::aic;
    int k_folds = 5;
    std::vector<SweepCell> cells;
    int best_index = -1;  // argmin over ok cells; -1 if none
    Provenance provenance;

    const SweepCell& best() const;
};

/// Featurize + fit + score every grid cell. CV metrics share one fold
/// assignment seeded from `seed`. A cell whose fit fails is flagged and the
/// sweep continues.
SweepReport sweep_decay(const Dataset& dataset, const SweepGrid& grid, Metric metric,
                        std::uint64_t seed, const FitOptions& options = {});

/// Full simulation-study configuration. Defaults are the reduced scale
/// (N=1000, K=30, 20 replications); paper_scale() restores N=3500, K=50,
/// 100 replications.
struct StudyConfig {
    Generator generator = Generator::bkt2;
    int replications = 20;
    int k_folds = 5;
    PopulationConfig population;  // seed ignored; replication seeds derive from `seed`
    std::vector<ModelSpec> roster;
    std::uint64_t seed = 0;
    double fs_p_student = 0.08;
    double fs_p_correct = 0.2;

    static StudyConfig reduced_scale();
    static StudyConfig paper_scale();
    /// AFM; PFA (d=1); R-PFA at d_R in {0.2,0.4,0.6,0.8,1.0} with d_F = 0.1.
    static std::vector<ModelSpec> default_roster();

    void validate() const;
};

struct ReplicationOutcome {
    bool ok = false;
    std::string error;
    std::vector<double> aic;    // per roster model
    std::vector<double> cv_pe;
    std::vector<double> cv_01;
    std::vector<int> rank_aic;
    std::vector<int> rank_cv_pe;
    std::vector<int> rank_cv_01;
    std::int64_t n_attempts = 0;
    std::int64_t n_fallback = 0;
};

struct StudyReport {
    StudyConfig config;
    std::vector<std::string> model_names;
    std::vector<ReplicationOutcome> replications;
    std::map<std::string, RankingSummary> rankings;  // keyed by metric_name
    Provenance provenance;
};

/// Generate `replications` datasets (sub-stream seeded), fit the roster on
/// each, score AIC and both CV losses, and aggregate rank frequencies.
/// Per-replication failures are isolated; the study always completes.
StudyReport replicate_study(const StudyConfig& config);

/// Mean over replications of the Spearman correlation between two measures'
/// rankings.
double mean_spearman(const StudyReport& report, Metric a, Metric b);

/// Variance (population) of one model's rank across replications.
double rank_variance(const StudyReport& report, Metric metric, const std::string& model);

/// Proportion of replications in which `model` achieved exactly `rank`.
double rank_proportion(const StudyReport& report, Metric metric, const std::string& model,
                       int rank);

/// Fit both specs on the full dataset and compare predictions binned by
/// model A's R.
RBinReport compare_predictions(const Dataset& dataset, const ModelSpec& spec_a,
                               const ModelSpec& spec_b, const FitOptions& options = {});

const std::vector<int>& study_ranks(const ReplicationOutcome& rep, Metric metric);

}  // namespace rpfa
