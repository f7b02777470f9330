#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "rpfa/dataset.hpp"
#include "rpfa/estimator.hpp"

namespace rpfa {

/// 0 iff |p_hat - y| < 0.5 (strict), else 1; p_hat = 0.5 always loses.
double zero_one_loss(double p_hat, int y);

/// |p_hat - y|.
double pe_loss(double p_hat, int y);

enum class LossKind { zero_one, prediction_error };
const char* loss_name(LossKind kind);

/// Student-stratified fold assignment: a seeded uniform shuffle of the
/// student list split into k nearly equal groups (sizes differ by <= 1).
struct FoldAssignment {
    int k = 0;
    std::uint64_t seed = 0;
    std::map<std::string, int> fold_of_student;

    int fold(const std::string& student_id) const;
};

FoldAssignment make_folds(const Dataset& dataset, int k, std::uint64_t seed);

struct CVResult {
    std::string model_name;
    LossKind loss = LossKind::prediction_error;
    std::vector<double> fold_means;  // per-fold mean loss over that fold's attempts
    double overall_mean = 0;         // attempt-weighted mean over all held-out attempts
    std::int64_t n_scored = 0;
    std::int64_t n_fallback = 0;     // predictions for students/KCs unseen in training
};

/// For each fold: fit `spec` on the other folds' attempts, score the held-out
/// attempts with each requested loss. The spec must not include student
/// intercepts (held-out students are new). A training fold missing a KC is
/// recorded via n_fallback, never an error.
std::vector<CVResult> cross_validate(const Dataset& dataset, const ModelSpec& spec,
                                     const FoldAssignment& folds,
                                     const std::vector<LossKind>& losses,
                                     const FitOptions& options = {});

enum class Direction { lower_is_better, higher_is_better };

struct ScoreEntry {
    std::string name;
    double score = 0;
    int n_params = 0;
};

struct RankEntry {
    std::string name;
    double score = 0;
    int rank = 0;  // 1..m, each exactly once
    bool nan_flagged = false;
};

/// Ranks 1..m. Ties break toward fewer parameters, then lexicographic name;
/// NaN scores rank last and are flagged.
std::vector<RankEntry> rank_models(std::vector<ScoreEntry> scores, Direction direction);

/// Rank-frequency table over replications: proportions[model][rank-1].
struct RankingSummary {
    std::string measure;
    std::vector<std::string> models;
    std::vector<std::vector<double>> proportions;
    int n_replications = 0;

    double proportion(const std::string& model, int rank) const;
    void validate() const;  // rows and rank columns each sum to 1
};

RankingSummary summarize_rankings(const std::string& measure,
                                  const std::vector<std::string>& models,
                                  const std::vector<std::vector<int>>& ranks_per_replication);

/// Spearman rank correlation between two rankings of the same models
/// (no ties by construction).
double spearman_rank_correlation(std::span<const int> ranks_a, std::span<const int> ranks_b);

/// R-bin index for the prediction-comparison report: [0,0.3] -> 0,
/// (0.3,0.5] -> 1, (0.5,0.7] -> 2, (0.7,1] -> 3.
int r_bin(double r);

inline constexpr int kNumRBins = 4;

/// One (R bin, actual outcome) cell of the comparison. "Correct" means the
/// prediction is within 0.5 of the outcome (strict), i.e. 0-1 loss 0.
struct RBinCell {
    int bin = 0;
    int actual = 0;
    std::int64_t n = 0;
    std::int64_t a_tp = 0, a_fp = 0, a_tn = 0, a_fn = 0;
    std::int64_t b_tp = 0, b_fp = 0, b_tn = 0, b_fn = 0;
    std::int64_t a_win = 0;        // A correct, B wrong
    std::int64_t a_loss = 0;       // A wrong, B correct
    std::int64_t both_correct = 0;
    std::int64_t both_wrong = 0;
    std::int64_t early = 0;        // attempts with t <= 2
};

struct RBinReport {
    std::string model_a;
    std::string model_b;
    std::array<RBinCell, 2 * kNumRBins> cells;  // index = bin * 2 + actual
    std::int64_t n_rows = 0;

    const RBinCell& cell(int bin, int actual) const { return cells[bin * 2 + actual]; }
    RBinCell& cell(int bin, int actual) { return cells[bin * 2 + actual]; }
};

/// Classify each model's prediction per attempt and tally win/loss cells.
/// rows_a and rows_b must featurize the same dataset (same order); binning
/// uses R from rows_a, i.e. model A's decay.
RBinReport prediction_comparison(const FittedModel& model_a, const FittedModel& model_b,
                                 const FeatureTable& rows_a, const FeatureTable& rows_b);

}  // namespace rpfa
