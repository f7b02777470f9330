#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "rpfa/features.hpp"

namespace rpfa {

/// Prior-practice terms a model may carry per KC.
enum class Term { T, S, F, R };

const char* term_name(Term term);
Term parse_term(const std::string& name);

/// Which terms a model includes and under what feature configuration.
/// Named families fix the term set: AFM={T}, PFA={S,F}, S-only={S},
/// R-only={R}, R-AFM={T,R}, R-PFA={F,R}; the name "custom" allows any set.
struct ModelSpec {
    std::string name = "custom";
    bool include_student_intercept = false;  // off for the simulation-study protocol
    bool include_kc_intercept = true;
    std::vector<Term> slope_terms;  // kept in canonical order T,S,F,R
    FeatureConfig feature_config;

    static ModelSpec afm();
    static ModelSpec pfa(double decay = 1.0);
    static ModelSpec pfa(double decay_s, double decay_f);
    static ModelSpec s_only(double decay);
    static ModelSpec r_only(double decay_r, int ghost_count = 3);
    static ModelSpec r_afm(double decay_r, int ghost_count = 3);
    static ModelSpec r_pfa(double decay_r, double decay_f, int ghost_count = 3);
    static ModelSpec custom(std::vector<Term> terms, FeatureConfig config);

    void validate() const;  // term-set/name consistency, decay ranges
};

/// Sparse design matrix over feature rows. Column blocks, in order:
/// optional per-student intercepts, per-KC intercepts, then one per-KC block
/// per slope term. Every row stores the same number of entries (one per
/// block it touches), kept in a flat array with fixed stride.
struct DesignMatrix {
    ModelSpec spec;
    std::vector<std::string> students;  // enumeration order (empty unless intercepts on)
    std::vector<std::string> kcs;       // enumeration order
    std::int64_t n_rows = 0;
    int n_cols = 0;
    int row_stride = 0;
    std::vector<std::int32_t> entry_col;  // n_rows * row_stride
    std::vector<double> entry_val;
    std::vector<std::uint8_t> outcomes;
    std::vector<std::string> column_labels;  // "student:<id>", "kc:<id>", "T:<id>", ...

    double row_dot(std::int64_t row, std::span<const double> beta) const;
};

/// Build the design for `spec` from feature rows computed under the same
/// configuration (ConfigError otherwise). Student/KC enumerations are the
/// sorted distinct ids appearing in the rows.
DesignMatrix build_design(const FeatureTable& features, const ModelSpec& spec);

/// A reference to what a design column encodes; round-trips with the label.
struct ColumnRef {
    enum class Kind { student_intercept, kc_intercept, slope };
    Kind kind;
    Term term = Term::T;  // meaningful for slopes only
    std::string id;
};

std::string column_label(const ColumnRef& ref);
ColumnRef parse_column_label(const std::string& label);

/// Fitted logistic model: coefficients aligned to the design's columns plus
/// convergence metadata. Scoring works row-by-row; a student or KC the model
/// has never seen contributes zero to the linear predictor and is flagged,
/// unless the strict variant is used.
struct FittedModel {
    ModelSpec spec;
    std::vector<std::string> column_labels;
    std::vector<double> coefficients;      // dropped columns carry 0
    std::vector<std::uint8_t> estimated;   // 0 for dropped columns
    double log_likelihood = 0;
    int n_params = 0;
    bool converged = false;
    int iterations = 0;

    double linear_predictor(const FeatureRow& row, bool* used_fallback = nullptr) const;
    /// Probability in the open interval (0, 1); overflow-safe.
    double predict(const FeatureRow& row, bool* used_fallback = nullptr) const;
    /// As predict, but unknown student/KC throws UnknownEntityError.
    double predict_strict(const FeatureRow& row) const;

    bool knows_kc(const std::string& kc_id) const { return kc_pos_.count(kc_id) > 0; }
    bool knows_student(const std::string& student_id) const {
        return student_pos_.count(student_id) > 0;
    }

    /// Rebuild the id -> column lookups from spec + labels; called by the
    /// estimator after filling coefficients.
    void finalize_layout(const DesignMatrix& design);

    int n_students_cols_ = 0;
    int n_kc_ = 0;
    std::unordered_map<std::string, int> student_pos_;
    std::unordered_map<std::string, int> kc_pos_;
};

/// Numerically stable logistic, clamped to the open interval (0, 1).
double stable_logistic(double z);

double term_value(const FeatureRow& row, Term term);

}  // namespace rpfa
