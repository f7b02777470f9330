#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "rpfa/dataset.hpp"

namespace rpfa {

/// Sign convention for the decayed failure count F. The printed recurrence
/// sums d^(t-1-p) * (X - 1), which is non-positive; the default negates it so
/// F counts failures. The slope absorbs the sign either way.
enum class FailureSign { nonneg_count, paper_literal };

struct FeatureConfig {
    double decay_s = 1.0;  // d for S
    double decay_f = 1.0;  // d for F
    double decay_r = 1.0;  // d for R
    int ghost_count = 3;   // stipulated incorrect attempts before t = 1 (R only)
    FailureSign failure_sign = FailureSign::nonneg_count;

    void validate() const;  // throws ParameterError
    bool operator==(const FeatureConfig&) const = default;
};

/// Prior-practice predictors for one attempt. All four are computed strictly
/// from attempts before t; the outcome at t never feeds its own features.
struct FeatureRow {
    std::string student_id;
    std::string kc_id;
    int t = 1;        // 1-based opportunity
    int outcome = 0;  // outcome at t (the response being predicted)
    double prior_attempts = 0;       // T = t - 1
    double decayed_successes = 0;    // S
    double decayed_failures = 0;     // F
    double recent_success_rate = 0;  // R, in [0, 1]
};

/// Feature rows plus the configuration they were computed under, so that
/// downstream consumers can reject mismatched spec/feature combinations.
struct FeatureTable {
    std::vector<FeatureRow> rows;
    FeatureConfig config;
};

/// Streaming accumulator; one instance per (student, kc) sequence. Ghost
/// attempts are folded into r_den at construction.
struct FeatureState {
    double s_accum = 0;
    double f_accum = 0;  // non-negative accumulation; sign applied on emit
    double r_num = 0;
    double r_den = 0;
    int t_next = 1;
};

/// Count of prior opportunities: T = t - 1.
int total_count(const PracticeSequence& sequence, int t);

/// S: successes over p = 1..t-1 weighted d^(t-1-p); the most recent prior
/// attempt carries weight 1.
double decayed_success_count(const PracticeSequence& sequence, int t, double d);

/// F: failures over p = 1..t-1 weighted d^(t-1-p); see FailureSign.
double decayed_failure_count(const PracticeSequence& sequence, int t, double d,
                             FailureSign sign = FailureSign::nonneg_count);

/// R: weighted proportion of successes over p = 1-ghost_count..t-1 with
/// weights d^(t-p). Ghosts contribute zeros to the numerator and weight to
/// the denominator, so R is defined (and 0) at t = 1 whenever ghost_count>0.
double recency_weighted_proportion(const PracticeSequence& sequence, int t, double d,
                                   int ghost_count);

/// One FeatureRow per attempt, in canonical dataset order. This is the
/// direct-sum reference path; update_state is the equivalent streaming path.
FeatureTable featurize(const Dataset& dataset, const FeatureConfig& config);

FeatureState make_feature_state(const FeatureConfig& config);

/// Emit the FeatureRow for the current opportunity (ids left empty), then
/// absorb `outcome` so the next call describes t+1.
FeatureRow update_state(FeatureState& state, int outcome, const FeatureConfig& config);

/// CSV columns student,kc,t,outcome,T,S,F,R preceded by a comment line
/// recording the configuration.
void write_feature_csv(const FeatureTable& table, std::ostream& out);

const char* failure_sign_name(FailureSign sign);

}  // namespace rpfa
