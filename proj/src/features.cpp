#include "rpfa/features.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace rpfa {

namespace {

void check_decay(double d, const char* which) {
    if (!(d > 0.0) || d > 1.0)
        throw ParameterError(std::string(which) + " must lie in (0, 1], got " +
                             std::to_string(d));
}

void check_t(const PracticeSequence& sequence, int t) {
    if (t < 1 || t > sequence.length())
        throw IndexError("opportunity t=" + std::to_string(t) + " out of range 1.." +
                         std::to_string(sequence.length()));
}

}  // namespace

void FeatureConfig::validate() const {
    check_decay(decay_s, "decay_s");
    check_decay(decay_f, "decay_f");
    check_decay(decay_r, "decay_r");
    if (ghost_count < 0) throw ParameterError("ghost_count must be non-negative");
}

const char* failure_sign_name(FailureSign sign) {
    return sign == FailureSign::nonneg_count ? "nonneg_count" : "paper_literal";
}

int total_count(const PracticeSequence& sequence, int t) {
    check_t(sequence, t);
    return t - 1;
}

double decayed_success_count(const PracticeSequence& sequence, int t, double d) {
    check_t(sequence, t);
    check_decay(d, "decay");
    double acc = 0.0;
    for (int p = 1; p <= t - 1; ++p)
        if (sequence.outcomes[static_cast<std::size_t>(p - 1)]) acc += std::pow(d, t - 1 - p);
    return acc;
}

double decayed_failure_count(const PracticeSequence& sequence, int t, double d,
                             FailureSign sign) {
    check_t(sequence, t);
    check_decay(d, "decay");
    double acc = 0.0;
    for (int p = 1; p <= t - 1; ++p)
        if (!sequence.outcomes[static_cast<std::size_t>(p - 1)]) acc += std::pow(d, t - 1 - p);
    return sign == FailureSign::nonneg_count ? acc : -acc;
}

double recency_weighted_proportion(const PracticeSequence& sequence, int t, double d,
                                   int ghost_count) {
    check_t(sequence, t);
    check_decay(d, "decay");
    if (ghost_count < 0) throw ParameterError("ghost_count must be non-negative");
    if (ghost_count == 0 && t == 1)
        throw ParameterError(
            "recency-weighted proportion undefined at t=1 with ghost_count=0 (empty sums)");
    double num = 0.0, den = 0.0;
    for (int p = 1 - ghost_count; p <= t - 1; ++p) {
        const double w = std::pow(d, t - p);
        den += w;
        if (p >= 1 && sequence.outcomes[static_cast<std::size_t>(p - 1)]) num += w;
    }
    return num / den;
}

FeatureTable featurize(const Dataset& dataset, const FeatureConfig& config) {
    config.validate();
    FeatureTable table;
    table.config = config;
    table.rows.reserve(static_cast<std::size_t>(dataset.n_attempts()));
    for (const auto& seq : dataset.sequences) {
        for (int t = 1; t <= seq.length(); ++t) {
            FeatureRow row;
            row.student_id = seq.student_id;
            row.kc_id = seq.kc_id;
            row.t = t;
            row.outcome = seq.outcomes[static_cast<std::size_t>(t - 1)];
            row.prior_attempts = total_count(seq, t);
            row.decayed_successes = decayed_success_count(seq, t, config.decay_s);
            row.decayed_failures =
                decayed_failure_count(seq, t, config.decay_f, config.failure_sign);
            row.recent_success_rate =
                recency_weighted_proportion(seq, t, config.decay_r, config.ghost_count);
            table.rows.push_back(std::move(row));
        }
    }
    return table;
}

FeatureState make_feature_state(const FeatureConfig& config) {
    config.validate();
    FeatureState state;
    for (int k = 1; k <= config.ghost_count; ++k) state.r_den += std::pow(config.decay_r, k);
    return state;
}

FeatureRow update_state(FeatureState& state, int outcome, const FeatureConfig& config) {
    if (outcome != 0 && outcome != 1) throw ParameterError("outcome must be 0 or 1");
    if (config.ghost_count == 0 && state.t_next == 1)
        throw ParameterError(
            "recency-weighted proportion undefined at t=1 with ghost_count=0 (empty sums)");

    FeatureRow row;
    row.t = state.t_next;
    row.outcome = outcome;
    row.prior_attempts = state.t_next - 1;
    row.decayed_successes = state.s_accum;
    row.decayed_failures =
        config.failure_sign == FailureSign::nonneg_count ? state.f_accum : -state.f_accum;
    row.recent_success_rate = state.r_num / state.r_den;

    state.s_accum = config.decay_s * state.s_accum + outcome;
    state.f_accum = config.decay_f * state.f_accum + (1 - outcome);
    state.r_num = config.decay_r * (state.r_num + outcome);
    state.r_den = config.decay_r * (state.r_den + 1.0);
    state.t_next += 1;
    return row;
}

void write_feature_csv(const FeatureTable& table, std::ostream& out) {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "# decay_s=%.17g decay_f=%.17g decay_r=%.17g ghost_count=%d failure_sign=%s\n",
                  table.config.decay_s, table.config.decay_f, table.config.decay_r,
                  table.config.ghost_count, failure_sign_name(table.config.failure_sign));
    out << buf;
    out << "student,kc,t,outcome,T,S,F,R\n";
    for (const auto& row : table.rows) {
        std::snprintf(buf, sizeof buf, ",%d,%d,%.17g,%.17g,%.17g,%.17g\n", row.t, row.outcome,
                      row.prior_attempts, row.decayed_successes, row.decayed_failures,
                      row.recent_success_rate);
        out << row.student_id << ',' << row.kc_id << buf;
    }
}

}  // namespace rpfa
