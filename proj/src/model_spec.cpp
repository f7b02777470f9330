#include "rpfa/model_spec.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <cstdio>

namespace rpfa {

namespace {

constexpr Term kAllTerms[] = {Term::T, Term::S, Term::F, Term::R};

std::vector<Term> canonical_terms(std::vector<Term> terms) {
    std::vector<Term> out;
    for (Term t : kAllTerms)
        if (std::find(terms.begin(), terms.end(), t) != terms.end()) out.push_back(t);
    return out;
}

std::string decay_str(double d) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", d);
    return buf;
}

struct Family {
    const char* label;
    std::vector<Term> terms;
};

// Checked longest-prefix-first so "R-PFA" never matches "PFA".
const std::vector<Family>& families() {
    static const std::vector<Family> f = {
        {"R-PFA", {Term::F, Term::R}}, {"R-AFM", {Term::T, Term::R}},
        {"R-only", {Term::R}},         {"S-only", {Term::S}},
        {"PFA", {Term::S, Term::F}},   {"AFM", {Term::T}},
    };
    return f;
}

bool name_has_family(const std::string& name, const std::string& label) {
    if (name.rfind(label, 0) != 0) return false;
    if (name.size() == label.size()) return true;
    const char next = name[label.size()];
    return !(std::isalnum(static_cast<unsigned char>(next)) || next == '-');
}

}  // namespace

const char* term_name(Term term) {
    switch (term) {
        case Term::T: return "T";
        case Term::S: return "S";
        case Term::F: return "F";
        case Term::R: return "R";
    }
    return "?";
}

Term parse_term(const std::string& name) {
    if (name == "T") return Term::T;
    if (name == "S") return Term::S;
    if (name == "F") return Term::F;
    if (name == "R") return Term::R;
    throw ParameterError("unknown term '" + name + "'");
}

ModelSpec ModelSpec::afm() {
    ModelSpec spec;
    spec.name = "AFM";
    spec.slope_terms = {Term::T};
    return spec;
}

ModelSpec ModelSpec::pfa(double decay) { return pfa(decay, decay); }

ModelSpec ModelSpec::pfa(double decay_s, double decay_f) {
    ModelSpec spec;
    if (decay_s == 1.0 && decay_f == 1.0)
        spec.name = "PFA";
    else if (decay_s == decay_f)
        spec.name = "PFA d" + decay_str(decay_s);
    else
        spec.name = "PFA s" + decay_str(decay_s) + " f" + decay_str(decay_f);
    spec.slope_terms = {Term::S, Term::F};
    spec.feature_config.decay_s = decay_s;
    spec.feature_config.decay_f = decay_f;
    return spec;
}

ModelSpec ModelSpec::s_only(double decay) {
    ModelSpec spec;
    spec.name = "S-only d" + decay_str(decay);
    spec.slope_terms = {Term::S};
    spec.feature_config.decay_s = decay;
    return spec;
}

ModelSpec ModelSpec::r_only(double decay_r, int ghost_count) {
    ModelSpec spec;
    spec.name = "R-only d" + decay_str(decay_r);
    spec.slope_terms = {Term::R};
    spec.feature_config.decay_r = decay_r;
    spec.feature_config.ghost_count = ghost_count;
    return spec;
}

ModelSpec ModelSpec::r_afm(double decay_r, int ghost_count) {
    ModelSpec spec;
    spec.name = "R-AFM d" + decay_str(decay_r);
    spec.slope_terms = {Term::T, Term::R};
    spec.feature_config.decay_r = decay_r;
    spec.feature_config.ghost_count = ghost_count;
    return spec;
}

ModelSpec ModelSpec::r_pfa(double decay_r, double decay_f, int ghost_count) {
    ModelSpec spec;
    spec.name = "R-PFA r" + decay_str(decay_r) + " f" + decay_str(decay_f);
    spec.slope_terms = {Term::F, Term::R};
    spec.feature_config.decay_r = decay_r;
    spec.feature_config.decay_f = decay_f;
    spec.feature_config.ghost_count = ghost_count;
    return spec;
}

ModelSpec ModelSpec::custom(std::vector<Term> terms, FeatureConfig config) {
    ModelSpec spec;
    spec.name = "custom";
    spec.slope_terms = canonical_terms(std::move(terms));
    spec.feature_config = config;
    return spec;
}

void ModelSpec::validate() const {
    feature_config.validate();
    if (!include_kc_intercept) throw ConfigError("KC intercepts are required in every model");
    auto sorted = canonical_terms(slope_terms);
    if (sorted != slope_terms)
        throw ConfigError("slope_terms must be unique and in canonical order T,S,F,R");
    for (const auto& fam : families()) {
        if (name_has_family(name, fam.label)) {
            if (slope_terms != fam.terms)
                throw ConfigError("model named '" + name + "' must use the " +
                                  std::string(fam.label) + " term set");
            return;
        }
    }
}

double term_value(const FeatureRow& row, Term term) {
    switch (term) {
        case Term::T: return row.prior_attempts;
        case Term::S: return row.decayed_successes;
        case Term::F: return row.decayed_failures;
        case Term::R: return row.recent_success_rate;
    }
    return 0.0;
}

std::string column_label(const ColumnRef& ref) {
    switch (ref.kind) {
        case ColumnRef::Kind::student_intercept: return "student:" + ref.id;
        case ColumnRef::Kind::kc_intercept: return "kc:" + ref.id;
        case ColumnRef::Kind::slope: return std::string(term_name(ref.term)) + ":" + ref.id;
    }
    return {};
}

ColumnRef parse_column_label(const std::string& label) {
    const auto sep = label.find(':');
    if (sep == std::string::npos || sep + 1 >= label.size())
        throw ParameterError("malformed column label '" + label + "'");
    const std::string head = label.substr(0, sep);
    ColumnRef ref;
    ref.id = label.substr(sep + 1);
    if (head == "student") {
        ref.kind = ColumnRef::Kind::student_intercept;
    } else if (head == "kc") {
        ref.kind = ColumnRef::Kind::kc_intercept;
    } else {
        ref.kind = ColumnRef::Kind::slope;
        ref.term = parse_term(head);
    }
    return ref;
}

double DesignMatrix::row_dot(std::int64_t row, std::span<const double> beta) const {
    if (static_cast<int>(beta.size()) != n_cols)
        throw ShapeError("coefficient vector length does not match design columns");
    double z = 0.0;
    const std::size_t base = static_cast<std::size_t>(row) * static_cast<std::size_t>(row_stride);
    for (int e = 0; e < row_stride; ++e)
        z += entry_val[base + static_cast<std::size_t>(e)] *
             beta[static_cast<std::size_t>(entry_col[base + static_cast<std::size_t>(e)])];
    return z;
}

DesignMatrix build_design(const FeatureTable& features, const ModelSpec& spec) {
    spec.validate();
    if (!(features.config == spec.feature_config))
        throw ConfigError("feature table was computed under a different FeatureConfig than the "
                          "model spec requires");

    DesignMatrix design;
    design.spec = spec;

    std::map<std::string, int> student_ids;
    std::map<std::string, int> kc_ids;
    for (const auto& row : features.rows) {
        if (spec.include_student_intercept) student_ids.emplace(row.student_id, 0);
        kc_ids.emplace(row.kc_id, 0);
    }
    int next = 0;
    for (auto& [id, idx] : student_ids) idx = next++;
    next = 0;
    for (auto& [id, idx] : kc_ids) idx = next++;

    const int n_students = static_cast<int>(student_ids.size());
    const int n_kcs = static_cast<int>(kc_ids.size());
    const int n_terms = static_cast<int>(spec.slope_terms.size());

    design.students.reserve(static_cast<std::size_t>(n_students));
    for (const auto& [id, idx] : student_ids) design.students.push_back(id);
    design.kcs.reserve(static_cast<std::size_t>(n_kcs));
    for (const auto& [id, idx] : kc_ids) design.kcs.push_back(id);

    design.n_rows = static_cast<std::int64_t>(features.rows.size());
    design.n_cols = n_students + n_kcs * (1 + n_terms);
    design.row_stride = (spec.include_student_intercept ? 1 : 0) + 1 + n_terms;

    design.column_labels.reserve(static_cast<std::size_t>(design.n_cols));
    for (const auto& id : design.students)
        design.column_labels.push_back(column_label({ColumnRef::Kind::student_intercept, Term::T, id}));
    for (const auto& id : design.kcs)
        design.column_labels.push_back(column_label({ColumnRef::Kind::kc_intercept, Term::T, id}));
    for (Term term : spec.slope_terms)
        for (const auto& id : design.kcs)
            design.column_labels.push_back(column_label({ColumnRef::Kind::slope, term, id}));

    design.entry_col.reserve(static_cast<std::size_t>(design.n_rows * design.row_stride));
    design.entry_val.reserve(static_cast<std::size_t>(design.n_rows * design.row_stride));
    design.outcomes.reserve(static_cast<std::size_t>(design.n_rows));

    for (const auto& row : features.rows) {
        const int kc = kc_ids.at(row.kc_id);
        if (spec.include_student_intercept) {
            design.entry_col.push_back(student_ids.at(row.student_id));
            design.entry_val.push_back(1.0);
        }
        design.entry_col.push_back(n_students + kc);
        design.entry_val.push_back(1.0);
        for (int b = 0; b < n_terms; ++b) {
            design.entry_col.push_back(n_students + n_kcs * (1 + b) + kc);
            design.entry_val.push_back(term_value(row, spec.slope_terms[static_cast<std::size_t>(b)]));
        }
        design.outcomes.push_back(static_cast<std::uint8_t>(row.outcome));
    }
    return design;
}

double stable_logistic(double z) {
    double p;
    if (z >= 0) {
        p = 1.0 / (1.0 + std::exp(-z));
    } else {
        const double e = std::exp(z);
        p = e / (1.0 + e);
    }
    if (p <= 0.0) p = DBL_MIN;
    if (p >= 1.0) p = 1.0 - DBL_EPSILON / 2;  // nextafter(1, 0)
    return p;
}

void FittedModel::finalize_layout(const DesignMatrix& design) {
    column_labels = design.column_labels;
    n_students_cols_ = static_cast<int>(design.students.size());
    n_kc_ = static_cast<int>(design.kcs.size());
    student_pos_.clear();
    kc_pos_.clear();
    for (int i = 0; i < n_students_cols_; ++i) student_pos_.emplace(design.students[static_cast<std::size_t>(i)], i);
    for (int i = 0; i < n_kc_; ++i) kc_pos_.emplace(design.kcs[static_cast<std::size_t>(i)], i);
}

double FittedModel::linear_predictor(const FeatureRow& row, bool* used_fallback) const {
    bool fallback = false;
    double z = 0.0;
    if (spec.include_student_intercept) {
        auto it = student_pos_.find(row.student_id);
        if (it == student_pos_.end())
            fallback = true;
        else
            z += coefficients[static_cast<std::size_t>(it->second)];
    }
    auto kc = kc_pos_.find(row.kc_id);
    if (kc == kc_pos_.end()) {
        fallback = true;  // the KC intercept and all its slopes contribute 0
    } else {
        z += coefficients[static_cast<std::size_t>(n_students_cols_ + kc->second)];
        for (std::size_t b = 0; b < spec.slope_terms.size(); ++b) {
            const std::size_t col = static_cast<std::size_t>(
                n_students_cols_ + n_kc_ * (1 + static_cast<int>(b)) + kc->second);
            z += coefficients[col] * term_value(row, spec.slope_terms[b]);
        }
    }
    if (used_fallback) *used_fallback = fallback;
    return z;
}

double FittedModel::predict(const FeatureRow& row, bool* used_fallback) const {
    return stable_logistic(linear_predictor(row, used_fallback));
}

double FittedModel::predict_strict(const FeatureRow& row) const {
    bool fallback = false;
    const double p = predict(row, &fallback);
    if (fallback)
        throw UnknownEntityError("prediction requested for unseen student or KC (" +
                                 row.student_id + ", " + row.kc_id + ")");
    return p;
}

}  // namespace rpfa
