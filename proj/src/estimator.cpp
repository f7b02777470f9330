#include "rpfa/estimator.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace rpfa {

namespace {

constexpr double kGradTol = 1e-6;        // inf-norm required to report convergence
constexpr double kProbClamp = 1e-12;     // probability clamp before logs
constexpr double kWeightFloor = 1e-10;   // keeps the normal equations finite
constexpr double kSeparableBeta = 15.0;  // |beta| beyond this flags separability
constexpr int kMaxHalvings = 30;

double clamp_prob(double p) { return std::clamp(p, kProbClamp, 1.0 - kProbClamp); }

// Kahan-compensated log-likelihood over the design at an arbitrary beta.
double ll_from_eta(const DesignMatrix& design, const std::vector<double>& eta) {
    double sum = 0.0, comp = 0.0;
    for (std::int64_t r = 0; r < design.n_rows; ++r) {
        const double p = clamp_prob(stable_logistic(eta[static_cast<std::size_t>(r)]));
        const double term =
            design.outcomes[static_cast<std::size_t>(r)] ? std::log(p) : std::log1p(-p);
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

void compute_eta(const DesignMatrix& design, std::span<const double> beta,
                 std::vector<double>& eta) {
    eta.resize(static_cast<std::size_t>(design.n_rows));
    for (std::int64_t r = 0; r < design.n_rows; ++r)
        eta[static_cast<std::size_t>(r)] = design.row_dot(r, beta);
}

}  // namespace

void FitOptions::validate() const {
    if (max_iterations < 1) throw ParameterError("max_iterations must be >= 1");
    if (!(tolerance > 0)) throw ParameterError("tolerance must be positive");
    if (ridge_lambda < 0) throw ParameterError("ridge_lambda must be non-negative");
    if (singular_jitter < 0) throw ParameterError("singular_jitter must be non-negative");
}

double log_likelihood_at(const DesignMatrix& design, std::span<const double> beta) {
    std::vector<double> eta;
    compute_eta(design, beta, eta);
    return ll_from_eta(design, eta);
}

double log_likelihood(const FittedModel& model, const DesignMatrix& design) {
    if (static_cast<int>(model.coefficients.size()) != design.n_cols)
        throw ShapeError("model has " + std::to_string(model.coefficients.size()) +
                         " coefficients but design has " + std::to_string(design.n_cols) +
                         " columns");
    return log_likelihood_at(design, model.coefficients);
}

std::vector<double> gradient_at(const DesignMatrix& design, std::span<const double> beta,
                                double ridge_lambda) {
    if (static_cast<int>(beta.size()) != design.n_cols)
        throw ShapeError("coefficient vector length does not match design columns");
    std::vector<double> grad(static_cast<std::size_t>(design.n_cols), 0.0);
    for (std::int64_t r = 0; r < design.n_rows; ++r) {
        const double p = stable_logistic(design.row_dot(r, beta));
        const double resid = static_cast<double>(design.outcomes[static_cast<std::size_t>(r)]) - p;
        const std::size_t base =
            static_cast<std::size_t>(r) * static_cast<std::size_t>(design.row_stride);
        for (int e = 0; e < design.row_stride; ++e)
            grad[static_cast<std::size_t>(design.entry_col[base + static_cast<std::size_t>(e)])] +=
                design.entry_val[base + static_cast<std::size_t>(e)] * resid;
    }
    if (ridge_lambda > 0)
        for (std::size_t c = 0; c < grad.size(); ++c) grad[c] -= ridge_lambda * beta[c];
    return grad;
}

FitResult fit_logistic(const DesignMatrix& design, const FitOptions& options) {
    options.validate();
    design.spec.validate();
    if (design.n_rows < 1) throw EmptyInputError("fit_logistic: design has no rows");

    const int n_cols = design.n_cols;
    FitDiagnostics diag;

    // Columns touched by fewer than 2 rows are not estimated.
    std::vector<std::int64_t> nnz(static_cast<std::size_t>(n_cols), 0);
    for (std::size_t e = 0; e < design.entry_col.size(); ++e)
        if (design.entry_val[e] != 0.0) ++nnz[static_cast<std::size_t>(design.entry_col[e])];
    std::vector<int> compact(static_cast<std::size_t>(n_cols), -1);
    std::vector<int> active;
    for (int c = 0; c < n_cols; ++c) {
        if (nnz[static_cast<std::size_t>(c)] >= 2) {
            compact[static_cast<std::size_t>(c)] = static_cast<int>(active.size());
            active.push_back(c);
        } else {
            diag.dropped_columns.push_back(design.column_labels[static_cast<std::size_t>(c)]);
        }
    }
    const int m = static_cast<int>(active.size());
    const double lambda = options.ridge_lambda;

    std::vector<double> beta(static_cast<std::size_t>(n_cols), 0.0);
    std::vector<double> eta, eta_trial;
    compute_eta(design, beta, eta);

    auto penalized = [&](double ll, const std::vector<double>& b) {
        if (lambda <= 0) return ll;
        double sq = 0.0;
        for (int c : active) sq += b[static_cast<std::size_t>(c)] * b[static_cast<std::size_t>(c)];
        return ll - 0.5 * lambda * sq;
    };

    auto objective_gradient = [&](const std::vector<double>& b, const std::vector<double>& eta_b,
                                  Eigen::VectorXd& g) {
        g.setZero(m);
        for (std::int64_t r = 0; r < design.n_rows; ++r) {
            const double p = stable_logistic(eta_b[static_cast<std::size_t>(r)]);
            const double resid =
                static_cast<double>(design.outcomes[static_cast<std::size_t>(r)]) - p;
            const std::size_t base =
                static_cast<std::size_t>(r) * static_cast<std::size_t>(design.row_stride);
            for (int e = 0; e < design.row_stride; ++e) {
                const int cc = compact[static_cast<std::size_t>(
                    design.entry_col[base + static_cast<std::size_t>(e)])];
                if (cc >= 0) g[cc] += design.entry_val[base + static_cast<std::size_t>(e)] * resid;
            }
        }
        if (lambda > 0)
            for (int k = 0; k < m; ++k) g[k] -= lambda * beta[static_cast<std::size_t>(active[static_cast<std::size_t>(k)])];
        (void)b;
    };

    double ll_pen = penalized(ll_from_eta(design, eta), beta);
    Eigen::VectorXd grad(m);
    Eigen::MatrixXd hess(m, m);
    bool converged = false;
    int iterations = 0;

    if (m > 0) {
        for (int iter = 0; iter < options.max_iterations; ++iter) {
            objective_gradient(beta, eta, grad);
            diag.gradient_max_abs = grad.size() ? grad.cwiseAbs().maxCoeff() : 0.0;
            if (diag.gradient_max_abs < kGradTol) {
                converged = true;
                break;
            }

            hess.setZero();
            for (std::int64_t r = 0; r < design.n_rows; ++r) {
                const double p = stable_logistic(eta[static_cast<std::size_t>(r)]);
                const double w = std::max(p * (1.0 - p), kWeightFloor);
                const std::size_t base =
                    static_cast<std::size_t>(r) * static_cast<std::size_t>(design.row_stride);
                for (int a = 0; a < design.row_stride; ++a) {
                    const int ca = compact[static_cast<std::size_t>(
                        design.entry_col[base + static_cast<std::size_t>(a)])];
                    if (ca < 0) continue;
                    const double va = design.entry_val[base + static_cast<std::size_t>(a)] * w;
                    for (int b2 = 0; b2 < design.row_stride; ++b2) {
                        const int cb = compact[static_cast<std::size_t>(
                            design.entry_col[base + static_cast<std::size_t>(b2)])];
                        if (cb >= 0)
                            hess(ca, cb) +=
                                va * design.entry_val[base + static_cast<std::size_t>(b2)];
                    }
                }
            }
            if (lambda > 0) hess.diagonal().array() += lambda;

            Eigen::VectorXd delta;
            Eigen::LLT<Eigen::MatrixXd> llt(hess);
            if (llt.info() == Eigen::Success) {
                delta = llt.solve(grad);
            } else {
                diag.jitter_applied = true;
                Eigen::MatrixXd jittered = hess;
                jittered.diagonal().array() += std::max(options.singular_jitter, 1e-12);
                delta = Eigen::LDLT<Eigen::MatrixXd>(jittered).solve(grad);
            }
            if (!delta.allFinite()) {
                converged = false;
                break;
            }

            // Step-halving: accept only non-decreasing penalized likelihood.
            std::vector<double> beta_trial = beta;
            double ll_pen_new = 0.0;
            double scale = 1.0;
            for (int h = 0;; ++h) {
                for (int k = 0; k < m; ++k)
                    beta_trial[static_cast<std::size_t>(active[static_cast<std::size_t>(k)])] =
                        beta[static_cast<std::size_t>(active[static_cast<std::size_t>(k)])] +
                        scale * delta[k];
                compute_eta(design, beta_trial, eta_trial);
                ll_pen_new = penalized(ll_from_eta(design, eta_trial), beta_trial);
                if (ll_pen_new >= ll_pen || h >= kMaxHalvings) break;
                scale *= 0.5;
                ++diag.step_halvings;
            }
            if (ll_pen_new < ll_pen) {
                // No productive direction left; stop at the current point.
                break;
            }

            beta.swap(beta_trial);
            eta.swap(eta_trial);
            ++iterations;

            const double rel = std::abs(ll_pen_new - ll_pen) / (std::abs(ll_pen_new) + 0.1);
            ll_pen = ll_pen_new;
            if (rel < options.tolerance) {
                objective_gradient(beta, eta, grad);
                diag.gradient_max_abs = grad.cwiseAbs().maxCoeff();
                converged = diag.gradient_max_abs < kGradTol;
                break;
            }
        }
        // Refresh the gradient if the loop ended without a convergence check.
        objective_gradient(beta, eta, grad);
        diag.gradient_max_abs = grad.size() ? grad.cwiseAbs().maxCoeff() : 0.0;
        if (!converged) converged = diag.gradient_max_abs < kGradTol;
    } else {
        converged = true;  // nothing to estimate
    }

    diag.iterations = iterations;
    diag.converged = converged;
    for (double b : beta)
        if (std::abs(b) > kSeparableBeta) diag.separable_warning = true;

    FitResult result;
    result.model.spec = design.spec;
    result.model.coefficients = beta;
    result.model.estimated.assign(static_cast<std::size_t>(n_cols), 0);
    for (int c : active) result.model.estimated[static_cast<std::size_t>(c)] = 1;
    result.model.log_likelihood = ll_from_eta(design, eta);
    result.model.n_params = m;
    result.model.converged = converged;
    result.model.iterations = iterations;
    result.model.finalize_layout(design);
    result.diagnostics = diag;
    return result;
}

double aic(const FittedModel& model) {
    return 2.0 * model.n_params - 2.0 * model.log_likelihood;
}

double bic(const FittedModel& model, double n) {
    if (!(n >= 1)) throw ParameterError("bic: n must be >= 1");
    return model.n_params * std::log(n) - 2.0 * model.log_likelihood;
}

}  // namespace rpfa
