#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rpfa/model_spec.hpp"

namespace rpfa {

struct FitOptions {
    int max_iterations = 100;
    double tolerance = 1e-8;       // relative change in (penalized) log-likelihood
    double ridge_lambda = 0.0;     // L2 penalty (lambda/2)*||beta||^2
    double singular_jitter = 1e-8; // diagonal boost when the normal equations are singular

    void validate() const;
};

struct FitDiagnostics {
    double gradient_max_abs = 0;  // inf-norm of the objective gradient at the solution
    int iterations = 0;
    bool converged = false;
    int step_halvings = 0;
    bool separable_warning = false;
    bool jitter_applied = false;
    std::vector<std::string> dropped_columns;  // nonzero in < 2 rows, not estimated
};

struct FitResult {
    FittedModel model;
    FitDiagnostics diagnostics;
};

/// Maximum-likelihood logistic regression by iteratively reweighted least
/// squares (Newton steps with step-halving on likelihood decrease).
/// Deterministic given inputs. Non-convergence is reported via diagnostics,
/// never thrown; singular normal equations are retried with a jittered
/// diagonal and flagged.
FitResult fit_logistic(const DesignMatrix& design, const FitOptions& options = {});

/// Sum over rows of y*log(p) + (1-y)*log(1-p) with p clamped to
/// [1e-12, 1-1e-12] before the logs.
double log_likelihood(const FittedModel& model, const DesignMatrix& design);

/// Same likelihood evaluated at an arbitrary coefficient vector.
double log_likelihood_at(const DesignMatrix& design, std::span<const double> beta);

/// Objective gradient (including the ridge term) at `beta`.
std::vector<double> gradient_at(const DesignMatrix& design, std::span<const double> beta,
                                double ridge_lambda = 0.0);

double aic(const FittedModel& model);
double bic(const FittedModel& model, double n);

}  // namespace rpfa
