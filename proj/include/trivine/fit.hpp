#pragma once

// Maximum likelihood fit of one model specification.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "trivine/margins.hpp"
#include "trivine/model.hpp"

namespace trivine {

struct FitOptions {
    int nq = 15;
    double rel_tol = 1e-8;
    double grad_tol = 1e-5;
    int max_iter = 500;
    int starts = 3;
    std::optional<ParamVector> start;  // replaces the default starts when set
};

enum class FitStatus { Converged, NotConverged, Failed };

std::string_view status_name(FitStatus status);

struct FitResult {
    ModelSpec spec;
    FitStatus status = FitStatus::Failed;
    std::string message;

    ParamVector estimates;
    ParamVector se;  // NaN where unavailable; tau entries of Independence edges are 0
    bool se_available = false;
    std::array<double, 3> theta{};  // natural copula parameter per edge
    double loglik = 0.0;
    double aic = 0.0;
    int n_params = 0;
    bool converged = false;
    std::array<bool, 3> boundary{};  // per edge, |tau| beyond 0.95 of its interval
    int iterations = 0;
    int starts_run = 0;
    double grad_max = 0.0;
    double hessian_min_eigen = 0.0;  // of the packed-scale nll Hessian

    std::vector<double> packed;
    std::vector<double> per_study_loglik;
    Eigen::MatrixXd hessian;  // packed-scale nll Hessian
};

double aic(double loglik, int n_params);
double aic(const FitResult& fit);

// Method-of-moments margins with tau candidates per edge; start k takes
// the k-th candidate of each edge (neutral first). Duplicates dropped.
std::vector<ParamVector> default_starts(const std::vector<StudyRecord>& data, const ModelSpec& spec, int starts);

// Throws std::invalid_argument for empty data or bad options; optimizer
// trouble is reported in the result.
FitResult fit(const std::vector<StudyRecord>& data, const ModelSpec& spec, const FitOptions& options = {});

}  // namespace trivine
