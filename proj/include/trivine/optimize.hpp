#pragma once

// Unconstrained minimization with finite-difference derivatives.

#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace trivine {

using Objective = std::function<double(std::span<const double>)>;

struct OptimOptions {
    double rel_tol = 1e-8;   // on the objective change per iteration
    double grad_tol = 1e-5;  // max-norm of the gradient
    int max_iter = 500;
};

struct OptimResult {
    std::vector<double> x;
    double f = 0.0;
    std::vector<double> grad;
    int iterations = 0;
    int evaluations = 0;
    bool converged = false;
    std::string message;
};

// Central differences with h = max(1e-5, 1e-5 |x_i|); falls back to a
// one-sided difference when one side is not finite. fx is f(x).
std::vector<double> numeric_gradient(const Objective& f, std::span<const double> x, double fx);

// Second differences with step 1e-4 max(1, |x_i|). Symmetric.
Eigen::MatrixXd numeric_hessian(const Objective& f, std::span<const double> x);

// BFGS on the inverse Hessian with backtracking Armijo line search.
// Converged when the relative objective change and the gradient max-norm
// are both below tolerance (or the gradient already is at the start).
OptimResult bfgs(const Objective& f, std::vector<double> x0, const OptimOptions& options = {});

}  // namespace trivine
