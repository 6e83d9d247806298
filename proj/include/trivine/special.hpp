#pragma once

// Scalar special functions shared by the copula, margin and likelihood code.

#include <cmath>
#include <limits>
#include <span>

namespace trivine {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Standard normal cdf, density and quantile.
double norm_cdf(double x);
double norm_pdf(double x);
double norm_quantile(double p);

inline double logit(double p) { return std::log(p) - std::log1p(-p); }

inline double inv_logit(double x) {
    return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}

// log(1 + exp(x)) without overflow.
inline double log1p_exp(double x) {
    if (x > 35.0) return x;
    if (x < -35.0) return std::exp(x);
    return std::log1p(std::exp(x));
}

// log C(n, k) via log-gamma.
inline double log_choose(int n, int k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// log(sum(exp(x))) with max shift; -inf for an empty or all -inf input.
double log_sum_exp(std::span<const double> x);

// Clamp into the open unit interval [eps, 1 - eps].
inline double clamp_unit(double u, double eps = 1e-12) {
    return u < eps ? eps : (u > 1.0 - eps ? 1.0 - eps : u);
}

inline bool in_open_unit(double u) { return u > 0.0 && u < 1.0; }

}  // namespace trivine
