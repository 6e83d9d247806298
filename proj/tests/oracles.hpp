#pragma once

// Reference implementations used only by the tests. Nothing here calls
// the library's numerical kernels; formulas are coded from scratch and
// quadrature rules come from Golub-Welsch eigen-decompositions.

#include <array>
#include <functional>
#include <vector>

#include "trivine/margins.hpp"

namespace oracle {

struct Rule {
    std::vector<double> x, w;
};

// Golub-Welsch Gauss-Legendre on (0,1), weights summing to 1.
Rule legendre01(int n);
// Golub-Welsch Gauss-Hermite for a standard normal weight (probabilists').
Rule hermite_normal(int n);

double bisect(const std::function<double(double)>& f, double lo, double hi, int iters = 200);

double norm_cdf(double x);
double norm_quantile(double p);  // bisection on norm_cdf

double clayton_h(double w, double u, double theta);  // C(w|u), unrotated
double bvn_h(double w, double u, double rho);
double frank_h(double w, double u, double theta);
// Numeric inverse of h in w by bisection.
double invert_h(const std::function<double(double)>& h_of_w, double v);

double debye_simpson(double theta, int panels = 20000);
double frank_tau(double theta);
double frank_theta(double tau);

double kendall_tau_brute(const std::vector<double>& x, const std::vector<double>& y);

double logit_normal_quantile(double pi, double sigma, double u);
double beta_quantile(double pi, double gamma, double u);  // boost ibeta_inv

double binom_pmf_exact(int y, int n, double p);

// One margin's mixed-model log-likelihood of one study by 1-D quadrature.
double margin_loglik(int y, int n, trivine::MarginKind kind, double pi, double disp, const Rule& rule);

// Trivariate normal GLMM on the logit scale: mu and sigma per variable and
// the correlation matrix built from rho12, rho13 and the partial rho23|1.
struct TvnParams {
    std::array<double, 3> mu, sigma;
    double rho12, rho13, rho23_1;
};

double tvn_rho23(double rho12, double rho13, double rho23_1);
double tvn_study_loglik(const trivine::StudyRecord& s, const TvnParams& p, const Rule& gh);
double tvn_loglik(const std::vector<trivine::StudyRecord>& data, const TvnParams& p, const Rule& gh);
// The same integral with Gauss-Legendre nodes on the unit cube mapped to
// independent normals, then correlated by the Cholesky factor.
double tvn_study_loglik_unit_grid(const trivine::StudyRecord& s, const TvnParams& p, const Rule& gl);
double tvn_loglik_unit_grid(const std::vector<trivine::StudyRecord>& data, const TvnParams& p, const Rule& gl);

// Maximizes a TVN log-likelihood over (mu, log sigma, atanh rho) by
// Nelder-Mead with restarts. Returns the maximum.
double tvn_max_loglik(const std::function<double(const TvnParams&)>& loglik, TvnParams start);

std::vector<double> nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                                double scale, int max_evals, double ftol);

// Five-point central difference of f along coordinate i.
double five_point(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x, std::size_t i,
                  double h);

}  // namespace oracle
