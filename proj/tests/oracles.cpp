#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>
#include <boost/math/special_functions/beta.hpp>

namespace oracle {

Rule legendre01(int n) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        const double b = k / std::sqrt(4.0 * k * k - 1.0);
        J(k, k - 1) = J(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    Rule r;
    for (int i = 0; i < n; ++i) {
        const double v0 = es.eigenvectors()(0, i);
        r.x.push_back(0.5 * (es.eigenvalues()(i) + 1.0));
        r.w.push_back(v0 * v0);
    }
    return r;
}

Rule hermite_normal(int n) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) J(k, k - 1) = J(k - 1, k) = std::sqrt(static_cast<double>(k));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    Rule r;
    for (int i = 0; i < n; ++i) {
        const double v0 = es.eigenvectors()(0, i);
        r.x.push_back(es.eigenvalues()(i));
        r.w.push_back(v0 * v0);
    }
    return r;
}

double bisect(const std::function<double(double)>& f, double lo, double hi, int iters) {
    double flo = f(lo);
    for (int i = 0; i < iters; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        const double fm = f(mid);
        if ((fm < 0) == (flo < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double norm_quantile(double p) {
    // upper half by symmetry, so the bisection always works on a small tail
    if (p > 0.5) {
        const double q = 1.0 - p;
        return -bisect([q](double x) { return norm_cdf(x) - q; }, -40.0, 0.0);
    }
    return bisect([p](double x) { return norm_cdf(x) - p; }, -40.0, 0.0);
}

double clayton_h(double w, double u, double t) {
    return std::pow(u, -t - 1.0) * std::pow(std::pow(u, -t) + std::pow(w, -t) - 1.0, -1.0 / t - 1.0);
}

double bvn_h(double w, double u, double rho) {
    return norm_cdf((norm_quantile(w) - rho * norm_quantile(u)) / std::sqrt(1.0 - rho * rho));
}

double frank_h(double w, double u, double t) {
    const double a = std::exp(-t * u), b = std::exp(-t * w), c = std::exp(-t);
    return a * (b - 1.0) / ((c - 1.0) + (a - 1.0) * (b - 1.0));
}

double invert_h(const std::function<double(double)>& h, double v) {
    return bisect([&](double w) { return h(w) - v; }, 0.0, 1.0, 300);
}

double debye_simpson(double t, int panels) {
    auto f = [](double s) { return s == 0.0 ? 1.0 : s / (std::exp(s) - 1.0); };
    const double h = t / panels;
    double s = f(0.0) + f(t);
    for (int i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * f(i * h);
    return s * h / 3.0;
}

double frank_tau(double t) { return 1.0 - 4.0 / t + 4.0 / (t * t) * debye_simpson(t); }

double frank_theta(double tau) {
    return bisect([tau](double t) { return frank_tau(t) - tau; }, 1e-3, 200.0, 100);
}

double kendall_tau_brute(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double a = (x[i] - x[j]) * (y[i] - y[j]);
            s += a > 0 ? 1.0 : (a < 0 ? -1.0 : 0.0);
        }
    return s / (n * (n - 1) / 2.0);
}

double logit_normal_quantile(double pi, double sigma, double u) {
    const double z = std::log(pi / (1.0 - pi)) + sigma * norm_quantile(u);
    return 1.0 / (1.0 + std::exp(-z));
}

double beta_quantile(double pi, double gamma, double u) {
    const double s = 1.0 / gamma - 1.0;
    return boost::math::ibeta_inv(pi * s, (1.0 - pi) * s, u);
}

double binom_pmf_exact(int y, int n, double p) {
    double c = 1.0;
    for (int k = 1; k <= y; ++k) c = c * (n - y + k) / k;
    return c * std::pow(p, y) * std::pow(1.0 - p, n - y);
}

double margin_loglik(int y, int n, trivine::MarginKind kind, double pi, double disp, const Rule& rule) {
    double s = 0.0;
    for (std::size_t q = 0; q < rule.x.size(); ++q) {
        const double x = kind == trivine::MarginKind::NormalLogit ? logit_normal_quantile(pi, disp, rule.x[q])
                                                                  : beta_quantile(pi, disp, rule.x[q]);
        s += rule.w[q] * binom_pmf_exact(y, n, x);
    }
    return std::log(s);
}

double tvn_rho23(double r12, double r13, double r23_1) {
    return r23_1 * std::sqrt(1.0 - r12 * r12) * std::sqrt(1.0 - r13 * r13) + r12 * r13;
}

namespace {

double log_binom(int y, int n, double eta) {
    // log C(n,y) p^y (1-p)^(n-y) with p = inv_logit(eta)
    const double lp = -std::log1p(std::exp(-eta));
    const double lq = -std::log1p(std::exp(eta));
    return std::lgamma(n + 1.0) - std::lgamma(y + 1.0) - std::lgamma(n - y + 1.0) + y * lp + (n - y) * lq;
}

}  // namespace

double tvn_study_loglik(const trivine::StudyRecord& s, const TvnParams& p, const Rule& gh) {
    Eigen::Matrix3d R;
    const double r23 = tvn_rho23(p.rho12, p.rho13, p.rho23_1);
    R << 1.0, p.rho12, p.rho13, p.rho12, 1.0, r23, p.rho13, r23, 1.0;
    Eigen::Matrix3d S;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) S(i, j) = R(i, j) * p.sigma[i] * p.sigma[j];
    Eigen::LLT<Eigen::Matrix3d> llt(S);
    if (llt.info() != Eigen::Success) return -INFINITY;
    const Eigen::Matrix3d L = llt.matrixL();
    const std::size_t n = gh.x.size();
    std::vector<double> terms;
    terms.reserve(n * n * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c) {
                const Eigen::Vector3d z(gh.x[a], gh.x[b], gh.x[c]);
                const Eigen::Vector3d eta = Eigen::Vector3d(p.mu[0], p.mu[1], p.mu[2]) + L * z;
                double t = std::log(gh.w[a] * gh.w[b] * gh.w[c]);
                for (int j = 0; j < 3; ++j) t += log_binom(s.y[j], s.n[j], eta(j));
                terms.push_back(t);
            }
    const double m = *std::max_element(terms.begin(), terms.end());
    double sum = 0.0;
    for (double t : terms) sum += std::exp(t - m);
    return m + std::log(sum);
}

double tvn_study_loglik_unit_grid(const trivine::StudyRecord& s, const TvnParams& p, const Rule& gl) {
    // Gauss-Legendre nodes on the unit cube, sent to independent normals
    // and correlated by the Cholesky factor of the covariance.
    Eigen::Matrix3d R;
    const double r23 = tvn_rho23(p.rho12, p.rho13, p.rho23_1);
    R << 1.0, p.rho12, p.rho13, p.rho12, 1.0, r23, p.rho13, r23, 1.0;
    Eigen::Matrix3d S;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) S(i, j) = R(i, j) * p.sigma[i] * p.sigma[j];
    Eigen::LLT<Eigen::Matrix3d> llt(S);
    if (llt.info() != Eigen::Success) return -INFINITY;
    const Eigen::Matrix3d L = llt.matrixL();
    const std::size_t n = gl.x.size();
    std::vector<double> z(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = norm_quantile(gl.x[i]);
    double choose = 0.0;
    for (int j = 0; j < 3; ++j) choose += std::lgamma(s.n[j] + 1.0) - std::lgamma(s.y[j] + 1.0) - std::lgamma(s.n[j] - s.y[j] + 1.0);
    std::vector<double> terms;
    terms.reserve(n * n * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c) {
                const Eigen::Vector3d eta = Eigen::Vector3d(p.mu[0], p.mu[1], p.mu[2]) + L * Eigen::Vector3d(z[a], z[b], z[c]);
                double t = std::log(gl.w[a] * gl.w[b] * gl.w[c]);
                for (int j = 0; j < 3; ++j)
                    t += -s.y[j] * std::log1p(std::exp(-eta(j))) - (s.n[j] - s.y[j]) * std::log1p(std::exp(eta(j)));
                terms.push_back(t);
            }
    const double m = *std::max_element(terms.begin(), terms.end());
    double sum = 0.0;
    for (double t : terms) sum += std::exp(t - m);
    return choose + m + std::log(sum);
}

double tvn_loglik(const std::vector<trivine::StudyRecord>& data, const TvnParams& p, const Rule& gh) {
    double s = 0.0;
    for (const auto& st : data) s += tvn_study_loglik(st, p, gh);
    return s;
}

double tvn_loglik_unit_grid(const std::vector<trivine::StudyRecord>& data, const TvnParams& p, const Rule& gl) {
    double s = 0.0;
    for (const auto& st : data) s += tvn_study_loglik_unit_grid(st, p, gl);
    return s;
}

std::vector<double> nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                                double scale, int max_evals, double ftol) {
    const std::size_t n = x0.size();
    std::vector<std::vector<double>> simplex(n + 1, x0);
    for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += scale;
    std::vector<double> fv(n + 1);
    for (std::size_t i = 0; i <= n; ++i) fv[i] = f(simplex[i]);
    int evals = static_cast<int>(n + 1);
    std::vector<std::size_t> idx(n + 1);
    while (evals < max_evals) {
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        const std::size_t best = idx[0], worst = idx[n], second = idx[n - 1];
        if (std::abs(fv[worst] - fv[best]) < ftol) break;
        std::vector<double> c(n, 0.0);
        for (std::size_t i = 0; i <= n; ++i)
            if (i != worst)
                for (std::size_t k = 0; k < n; ++k) c[k] += simplex[i][k] / n;
        auto along = [&](double t) {
            std::vector<double> x(n);
            for (std::size_t k = 0; k < n; ++k) x[k] = c[k] + t * (simplex[worst][k] - c[k]);
            return x;
        };
        const auto xr = along(-1.0);
        const double fr = f(xr);
        ++evals;
        if (fr < fv[best]) {
            const auto xe = along(-2.0);
            const double fe = f(xe);
            ++evals;
            if (fe < fr) {
                simplex[worst] = xe;
                fv[worst] = fe;
            } else {
                simplex[worst] = xr;
                fv[worst] = fr;
            }
        } else if (fr < fv[second]) {
            simplex[worst] = xr;
            fv[worst] = fr;
        } else {
            const auto xc = fr < fv[worst] ? along(-0.5) : along(0.5);
            const double fc = f(xc);
            ++evals;
            if (fc < std::min(fr, fv[worst])) {
                simplex[worst] = xc;
                fv[worst] = fc;
            } else {
                for (std::size_t i = 0; i <= n; ++i) {
                    if (i == best) continue;
                    for (std::size_t k = 0; k < n; ++k)
                        simplex[i][k] = simplex[best][k] + 0.5 * (simplex[i][k] - simplex[best][k]);
                    fv[i] = f(simplex[i]);
                    ++evals;
                }
            }
        }
    }
    const auto it = std::min_element(fv.begin(), fv.end());
    return simplex[static_cast<std::size_t>(it - fv.begin())];
}

double tvn_max_loglik(const std::function<double(const TvnParams&)>& loglik, TvnParams start) {
    auto decode = [](const std::vector<double>& v) {
        TvnParams p;
        for (int j = 0; j < 3; ++j) {
            p.mu[j] = v[j];
            p.sigma[j] = std::exp(v[3 + j]);
        }
        p.rho12 = std::tanh(v[6]);
        p.rho13 = std::tanh(v[7]);
        p.rho23_1 = std::tanh(v[8]);
        return p;
    };
    auto nll = [&](const std::vector<double>& v) {
        const double ll = loglik(decode(v));
        return std::isfinite(ll) ? -ll : 1e300;
    };
    std::vector<double> x{start.mu[0],          start.mu[1],          start.mu[2],
                          std::log(start.sigma[0]), std::log(start.sigma[1]), std::log(start.sigma[2]),
                          std::atanh(start.rho12),  std::atanh(start.rho13),  std::atanh(start.rho23_1)};
    // restart from the incumbent until a restart stops paying off
    double best = nll(x);
    for (double scale : {0.5, 0.2, 0.05, 0.05, 0.01, 0.01, 0.002}) {
        x = nelder_mead(nll, x, scale, 3000, 1e-10);
        const double f = nll(x);
        const bool stalled = best - f < 1e-7;
        best = std::min(best, f);
        if (stalled && scale <= 0.05) break;
    }
    return -best;
}

double five_point(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x, std::size_t i,
                  double h) {
    const double xi = x[i];
    auto at = [&](double d) {
        x[i] = xi + d;
        return f(x);
    };
    return (-at(2 * h) + 8 * at(h) - 8 * at(-h) + at(-2 * h)) / (12 * h);
}

}  // namespace oracle
