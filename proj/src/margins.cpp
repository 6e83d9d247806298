#include "trivine/margins.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "trivine/special.hpp"

namespace trivine {

namespace {

double log_beta(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

// Continued fraction for the incomplete beta (modified Lentz).
double beta_continued_fraction(double a, double b, double x) {
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-16;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 10000; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < eps) break;
    }
    return h;
}

double ibeta(double a, double b, double lbeta, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double front = std::exp(a * std::log(x) + b * std::log1p(-x) - lbeta);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

// Starting value for the quantile search (Abramowitz and Stegun 26.5.22
// for a, b >= 1; a tail power approximation otherwise).
double quantile_guess(double a, double b, double p) {
    if (a >= 1.0 && b >= 1.0) {
        const double pp = p < 0.5 ? p : 1.0 - p;
        const double t = std::sqrt(-2.0 * std::log(pp));
        double x = (2.30753 + t * 0.27061) / (1.0 + t * (0.99229 + t * 0.04481)) - t;
        if (p < 0.5) x = -x;
        const double al = (x * x - 3.0) / 6.0;
        const double h = 2.0 / (1.0 / (2.0 * a - 1.0) + 1.0 / (2.0 * b - 1.0));
        const double w = x * std::sqrt(al + h) / h -
                         (1.0 / (2.0 * b - 1.0) - 1.0 / (2.0 * a - 1.0)) * (al + 5.0 / 6.0 - 2.0 / (3.0 * h));
        return a / (a + b * std::exp(2.0 * w));
    }
    const double lna = std::log(a / (a + b));
    const double lnb = std::log(b / (a + b));
    const double t = std::exp(a * lna) / a;
    const double u = std::exp(b * lnb) / b;
    const double w = t + u;
    if (p < t / w) return std::pow(a * w * p, 1.0 / a);
    return 1.0 - std::pow(b * w * (1.0 - p), 1.0 / b);
}

// Halley iteration on I_x(a,b) = p, safeguarded by a shrinking bracket.
double solve_quantile(double a, double b, double lbeta, double p, double x) {
    double lo = 0.0, hi = 1.0;
    if (!(x > 0.0 && x < 1.0)) x = 0.5;
    for (int iter = 0; iter < 200; ++iter) {
        const double err = ibeta(a, b, lbeta, x) - p;
        if (err == 0.0) return x;
        if (err < 0.0) lo = x;
        else hi = x;
        const double pdf = std::exp((a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) - lbeta);
        double next;
        if (pdf > 0.0 && std::isfinite(pdf)) {
            const double u = err / pdf;
            const double curv = u * ((a - 1.0) / x - (b - 1.0) / (1.0 - x));
            next = x - u / (1.0 - 0.5 * std::min(1.0, curv));
        } else {
            next = 0.5 * (lo + hi);
        }
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        const double step = std::abs(next - x);
        x = next;
        if (step <= 1e-12 * x || hi - lo <= 1e-15 * x) break;
    }
    return x;
}

struct QuantilePair {
    double x;
    double one_minus_x;
};

// Solves in whichever orientation keeps the unknown below one half, so
// both x and 1 - x keep full relative precision.
QuantilePair beta_quantile_pair(double a, double b, double lbeta, double p) {
    const double guess = quantile_guess(a, b, p);
    if (guess <= 0.5) {
        const double x = solve_quantile(a, b, lbeta, p, guess);
        return {x, 1.0 - x};
    }
    const double q = 1.0 - p;
    const double y = solve_quantile(b, a, lbeta, q, quantile_guess(b, a, q));
    return {1.0 - y, y};
}

}  // namespace

std::string_view margin_name(MarginKind kind) {
    return kind == MarginKind::NormalLogit ? "normal" : "beta";
}

MarginKind parse_margin(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "normal" || lower == "normallogit" || lower == "logit") return MarginKind::NormalLogit;
    if (lower == "beta") return MarginKind::Beta;
    throw std::invalid_argument("unknown margin '" + std::string(name) + "'");
}

void validate(const MarginSpec& m) {
    if (!(m.pi > 0.0 && m.pi < 1.0)) throw std::domain_error("margin: pi must lie in (0,1)");
    if (m.kind == MarginKind::NormalLogit) {
        if (!(m.disp > 0.0 && std::isfinite(m.disp))) throw std::domain_error("margin: sigma must be > 0");
    } else if (!(m.disp > 0.0 && m.disp < 1.0)) {
        throw std::domain_error("margin: gamma must lie in (0,1)");
    }
}

StudyRecord StudyRecord::from_2x2(int tp, int fp, int fn, int tn) {
    if (tp < 0 || fp < 0 || fn < 0 || tn < 0) throw std::domain_error("2x2 counts must be nonnegative");
    StudyRecord s;
    s.y = {tp, tn, tp + fn};
    s.n = {tp + fn, tn + fp, tp + fp + fn + tn};
    return s;
}

void validate(const StudyRecord& s) {
    for (int j = 0; j < 3; ++j) {
        if (s.y[j] < 0 || s.n[j] < 0 || s.y[j] > s.n[j])
            throw std::invalid_argument("study: counts must satisfy 0 <= y <= n");
    }
    if (s.y[2] != s.n[0] || s.n[2] != s.n[0] + s.n[1])
        throw std::invalid_argument("study: diseased count must equal n1 and study size n1 + n2");
}

BetaShapes beta_shapes(double pi, double gamma) {
    if (!(pi > 0.0 && pi < 1.0) || !(gamma > 0.0 && gamma < 1.0))
        throw std::domain_error("beta_shapes: pi and gamma must lie in (0,1)");
    const double total = 1.0 / gamma - 1.0;
    return {pi * total, (1.0 - pi) * total};
}

BetaMeanDisp beta_mean_disp(double alpha, double beta) {
    if (!(alpha > 0.0 && beta > 0.0)) throw std::domain_error("beta_mean_disp: shapes must be positive");
    return {alpha / (alpha + beta), 1.0 / (alpha + beta + 1.0)};
}

double beta_cdf(double a, double b, double x) {
    if (!(a > 0.0 && b > 0.0)) throw std::domain_error("beta_cdf: shapes must be positive");
    return ibeta(a, b, log_beta(a, b), x);
}

double beta_quantile(double a, double b, double p) {
    if (!(a > 0.0 && b > 0.0)) throw std::domain_error("beta_quantile: shapes must be positive");
    if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("beta_quantile: p must lie in [0,1]");
    if (p == 0.0) return 0.0;
    if (p == 1.0) return 1.0;
    return beta_quantile_pair(a, b, log_beta(a, b), p).x;
}

double latent_quantile(const MarginSpec& margin, double u) {
    validate(margin);
    if (!in_open_unit(u)) throw std::domain_error("latent_quantile: u must lie in (0,1)");
    if (margin.kind == MarginKind::NormalLogit)
        return inv_logit(logit(margin.pi) + margin.disp * norm_quantile(u));
    const auto [a, b] = beta_shapes(margin.pi, margin.disp);
    return beta_quantile_pair(a, b, log_beta(a, b), u).x;
}

LatentQuantile::LatentQuantile(const MarginSpec& margin) : kind_(margin.kind) {
    if (kind_ == MarginKind::NormalLogit) {
        location_ = logit(margin.pi);
        scale_ = margin.disp;
    } else {
        const auto shapes = beta_shapes(margin.pi, margin.disp);
        a_ = shapes.alpha;
        b_ = shapes.beta;
        lbeta_ = log_beta(a_, b_);
    }
}

LogProportion LatentQuantile::operator()(double u) const {
    u = clamp_unit(u);
    if (kind_ == MarginKind::NormalLogit) {
        const double z = location_ + scale_ * norm_quantile(u);
        return {-log1p_exp(-z), -log1p_exp(z)};
    }
    const auto q = beta_quantile_pair(a_, b_, lbeta_, u);
    return {std::log(q.x), std::log(q.one_minus_x)};
}

double binom_log_pmf(int y, int n, double p) {
    if (y < 0 || y > n) throw std::domain_error("binom_log_pmf: need 0 <= y <= n");
    if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("binom_log_pmf: p must lie in [0,1]");
    double s = log_choose(n, y);
    if (y > 0) s += y * std::log(p);
    if (n - y > 0) s += (n - y) * std::log1p(-p);
    return s;
}

}  // namespace trivine
