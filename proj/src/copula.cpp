#include "trivine/copula.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <boost/math/tools/roots.hpp>

#include "trivine/quadrature.hpp"
#include "trivine/special.hpp"

namespace trivine {

namespace {

[[noreturn]] void domain_fail(const std::string& what) { throw std::domain_error(what); }

void check_unit(double x, const char* name) {
    if (!in_open_unit(x)) domain_fail(std::string("copula: argument ") + name + " must lie in (0,1)");
}

double log_add_exp(double a, double b) {
    const double m = std::max(a, b);
    return m + std::log1p(std::exp(-std::abs(a - b)));
}

// ---- Clayton (0 degrees), log-domain evaluation ----------------------------

// log(u^-theta + w^-theta - 1)
double clayton_log_s(double lu, double lw, double theta) {
    const double a = -theta * lu;
    const double b = -theta * lw;
    const double m = std::max(a, b);
    return m + std::log(std::exp(a - m) + std::exp(b - m) - std::exp(-m));
}

double clayton_h(double w, double u, double theta) {
    const double lu = std::log(u);
    const double lw = std::log(w);
    return std::exp((-theta - 1.0) * lu - (1.0 + 1.0 / theta) * clayton_log_s(lu, lw, theta));
}

double clayton_hinv(double v, double u, double theta) {
    const double a = std::expm1(-theta / (1.0 + theta) * std::log(v));
    const double l = std::log(a) - theta * std::log(u);
    return std::exp(-log1p_exp(l) / theta);
}

double clayton_density(double u, double v, double theta) {
    const double lu = std::log(u);
    const double lv = std::log(v);
    return (1.0 + theta) *
           std::exp((-theta - 1.0) * (lu + lv) - (2.0 + 1.0 / theta) * clayton_log_s(lu, lv, theta));
}

// ---- Frank, theta > 0; negative theta handled by reflection -----------------

// Denominator scaled by exp(theta * min(u, w)) so that every exponent is <= 0.
double frank_scaled_denominator(double u, double w, double theta, double m) {
    return std::exp(-theta * (u - m)) + std::exp(-theta * (w - m)) - std::exp(-theta * (u + w - m)) -
           std::exp(-theta * (1.0 - m));
}

double frank_h_pos(double w, double u, double theta) {
    const double m = std::min(u, w);
    const double num = std::exp(-theta * (u - m)) * -std::expm1(-theta * w);
    return num / frank_scaled_denominator(u, w, theta, m);
}

double frank_hinv_pos(double v, double u, double theta) {
    const double t = std::log1p(-v) - std::log(v) - theta * u;
    return -(log_add_exp(t, -theta) - log1p_exp(t)) / theta;
}

double frank_density_pos(double u, double v, double theta) {
    const double m = std::min(u, v);
    const double d = frank_scaled_denominator(u, v, theta, m);
    return theta * -std::expm1(-theta) * std::exp(-theta * std::abs(u - v)) / (d * d);
}

bool frank_is_independent(double theta) { return std::abs(theta) < kFrankIndependenceThreshold; }

double frank_h(double w, double u, double theta) {
    if (frank_is_independent(theta)) return w;
    if (theta > 0.0) return frank_h_pos(w, u, theta);
    return 1.0 - frank_h_pos(1.0 - w, u, -theta);
}

double frank_hinv(double v, double u, double theta) {
    if (frank_is_independent(theta)) return v;
    if (theta > 0.0) return frank_hinv_pos(v, u, theta);
    return 1.0 - frank_hinv_pos(1.0 - v, u, -theta);
}

double frank_density(double u, double v, double theta) {
    if (frank_is_independent(theta)) return 1.0;
    if (theta > 0.0) return frank_density_pos(u, v, theta);
    return frank_density_pos(u, 1.0 - v, -theta);
}

// ---- BVN --------------------------------------------------------------------

double bvn_h(double w, double u, double theta) {
    const double x = norm_quantile(u);
    const double y = norm_quantile(w);
    if (std::abs(theta) >= 1.0) return y >= theta * x ? 1.0 : 0.0;
    return norm_cdf((y - theta * x) / std::sqrt(1.0 - theta * theta));
}

double bvn_hinv(double v, double u, double theta) {
    return norm_cdf(std::sqrt(1.0 - theta * theta) * norm_quantile(v) + theta * norm_quantile(u));
}

double bvn_density(double u, double v, double theta) {
    const double x = norm_quantile(u);
    const double y = norm_quantile(v);
    const double r = 1.0 - theta * theta;
    return std::exp(-(theta * theta * (x * x + y * y) - 2.0 * theta * x * y) / (2.0 * r)) / std::sqrt(r);
}

// ---- dispatch -----------------------------------------------------------------

double h_unchecked(const CopulaSpec& s, double w, double u) {
    switch (s.family) {
        case CopulaFamily::Independence: return w;
        case CopulaFamily::BVN: return bvn_h(w, u, s.theta);
        case CopulaFamily::Frank: return frank_h(w, u, s.theta);
        case CopulaFamily::Clayton0: return clayton_h(w, u, s.theta);
        case CopulaFamily::Clayton90: return clayton_h(w, 1.0 - u, s.theta);
        case CopulaFamily::Clayton180: return 1.0 - clayton_h(1.0 - w, 1.0 - u, s.theta);
        case CopulaFamily::Clayton270: return 1.0 - clayton_h(1.0 - w, u, s.theta);
    }
    return kNaN;
}

double hinv_unchecked(const CopulaSpec& s, double v, double u) {
    switch (s.family) {
        case CopulaFamily::Independence: return v;
        case CopulaFamily::BVN: return bvn_hinv(v, u, s.theta);
        case CopulaFamily::Frank: return frank_hinv(v, u, s.theta);
        case CopulaFamily::Clayton0: return clayton_hinv(v, u, s.theta);
        case CopulaFamily::Clayton90: return clayton_hinv(v, 1.0 - u, s.theta);
        case CopulaFamily::Clayton180: return 1.0 - clayton_hinv(1.0 - v, 1.0 - u, s.theta);
        case CopulaFamily::Clayton270: return 1.0 - clayton_hinv(1.0 - v, u, s.theta);
    }
    return kNaN;
}

double density_unchecked(const CopulaSpec& s, double u, double v) {
    switch (s.family) {
        case CopulaFamily::Independence: return 1.0;
        case CopulaFamily::BVN: return bvn_density(u, v, s.theta);
        case CopulaFamily::Frank: return frank_density(u, v, s.theta);
        case CopulaFamily::Clayton0: return clayton_density(u, v, s.theta);
        case CopulaFamily::Clayton90: return clayton_density(1.0 - u, v, s.theta);
        case CopulaFamily::Clayton180: return clayton_density(1.0 - u, 1.0 - v, s.theta);
        case CopulaFamily::Clayton270: return clayton_density(u, 1.0 - v, s.theta);
    }
    return kNaN;
}

// ---- Kendall tau --------------------------------------------------------------

// tau = sum_k 4 B_2k theta^(2k-1) / ((2k+1) (2k)!), valid for |theta| < 2 pi.
double frank_tau_series(double theta) {
    static constexpr std::array<double, 10> bernoulli = {
        1.0 / 6.0,       -1.0 / 30.0,  1.0 / 42.0,          -1.0 / 30.0,      5.0 / 66.0,
        -691.0 / 2730.0, 7.0 / 6.0,    -3617.0 / 510.0,     43867.0 / 798.0,  -174611.0 / 330.0};
    const double t2 = theta * theta;
    double power = theta;  // theta^(2k-1)
    double factorial = 2.0;  // (2k)!
    double sum = 0.0;
    for (std::size_t k = 1; k <= bernoulli.size(); ++k) {
        sum += 4.0 * bernoulli[k - 1] * power / ((2.0 * k + 1.0) * factorial);
        power *= t2;
        factorial *= (2.0 * k + 1.0) * (2.0 * k + 2.0);
    }
    return sum;
}

double frank_tau(double theta) {
    if (theta < 0.0) return -frank_tau(-theta);
    if (theta < 1.0) return frank_tau_series(theta);
    return 1.0 - 4.0 / theta + 4.0 / (theta * theta) * debye_integral(theta);
}

// 50-point rule on [a, b].
double gl50(double a, double b) {
    static const LegendreRule rule = gauss_legendre(50);
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double t = mid + half * rule.nodes[i];
        s += rule.weights[i] * t / std::expm1(t);
    }
    return half * s;
}

double adaptive_gl50(double a, double b, double whole, int depth) {
    const double m = 0.5 * (a + b);
    const double left = gl50(a, m);
    const double right = gl50(m, b);
    if (depth >= 12 || std::abs(left + right - whole) <= 1e-13 * std::abs(left + right)) return left + right;
    return adaptive_gl50(a, m, left, depth + 1) + adaptive_gl50(m, b, right, depth + 1);
}

}  // namespace

std::string_view family_name(CopulaFamily family) {
    switch (family) {
        case CopulaFamily::Independence: return "Independence";
        case CopulaFamily::BVN: return "BVN";
        case CopulaFamily::Frank: return "Frank";
        case CopulaFamily::Clayton0: return "Clayton0";
        case CopulaFamily::Clayton90: return "Clayton90";
        case CopulaFamily::Clayton180: return "Clayton180";
        case CopulaFamily::Clayton270: return "Clayton270";
    }
    return "?";
}

CopulaFamily parse_family(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "independence" || lower == "indep") return CopulaFamily::Independence;
    if (lower == "bvn" || lower == "gaussian" || lower == "normal") return CopulaFamily::BVN;
    if (lower == "frank") return CopulaFamily::Frank;
    if (lower == "clayton" || lower == "clayton0") return CopulaFamily::Clayton0;
    if (lower == "clayton90") return CopulaFamily::Clayton90;
    if (lower == "clayton180") return CopulaFamily::Clayton180;
    if (lower == "clayton270") return CopulaFamily::Clayton270;
    throw std::invalid_argument("unknown copula family '" + std::string(name) + "'");
}

bool is_clayton(CopulaFamily family) {
    return family == CopulaFamily::Clayton0 || family == CopulaFamily::Clayton90 ||
           family == CopulaFamily::Clayton180 || family == CopulaFamily::Clayton270;
}

TauInterval tau_interval(CopulaFamily family) {
    switch (family) {
        case CopulaFamily::Independence: return {0.0, 0.0};
        case CopulaFamily::BVN:
        case CopulaFamily::Frank: return {-1.0, 1.0};
        case CopulaFamily::Clayton0:
        case CopulaFamily::Clayton180: return {0.0, 1.0};
        case CopulaFamily::Clayton90:
        case CopulaFamily::Clayton270: return {-1.0, 0.0};
    }
    return {0.0, 0.0};
}

void validate(const CopulaSpec& spec) {
    const double t = spec.theta;
    switch (spec.family) {
        case CopulaFamily::Independence: return;
        case CopulaFamily::BVN:
            if (!(t >= -1.0 && t <= 1.0)) domain_fail("BVN theta must lie in [-1,1]");
            return;
        case CopulaFamily::Frank:
            if (!std::isfinite(t)) domain_fail("Frank theta must be finite");
            return;
        default:
            if (!(t > 0.0 && std::isfinite(t))) domain_fail("Clayton theta must lie in (0,inf)");
            return;
    }
}

double ccdf(const CopulaSpec& spec, double w, double u) {
    check_unit(w, "w");
    check_unit(u, "u");
    validate(spec);
    return h_unchecked(spec, w, u);
}

double ccdf_inv(const CopulaSpec& spec, double v, double u) {
    check_unit(v, "v");
    check_unit(u, "u");
    validate(spec);
    return hinv_unchecked(spec, v, u);
}

double density(const CopulaSpec& spec, double u, double v) {
    check_unit(u, "u");
    check_unit(v, "v");
    validate(spec);
    if (spec.family == CopulaFamily::BVN && std::abs(spec.theta) >= 1.0)
        domain_fail("BVN density undefined at |theta| = 1");
    return density_unchecked(spec, u, v);
}

double ccdf_clamped(const CopulaSpec& spec, double w, double u) {
    return clamp_unit(h_unchecked(spec, clamp_unit(w), clamp_unit(u)));
}

double ccdf_inv_clamped(const CopulaSpec& spec, double v, double u) {
    return clamp_unit(hinv_unchecked(spec, clamp_unit(v), clamp_unit(u)));
}

double debye_integral(double x) {
    if (x == 0.0) return 0.0;
    if (x < 0.0) return -adaptive_gl50(x, 0.0, gl50(x, 0.0), 0);
    return adaptive_gl50(0.0, x, gl50(0.0, x), 0);
}

double theta_to_tau(CopulaFamily family, double theta) {
    validate({family, theta});
    switch (family) {
        case CopulaFamily::Independence: return 0.0;
        case CopulaFamily::BVN: return 2.0 / std::numbers::pi * std::asin(theta);
        case CopulaFamily::Frank: return frank_tau(theta);
        case CopulaFamily::Clayton0:
        case CopulaFamily::Clayton180: return theta / (theta + 2.0);
        case CopulaFamily::Clayton90:
        case CopulaFamily::Clayton270: return -theta / (theta + 2.0);
    }
    return kNaN;
}

double tau_to_theta(CopulaFamily family, double tau) {
    if (!(tau > -1.0 && tau < 1.0)) domain_fail("Kendall tau must lie in (-1,1)");
    switch (family) {
        case CopulaFamily::Independence:
            if (tau != 0.0) domain_fail("Independence admits only tau = 0");
            return 0.0;
        case CopulaFamily::BVN: return std::sin(std::numbers::pi / 2.0 * tau);
        case CopulaFamily::Frank: {
            if (tau == 0.0) return 0.0;
            const double target = std::abs(tau);
            double hi = 1.0;
            while (frank_tau(hi) < target) {
                hi *= 2.0;
                if (hi > 1e7) domain_fail("Frank tau too close to 1");
            }
            auto f = [target](double t) { return frank_tau(t) - target; };
            boost::math::tools::eps_tolerance<double> tol(std::numeric_limits<double>::digits - 1);
            std::uintmax_t max_iter = 200;
            const auto [a, b] = boost::math::tools::toms748_solve(f, 0.0, hi, -target, frank_tau(hi) - target,
                                                                  tol, max_iter);
            const double theta = 0.5 * (a + b);
            return tau > 0.0 ? theta : -theta;
        }
        case CopulaFamily::Clayton0:
        case CopulaFamily::Clayton180:
            if (!(tau > 0.0)) domain_fail("Clayton0/180 require tau > 0");
            return 2.0 * tau / (1.0 - tau);
        case CopulaFamily::Clayton90:
        case CopulaFamily::Clayton270:
            if (!(tau < 0.0)) domain_fail("Clayton90/270 require tau < 0");
            return -2.0 * tau / (1.0 + tau);
    }
    return kNaN;
}

}  // namespace trivine
