#pragma once

// Bivariate copula building blocks for the vine.
//
// Every family is parametrized by its natural parameter theta. The
// conditional cdf C(w|u) = dC(u, w)/du always conditions on the first
// argument, so for rotated Clayton copulas the argument order matters:
//
//   Clayton90:  C(u, w) = w - C0(1 - u, w)      (negative dependence)
//   Clayton180: C(u, w) = u + w - 1 + C0(1 - u, 1 - w)
//   Clayton270: C(u, w) = u - C0(u, 1 - w)      (negative dependence)
//
// The public functions reject boundary arguments. The *_clamped variants
// clamp into [1e-12, 1 - 1e-12] and skip validation; they are meant for
// the likelihood hot path only.

#include <string>
#include <string_view>

namespace trivine {

enum class CopulaFamily { Independence, BVN, Frank, Clayton0, Clayton90, Clayton180, Clayton270 };

struct CopulaSpec {
    CopulaFamily family = CopulaFamily::Independence;
    double theta = 0.0;
};

std::string_view family_name(CopulaFamily family);

// Accepts the names produced by family_name, case-insensitively, plus
// "Clayton" for Clayton0 and "Indep" for Independence.
CopulaFamily parse_family(std::string_view name);

bool is_clayton(CopulaFamily family);

// Admissible Kendall tau interval (open). Independence yields (0, 0).
struct TauInterval {
    double lo;
    double hi;
};
TauInterval tau_interval(CopulaFamily family);

// Throws std::domain_error when theta is outside the family range.
void validate(const CopulaSpec& spec);

double ccdf(const CopulaSpec& spec, double w, double u);
double ccdf_inv(const CopulaSpec& spec, double v, double u);
double density(const CopulaSpec& spec, double u, double v);

double ccdf_clamped(const CopulaSpec& spec, double w, double u);
double ccdf_inv_clamped(const CopulaSpec& spec, double v, double u);

double tau_to_theta(CopulaFamily family, double tau);
double theta_to_tau(CopulaFamily family, double theta);

// Integral of t / (e^t - 1) over [0, x] (x may be negative).
double debye_integral(double x);

// Frank parameters below this magnitude are treated as independence.
inline constexpr double kFrankIndependenceThreshold = 1e-5;

}  // namespace trivine
