#pragma once

// Random-effect margins and the binomial within-study model.

#include <array>
#include <string_view>

namespace trivine {

enum class MarginKind { NormalLogit, Beta };

std::string_view margin_name(MarginKind kind);
MarginKind parse_margin(std::string_view name);

// pi is the meta-analytic mean. disp is sigma (logit-scale sd) for
// NormalLogit and gamma = 1 / (alpha + beta + 1) for Beta.
struct MarginSpec {
    MarginKind kind = MarginKind::NormalLogit;
    double pi = 0.5;
    double disp = 1.0;
};

void validate(const MarginSpec& margin);

// One study's counts. Index 0: true positives out of diseased, 1: true
// negatives out of non-diseased, 2: diseased out of study size.
struct StudyRecord {
    std::array<int, 3> y{};
    std::array<int, 3> n{};

    static StudyRecord from_2x2(int tp, int fp, int fn, int tn);
};

void validate(const StudyRecord& study);

struct BetaShapes {
    double alpha;
    double beta;
};

BetaShapes beta_shapes(double pi, double gamma);

struct BetaMeanDisp {
    double pi;
    double gamma;
};

BetaMeanDisp beta_mean_disp(double alpha, double beta);

// Regularized incomplete beta I_x(a, b).
double beta_cdf(double a, double b, double x);

// Inverse of beta_cdf in x.
double beta_quantile(double a, double b, double p);

// Latent proportion for the u-quantile of the random-effect margin.
double latent_quantile(const MarginSpec& margin, double u);

// Latent proportion x on the log scale: log(x) and log(1 - x), each
// computed without cancellation. No validation; u is clamped.
struct LogProportion {
    double log_x;
    double log_1mx;
};

// Precomputed per-margin state for repeated quantile evaluation.
class LatentQuantile {
  public:
    explicit LatentQuantile(const MarginSpec& margin);
    LogProportion operator()(double u) const;

  private:
    MarginKind kind_;
    double location_ = 0.0;  // logit(pi)
    double scale_ = 1.0;     // sigma
    double a_ = 1.0, b_ = 1.0, lbeta_ = 0.0;
};

double binom_log_pmf(int y, int n, double p);

// log g(y; n, x) from precomputed log(x) and log(1 - x), without the
// binomial coefficient.
inline double binom_log_kernel(int y, int n, const LogProportion& lp) {
    double s = 0.0;
    if (y > 0) s += y * lp.log_x;
    if (n - y > 0) s += (n - y) * lp.log_1mx;
    return s;
}

}  // namespace trivine
