#pragma once

// Simulation harness: synthetic meta-analyses from a known vine model and
// small-sample summaries of the estimators.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "trivine/fit.hpp"
#include "trivine/rng.hpp"

namespace trivine {

// lag + Gamma(shape, rate), rounded half away from zero.
struct StudySizeDist {
    double shape = 1.2;
    double rate = 0.01;
    double lag = 30.0;
};

void validate(const StudySizeDist& dist);

// Consumes one uniform.
int draw_study_size(const StudySizeDist& dist, CounterRng& rng);

struct SimScenario {
    int n_studies = 20;
    ModelSpec true_spec;
    ParamVector true_params;
    int replications = 100;
    std::vector<ModelSpec> fit_specs;
    std::uint64_t seed = 0;
    StudySizeDist size;
    int nq = 15;
    int starts = 1;
};

void validate(const SimScenario& scenario);

// Replicate r draws from CounterRng(seed, r); each study uses four
// uniforms: size, then the three vine uniforms.
std::vector<StudyRecord> generate_dataset(const SimScenario& scenario, std::uint64_t replicate);

// Converts latent proportions (variable order) into one study's counts.
StudyRecord counts_from_latent(int n, const std::array<double, 3>& x);

// Summary of one parameter over the converged replicates. Values are on
// the natural scale; reports multiply by 100.
struct SimCell {
    std::string parameter;
    double truth = 0.0;
    int count = 0;
    double bias = 0.0;
    std::optional<double> sd;      // B divisor; empty when count < 2
    double rmse = 0.0;
    std::optional<double> theo_sd;  // sqrt of mean Hessian variance
};

struct SimFitSummary {
    ModelSpec spec;
    int attempted = 0;
    int converged = 0;
    int excluded = 0;
    std::vector<SimCell> cells;
};

struct SimReport {
    SimScenario scenario;
    std::vector<SimFitSummary> fits;
};

// Parameters summarized for a fitted spec: the means always, the
// dispersions when the margin kind matches the truth, and the taus when
// the permutation matches.
std::vector<std::string> summarized_parameters(const SimScenario& scenario, const ModelSpec& fit_spec);

SimReport run_study(const SimScenario& scenario, int threads = 1);

inline constexpr double kReportScale = 100.0;

}  // namespace trivine
