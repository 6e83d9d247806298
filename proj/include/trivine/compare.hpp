#pragma once

// Model comparison: Vuong tests and the model-space sweep.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "trivine/fit.hpp"

namespace trivine {

// Two-sided standard-normal tail probability of z.
double two_sided_p(double z);

// D_i = loglik2_i - loglik1_i. sd uses the N - 1 divisor; z0 and p are
// empty when sd is zero (or N < 2). With adjusted, mean_d is penalized by
// (k2 - k1) / N before forming z0.
struct VuongResult {
    int n = 0;
    bool adjusted = false;
    double mean_d = 0.0;
    std::optional<double> sd;
    std::optional<double> z0;
    std::optional<double> p;
};

VuongResult vuong(const std::vector<double>& loglik1, int k1, const std::vector<double>& loglik2, int k2,
                  bool adjusted);
VuongResult vuong(const FitResult& fit1, const FitResult& fit2, bool adjusted);

// Every margin x permutation x families combination, in that nesting
// order. With truncate, the conditional edge becomes Independence.
std::vector<ModelSpec> enumerate_specs(const std::vector<MarginKind>& margins,
                                       const std::vector<std::array<CopulaFamily, 3>>& families,
                                       const std::vector<Permutation>& perms, bool truncate);

struct RankedFit {
    std::size_t index = 0;  // position in the enumerated spec list
    FitResult fit;
};

// Fits every spec (threads > 1 runs fits concurrently) and ranks:
// converged by AIC, then fewer parameters, then spec index; non-converged
// fits next and failed fits last, each by spec index.
std::vector<RankedFit> sweep(const std::vector<StudyRecord>& data, const std::vector<ModelSpec>& specs,
                             const FitOptions& options, int threads = 1);

// Runs job(i) for i in [0, count) on up to `threads` workers. The first
// exception thrown by any job is rethrown after all workers finish.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& job);

}  // namespace trivine
