#pragma once

// Joint likelihood of the vine copula mixed model by Gauss-Legendre
// quadrature on the copula scale.
//
// For each parameter value the grid nodes are pushed through the vine
// transform once and then through the margin quantiles; the resulting
// latent proportions are shared by every study. Each study's likelihood
// is the weighted triple sum of binomial pmfs, accumulated in log space.

#include <span>
#include <vector>

#include "trivine/margins.hpp"
#include "trivine/model.hpp"
#include "trivine/quadrature.hpp"

namespace trivine {

// Stateful evaluator for one (data, spec, grid). Caches transformed
// tables keyed on the parameters they depend on, so that finite
// differences in one coordinate only recompute what changed. Not safe for
// concurrent use; create one per thread.
class LikelihoodEvaluator {
  public:
    LikelihoodEvaluator(std::vector<StudyRecord> data, ModelSpec spec, QuadGrid grid);

    const ModelSpec& spec() const { return spec_; }
    const std::vector<StudyRecord>& data() const { return data_; }
    std::size_t n_studies() const { return data_.size(); }

    // Validates params; throws std::domain_error on invalid input.
    std::vector<double> study_log_liks(const ParamVector& params);
    double log_lik(const ParamVector& params);

    // Negative log-likelihood at a packed point; +inf whenever the point
    // cannot be evaluated.
    double nll_packed(std::span<const double> packed);

  private:
    struct Table {
        std::vector<double> key;
        std::vector<double> uniforms;
        std::vector<LogProportion> latent;
        bool valid = false;
    };

    void prepare(const ParamVector& params);
    double study_term(std::size_t i);

    std::vector<StudyRecord> data_;
    ModelSpec spec_;
    QuadGrid grid_;
    std::vector<double> log_w_;
    std::vector<double> log_choose_;  // per study, sum over the three binomials

    Table root_;   // nq
    Table leaf1_;  // nq^2, index q1*nq + q2
    Table leaf2_;  // nq^2 (truncated, q1*nq + q3) or nq^3 (q1*nq^2 + q2*nq + q3)
    std::vector<double> cond_;  // level-2 inverse, index q2*nq + q3
    std::vector<double> cond_key_;

    std::vector<double> scratch_a_, scratch_b_, scratch_c_;
};

double study_log_lik(const StudyRecord& study, const ModelSpec& spec, const ParamVector& params,
                     const QuadGrid& grid);

double joint_nll(std::span<const StudyRecord> data, const ModelSpec& spec, const ParamVector& params,
                 const QuadGrid& grid);

}  // namespace trivine
