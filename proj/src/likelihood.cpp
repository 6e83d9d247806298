#include "trivine/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "trivine/special.hpp"

namespace trivine {

LikelihoodEvaluator::LikelihoodEvaluator(std::vector<StudyRecord> data, ModelSpec spec, QuadGrid grid)
    : data_(std::move(data)), spec_(spec), grid_(std::move(grid)) {
    if (grid_.nq() < 1) throw std::invalid_argument("likelihood: empty quadrature grid");
    for (const auto& s : data_) validate(s);
    log_w_.reserve(grid_.nq());
    for (double w : grid_.weights) log_w_.push_back(std::log(w));
    log_choose_.reserve(data_.size());
    for (const auto& s : data_) {
        double c = 0.0;
        for (int j = 0; j < 3; ++j) c += log_choose(s.n[j], s.y[j]);
        log_choose_.push_back(c);
    }
    const auto nq = static_cast<std::size_t>(grid_.nq());
    scratch_a_.resize(nq);
    scratch_b_.resize(nq);
    scratch_c_.resize(nq);
}

void LikelihoodEvaluator::prepare(const ParamVector& params) {
    validate(spec_, params);
    const VineModel model = realize(spec_, params);
    const auto vars = spec_.perm.coordinates();
    const auto& u = grid_.nodes;
    const std::size_t nq = u.size();
    const CopulaSpec& edge_a = model.copula.edges[0];
    const CopulaSpec& edge_b = model.copula.edges[1];
    const CopulaSpec& edge_c = model.copula.edges[2];
    const bool truncated = spec_.truncated();

    auto margin_key = [&](int var) { return std::vector<double>{params.pi[var], params.disp[var]}; };

    // Root coordinate: the grid itself.
    {
        const auto key = margin_key(vars[0]);
        if (!root_.valid || root_.key != key) {
            root_.valid = false;
            const LatentQuantile q(model.margins[vars[0]]);
            root_.latent.resize(nq);
            for (std::size_t i = 0; i < nq; ++i) root_.latent[i] = q(u[i]);
            root_.key = key;
            root_.valid = true;
        }
    }

    // Leaf 1: v = C_a^{-1}(u_q2 | u_q1).
    {
        std::vector<double> key{edge_a.theta};
        const bool uniforms_stale = !leaf1_.valid || leaf1_.key.empty() || leaf1_.key[0] != edge_a.theta;
        if (uniforms_stale) {
            leaf1_.valid = false;
            leaf1_.uniforms.resize(nq * nq);
            for (std::size_t q1 = 0; q1 < nq; ++q1)
                for (std::size_t q2 = 0; q2 < nq; ++q2)
                    leaf1_.uniforms[q1 * nq + q2] = ccdf_inv_clamped(edge_a, u[q2], u[q1]);
        }
        const auto mk = margin_key(vars[1]);
        key.insert(key.end(), mk.begin(), mk.end());
        if (uniforms_stale || leaf1_.key != key) {
            leaf1_.valid = false;
            const LatentQuantile q(model.margins[vars[1]]);
            leaf1_.latent.resize(nq * nq);
            for (std::size_t k = 0; k < nq * nq; ++k) leaf1_.latent[k] = q(leaf1_.uniforms[k]);
            leaf1_.key = key;
            leaf1_.valid = true;
        }
    }

    // Leaf 2: v = C_b^{-1}(C_c^{-1}(u_q3 | u_q2) | u_q1).
    {
        std::vector<double> key{edge_b.theta, edge_c.theta};
        const bool uniforms_stale = !leaf2_.valid || leaf2_.key.size() < 2 || leaf2_.key[0] != edge_b.theta ||
                                    leaf2_.key[1] != edge_c.theta;
        if (uniforms_stale) {
            leaf2_.valid = false;
            if (truncated) {
                leaf2_.uniforms.resize(nq * nq);
                for (std::size_t q1 = 0; q1 < nq; ++q1)
                    for (std::size_t q3 = 0; q3 < nq; ++q3)
                        leaf2_.uniforms[q1 * nq + q3] = ccdf_inv_clamped(edge_b, u[q3], u[q1]);
            } else {
                if (cond_key_.empty() || cond_key_[0] != edge_c.theta) {
                    cond_.resize(nq * nq);
                    for (std::size_t q2 = 0; q2 < nq; ++q2)
                        for (std::size_t q3 = 0; q3 < nq; ++q3)
                            cond_[q2 * nq + q3] = ccdf_inv_clamped(edge_c, u[q3], u[q2]);
                    cond_key_ = {edge_c.theta};
                }
                leaf2_.uniforms.resize(nq * nq * nq);
                for (std::size_t q1 = 0; q1 < nq; ++q1)
                    for (std::size_t k = 0; k < nq * nq; ++k)
                        leaf2_.uniforms[q1 * nq * nq + k] = ccdf_inv_clamped(edge_b, cond_[k], u[q1]);
            }
        }
        const auto mk = margin_key(vars[2]);
        key.insert(key.end(), mk.begin(), mk.end());
        if (uniforms_stale || leaf2_.key != key) {
            leaf2_.valid = false;
            const LatentQuantile q(model.margins[vars[2]]);
            leaf2_.latent.resize(leaf2_.uniforms.size());
            for (std::size_t k = 0; k < leaf2_.uniforms.size(); ++k) leaf2_.latent[k] = q(leaf2_.uniforms[k]);
            leaf2_.key = key;
            leaf2_.valid = true;
        }
    }
}

double LikelihoodEvaluator::study_term(std::size_t i) {
    const StudyRecord& s = data_[i];
    if (s.n[0] == 0 && s.n[1] == 0 && s.n[2] == 0) return 0.0;
    const auto vars = spec_.perm.coordinates();
    const int y0 = s.y[vars[0]], n0 = s.n[vars[0]];
    const int y1 = s.y[vars[1]], n1 = s.n[vars[1]];
    const int y2 = s.y[vars[2]], n2 = s.n[vars[2]];
    const std::size_t nq = log_w_.size();
    auto& outer = scratch_a_;
    auto& middle = scratch_b_;
    auto& inner = scratch_c_;

    for (std::size_t q1 = 0; q1 < nq; ++q1) {
        const double head = log_w_[q1] + binom_log_kernel(y0, n0, root_.latent[q1]);
        for (std::size_t q2 = 0; q2 < nq; ++q2)
            middle[q2] = log_w_[q2] + binom_log_kernel(y1, n1, leaf1_.latent[q1 * nq + q2]);
        if (spec_.truncated()) {
            for (std::size_t q3 = 0; q3 < nq; ++q3)
                inner[q3] = log_w_[q3] + binom_log_kernel(y2, n2, leaf2_.latent[q1 * nq + q3]);
            outer[q1] = head + log_sum_exp(middle) + log_sum_exp(inner);
        } else {
            const LogProportion* block = leaf2_.latent.data() + q1 * nq * nq;
            for (std::size_t q2 = 0; q2 < nq; ++q2) {
                for (std::size_t q3 = 0; q3 < nq; ++q3)
                    inner[q3] = log_w_[q3] + binom_log_kernel(y2, n2, block[q2 * nq + q3]);
                middle[q2] += log_sum_exp(inner);
            }
            outer[q1] = head + log_sum_exp(middle);
        }
    }
    return log_sum_exp(outer) + log_choose_[i];
}

std::vector<double> LikelihoodEvaluator::study_log_liks(const ParamVector& params) {
    prepare(params);
    std::vector<double> out(data_.size());
    for (std::size_t i = 0; i < data_.size(); ++i) out[i] = study_term(i);
    return out;
}

double LikelihoodEvaluator::log_lik(const ParamVector& params) {
    // Summed in sorted order so the total does not depend on study order.
    std::vector<double> terms = study_log_liks(params);
    std::sort(terms.begin(), terms.end());
    double total = 0.0;
    for (double t : terms) total += t;
    return total;
}

double LikelihoodEvaluator::nll_packed(std::span<const double> packed) {
    try {
        const double ll = log_lik(unpack(spec_, packed));
        return std::isfinite(ll) ? -ll : kInf;
    } catch (const std::exception&) {
        return kInf;
    }
}

double study_log_lik(const StudyRecord& study, const ModelSpec& spec, const ParamVector& params,
                     const QuadGrid& grid) {
    LikelihoodEvaluator eval({study}, spec, grid);
    return eval.log_lik(params);
}

double joint_nll(std::span<const StudyRecord> data, const ModelSpec& spec, const ParamVector& params,
                 const QuadGrid& grid) {
    if (data.empty()) throw std::invalid_argument("joint_nll: no studies");
    LikelihoodEvaluator eval(std::vector<StudyRecord>(data.begin(), data.end()), spec, grid);
    return -eval.log_lik(params);
}

}  // namespace trivine
