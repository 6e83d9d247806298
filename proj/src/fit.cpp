#include "trivine/fit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "trivine/likelihood.hpp"
#include "trivine/optimize.hpp"
#include "trivine/quadrature.hpp"
#include "trivine/special.hpp"

namespace trivine {

std::string_view status_name(FitStatus status) {
    switch (status) {
        case FitStatus::Converged: return "converged";
        case FitStatus::NotConverged: return "not_converged";
        case FitStatus::Failed: return "failed";
    }
    return "unknown";
}

double aic(double loglik, int n_params) { return -2.0 * loglik + 2.0 * n_params; }

double aic(const FitResult& fit) { return aic(fit.loglik, fit.n_params); }

namespace {

std::vector<double> tau_candidates(CopulaFamily f) {
    const auto [lo, hi] = tau_interval(f);
    std::vector<double> out;
    const double neutral = hi <= 0.0 ? -0.2 : (lo >= 0.0 ? 0.2 : 0.0);
    for (double t : {neutral, -0.5, 0.5})
        if (t > lo && t < hi && std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
    return out;
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double var_of(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
}

}  // namespace

std::vector<ParamVector> default_starts(const std::vector<StudyRecord>& data, const ModelSpec& spec, int starts) {
    if (data.empty()) throw std::invalid_argument("default_starts: no studies");
    if (starts < 1) throw std::invalid_argument("default_starts: need at least one start");
    ParamVector base;
    for (int j = 0; j < 3; ++j) {
        std::vector<double> p;
        p.reserve(data.size());
        for (const auto& s : data) p.push_back((s.y[j] + 0.5) / (s.n[j] + 1.0));
        const double pi = mean_of(p);
        base.pi[j] = pi;
        if (spec.margin == MarginKind::NormalLogit) {
            std::vector<double> lp;
            for (double x : p) lp.push_back(logit(x));
            base.disp[j] = std::max(0.1, std::sqrt(var_of(lp)));
        } else {
            base.disp[j] = std::clamp(var_of(p) / (pi * (1.0 - pi)), 0.01, 0.5);
        }
    }
    std::array<std::vector<double>, 3> cand;
    for (int e = 0; e < 3; ++e)
        cand[e] = spec.families[e] == CopulaFamily::Independence ? std::vector<double>{0.0}
                                                                 : tau_candidates(spec.families[e]);
    std::vector<ParamVector> out;
    for (int k = 0; k < starts; ++k) {
        ParamVector p = base;
        for (int e = 0; e < 3; ++e) p.tau[e] = cand[e][std::min<std::size_t>(k, cand[e].size() - 1)];
        const bool dup = std::any_of(out.begin(), out.end(), [&](const ParamVector& q) { return q.tau == p.tau; });
        if (!dup) out.push_back(p);
    }
    return out;
}

FitResult fit(const std::vector<StudyRecord>& data, const ModelSpec& spec, const FitOptions& options) {
    if (data.empty()) throw std::invalid_argument("fit: no studies");
    if (options.nq < 1) throw std::invalid_argument("fit: nq must be positive");
    if (options.starts < 1 && !options.start) throw std::invalid_argument("fit: need at least one start");

    FitResult res;
    res.spec = spec;
    res.n_params = n_params(spec);

    LikelihoodEvaluator eval(data, spec, gauss_legendre_01(options.nq));
    const Objective nll = [&](std::span<const double> x) { return eval.nll_packed(x); };
    const OptimOptions oo{options.rel_tol, options.grad_tol, options.max_iter};

    const std::vector<ParamVector> starts =
        options.start ? std::vector<ParamVector>{*options.start} : default_starts(data, spec, options.starts);

    std::optional<OptimResult> best;
    std::string last_error;
    for (const auto& s : starts) {
        std::vector<double> x0;
        try {
            x0 = pack(spec, s);
        } catch (const std::exception& e) {
            last_error = e.what();
            continue;
        }
        OptimResult r = bfgs(nll, std::move(x0), oo);
        ++res.starts_run;
        if (!std::isfinite(r.f)) {
            last_error = r.message;
            continue;
        }
        const bool better = !best || (r.converged && !best->converged) ||
                            (r.converged == best->converged && r.f < best->f);
        if (better) best = std::move(r);
    }
    if (!best) {
        res.status = FitStatus::Failed;
        res.message = last_error.empty() ? "no start could be evaluated" : last_error;
        res.loglik = kNaN;
        res.aic = kNaN;
        res.se = {{kNaN, kNaN, kNaN}, {kNaN, kNaN, kNaN}, {kNaN, kNaN, kNaN}};
        return res;
    }

    res.packed = best->x;
    res.iterations = best->iterations;
    res.converged = best->converged;
    res.status = best->converged ? FitStatus::Converged : FitStatus::NotConverged;
    res.message = best->message;
    res.grad_max = 0.0;
    for (double g : best->grad) res.grad_max = std::max(res.grad_max, std::abs(g));

    res.estimates = unpack(spec, res.packed);
    const VineModel model = realize(spec, res.estimates);
    for (int e = 0; e < 3; ++e) res.theta[e] = model.copula.edges[e].theta;
    res.per_study_loglik = eval.study_log_liks(res.estimates);
    res.loglik = eval.log_lik(res.estimates);
    res.aic = aic(res.loglik, res.n_params);
    for (int e = 0; e < 3; ++e)
        res.boundary[e] = spec.families[e] != CopulaFamily::Independence &&
                          std::abs(tau_position(spec.families[e], res.estimates.tau[e])) > 0.95;

    // Standard errors from the inverse Hessian, delta method to the natural scale.
    res.se = {{kNaN, kNaN, kNaN}, {kNaN, kNaN, kNaN}, {kNaN, kNaN, kNaN}};
    for (int e = 0; e < 3; ++e)
        if (spec.families[e] == CopulaFamily::Independence) res.se.tau[e] = 0.0;
    res.hessian = numeric_hessian(nll, res.packed);
    if (res.hessian.allFinite()) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(res.hessian, Eigen::EigenvaluesOnly);
        res.hessian_min_eigen = es.eigenvalues().minCoeff();
        Eigen::LLT<Eigen::MatrixXd> llt(res.hessian);
        if (llt.info() == Eigen::Success) {
            const Eigen::MatrixXd cov = llt.solve(Eigen::MatrixXd::Identity(res.hessian.rows(), res.hessian.cols()));
            const std::vector<double> jac = unpack_jacobian(spec, res.packed);
            std::vector<double> se(jac.size());
            bool ok = true;
            for (std::size_t i = 0; i < jac.size(); ++i) {
                const double v = cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i));
                ok = ok && v > 0.0 && std::isfinite(v);
                se[i] = std::sqrt(std::max(v, 0.0)) * std::abs(jac[i]);
            }
            if (ok) {
                res.se_available = true;
                for (int j = 0; j < 3; ++j) {
                    res.se.pi[j] = se[j];
                    res.se.disp[j] = se[3 + j];
                }
                std::size_t k = 6;
                for (int e = 0; e < 3; ++e)
                    if (spec.families[e] != CopulaFamily::Independence) res.se.tau[e] = se[k++];
            }
        }
    } else {
        res.hessian_min_eigen = kNaN;
    }
    return res;
}

}  // namespace trivine
