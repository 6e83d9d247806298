#include "trivine/simstudy.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

#include "trivine/compare.hpp"
#include "trivine/special.hpp"

namespace trivine {

void validate(const StudySizeDist& d) {
    if (!(d.shape > 0.0) || !(d.rate > 0.0) || !(d.lag >= 0.0) || !std::isfinite(d.shape) ||
        !std::isfinite(d.rate) || !std::isfinite(d.lag))
        throw std::invalid_argument("study size distribution needs shape > 0, rate > 0, lag >= 0");
}

int draw_study_size(const StudySizeDist& dist, CounterRng& rng) {
    const double g = boost::math::gamma_p_inv(dist.shape, rng.uniform()) / dist.rate;
    return static_cast<int>(std::round(dist.lag + g));
}

void validate(const SimScenario& s) {
    if (s.n_studies < 1) throw std::invalid_argument("scenario: n_studies must be at least 1");
    if (s.replications < 1) throw std::invalid_argument("scenario: replications must be at least 1");
    if (s.nq < 1) throw std::invalid_argument("scenario: nq must be positive");
    if (s.starts < 1) throw std::invalid_argument("scenario: starts must be at least 1");
    if (s.fit_specs.empty()) throw std::invalid_argument("scenario: no fit specifications");
    validate(s.size);
    validate(s.true_spec, s.true_params);
}

StudyRecord counts_from_latent(int n, const std::array<double, 3>& x) {
    StudyRecord r;
    const int n1 = static_cast<int>(std::round(n * x[2]));
    const int n2 = n - n1;
    r.n = {n1, n2, n};
    r.y = {static_cast<int>(std::round(n1 * x[0])), static_cast<int>(std::round(n2 * x[1])), n1};
    return r;
}

std::vector<StudyRecord> generate_dataset(const SimScenario& s, std::uint64_t replicate) {
    validate(s.size);
    const VineModel model = realize(s.true_spec, s.true_params);
    const std::array<LatentQuantile, 3> q{LatentQuantile(model.margins[0]), LatentQuantile(model.margins[1]),
                                          LatentQuantile(model.margins[2])};
    CounterRng rng(s.seed, replicate);
    std::vector<StudyRecord> out;
    out.reserve(s.n_studies);
    for (int i = 0; i < s.n_studies; ++i) {
        const int n = draw_study_size(s.size, rng);
        const double u1 = rng.uniform();
        const double u2 = rng.uniform();
        const double u3 = rng.uniform();
        const auto v = to_variable_order(model.copula.perm, vine_transform(u1, u2, u3, model.copula));
        std::array<double, 3> x{};
        for (int j = 0; j < 3; ++j) x[j] = std::exp(q[j](v[j]).log_x);
        out.push_back(counts_from_latent(n, x));
    }
    return out;
}

namespace {

struct ParamRef {
    std::string name;
    int group;  // 0 pi, 1 disp, 2 tau
    int index;
};

std::vector<ParamRef> parameter_refs(const SimScenario& s, const ModelSpec& f) {
    std::vector<ParamRef> out;
    const auto names = param_names(f);
    for (int j = 0; j < 3; ++j) out.push_back({names[j], 0, j});
    if (f.margin == s.true_spec.margin)
        for (int j = 0; j < 3; ++j) out.push_back({names[3 + j], 1, j});
    if (f.perm == s.true_spec.perm) {
        std::size_t k = 6;
        for (int e = 0; e < 3; ++e)
            if (f.families[e] != CopulaFamily::Independence) out.push_back({names[k++], 2, e});
    }
    return out;
}

double pick(const ParamVector& p, const ParamRef& r) {
    switch (r.group) {
        case 0: return p.pi[r.index];
        case 1: return p.disp[r.index];
        default: return p.tau[r.index];
    }
}

struct Replicate {
    bool converged = false;
    ParamVector est;
    ParamVector se;
    bool se_available = false;
};

}  // namespace

std::vector<std::string> summarized_parameters(const SimScenario& scenario, const ModelSpec& fit_spec) {
    std::vector<std::string> out;
    for (const auto& r : parameter_refs(scenario, fit_spec)) out.push_back(r.name);
    return out;
}

SimReport run_study(const SimScenario& s, int threads) {
    validate(s);
    const std::size_t B = static_cast<std::size_t>(s.replications);
    const std::size_t F = s.fit_specs.size();
    std::vector<Replicate> reps(B * F);
    FitOptions opt;
    opt.nq = s.nq;
    opt.starts = s.starts;

    parallel_for(B, threads, [&](std::size_t r) {
        const auto data = generate_dataset(s, r);
        for (std::size_t f = 0; f < F; ++f) {
            Replicate& out = reps[r * F + f];
            try {
                const FitResult res = fit(data, s.fit_specs[f], opt);
                out.converged = res.converged;
                out.est = res.estimates;
                out.se = res.se;
                out.se_available = res.se_available;
            } catch (const std::exception&) {
                out.converged = false;
            }
        }
    });

    SimReport report;
    report.scenario = s;
    int total_converged = 0;
    for (std::size_t f = 0; f < F; ++f) {
        SimFitSummary sum;
        sum.spec = s.fit_specs[f];
        sum.attempted = static_cast<int>(B);
        for (std::size_t r = 0; r < B; ++r)
            if (reps[r * F + f].converged) ++sum.converged;
        sum.excluded = sum.attempted - sum.converged;
        total_converged += sum.converged;

        for (const auto& ref : parameter_refs(s, sum.spec)) {
            SimCell cell;
            cell.parameter = ref.name;
            cell.truth = pick(s.true_params, ref);
            if (ref.group == 2 && s.true_spec.families[ref.index] == CopulaFamily::Independence) cell.truth = 0.0;
            double sum_est = 0.0, sum_var = 0.0;
            int n_var = 0;
            for (std::size_t r = 0; r < B; ++r) {
                const Replicate& rep = reps[r * F + f];
                if (!rep.converged) continue;
                ++cell.count;
                sum_est += pick(rep.est, ref);
                if (rep.se_available) {
                    const double se = pick(rep.se, ref);
                    sum_var += se * se;
                    ++n_var;
                }
            }
            if (cell.count > 0) {
                const double mean = sum_est / cell.count;
                double ss_mean = 0.0, ss_truth = 0.0;
                for (std::size_t r = 0; r < B; ++r) {
                    const Replicate& rep = reps[r * F + f];
                    if (!rep.converged) continue;
                    const double v = pick(rep.est, ref);
                    ss_mean += (v - mean) * (v - mean);
                    ss_truth += (v - cell.truth) * (v - cell.truth);
                }
                cell.bias = mean - cell.truth;
                if (cell.count >= 2) cell.sd = std::sqrt(ss_mean / cell.count);
                cell.rmse = std::sqrt(ss_truth / cell.count);
            } else {
                cell.bias = kNaN;
                cell.rmse = kNaN;
            }
            if (n_var > 0) cell.theo_sd = std::sqrt(sum_var / n_var);
            sum.cells.push_back(std::move(cell));
        }
        report.fits.push_back(std::move(sum));
    }
    if (total_converged == 0) throw std::runtime_error("simulation: no replicate converged for any fitted model");
    return report;
}

}  // namespace trivine
