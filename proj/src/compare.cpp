#include "trivine/compare.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "trivine/special.hpp"

namespace trivine {

double two_sided_p(double z) { return std::erfc(std::abs(z) / std::sqrt(2.0)); }

VuongResult vuong(const std::vector<double>& ll1, int k1, const std::vector<double>& ll2, int k2, bool adjusted) {
    if (ll1.size() != ll2.size()) throw std::invalid_argument("vuong: fits cover different numbers of studies");
    if (ll1.empty()) throw std::invalid_argument("vuong: no studies");
    VuongResult r;
    r.n = static_cast<int>(ll1.size());
    r.adjusted = adjusted;
    std::vector<double> d(ll1.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        d[i] = ll2[i] - ll1[i];
        sum += d[i];
    }
    const double mean = sum / r.n;
    r.mean_d = adjusted ? mean - static_cast<double>(k2 - k1) / r.n : mean;
    if (r.n < 2) return r;
    double ss = 0.0;
    for (double x : d) ss += (x - mean) * (x - mean);
    r.sd = std::sqrt(ss / (r.n - 1));
    if (*r.sd > 0.0 && std::isfinite(*r.sd)) {
        r.z0 = std::sqrt(static_cast<double>(r.n)) * r.mean_d / *r.sd;
        r.p = two_sided_p(*r.z0);
    }
    return r;
}

VuongResult vuong(const FitResult& fit1, const FitResult& fit2, bool adjusted) {
    return vuong(fit1.per_study_loglik, fit1.n_params, fit2.per_study_loglik, fit2.n_params, adjusted);
}

std::vector<ModelSpec> enumerate_specs(const std::vector<MarginKind>& margins,
                                       const std::vector<std::array<CopulaFamily, 3>>& families,
                                       const std::vector<Permutation>& perms, bool truncate) {
    if (margins.empty() || families.empty() || perms.empty())
        throw std::invalid_argument("sweep: margin, family and permutation lists must be nonempty");
    std::vector<ModelSpec> out;
    for (MarginKind m : margins)
        for (const auto& perm : perms)
            for (auto f : families) {
                if (truncate) f[2] = CopulaFamily::Independence;
                out.push_back(ModelSpec{perm, f, m});
            }
    return out;
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& job) {
    const std::size_t workers = std::min<std::size_t>(std::max(threads, 1), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) job(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex mu;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    job(i);
                } catch (...) {
                    std::lock_guard lock(mu);
                    if (!error) error = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

std::vector<RankedFit> sweep(const std::vector<StudyRecord>& data, const std::vector<ModelSpec>& specs,
                             const FitOptions& options, int threads) {
    if (specs.empty()) throw std::invalid_argument("sweep: no model specifications");
    std::vector<RankedFit> out(specs.size());
    parallel_for(specs.size(), threads, [&](std::size_t i) {
        out[i].index = i;
        try {
            out[i].fit = fit(data, specs[i], options);
        } catch (const std::exception& e) {
            FitResult f;
            f.spec = specs[i];
            f.n_params = n_params(specs[i]);
            f.status = FitStatus::Failed;
            f.message = e.what();
            f.loglik = kNaN;
            f.aic = kNaN;
            out[i].fit = std::move(f);
        }
    });
    std::stable_sort(out.begin(), out.end(), [](const RankedFit& a, const RankedFit& b) {
        const int ca = static_cast<int>(a.fit.status), cb = static_cast<int>(b.fit.status);
        if (ca != cb) return ca < cb;
        if (a.fit.status == FitStatus::Converged) {
            if (a.fit.aic != b.fit.aic) return a.fit.aic < b.fit.aic;
            if (a.fit.n_params != b.fit.n_params) return a.fit.n_params < b.fit.n_params;
        }
        return a.index < b.index;
    });
    return out;
}

}  // namespace trivine
