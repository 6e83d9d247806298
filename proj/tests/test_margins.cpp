#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include <boost/math/special_functions/beta.hpp>

#include "oracles.hpp"
#include "trivine/margins.hpp"
#include "trivine/rng.hpp"
#include "trivine/special.hpp"

using namespace trivine;

TEST_CASE("latent_quantile examples") {
    CHECK(latent_quantile({MarginKind::NormalLogit, 0.5, 1.0}, 0.5) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(std::abs(latent_quantile({MarginKind::Beta, 0.5, 0.2}, 0.5) - 0.5) < 1e-13);
    // frozen from a 30-digit evaluation; the oracle recomputes it from a
    // bisection normal quantile
    const double frozen = 0.876529054683111967;
    CHECK(std::abs(oracle::logit_normal_quantile(0.5, 1.0, 0.975) - frozen) < 1e-12);
    CHECK(std::abs(latent_quantile({MarginKind::NormalLogit, 0.5, 1.0}, 0.975) - frozen) < 1e-13);
    CHECK_THROWS_AS(latent_quantile({MarginKind::Beta, 0.5, 0.2}, 0.0), std::domain_error);
    CHECK_THROWS_AS(latent_quantile({MarginKind::NormalLogit, 0.5, 1.0}, 1.0), std::domain_error);
    CHECK_THROWS_AS(latent_quantile({MarginKind::NormalLogit, 0.5, -1.0}, 0.5), std::domain_error);
    CHECK_THROWS_AS(latent_quantile({MarginKind::Beta, 0.5, 1.0}, 0.5), std::domain_error);
}

TEST_CASE("beta quantile against boost ibeta_inv") {
    CounterRng rng(9);
    for (int i = 0; i < 400; ++i) {
        const double pi = 0.02 + 0.96 * rng.uniform();
        const double gamma = 0.005 + 0.9 * rng.uniform();
        const double u = rng.uniform();
        const double ref = oracle::beta_quantile(pi, gamma, u);
        const double got = latent_quantile({MarginKind::Beta, pi, gamma}, u);
        INFO("pi=", pi, " gamma=", gamma, " u=", u);
        CHECK(std::abs(got - ref) <= 1e-11 * std::min(ref, 1.0 - ref) + 1e-300);
        const LatentQuantile q({MarginKind::Beta, pi, gamma});
        const auto lp = q(u);
        CHECK(std::abs(std::exp(lp.log_x) - ref) <= 1e-11 * ref);
        CHECK(std::abs(-std::expm1(lp.log_1mx) - ref) <= 1e-11 * std::max(ref, 1e-300) + 1e-15);
    }
}

TEST_CASE("beta cdf against boost") {
    for (double a : {0.3, 1.0, 7.2, 50.0})
        for (double b : {0.4, 1.8, 30.0})
            for (double x : {1e-6, 0.1, 0.5, 0.93})
                CHECK(std::abs(beta_cdf(a, b, x) - boost::math::ibeta(a, b, x)) < 1e-13);
}

TEST_CASE("latent_quantile monotone in u") {
    for (const MarginSpec m : {MarginSpec{MarginKind::NormalLogit, 0.8, 1.3}, MarginSpec{MarginKind::Beta, 0.8, 0.1},
                               MarginSpec{MarginKind::Beta, 0.4, 0.6}}) {
        double prev = 0.0;
        for (int k = 1; k < 1000; ++k) {
            const double x = latent_quantile(m, k / 1000.0);
            CHECK(x > prev);
            prev = x;
        }
    }
}

TEST_CASE("normal-logit quantile symmetry") {
    for (double pi : {0.1, 0.5, 0.83})
        for (double u : {0.01, 0.2, 0.4999}) {
            const MarginSpec m{MarginKind::NormalLogit, pi, 0.7};
            CHECK(std::abs(logit(latent_quantile(m, u)) + logit(latent_quantile(m, 1.0 - u)) - 2.0 * logit(pi)) < 1e-10);
        }
}

TEST_CASE("binom_log_pmf") {
    CHECK(binom_log_pmf(0, 5, 0.0) == 0.0);
    CHECK(binom_log_pmf(5, 5, 1.0) == 0.0);
    CHECK(binom_log_pmf(0, 0, 0.3) == 0.0);
    CHECK(binom_log_pmf(1, 5, 0.0) == -kInf);
    // exact rational 120/1024, frozen: log(120/1024) = -2.14398006281740710
    CHECK(std::abs(std::log(oracle::binom_pmf_exact(3, 10, 0.5)) - (-2.14398006281740710)) < 1e-14);
    CHECK(std::abs(binom_log_pmf(3, 10, 0.5) - (-2.14398006281740710)) < 1e-13);
    for (int n : {1, 7, 50, 200})
        for (double p : {0.0, 0.01, 0.37, 0.5, 0.99, 1.0}) {
            double s = 0.0;
            for (int y = 0; y <= n; ++y) s += std::exp(binom_log_pmf(y, n, p));
            CHECK(std::abs(s - 1.0) < 1e-12);
        }
}

TEST_CASE("beta shapes") {
    const auto a = beta_shapes(0.5, 0.5);
    CHECK(std::abs(a.alpha - 0.5) < 1e-15);
    CHECK(std::abs(a.beta - 0.5) < 1e-15);
    const auto b = beta_shapes(0.8, 0.1);
    CHECK(std::abs(b.alpha - 7.2) < 1e-13);
    CHECK(std::abs(b.beta - 1.8) < 1e-13);
    for (double alpha : {0.2, 1.0, 7.2})
        for (double beta : {0.5, 3.0}) {
            const auto m = beta_mean_disp(alpha, beta);
            const auto s = beta_shapes(m.pi, m.gamma);
            CHECK(std::abs(s.alpha - alpha) < 1e-12 * alpha);
            CHECK(std::abs(s.beta - beta) < 1e-12 * beta);
        }
    CHECK_THROWS_AS(beta_shapes(0.0, 0.2), std::domain_error);
    CHECK_THROWS_AS(beta_shapes(0.5, 1.0), std::domain_error);
}

TEST_CASE("study records") {
    const auto r = StudyRecord::from_2x2(5, 2, 3, 10);
    CHECK(r.y == std::array<int, 3>{5, 10, 8});
    CHECK(r.n == std::array<int, 3>{8, 12, 20});
    CHECK_NOTHROW(validate(StudyRecord::from_2x2(0, 0, 0, 0)));
    StudyRecord bad = r;
    bad.y[2] = 7;
    CHECK_THROWS(validate(bad));
    bad = r;
    bad.y[0] = 9;
    CHECK_THROWS(validate(bad));
    CHECK_THROWS(StudyRecord::from_2x2(-1, 0, 0, 0));
}
