#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "fixtures.hpp"
#include "trivine/fit.hpp"
#include "trivine/optimize.hpp"

using namespace trivine;
using F = CopulaFamily;

TEST_CASE("aic") {
    CHECK(std::abs(aic(-86.24, 8) - 188.48) < 1e-12);
    CHECK(aic(0.0, 0) == 0.0);
    FitResult f;
    f.loglik = -10.0;
    f.n_params = n_params(parse_model("normal:BVN/BVN"));
    CHECK(aic(f) == 36.0);
}

TEST_CASE("bfgs minimizes a banana function") {
    const Objective rosen = [](std::span<const double> x) {
        return 100 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1 - x[0], 2);
    };
    const auto r = bfgs(rosen, {-1.2, 1.0});
    CHECK(r.converged);
    CHECK(std::abs(r.x[0] - 1.0) < 1e-4);
    CHECK(std::abs(r.x[1] - 1.0) < 1e-4);
    const auto H = numeric_hessian(rosen, std::vector<double>{1.0, 1.0});
    CHECK(std::abs(H(0, 0) - 802.0) < 1e-3);
    CHECK(std::abs(H(0, 1) + 400.0) < 1e-3);
    CHECK(std::abs(H(1, 1) - 200.0) < 1e-3);

    const Objective nowhere = [](std::span<const double>) { return INFINITY; };
    const auto bad = bfgs(nowhere, {0.0});
    CHECK_FALSE(bad.converged);
}

TEST_CASE("default starts") {
    const auto data = fixtures::table1_data(20, 0);
    const auto s3 = default_starts(data, parse_model("beta:Clayton90/Clayton90"), 3);
    REQUIRE(s3.size() == 2);  // candidates -0.2 and -0.5 only
    CHECK(s3[0].tau[0] == -0.2);
    CHECK(s3[1].tau[0] == -0.5);
    const auto b3 = default_starts(data, parse_model("normal:BVN"), 3);
    REQUIRE(b3.size() == 3);
    CHECK(b3[0].tau == std::array<double, 3>{0, 0, 0});
    CHECK(b3[2].tau == std::array<double, 3>{0.5, 0.5, 0.5});
    CHECK(default_starts(data, parse_model("normal:Clayton0/Clayton90"), 1)[0].tau ==
          std::array<double, 3>{0.2, -0.2, 0.0});
    for (const auto& p : b3) {
        for (int j = 0; j < 3; ++j) {
            CHECK(p.pi[j] > 0.0);
            CHECK(p.pi[j] < 1.0);
            CHECK(p.disp[j] >= 0.1);
        }
    }
    CHECK_THROWS(default_starts({}, parse_model("normal:BVN"), 1));
}

TEST_CASE("fit recovers the truth on a large sample") {
    const auto data = fixtures::table1_data(200, 0);
    const ModelSpec spec = parse_model("beta:Clayton90/Clayton90");
    const FitResult r = fit(data, spec);
    REQUIRE(r.converged);
    REQUIRE(r.se_available);
    const ParamVector truth = fixtures::table1_scenario().true_params;
    for (int j = 0; j < 3; ++j) {
        CHECK(std::abs(r.estimates.pi[j] - truth.pi[j]) < 3 * r.se.pi[j]);
        CHECK(std::abs(r.estimates.disp[j] - truth.disp[j]) < 3 * r.se.disp[j]);
    }
    for (int e = 0; e < 2; ++e) CHECK(std::abs(r.estimates.tau[e] - truth.tau[e]) < 3 * r.se.tau[e]);
    CHECK(r.se.tau[2] == 0.0);
    CHECK(r.aic == aic(r.loglik, 8));
    CHECK(r.per_study_loglik.size() == 200);
    double sum = 0.0;
    for (double x : r.per_study_loglik) sum += x;
    CHECK(std::abs(sum - r.loglik) < 1e-9);

    // positive semidefinite Hessian at the optimum
    CHECK(r.hessian_min_eigen > -1e-6 * r.hessian.trace());

    // starting at the optimum is a fixed point
    FitOptions o;
    o.start = r.estimates;
    const FitResult again = fit(data, spec, o);
    CHECK(again.converged);
    CHECK(again.iterations <= 2);
    CHECK(std::abs(again.loglik - r.loglik) < 1e-8 * std::abs(r.loglik));
}

TEST_CASE("boundary estimates are flagged, not refused") {
    const std::vector<StudyRecord> data{
        StudyRecord::from_2x2(45, 12, 5, 88), StudyRecord::from_2x2(30, 20, 10, 140),
        StudyRecord::from_2x2(12, 3, 2, 41),  StudyRecord::from_2x2(80, 25, 14, 160),
        StudyRecord::from_2x2(22, 9, 7, 63),  StudyRecord::from_2x2(51, 30, 4, 115),
        StudyRecord::from_2x2(17, 6, 8, 70),  StudyRecord::from_2x2(64, 41, 11, 184),
        StudyRecord::from_2x2(9, 2, 3, 36),   StudyRecord::from_2x2(38, 15, 6, 97)};
    const FitResult r = fit(data, parse_model("normal:BVN/BVN"));
    CHECK(r.status != FitStatus::Failed);
    CHECK(r.boundary[0]);
    CHECK_FALSE(r.boundary[2]);
    CHECK(std::isfinite(r.loglik));
}

TEST_CASE("fit input errors") {
    CHECK_THROWS_AS(fit({}, parse_model("normal:BVN")), std::invalid_argument);
    FitOptions o;
    o.nq = 0;
    CHECK_THROWS_AS(fit(fixtures::eight_studies(), parse_model("normal:BVN"), o), std::invalid_argument);
    FitOptions bad_start;
    bad_start.start = ParamVector{};
    bad_start.start->tau = {0.5, 0.5, 0.0};
    const FitResult r = fit(fixtures::eight_studies(), parse_model("normal:Clayton90/Clayton90"), bad_start);
    CHECK(r.status == FitStatus::Failed);
    CHECK_FALSE(r.message.empty());
}
