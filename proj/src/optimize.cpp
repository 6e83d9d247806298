#include "trivine/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace trivine {

namespace {

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double grad_step(double x) { return std::max(1e-5, 1e-5 * std::abs(x)); }

}  // namespace

std::vector<double> numeric_gradient(const Objective& f, std::span<const double> x0, double fx) {
    std::vector<double> x(x0.begin(), x0.end());
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double xi = x[i];
        const double h = grad_step(xi);
        x[i] = xi + h;
        const double fp = f(x);
        x[i] = xi - h;
        const double fm = f(x);
        x[i] = xi;
        if (std::isfinite(fp) && std::isfinite(fm))
            g[i] = (fp - fm) / (2.0 * h);
        else if (std::isfinite(fp))
            g[i] = (fp - fx) / h;
        else if (std::isfinite(fm))
            g[i] = (fx - fm) / h;
        else
            g[i] = std::numeric_limits<double>::quiet_NaN();
    }
    return g;
}

Eigen::MatrixXd numeric_hessian(const Objective& f, std::span<const double> x0) {
    const auto n = static_cast<Eigen::Index>(x0.size());
    std::vector<double> x(x0.begin(), x0.end());
    std::vector<double> h(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) h[i] = 1e-4 * std::max(1.0, std::abs(x[i]));
    const double f0 = f(x);
    Eigen::MatrixXd H(n, n);

    auto eval = [&](std::size_t i, double di, std::size_t j, double dj) {
        const double xi = x[i], xj = x[j];
        x[i] += di;
        x[j] += dj;
        const double v = f(x);
        x[i] = xi;
        x[j] = xj;
        return v;
    };

    for (Eigen::Index i = 0; i < n; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        const double xi = x[ui];
        x[ui] = xi + h[ui];
        const double fp = f(x);
        x[ui] = xi - h[ui];
        const double fm = f(x);
        x[ui] = xi;
        H(i, i) = (fp - 2.0 * f0 + fm) / (h[ui] * h[ui]);
        for (Eigen::Index j = 0; j < i; ++j) {
            const auto uj = static_cast<std::size_t>(j);
            const double fpp = eval(ui, h[ui], uj, h[uj]);
            const double fpm = eval(ui, h[ui], uj, -h[uj]);
            const double fmp = eval(ui, -h[ui], uj, h[uj]);
            const double fmm = eval(ui, -h[ui], uj, -h[uj]);
            H(i, j) = H(j, i) = (fpp - fpm - fmp + fmm) / (4.0 * h[ui] * h[uj]);
        }
    }
    return H;
}

OptimResult bfgs(const Objective& f, std::vector<double> x0, const OptimOptions& options) {
    const auto n = static_cast<Eigen::Index>(x0.size());
    OptimResult r;
    int evals = 0;
    auto fun = [&](std::span<const double> x) {
        ++evals;
        return f(x);
    };

    std::vector<double> x = std::move(x0);
    double fx = fun(x);
    if (!std::isfinite(fx)) {
        r.x = x;
        r.f = fx;
        r.evaluations = evals;
        r.message = "objective not finite at the start";
        return r;
    }
    std::vector<double> g = numeric_gradient(fun, x, fx);
    Eigen::MatrixXd Hinv = Eigen::MatrixXd::Identity(n, n);
    bool identity = true;
    double last_change = std::numeric_limits<double>::infinity();

    int iter = 0;
    for (;; ++iter) {
        const double gmax = max_abs(g);
        if (!std::isfinite(gmax)) {
            r.message = "gradient not finite";
            break;
        }
        if (gmax < options.grad_tol && (iter == 0 || last_change < options.rel_tol * std::max(1.0, std::abs(fx)))) {
            r.converged = true;
            r.message = "converged";
            break;
        }
        if (iter >= options.max_iter) {
            r.message = "iteration limit reached";
            break;
        }

        Eigen::Map<const Eigen::VectorXd> gv(g.data(), n);
        Eigen::VectorXd d = -Hinv * gv;
        double slope = gv.dot(d);
        if (!(slope < 0.0)) {
            Hinv.setIdentity();
            identity = true;
            d = -gv;
            slope = gv.dot(d);
        }
        // Keep a single trial step within a bounded box of the packed space.
        const double dmax = d.cwiseAbs().maxCoeff();
        double t = dmax > 2.0 ? 2.0 / dmax : 1.0;

        std::vector<double> xn(x.size());
        double fn = 0.0;
        bool accepted = false;
        for (int k = 0; k < 60; ++k) {
            for (std::size_t i = 0; i < x.size(); ++i) xn[i] = x[i] + t * d(static_cast<Eigen::Index>(i));
            fn = fun(xn);
            if (std::isfinite(fn) && fn <= fx + 1e-4 * t * slope) {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) {
            if (!identity) {
                Hinv.setIdentity();
                identity = true;
                continue;
            }
            r.message = "line search failed";
            break;
        }

        std::vector<double> gn = numeric_gradient(fun, xn, fn);
        Eigen::VectorXd s(n), y(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            s(i) = xn[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(i)];
            y(i) = gn[static_cast<std::size_t>(i)] - g[static_cast<std::size_t>(i)];
        }
        const double sy = s.dot(y);
        if (sy > 1e-12 * s.norm() * y.norm() && std::isfinite(sy)) {
            if (identity) Hinv *= sy / y.squaredNorm();
            const double rho = 1.0 / sy;
            const Eigen::VectorXd Hy = Hinv * y;
            Hinv += (rho * rho * y.dot(Hy) + rho) * s * s.transpose() - rho * (Hy * s.transpose() + s * Hy.transpose());
            identity = false;
        }
        last_change = std::abs(fx - fn);
        x = std::move(xn);
        fx = fn;
        g = std::move(gn);
    }

    r.x = std::move(x);
    r.f = fx;
    r.grad = std::move(g);
    r.iterations = iter;
    r.evaluations = evals;
    return r;
}

}  // namespace trivine
