#pragma once

// Derivative-free local optimizers used by the family scans and the
// penalty searches. Both operate on small dense parameter vectors.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

namespace pentaks::optimize {

using Vector = std::vector<double>;

struct Result {
    Vector x;
    double value = std::numeric_limits<double>::infinity();
    int evaluations = 0;
    bool converged = false;
};

struct NelderMeadOptions {
    double initial_step = 0.1;
    /// Stop once every vertex lies within this distance of the best one (per coordinate).
    double x_tolerance = 1e-10;
    /// ... and the spread of function values is below this.
    double f_tolerance = 1e-15;
    int max_evaluations = 20000;
};

/// Minimizes `f` with the Nelder-Mead simplex method (standard reflection,
/// expansion, contraction and shrink coefficients 1, 2, 1/2, 1/2).
template <typename F>
Result nelder_mead(F&& f, Vector x0, const NelderMeadOptions& opt = {}) {
    const std::size_t n = x0.size();
    std::vector<Vector> simplex(n + 1, x0);
    std::vector<double> fv(n + 1);
    Result res;
    auto eval = [&](const Vector& x) {
        ++res.evaluations;
        const double v = f(x);
        return std::isfinite(v) ? v : std::numeric_limits<double>::max();
    };
    for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += opt.initial_step;
    for (std::size_t i = 0; i <= n; ++i) fv[i] = eval(simplex[i]);

    std::vector<std::size_t> idx(n + 1);
    Vector centroid(n), trial(n), trial2(n);
    while (res.evaluations < opt.max_evaluations) {
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        const std::size_t best = idx.front(), worst = idx.back(), second = idx[n - 1];

        double extent = 0.0;
        for (std::size_t i = 0; i <= n; ++i)
            for (std::size_t k = 0; k < n; ++k) extent = std::max(extent, std::abs(simplex[i][k] - simplex[best][k]));
        if (extent <= opt.x_tolerance && fv[worst] - fv[best] <= opt.f_tolerance) {
            res.converged = true;
            break;
        }

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == worst) continue;
            for (std::size_t k = 0; k < n; ++k) centroid[k] += simplex[i][k] / static_cast<double>(n);
        }
        for (std::size_t k = 0; k < n; ++k) trial[k] = centroid[k] + (centroid[k] - simplex[worst][k]);
        const double fr = eval(trial);
        if (fr < fv[best]) {
            for (std::size_t k = 0; k < n; ++k) trial2[k] = centroid[k] + 2.0 * (centroid[k] - simplex[worst][k]);
            const double fe = eval(trial2);
            if (fe < fr) {
                simplex[worst] = trial2;
                fv[worst] = fe;
            } else {
                simplex[worst] = trial;
                fv[worst] = fr;
            }
            continue;
        }
        if (fr < fv[second]) {
            simplex[worst] = trial;
            fv[worst] = fr;
            continue;
        }
        const bool outside = fr < fv[worst];
        for (std::size_t k = 0; k < n; ++k) {
            trial2[k] = outside ? centroid[k] + 0.5 * (trial[k] - centroid[k])
                                : centroid[k] + 0.5 * (simplex[worst][k] - centroid[k]);
        }
        const double fc = eval(trial2);
        if (fc < std::min(fr, fv[worst])) {
            simplex[worst] = trial2;
            fv[worst] = fc;
            continue;
        }
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == best) continue;
            for (std::size_t k = 0; k < n; ++k) simplex[i][k] = simplex[best][k] + 0.5 * (simplex[i][k] - simplex[best][k]);
            fv[i] = eval(simplex[i]);
        }
    }
    const auto it = std::min_element(fv.begin(), fv.end());
    res.x = simplex[static_cast<std::size_t>(it - fv.begin())];
    res.value = *it;
    return res;
}

struct LeastSquaresOptions {
    int max_iterations = 500;
    /// Converged once the sum of squared residuals drops below this.
    double cost_tolerance = 1e-28;
    double step_tolerance = 1e-15;
    double finite_difference_step = 1e-7;
};

/// Levenberg-Marquardt minimization of 0.5 * |r(x)|^2 with a central
/// finite-difference Jacobian. `r` maps a parameter vector to a residual
/// vector of fixed length. `value` in the result is |r|^2.
template <typename R>
Result levenberg_marquardt(R&& residuals, Vector x, const LeastSquaresOptions& opt = {}) {
    const std::size_t n = x.size();
    Result res;
    auto cost_of = [](const Vector& r) {
        double c = 0.0;
        for (double v : r) c += v * v;
        return c;
    };
    Vector r = residuals(x);
    ++res.evaluations;
    double cost = cost_of(r);
    const std::size_t m = r.size();
    double lambda = 1e-3;

    std::vector<Vector> jac(m, Vector(n));
    Vector jtj(n * n), jtr(n), delta(n), xt(n), chol(n * n);

    for (int iter = 0; iter < opt.max_iterations && cost > opt.cost_tolerance; ++iter) {
        for (std::size_t j = 0; j < n; ++j) {
            const double h = opt.finite_difference_step * std::max(1.0, std::abs(x[j]));
            const double xj = x[j];
            x[j] = xj + h;
            const Vector rp = residuals(x);
            x[j] = xj - h;
            const Vector rm = residuals(x);
            x[j] = xj;
            res.evaluations += 2;
            for (std::size_t i = 0; i < m; ++i) jac[i][j] = (rp[i] - rm[i]) / (2.0 * h);
        }
        std::fill(jtj.begin(), jtj.end(), 0.0);
        std::fill(jtr.begin(), jtr.end(), 0.0);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t a = 0; a < n; ++a) {
                jtr[a] += jac[i][a] * r[i];
                for (std::size_t b = 0; b <= a; ++b) jtj[a * n + b] += jac[i][a] * jac[i][b];
            }

        bool improved = false;
        for (int attempt = 0; attempt < 30 && !improved; ++attempt) {
            // Cholesky of (J^T J + lambda diag(J^T J)), lower triangle.
            bool ok = true;
            for (std::size_t a = 0; a < n && ok; ++a) {
                for (std::size_t b = 0; b <= a; ++b) {
                    double s = jtj[a * n + b];
                    if (a == b) s += lambda * std::max(jtj[a * n + a], 1e-12);
                    for (std::size_t k = 0; k < b; ++k) s -= chol[a * n + k] * chol[b * n + k];
                    if (a == b) {
                        if (!(s > 0.0)) {
                            ok = false;
                            break;
                        }
                        chol[a * n + a] = std::sqrt(s);
                    } else {
                        chol[a * n + b] = s / chol[b * n + b];
                    }
                }
            }
            if (!ok) {
                lambda *= 10.0;
                continue;
            }
            for (std::size_t a = 0; a < n; ++a) {
                double s = -jtr[a];
                for (std::size_t k = 0; k < a; ++k) s -= chol[a * n + k] * delta[k];
                delta[a] = s / chol[a * n + a];
            }
            for (std::size_t a = n; a-- > 0;) {
                double s = delta[a];
                for (std::size_t k = a + 1; k < n; ++k) s -= chol[k * n + a] * delta[k];
                delta[a] = s / chol[a * n + a];
            }
            for (std::size_t a = 0; a < n; ++a) xt[a] = x[a] + delta[a];
            Vector rt = residuals(xt);
            ++res.evaluations;
            const double ct = cost_of(rt);
            if (ct < cost) {
                double step = 0.0;
                for (double d : delta) step = std::max(step, std::abs(d));
                x = xt;
                r = std::move(rt);
                cost = ct;
                lambda = std::max(lambda / 10.0, 1e-15);
                improved = true;
                if (step < opt.step_tolerance) iter = opt.max_iterations;
            } else {
                lambda *= 10.0;
            }
        }
        if (!improved) break;
    }
    res.x = std::move(x);
    res.value = cost;
    res.converged = cost <= opt.cost_tolerance;
    return res;
}

} // namespace pentaks::optimize
