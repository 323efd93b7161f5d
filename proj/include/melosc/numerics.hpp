#pragma once

#include <array>
#include <cmath>
#include <cstdlib>
#include <utility>
#include <vector>

#include "melosc/errors.hpp"

namespace melosc {

/// Shared tolerances; defaults match the library-wide contracts.
struct ToleranceConfig {
    double quad_abs_tol = 1e-10;
    double root_tol = 1e-12;
    double newton_tol = 1e-10;
    int max_iters = 50;
    int max_quad_depth = 30;
};

namespace detail {

// Gauss-Kronrod 7-15 pair on [-1, 1] (QUADPACK dqk15 tables). Abscissae of
// the Kronrod rule, positive half; odd indices are the embedded Gauss nodes.
inline constexpr std::array<double, 8> kGk15Nodes = {
    0.99145537112081263920685469752633, 0.94910791234275852452618968404785,
    0.86486442335976907278971278864093, 0.74153118559939443986386477328079,
    0.58608723546769113029414483825873, 0.40584515137739716690660641207696,
    0.20778495500789846760068940377324, 0.0};

inline constexpr std::array<double, 8> kGk15WeightsK = {
    0.02293532201052922496373200805897, 0.06309209262997855329070066318920,
    0.10479001032225018383987632254152, 0.14065325971552591874518959051024,
    0.16900472663926790282658342659855, 0.19035057806478540991325640242101,
    0.20443294007529889241416199923465, 0.20948214108472782801299917489171};

inline constexpr std::array<double, 4> kGk15WeightsG = {
    0.12948496616886969327061143267908, 0.27970539148927666790146777142378,
    0.38183005050511894495036977548898, 0.41795918367346938775510204081633};

struct PanelEstimate {
    double integral; // Kronrod value
    double error;    // QUADPACK-style error estimate
};

// One Gauss-Kronrod 7-15 evaluation over [a, b].
template <class F>
PanelEstimate gk15_panel(F&& g, double a, double b) {
    const double half = 0.5 * (b - a);
    const double center = 0.5 * (a + b);

    const double fc = g(center);
    double resk = kGk15WeightsK[7] * fc;
    double resg = kGk15WeightsG[3] * fc;
    std::array<double, 7> fsum{};
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kGk15Nodes[j];
        const double f1 = g(center - dx);
        const double f2 = g(center + dx);
        fsum[j] = f1 + f2;
        resk += kGk15WeightsK[j] * fsum[j];
        if (j % 2 == 1) resg += kGk15WeightsG[j / 2] * fsum[j];
    }

    const double reskh = 0.5 * resk;
    double resasc = kGk15WeightsK[7] * std::abs(fc - reskh);
    for (int j = 0; j < 7; ++j) {
        resasc += kGk15WeightsK[j] * std::abs(fsum[j] - 2.0 * reskh);
    }
    resasc *= half;

    double err = std::abs((resk - resg) * half);
    if (resasc != 0.0 && err != 0.0) {
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    }
    return {resk * half, err};
}

template <class F>
double adaptive_quad_rec(F&& g, double a, double b, double tol_abs, double total_width,
                         int depth, int max_depth) {
    const auto est = gk15_panel(g, a, b);
    const double budget = tol_abs * ((b - a) / total_width);
    if (est.error <= budget) return est.integral;
    if (depth >= max_depth) {
        throw QuadratureFailure("adaptive quadrature: tolerance not reached at depth " +
                                std::to_string(max_depth));
    }
    const double mid = 0.5 * (a + b);
    return adaptive_quad_rec(g, a, mid, tol_abs, total_width, depth + 1, max_depth) +
           adaptive_quad_rec(g, mid, b, tol_abs, total_width, depth + 1, max_depth);
}

} // namespace detail

/// Adaptive Gauss-Kronrod 7-15 quadrature of g over [a, b] to the absolute
/// tolerance tol; panels are bisected until the local error estimate fits
/// the width-proportional share of tol.
template <class F>
double adaptive_quad(F&& g, double a, double b, double tol,
                     const ToleranceConfig& cfg = {}) {
    if (a == b) return 0.0;
    return detail::adaptive_quad_rec(g, a, b, tol, b - a, 0, cfg.max_quad_depth);
}

/// Brent root solve of g on [lo, hi]; requires a sign change. Stops when the
/// bracket shrinks below tol (plus a machine-precision floor); at most 200
/// evaluations of g.
template <class F>
double brent(F&& g, double lo, double hi, double tol) {
    double a = lo, b = hi;
    double fa = g(a), fb = g(b);
    int evals = 2;
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0.0) == (fb > 0.0)) {
        throw NoSignChange("brent: no sign change on the bracket");
    }

    double c = a, fc = fa;
    double d = b - a, e = d;
    while (evals < 200) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) +
                            0.5 * tol;
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0) return b;

        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            // inverse quadratic interpolation, falling back to secant
            const double s = fb / fa;
            double p, q;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                const double qq = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += std::abs(d) > tol1 ? d : (xm > 0.0 ? tol1 : -tol1);
        fb = g(b);
        ++evals;
    }
    throw MaxIterations("brent: 200 evaluations exhausted");
}

/// Damped Newton on a 2D map G with forward-difference Jacobian. Returns the
/// first point with ||G||_inf <= tol; steps are halved (at most 8 times) while
/// they fail to decrease the residual.
template <class G>
std::pair<double, double> newton2(G&& map, std::pair<double, double> seed, double tol,
                                  double fd_step, int max_iters = 50) {
    auto norm = [](const std::pair<double, double>& r) {
        return std::max(std::abs(r.first), std::abs(r.second));
    };
    double u = seed.first, v = seed.second;
    std::pair<double, double> r = map(u, v);

    for (int iter = 0; iter < max_iters; ++iter) {
        const double rn = norm(r);
        if (rn <= tol) return {u, v};

        const double hu = fd_step * (1.0 + std::abs(u));
        const double hv = fd_step * (1.0 + std::abs(v));
        const auto ru = map(u + hu, v);
        const auto rv = map(u, v + hv);
        const double j11 = (ru.first - r.first) / hu;
        const double j21 = (ru.second - r.second) / hu;
        const double j12 = (rv.first - r.first) / hv;
        const double j22 = (rv.second - r.second) / hv;

        const double det = j11 * j22 - j12 * j21;
        const double scale = std::max(std::abs(j11), std::abs(j12)) *
                                 std::max(std::abs(j21), std::abs(j22)) +
                             std::numeric_limits<double>::min();
        if (std::abs(det) < 1e-14 * scale) {
            throw SingularJacobian("newton2: Jacobian singular to working precision");
        }

        const double du = -(j22 * r.first - j12 * r.second) / det;
        const double dv = -(-j21 * r.first + j11 * r.second) / det;

        double lambda = 1.0;
        std::pair<double, double> r_next{};
        for (int halvings = 0;; ++halvings) {
            r_next = map(u + lambda * du, v + lambda * dv);
            if (norm(r_next) < rn || halvings >= 8) break;
            lambda *= 0.5;
        }
        u += lambda * du;
        v += lambda * dv;
        r = r_next;
    }
    throw MaxIterations("newton2: iteration cap reached with residual above tolerance");
}

/// Least-squares slope of log(err) against log(h). Pairs with err == 0 make
/// the fit meaningless in the good direction; +infinity is returned as the
/// converged sentinel.
double loglog_slope(const std::vector<std::pair<double, double>>& pairs);

} // namespace melosc
