#include "melosc/melnikov.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "parallel.hpp"

namespace melosc {
namespace {

double integral_against_kernel(double phi, const Parameters& params, const Perturbation& f,
                               const ToleranceConfig& cfg) {
    const double half = 0.5 * params.sigma;
    const double ystar = v_of(half, params); // throws if sigma/2 not admissible

    auto integrand = [&](double t) {
        const PhasePoint g = gamma_plus(t, ystar, params);
        const double u = kernel_U(t, half, params);
        return u * (f.eval(phi + t, g.x, g.y) + f.eval(phi - t, -g.x, g.y));
    };
    return adaptive_quad(integrand, 0.0, half, cfg.quad_abs_tol, cfg);
}

} // namespace

double melnikov(double phi, const Parameters& params, const Perturbation& f,
                const ToleranceConfig& cfg) {
    validate(params);
    return integral_against_kernel(phi, params, f, cfg);
}

double melnikov_derivative(double phi, const Parameters& params, const Perturbation& f,
                           const ToleranceConfig& cfg) {
    validate(params);
    return integral_against_kernel(phi, params, f.diff_t(), cfg);
}

MelnikovResult melnikov_grid(const Parameters& params, const Perturbation& f, int n,
                             const ZeroTolerances& ztol, const ToleranceConfig& cfg) {
    validate(params);
    if (n < 16) throw std::invalid_argument("melnikov_grid: need n >= 16");

    MelnikovResult result;
    result.phi_grid.resize(static_cast<std::size_t>(n));
    result.values.resize(static_cast<std::size_t>(n));
    const double h = params.sigma / n;
    for (int j = 0; j < n; ++j) result.phi_grid[static_cast<std::size_t>(j)] = j * h;

    detail::parallel_for(static_cast<std::size_t>(n), [&](std::size_t j) {
        result.values[j] = melnikov(result.phi_grid[j], params, f, cfg);
    });

    double vmax = 0.0;
    for (double v : result.values) vmax = std::max(vmax, std::abs(v));
    if (vmax <= ztol.zero_tol) {
        result.degenerate_flat = true;
        return result;
    }

    auto eval_m = [&](double phi) { return melnikov(phi, params, f, cfg); };
    auto value_at = [&](int j) { return result.values[static_cast<std::size_t>(j % n)]; };
    auto phi_at = [&](int j) { return j * h; }; // periodic extension beyond the grid

    // Sign-change brackets, with near-zero grid values treated as anchors
    // whose flanking points supply the bracket.
    std::vector<double> roots;
    for (int j = 0; j < n; ++j) {
        const double vj = value_at(j);
        const double vn = value_at(j + 1);
        const bool j_small = std::abs(vj) <= ztol.zero_tol;
        const bool n_small = std::abs(vn) <= ztol.zero_tol;
        double lo, hi;
        if (!j_small && !n_small && std::signbit(vj) != std::signbit(vn)) {
            lo = phi_at(j);
            hi = phi_at(j + 1);
        } else if (j_small && !n_small && std::abs(value_at(j - 1 + n)) > ztol.zero_tol &&
                   std::signbit(value_at(j - 1 + n)) != std::signbit(vn)) {
            lo = phi_at(j - 1);
            hi = phi_at(j + 1);
        } else {
            continue;
        }
        roots.push_back(brent(eval_m, lo, hi, cfg.root_tol));
    }

    // Wrap into [0, sigma); a root within tolerance of sigma is the phase-0 root.
    for (double& r : roots) {
        r = normalize_phase(r, params.sigma);
        if (params.sigma - r <= 10.0 * cfg.root_tol) r = 0.0;
    }
    std::sort(roots.begin(), roots.end());
    std::vector<double> unique_roots;
    for (double r : roots) {
        const bool dup = !unique_roots.empty() && r - unique_roots.back() <= h;
        const bool dup_wrap = !unique_roots.empty() && (params.sigma - r + unique_roots.front()) <= h;
        if (!dup && !dup_wrap) unique_roots.push_back(r);
    }

    for (double r : unique_roots) {
        const double value = eval_m(r);
        const double slope = melnikov_derivative(r, params, f, cfg);
        if (std::abs(value) <= ztol.zero_tol && std::abs(slope) > ztol.simple_tol) {
            result.zeros.push_back({r, slope});
        }
    }
    return result;
}

double sin_oracle(int i, double phi, double alpha, double eta, double beta) {
    if (i < 1) throw std::invalid_argument("sin_oracle: i must be >= 1");
    if (beta <= 0.0) throw std::invalid_argument("sin_oracle: beta must be > 0");
    const double parity = 1.0 + (i % 2 == 1 ? 1.0 : -1.0);
    return 2.0 * alpha * parity * std::sin(beta * phi) / (beta * beta + eta);
}

SectionSeed predicted_initial_condition(double phi_star, const Parameters& params) {
    validate(params);
    return {phi_star, 0.0, v_of(0.5 * params.sigma, params)};
}

} // namespace melosc
