#pragma once

#include <vector>

#include "melosc/closed_form.hpp"
#include "melosc/model.hpp"
#include "melosc/numerics.hpp"
#include "melosc/perturbation.hpp"

namespace melosc {

/// A located simple zero of M, tagged with the derivative there.
struct MelnikovZero {
    double phi_star = 0.0;
    double dM = 0.0;
};

struct MelnikovResult {
    std::vector<double> phi_grid;     ///< uniform grid over [0, sigma)
    std::vector<double> values;       ///< M(phi) on the grid
    std::vector<MelnikovZero> zeros;  ///< simple zeros, ascending in phi
    bool degenerate_flat = false;     ///< |M| <= zero_tol everywhere
};

/// Controls for zero classification; both CLI-overridable.
struct ZeroTolerances {
    double zero_tol = 1e-9;
    double simple_tol = 1e-6;
};

/// The bifurcation function
///   M(phi) = int_0^{sigma/2} U(t, sigma/2) (f(phi+t, G(t)) + f(phi-t, R G(t))) dt,
/// G(t) the right-half flow through (0, v(sigma/2)), by adaptive quadrature
/// to absolute tolerance cfg.quad_abs_tol.
double melnikov(double phi, const Parameters& params, const Perturbation& f,
                const ToleranceConfig& cfg = {});

/// d/dphi of the above, integrating the same kernel against the symbolic
/// t-derivative of f.
double melnikov_derivative(double phi, const Parameters& params, const Perturbation& f,
                           const ToleranceConfig& cfg = {});

/// M on an n-point grid of [0, sigma) plus its simple zeros: sign changes are
/// bracketed on the grid and refined by Brent to cfg.root_tol in phi.
/// Grid evaluation parallelizes over phi (capped by MELNIKOV_THREADS).
MelnikovResult melnikov_grid(const Parameters& params, const Perturbation& f, int n,
                             const ZeroTolerances& ztol = {},
                             const ToleranceConfig& cfg = {});

/// Closed form of M for f = sin(beta t) with period sigma_i = 2 pi i / beta in
/// the hyperbolic-center case: 2 alpha (1 + (-1)^(i-1)) sin(beta phi) / (beta^2 + eta).
double sin_oracle(int i, double phi, double alpha, double eta, double beta);

/// Where the persisting orbit starts on the section: (phi_star, 0, v(sigma/2)).
struct SectionSeed {
    double theta = 0.0;
    double x = 0.0;
    double y = 0.0;
};

SectionSeed predicted_initial_condition(double phi_star, const Parameters& params);

} // namespace melosc
