#pragma once

#include <array>

#include "melosc/model.hpp"

namespace melosc {

/// 2x2 real matrix, row major.
struct Mat2 {
    double a11 = 1.0, a12 = 0.0;
    double a21 = 0.0, a22 = 1.0;

    double det() const noexcept { return a11 * a22 - a12 * a21; }

    Mat2 operator*(const Mat2& o) const noexcept {
        return {a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22,
                a21 * o.a11 + a22 * o.a21, a21 * o.a12 + a22 * o.a22};
    }

    static Mat2 identity() noexcept { return {}; }
};

/// The two reflections used throughout: R(x,y) = (-x,y), S(x,y) = (x,-y).
enum class Involution { R, S };

PhasePoint apply_involution(Involution inv, const PhasePoint& p);

/// Matrix exponential of t*A with A = ((0,1),(eta,0)); hyperbolic, linear,
/// or trigonometric entries depending on the sign of eta. Evaluated through
/// scaled primitives so the eta -> 0 limit is smooth.
Mat2 exp_At(double t, double eta);

/// Second column of exp(-A t): (-sinh(t*sqrt(eta))/sqrt(eta), cosh(t*sqrt(eta)))
/// for eta > 0, (-t, 1) for eta = 0, (-sin/omega, cos) for eta < 0.
std::array<double, 2> u_vector(double t, double eta);

/// Flow of the right half-system x' = y, y' = eta*x - alpha from (0, y0).
PhasePoint gamma_plus(double t, double y0, const Parameters& params);

/// Flow of the left half-system, obtained as R applied to gamma_plus at -t.
PhasePoint gamma_minus(double t, double y0, const Parameters& params);

/// Half-period: time for gamma_plus to travel from (0, y0) back to x = 0.
/// Requires an annulus case (C1/C4/C7/C9) and y0 inside its domain D_i.
double tau0(double y0, const Parameters& params);

/// Inverse of tau0: the crossing velocity whose half-period equals s.
/// Requires s strictly inside the image interval I_i.
double v_of(double s, const Parameters& params);

/// Kernel of the Melnikov integral, second argument s in I_i:
///   eta > 0:  -alpha/sqrt(eta) * sech(sqrt(eta) s/2) * sinh(sqrt(eta)(2t-s)/2)
///   eta = 0:  -alpha (2t-s)/2
///   eta < 0:  -alpha/omega * sec(omega s/2) * sin(omega (2t-s)/2)
/// Switches to log-space evaluation for large sqrt(eta)*s where the sech
/// prefactor would underflow against the growing sinh factor.
double kernel_U(double t, double s, const Parameters& params);

} // namespace melosc
