#include "melosc/closed_form.hpp"

#include <cmath>
#include <sstream>

namespace melosc {
namespace {

// Scaled generalized trigonometric primitives in w = eta * t^2. Each is an
// analytic function of w, so one formula serves all three sign regimes of
// eta; a short Taylor series takes over near w = 0 where the direct
// quotients cancel.

// S(w) = sinh(sqrt(w))/sqrt(w)  (w > 0),  1  (w = 0),  sin(sqrt(-w))/sqrt(-w)  (w < 0)
double sc_sinhc(double w) {
    if (std::abs(w) < 1e-4) {
        return 1.0 + w * (1.0 / 6.0 + w * (1.0 / 120.0 + w / 5040.0));
    }
    if (w > 0.0) {
        const double r = std::sqrt(w);
        return std::sinh(r) / r;
    }
    const double r = std::sqrt(-w);
    return std::sin(r) / r;
}

// C(w) = cosh(sqrt(w))  (w >= 0),  cos(sqrt(-w))  (w < 0)
double sc_cosh(double w) {
    return w >= 0.0 ? std::cosh(std::sqrt(w)) : std::cos(std::sqrt(-w));
}

// E(w) = (C(w) - 1)/w, continued by 1/2 at w = 0. Uses the half-argument
// identity cosh(x) - 1 = 2 sinh^2(x/2), which is cancellation free:
// E(w) = S(w/4)^2 / 2 for every sign of w.
double sc_coshm1_over(double w) {
    const double s = sc_sinhc(0.25 * w);
    return 0.5 * s * s;
}

// T(u) = atanh(sqrt(u))/sqrt(u)  (u > 0),  1  (u = 0),  atan(sqrt(-u))/sqrt(-u)  (u < 0)
double sc_atanhc(double u) {
    if (std::abs(u) < 1e-4) {
        return 1.0 + u * (1.0 / 3.0 + u * (1.0 / 5.0 + u / 7.0));
    }
    if (u > 0.0) {
        const double r = std::sqrt(u);
        return std::atanh(r) / r;
    }
    const double r = std::sqrt(-u);
    return std::atan(r) / r;
}

// V(u) = tanh(sqrt(u))/sqrt(u)  (u > 0),  1  (u = 0),  tan(sqrt(-u))/sqrt(-u)  (u < 0)
double sc_tanhc(double u) {
    if (std::abs(u) < 1e-4) {
        return 1.0 + u * (-1.0 / 3.0 + u * (2.0 / 15.0 - u * 17.0 / 315.0));
    }
    if (u > 0.0) {
        const double r = std::sqrt(u);
        return std::tanh(r) / r;
    }
    const double r = std::sqrt(-u);
    return std::tan(r) / r;
}

// log(cosh(b)) and log|sinh(a)| without overflow, for a, b > 0.
double log_cosh(double b) { return b - M_LN2 + std::log1p(std::exp(-2.0 * b)); }
double log_sinh(double a) { return a - M_LN2 + std::log1p(-std::exp(-2.0 * a)); }

[[noreturn]] void throw_domain(double y0, const AnnulusInfo& info) {
    std::ostringstream os;
    os << "y0 = " << y0 << " outside annulus domain D_" << info.case_index << " = ("
       << info.domain_D.lo << ", " << info.domain_D.hi << ")";
    throw OutOfAnnulusDomain(os.str());
}

[[noreturn]] void throw_image(double s, const AnnulusInfo& info) {
    std::ostringstream os;
    os << "s = " << s << " outside half-period image I_" << info.case_index << " = ("
       << info.image_I.lo << ", " << info.image_I.hi << ")";
    throw OutOfAnnulusImage(os.str());
}

} // namespace

PhasePoint apply_involution(Involution inv, const PhasePoint& p) {
    return inv == Involution::R ? PhasePoint{-p.x, p.y} : PhasePoint{p.x, -p.y};
}

Mat2 exp_At(double t, double eta) {
    const double w = eta * t * t;
    const double c = sc_cosh(w);
    const double s = t * sc_sinhc(w);
    return {c, s, eta * s, c};
}

std::array<double, 2> u_vector(double t, double eta) {
    const double w = eta * t * t;
    return {-t * sc_sinhc(w), sc_cosh(w)};
}

PhasePoint gamma_plus(double t, double y0, const Parameters& params) {
    const double w = params.eta * t * t;
    const double s = sc_sinhc(w);
    return {y0 * t * s - params.alpha * t * t * sc_coshm1_over(w),
            y0 * sc_cosh(w) - params.alpha * t * s};
}

PhasePoint gamma_minus(double t, double y0, const Parameters& params) {
    return apply_involution(Involution::R, gamma_plus(-t, y0, params));
}

double tau0(double y0, const Parameters& params) {
    const AnnulusInfo info = annulus_info(params.alpha, params.eta);
    if (!info.domain_D.contains_strict(y0)) throw_domain(y0, info);

    const double z = y0 / params.alpha;
    const double base = 2.0 * z * sc_atanhc(params.eta * z * z);
    if (info.case_index == 9) {
        return 2.0 * M_PI / std::sqrt(-params.eta) + base;
    }
    return base;
}

double v_of(double s, const Parameters& params) {
    const AnnulusInfo info = annulus_info(params.alpha, params.eta);
    if (!info.image_I.contains_strict(s)) throw_image(s, info);
    return 0.5 * params.alpha * s * sc_tanhc(0.25 * params.eta * s * s);
}

double kernel_U(double t, double s, const Parameters& params) {
    const AnnulusInfo info = annulus_info(params.alpha, params.eta);
    if (!info.image_I.contains_strict(s)) throw_image(s, info);

    const double eta = params.eta;
    const double d = t - 0.5 * s;
    if (eta > 0.0 && std::sqrt(eta) * s * 2.0 > 700.0) {
        // sech(sqrt(eta) s/2) underflows against sinh(sqrt(eta) d); evaluate
        // the ratio in log space. |d| <= s/2 keeps the exponent nonpositive
        // for the Melnikov range t in [0, s].
        const double r = std::sqrt(eta);
        const double a = r * std::abs(d);
        if (a == 0.0) return 0.0;
        const double ratio = std::exp(log_sinh(a) - log_cosh(0.5 * r * s));
        return -params.alpha / r * (d > 0.0 ? ratio : -ratio);
    }
    return -params.alpha * d * sc_sinhc(eta * d * d) / sc_cosh(0.25 * eta * s * s);
}

} // namespace melosc
