#pragma once

#include <optional>
#include <string>

#include "melosc/errors.hpp"

namespace melosc {

/// Model parameters of the oscillator  x'' + alpha*sign(x) = eta*x + eps*f(t,x,x').
struct Parameters {
    double alpha = 1.0;   ///< restoring jump magnitude
    double eta = 0.0;     ///< linear stiffness
    double sigma = 1.0;   ///< period of f in t, must be > 0
    double epsilon = 0.0; ///< perturbation size
};

/// Throws std::invalid_argument unless all fields are finite and sigma > 0.
void validate(const Parameters& params);

enum class CaseTag { C1, C2, C3, C4, C5, C6, C7, C8, C9 };

std::string to_string(CaseTag tag);

/// Sign-pattern classification of the unperturbed system.
struct CaseClass {
    CaseTag tag = CaseTag::C5;
    std::optional<double> omega; ///< sqrt(-eta), present iff eta < 0

    int index() const noexcept { return static_cast<int>(tag) + 1; }
};

/// Open interval (lo, hi); hi may be +infinity.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    bool contains_strict(double x) const noexcept { return x > lo && x < hi; }
};

/// Domain/image bookkeeping for the half-period map of an annulus case.
struct AnnulusInfo {
    int case_index = 0;      ///< one of 1, 4, 7, 9
    Interval domain_D;       ///< admissible y0 values
    Interval image_I;        ///< half-period values tau0(D)
    int tau0_monotone_sign = +1;
};

/// Point of the (x, y) = (position, velocity) plane.
struct PhasePoint {
    double x = 0.0;
    double y = 0.0;
};

/// Point on the switching section {x = 0} with upward velocity.
struct SectionPoint {
    double theta0 = 0.0; ///< time phase, in [0, sigma)
    double y0 = 0.0;     ///< crossing velocity, > 0
};

/// Reduce theta into [0, sigma).
double normalize_phase(double theta, double sigma);

/// Case tag from the exact signs of (eta, alpha); total over finite inputs.
CaseClass classify(double alpha, double eta);

/// Annulus intervals for cases C1/C4/C7/C9; throws NoPeriodAnnulus otherwise
/// (including C8, whose constant half-period admits no inverse).
AnnulusInfo annulus_info(double alpha, double eta);

/// True iff sigma/2 lies strictly inside the image interval I_i.
bool sigma_admissible(const Parameters& params);

/// Human-readable description of the unperturbed portrait for one case,
/// e.g. "invisible fold-fold center at origin; saddles at (+-alpha/eta, 0)".
std::string describe(const CaseClass& c, double alpha, double eta);

} // namespace melosc
