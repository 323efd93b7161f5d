#include "melosc/model.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace melosc {

void validate(const Parameters& params) {
    if (!std::isfinite(params.alpha) || !std::isfinite(params.eta) ||
        !std::isfinite(params.sigma) || !std::isfinite(params.epsilon)) {
        throw std::invalid_argument("parameters must be finite");
    }
    if (params.sigma <= 0.0) {
        throw std::invalid_argument("sigma must be positive");
    }
}

std::string to_string(CaseTag tag) {
    return "C" + std::to_string(static_cast<int>(tag) + 1);
}

double normalize_phase(double theta, double sigma) {
    double r = std::fmod(theta, sigma);
    if (r < 0.0) r += sigma;
    // fmod can land exactly on sigma after the correction
    if (r >= sigma) r = 0.0;
    return r;
}

CaseClass classify(double alpha, double eta) {
    CaseClass c;
    if (eta > 0.0) {
        c.tag = alpha > 0.0 ? CaseTag::C1 : (alpha == 0.0 ? CaseTag::C2 : CaseTag::C3);
    } else if (eta == 0.0) {
        c.tag = alpha > 0.0 ? CaseTag::C4 : (alpha == 0.0 ? CaseTag::C5 : CaseTag::C6);
    } else {
        c.tag = alpha > 0.0 ? CaseTag::C7 : (alpha == 0.0 ? CaseTag::C8 : CaseTag::C9);
        c.omega = std::sqrt(-eta);
    }
    return c;
}

AnnulusInfo annulus_info(double alpha, double eta) {
    const CaseClass c = classify(alpha, eta);
    const double inf = std::numeric_limits<double>::infinity();
    AnnulusInfo info;
    switch (c.tag) {
    case CaseTag::C1:
        info.case_index = 1;
        info.domain_D = {0.0, alpha / std::sqrt(eta)};
        info.image_I = {0.0, inf};
        info.tau0_monotone_sign = +1;
        return info;
    case CaseTag::C4:
        info.case_index = 4;
        info.domain_D = {0.0, inf};
        info.image_I = {0.0, inf};
        info.tau0_monotone_sign = +1;
        return info;
    case CaseTag::C7:
        info.case_index = 7;
        info.domain_D = {0.0, inf};
        info.image_I = {0.0, M_PI / *c.omega};
        info.tau0_monotone_sign = +1;
        return info;
    case CaseTag::C9:
        info.case_index = 9;
        info.domain_D = {0.0, inf};
        info.image_I = {M_PI / *c.omega, 2.0 * M_PI / *c.omega};
        info.tau0_monotone_sign = -1;
        return info;
    default:
        throw NoPeriodAnnulus("case " + to_string(c.tag) +
                              " has no period annulus with invertible half-period");
    }
}

bool sigma_admissible(const Parameters& params) {
    validate(params);
    return annulus_info(params.alpha, params.eta).image_I.contains_strict(params.sigma / 2.0);
}

std::string describe(const CaseClass& c, double alpha, double eta) {
    std::ostringstream os;
    switch (c.tag) {
    case CaseTag::C1: {
        os << "invisible fold-fold center at origin; saddles at (+-" << alpha / eta << ", 0)";
        break;
    }
    case CaseTag::C2:
        os << "smooth vector field with a saddle at origin";
        break;
    case CaseTag::C3:
        os << "visible fold-fold at origin";
        break;
    case CaseTag::C4:
        os << "invisible fold-fold center at origin";
        break;
    case CaseTag::C5:
        os << "smooth vector field; line y=0 of critical points";
        break;
    case CaseTag::C6:
        os << "visible fold-fold at origin";
        break;
    case CaseTag::C7:
        os << "invisible fold-fold center at origin";
        break;
    case CaseTag::C8:
        os << "smooth linear center at origin";
        break;
    case CaseTag::C9:
        os << "visible fold-fold at origin; linear centers at p+- = (+-" << alpha / eta
           << ", 0)";
        break;
    }
    return os.str();
}

} // namespace melosc
