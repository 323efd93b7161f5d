#include <doctest.h>

#include <cmath>
#include <limits>

#include "melosc/closed_form.hpp"
#include "melosc/model.hpp"

using namespace melosc;

TEST_CASE("classify covers all nine sign octants") {
    CHECK(classify(1.0, 1.0).tag == CaseTag::C1);
    CHECK(classify(0.0, 1.0).tag == CaseTag::C2);
    CHECK(classify(-1.0, 1.0).tag == CaseTag::C3);
    CHECK(classify(1.0, 0.0).tag == CaseTag::C4);
    CHECK(classify(0.0, 0.0).tag == CaseTag::C5);
    CHECK(classify(-1.0, 0.0).tag == CaseTag::C6);
    CHECK(classify(1.0, -1.0).tag == CaseTag::C7);
    CHECK(classify(0.0, -1.0).tag == CaseTag::C8);
    CHECK(classify(-1.0, -1.0).tag == CaseTag::C9);
}

TEST_CASE("classify is constant within each octant and fills omega") {
    for (double a : {0.5, 2.0, 17.0}) {
        for (double e : {0.25, 3.0}) {
            CHECK(classify(a, e).tag == CaseTag::C1);
            CHECK(classify(-a, -e).tag == CaseTag::C9);
        }
    }
    const CaseClass c7 = classify(2.0, -4.0);
    CHECK(c7.tag == CaseTag::C7);
    REQUIRE(c7.omega.has_value());
    CHECK(*c7.omega == doctest::Approx(2.0).epsilon(1e-15));
    CHECK_FALSE(classify(1.0, 0.0).omega.has_value());
    CHECK_FALSE(classify(1.0, 2.0).omega.has_value());
}

TEST_CASE("annulus_info reproduces the half-period table") {
    const double inf = std::numeric_limits<double>::infinity();

    const AnnulusInfo c1 = annulus_info(1.0, 1.0);
    CHECK(c1.case_index == 1);
    CHECK(c1.domain_D.lo == 0.0);
    CHECK(c1.domain_D.hi == doctest::Approx(1.0));
    CHECK(c1.image_I.lo == 0.0);
    CHECK(c1.image_I.hi == inf);
    CHECK(c1.tau0_monotone_sign == +1);

    const AnnulusInfo c4 = annulus_info(2.0, 0.0);
    CHECK(c4.case_index == 4);
    CHECK(c4.domain_D.hi == inf);
    CHECK(c4.image_I.hi == inf);

    const AnnulusInfo c7 = annulus_info(2.0, -4.0);
    CHECK(c7.case_index == 7);
    CHECK(c7.image_I.lo == 0.0);
    CHECK(c7.image_I.hi == doctest::Approx(M_PI / 2.0));

    const AnnulusInfo c9 = annulus_info(-1.0, -1.0);
    CHECK(c9.case_index == 9);
    CHECK(c9.image_I.lo == doctest::Approx(M_PI));
    CHECK(c9.image_I.hi == doctest::Approx(2.0 * M_PI));
    CHECK(c9.tau0_monotone_sign == -1);
}

TEST_CASE("annulus_info rejects the non-annulus cases, C8 included") {
    CHECK_THROWS_AS(annulus_info(0.0, 1.0), NoPeriodAnnulus);  // C2
    CHECK_THROWS_AS(annulus_info(-1.0, 1.0), NoPeriodAnnulus); // C3
    CHECK_THROWS_AS(annulus_info(0.0, 0.0), NoPeriodAnnulus);  // C5
    CHECK_THROWS_AS(annulus_info(-1.0, 0.0), NoPeriodAnnulus); // C6
    CHECK_THROWS_AS(annulus_info(0.0, -1.0), NoPeriodAnnulus); // C8
}

TEST_CASE("sigma_admissible checks strict membership of sigma/2") {
    CHECK(sigma_admissible({1.0, 1.0, 2.0 * M_PI, 0.0}));         // (0, inf)
    CHECK_FALSE(sigma_admissible({1.0, -1.0, 2.0 * M_PI, 0.0}));  // pi not in (0, pi)
    CHECK(sigma_admissible({-1.0, -1.0, 3.0 * M_PI, 0.0}));       // 1.5*pi in (pi, 2*pi)
    CHECK_FALSE(sigma_admissible({-1.0, -1.0, 2.0 * M_PI, 0.0})); // boundary pi excluded
    CHECK_THROWS_AS(sigma_admissible({0.0, -1.0, 1.0, 0.0}), NoPeriodAnnulus);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(validate({1.0, 1.0, 0.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(validate({1.0, 1.0, -1.0, 0.0}), std::invalid_argument);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(validate({nan, 1.0, 1.0, 0.0}), std::invalid_argument);
    CHECK_NOTHROW(validate({1.0, 1.0, 1.0, 0.0}));
}

TEST_CASE("tau0 lands in I_i on a dense grid of D_i") {
    struct Setup {
        double alpha, eta;
    };
    for (const Setup s : {Setup{1.0, 1.0}, Setup{2.0, 0.0}, Setup{2.0, -4.0}, Setup{-1.0, -1.0}}) {
        const AnnulusInfo info = annulus_info(s.alpha, s.eta);
        const Parameters params{s.alpha, s.eta, 1.0, 0.0};
        const double hi = std::isfinite(info.domain_D.hi) ? info.domain_D.hi : 8.0;
        for (int k = 1; k <= 40; ++k) {
            const double y0 = info.domain_D.lo + (hi - info.domain_D.lo) * k / 41.0;
            const double t = tau0(y0, params);
            CHECK(info.image_I.contains_strict(t));
        }
    }
}

TEST_CASE("normalize_phase wraps into [0, sigma)") {
    CHECK(normalize_phase(0.0, 2.0) == 0.0);
    CHECK(normalize_phase(2.0, 2.0) == 0.0);
    CHECK(normalize_phase(-0.5, 2.0) == doctest::Approx(1.5));
    CHECK(normalize_phase(7.25, 2.0) == doctest::Approx(1.25));
}
