#include <doctest.h>

#include <cmath>
#include <vector>

#include "melosc/closed_form.hpp"

using namespace melosc;

namespace {

// y0 grids strictly inside D_i for each annulus case
struct CaseSetup {
    Parameters params;
    std::vector<double> y0s;
};

std::vector<CaseSetup> annulus_setups() {
    return {
        {{1.0, 1.0, 2.0 * M_PI, 0.0}, {0.1, 0.3, 0.5, 0.7, 0.9}},
        {{2.0, 0.0, 2.0, 0.0}, {0.2, 0.8, 1.5, 3.0, 6.0}},
        {{1.0, -1.0, 1.0, 0.0}, {0.2, 0.8, 1.5, 3.0, 6.0}},
        {{-1.0, -1.0, 3.0 * M_PI, 0.0}, {0.2, 0.8, 1.5, 3.0, 6.0}},
    };
}

} // namespace

TEST_CASE("involutions act as reflections and square to identity") {
    const PhasePoint p{1.0, 2.0};
    const PhasePoint rp = apply_involution(Involution::R, p);
    CHECK(rp.x == -1.0);
    CHECK(rp.y == 2.0);
    const PhasePoint sp = apply_involution(Involution::S, p);
    CHECK(sp.x == 1.0);
    CHECK(sp.y == -2.0);
    const PhasePoint rr = apply_involution(Involution::R, rp);
    CHECK(rr.x == p.x);
    CHECK(rr.y == p.y);
}

TEST_CASE("exp_At at t = 0 is the identity for every eta sign") {
    for (double eta : {2.0, 0.0, -3.0}) {
        const Mat2 m = exp_At(0.0, eta);
        CHECK(m.a11 == 1.0);
        CHECK(m.a12 == 0.0);
        CHECK(m.a21 == 0.0);
        CHECK(m.a22 == 1.0);
    }
}

TEST_CASE("exp_At branch values") {
    // eta = 0: shear
    const Mat2 shear = exp_At(3.0, 0.0);
    CHECK(shear.a11 == 1.0);
    CHECK(shear.a12 == 3.0);
    CHECK(shear.a21 == 0.0);
    CHECK(shear.a22 == 1.0);

    // eta = -1, t = pi/2: quarter rotation-like matrix
    const Mat2 rot = exp_At(M_PI / 2.0, -1.0);
    CHECK(std::abs(rot.a11) < 1e-15);
    CHECK(rot.a12 == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(rot.a21 == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(std::abs(rot.a22) < 1e-15);

    // eta = 1, t = 1: hyperbolic entries against the frozen oracle values
    const Mat2 hyp = exp_At(1.0, 1.0);
    CHECK(hyp.a11 == doctest::Approx(1.5430806348152437785).epsilon(1e-15));
    CHECK(hyp.a12 == doctest::Approx(1.1752011936438014569).epsilon(1e-15));
    CHECK(hyp.a21 == doctest::Approx(1.1752011936438014569).epsilon(1e-15));
}

TEST_CASE("det(exp_At) = 1 and the group property hold on a grid") {
    for (double eta : {4.0, 1.0, 1e-6, 0.0, -1e-6, -1.0, -9.0}) {
        for (int k = -10; k <= 10; ++k) {
            const double t = k * 1.0;
            const Mat2 m = exp_At(t, eta);
            CHECK(std::abs(m.det() - 1.0) <= 1e-12);
            const Mat2 prod = m * exp_At(-t, eta);
            CHECK(std::abs(prod.a11 - 1.0) <= 1e-12);
            CHECK(std::abs(prod.a12) <= 1e-12);
            CHECK(std::abs(prod.a21) <= 1e-12);
            CHECK(std::abs(prod.a22 - 1.0) <= 1e-12);
        }
    }
}

TEST_CASE("matrix reversibility e^{At} = R e^{-At} R") {
    // R as a matrix is diag(-1, 1); conjugation flips the off-diagonal signs.
    for (double eta : {2.0, 0.0, -2.0}) {
        for (double t : {-3.0, -0.5, 0.25, 1.0, 7.0}) {
            const Mat2 m = exp_At(t, eta);
            const Mat2 n = exp_At(-t, eta);
            CHECK(std::abs(m.a11 - n.a11) <= 1e-13);
            CHECK(std::abs(m.a12 + n.a12) <= 1e-13);
            CHECK(std::abs(m.a21 + n.a21) <= 1e-13);
            CHECK(std::abs(m.a22 - n.a22) <= 1e-13);
        }
    }
}

TEST_CASE("u_vector equals the second column of exp_At(-t)") {
    CHECK(u_vector(0.0, 5.0)[0] == 0.0);
    CHECK(u_vector(0.0, 5.0)[1] == 1.0);
    CHECK(u_vector(2.0, 0.0)[0] == -2.0);
    CHECK(u_vector(2.0, 0.0)[1] == 1.0);
    CHECK(u_vector(1.0, 1.0)[0] == doctest::Approx(-1.1752011936438014569).epsilon(1e-15));
    CHECK(u_vector(1.0, 1.0)[1] == doctest::Approx(1.5430806348152437785).epsilon(1e-15));

    for (double eta : {3.0, 0.0, -3.0}) {
        for (double t : {-2.0, -0.3, 0.7, 2.5}) {
            const Mat2 m = exp_At(-t, eta);
            const auto u = u_vector(t, eta);
            CHECK(u[0] == doctest::Approx(m.a12).epsilon(1e-14));
            CHECK(u[1] == doctest::Approx(m.a22).epsilon(1e-14));
        }
    }
}

TEST_CASE("gamma_plus basic values") {
    const Parameters c4{1.0, 0.0, 2.0, 0.0};
    const PhasePoint p = gamma_plus(1.0, 1.0, c4);
    CHECK(p.x == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(std::abs(p.y) < 1e-15);

    for (const auto& setup : annulus_setups()) {
        const PhasePoint start = gamma_plus(0.0, 0.7, setup.params);
        CHECK(start.x == 0.0);
        CHECK(start.y == 0.7);
    }
}

TEST_CASE("flow matches the vector field by central differences") {
    const double h = 1e-6;
    for (const auto& setup : annulus_setups()) {
        const Parameters& prm = setup.params;
        for (double y0 : setup.y0s) {
            for (double t : {0.1, 0.4, 0.9, 1.7}) {
                const PhasePoint fwd = gamma_plus(t + h, y0, prm);
                const PhasePoint bwd = gamma_plus(t - h, y0, prm);
                const PhasePoint here = gamma_plus(t, y0, prm);
                const double dx = (fwd.x - bwd.x) / (2.0 * h);
                const double dy = (fwd.y - bwd.y) / (2.0 * h);
                CHECK(dx == doctest::Approx(here.y).epsilon(1e-6).scale(1.0));
                CHECK(dy == doctest::Approx(prm.eta * here.x - prm.alpha)
                                .epsilon(1e-6)
                                .scale(1.0));
            }
        }
    }
}

TEST_CASE("half-period hit and mid-time symmetry") {
    for (const auto& setup : annulus_setups()) {
        for (double y0 : setup.y0s) {
            const double T = tau0(y0, setup.params);
            const PhasePoint hit = gamma_plus(T, y0, setup.params);
            CHECK(std::abs(hit.x) <= 1e-10);
            CHECK(std::abs(hit.y + y0) <= 1e-10);
            const PhasePoint mid = gamma_plus(0.5 * T, y0, setup.params);
            CHECK(std::abs(mid.y) <= 1e-10);

            // gamma_minus reaches the same point at -tau0
            const PhasePoint mhit = gamma_minus(-T, y0, setup.params);
            CHECK(std::abs(mhit.x) <= 1e-10);
            CHECK(std::abs(mhit.y + y0) <= 1e-10);
        }
    }
}

TEST_CASE("gamma_minus is R of gamma_plus at reversed time") {
    const Parameters c4{1.0, 0.0, 2.0, 0.0};
    const PhasePoint p = gamma_minus(-1.0, 1.0, c4);
    CHECK(p.x == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(std::abs(p.y) < 1e-15);

    for (const auto& setup : annulus_setups()) {
        for (double t : {-1.2, 0.3, 0.9}) {
            const PhasePoint minus = gamma_minus(t, 0.6, setup.params);
            const PhasePoint plus = gamma_plus(-t, 0.6, setup.params);
            CHECK(minus.x == doctest::Approx(-plus.x).epsilon(1e-14));
            CHECK(minus.y == doctest::Approx(plus.y).epsilon(1e-14));
        }
    }
}

TEST_CASE("tau0 known values and domain gating") {
    const Parameters c4{2.0, 0.0, 2.0, 0.0};
    CHECK(tau0(1.0, c4) == doctest::Approx(1.0).epsilon(1e-15));

    const Parameters c7{1.0, -1.0, 1.0, 0.0};
    CHECK(tau0(1.0, c7) == doctest::Approx(M_PI / 2.0).epsilon(1e-15));

    const Parameters c1{1.0, 1.0, 1.0, 0.0};
    CHECK(tau0(0.5, c1) == doctest::Approx(1.0986122886681096914).epsilon(1e-15));
    CHECK_THROWS_AS(tau0(1.0, c1), OutOfAnnulusDomain);  // boundary of D_1
    CHECK_THROWS_AS(tau0(1.5, c1), OutOfAnnulusDomain);
    CHECK_THROWS_AS(tau0(0.0, c1), OutOfAnnulusDomain);
    CHECK_THROWS_AS(tau0(0.5, Parameters{0.0, 1.0, 1.0, 0.0}), NoPeriodAnnulus);

    // monotone growth toward the C1 boundary (log singularity)
    double prev = 0.0;
    for (double y0 : {0.9, 0.99, 0.999, 0.9999}) {
        const double t = tau0(y0, c1);
        CHECK(t > prev);
        prev = t;
    }
    CHECK(prev > 9.0);
}

TEST_CASE("tau0 is strictly monotone with the documented sign") {
    for (const auto& setup : annulus_setups()) {
        const AnnulusInfo info = annulus_info(setup.params.alpha, setup.params.eta);
        double prev = tau0(setup.y0s.front(), setup.params);
        for (std::size_t i = 1; i < setup.y0s.size(); ++i) {
            const double next = tau0(setup.y0s[i], setup.params);
            if (info.tau0_monotone_sign > 0) {
                CHECK(next > prev);
            } else {
                CHECK(next < prev);
            }
            prev = next;
        }
    }
}

TEST_CASE("v_of inverts tau0 on both sides") {
    const Parameters c4{2.0, 0.0, 2.0, 0.0};
    CHECK(v_of(1.0, c4) == doctest::Approx(1.0).epsilon(1e-15));

    const Parameters c1{1.0, 1.0, 2.0 * M_PI, 0.0};
    CHECK(v_of(M_PI, c1) == doctest::Approx(0.91715233566727434637).epsilon(1e-15));
    CHECK(v_of(tau0(0.5, c1), c1) == doctest::Approx(0.5).epsilon(1e-12));

    for (const auto& setup : annulus_setups()) {
        const AnnulusInfo info = annulus_info(setup.params.alpha, setup.params.eta);
        for (double y0 : setup.y0s) {
            const double t = tau0(y0, setup.params);
            CHECK(v_of(t, setup.params) == doctest::Approx(y0).epsilon(1e-12));
        }
        // the other direction, on a grid of I_i
        const double hi = std::isfinite(info.image_I.hi) ? info.image_I.hi : 8.0;
        for (int k = 1; k <= 9; ++k) {
            const double s = info.image_I.lo + (hi - info.image_I.lo) * k / 10.0;
            CHECK(tau0(v_of(s, setup.params), setup.params) == doctest::Approx(s).epsilon(1e-12));
        }
    }

    CHECK_THROWS_AS(v_of(0.0, c4), OutOfAnnulusImage);
    CHECK_THROWS_AS(v_of(-1.0, c4), OutOfAnnulusImage);
    const Parameters c7{1.0, -1.0, 1.0, 0.0};
    CHECK_THROWS_AS(v_of(M_PI, c7), OutOfAnnulusImage); // boundary of I_7
}

TEST_CASE("kernel_U against the closed form and the inner-product identity") {
    // eta = 0 branch: U(t, s) = -alpha (2t - s)/2
    const Parameters c4{1.0, 0.0, 4.0, 0.0};
    CHECK(kernel_U(0.0, 2.0, c4) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(kernel_U(1.0, 2.0, c4) == 0.0); // the (2t - s) factor vanishes at t = s/2

    // frozen hyperbolic value: -sech(1) sinh(t - 1) at t = 0.7, s = 2, eta = 1
    const Parameters c1{1.0, 1.0, 1.0, 0.0};
    CHECK(kernel_U(0.7, 2.0, c1) == doctest::Approx(0.19734567758580125055).epsilon(1e-14));

    for (const auto& setup : annulus_setups()) {
        const AnnulusInfo info = annulus_info(setup.params.alpha, setup.params.eta);
        const double hi = std::isfinite(info.image_I.hi) ? info.image_I.hi : 6.0;
        for (int k = 1; k <= 7; ++k) {
            const double s = info.image_I.lo + (hi - info.image_I.lo) * k / 8.0;
            const double v = v_of(s, setup.params);
            for (int j = 0; j <= 10; ++j) {
                const double t = s * j / 10.0;
                const auto u = u_vector(t, setup.params.eta);
                const double dot = setup.params.alpha * u[0] + v * u[1];
                CHECK(kernel_U(t, s, setup.params) == doctest::Approx(dot).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("kernel_U log-space path for very stiff C1 kernels") {
    // sqrt(eta)*s far beyond the overflow threshold of cosh
    const Parameters stiff{1.0, 4.0, 1.0, 0.0};
    const double s = 800.0;
    const double mid = kernel_U(0.5 * s, s, stiff);
    CHECK(mid == 0.0);
    // near t = 0 the ratio sinh/cosh approaches -tanh -> -1, so U -> alpha/sqrt(eta)
    const double near_edge = kernel_U(0.0, s, stiff);
    CHECK(near_edge == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::isfinite(kernel_U(0.25 * s, s, stiff)));
}

TEST_CASE("PropA constancy: (alpha - eta x, y) exp_At stays (alpha, y0)") {
    for (const auto& setup : annulus_setups()) {
        const Parameters& prm = setup.params;
        for (double y0 : setup.y0s) {
            for (double t : {0.0, 0.3, 0.8, 1.9, 3.1}) {
                const PhasePoint g = gamma_plus(t, y0, prm);
                const Mat2 m = exp_At(t, prm.eta);
                const double row1 = prm.alpha - prm.eta * g.x;
                const double row2 = g.y;
                const double b1 = row1 * m.a11 + row2 * m.a21;
                const double b2 = row1 * m.a12 + row2 * m.a22;
                CHECK(std::abs(b1 - prm.alpha) <= 1e-10);
                CHECK(std::abs(b2 - y0) <= 1e-10);
            }
        }
    }
}

TEST_CASE("eta -> 0 limit of the scaled primitives is continuous") {
    const Parameters flat{1.3, 0.0, 2.0, 0.0};
    for (double eta : {1e-9, -1e-9, 1e-12, -1e-12}) {
        const Parameters near{1.3, eta, 2.0, 0.0};
        for (double t : {0.5, 1.5, 3.0}) {
            const PhasePoint a = gamma_plus(t, 0.8, near);
            const PhasePoint b = gamma_plus(t, 0.8, flat);
            CHECK(a.x == doctest::Approx(b.x).epsilon(1e-10));
            CHECK(a.y == doctest::Approx(b.y).epsilon(1e-10));
            const Mat2 ma = exp_At(t, eta);
            const Mat2 mb = exp_At(t, 0.0);
            CHECK(ma.a12 == doctest::Approx(mb.a12).epsilon(1e-10));
            CHECK(ma.a11 == doctest::Approx(mb.a11).epsilon(1e-10));
        }
    }
}
