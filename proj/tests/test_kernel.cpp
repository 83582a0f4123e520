#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "smoothiso/kernel.hpp"
#include "smoothiso/quadrature.hpp"

using namespace smoothiso;

TEST_CASE("kernel shape invariants") {
    for (const char* name : {"triweight", "biweight"}) {
        const KernelSpec& k = kernel_by_name(name);
        CAPTURE(name);
        for (int i = 0; i <= 500; ++i) {
            const double u = -1.0 + 2.0 * i / 500.0;
            CHECK(k.k(u) >= 0.0);
            CHECK(std::fabs(k.k(u) - k.k(-u)) <= 1e-12);
        }
        CHECK(std::fabs(k.K0(1.0) - 1.0) <= 1e-12);
        CHECK(std::fabs(k.K1(1.0)) <= 1e-12);
        CHECK(k.k(-1.0) == 0.0);
        CHECK(k.k(1.0) == 0.0);
        CHECK(k.kprime(-1.0) == 0.0);
        CHECK(k.kprime(1.0) == 0.0);
    }
    CHECK_THROWS_AS((void)kernel_by_name("epanechnikov"), std::invalid_argument);
}

TEST_CASE("antiderivatives match composite Simpson at 101 points") {
    for (const char* name : {"triweight", "biweight"}) {
        const KernelSpec& k = kernel_by_name(name);
        for (int i = 0; i <= 100; ++i) {
            const double s = -1.0 + 2.0 * i / 100.0;
            if (s <= -1.0 + 1e-12) continue;
            const double q0 = simpson(k.k, -1.0, s, 2001);
            const double q1 = simpson([&](double u) { return u * k.k(u); }, -1.0, s, 2001);
            const double q2 =
                simpson([&](double u) { return u * u * k.k(u); }, -1.0, s, 2001);
            CHECK(std::fabs(k.K0(s) - q0) <= 1e-9);
            CHECK(std::fabs(k.K1(s) - q1) <= 1e-9);
            CHECK(std::fabs(k.K2(s) - q2) <= 1e-9);
        }
    }
}

TEST_CASE("boundary coefficients") {
    const KernelSpec& tw = triweight_kernel();

    SUBCASE("s = 1 gives (1, 0)") {
        const BoundaryCoeffs c = boundary_coeffs(tw, 1.0);
        CHECK(std::fabs(c.psi1 - 1.0) <= 1e-12);
        CHECK(std::fabs(c.psi2) <= 1e-12);
    }
    SUBCASE("triweight at s = 0 against a quadrature-and-solve oracle") {
        // K0(0) = 1/2, K1(0) = -35/256, K2(0) = 1/18
        const double a = simpson(tw.k, -1.0, 0.0, 8001);
        const double b = simpson([&](double u) { return u * tw.k(u); }, -1.0, 0.0, 8001);
        const double c2 = simpson([&](double u) { return u * u * tw.k(u); }, -1.0, 0.0, 8001);
        const double det = a * c2 - b * b;
        const BoundaryCoeffs c = boundary_coeffs(tw, 0.0);
        CHECK(c.psi1 == doctest::Approx(c2 / det).epsilon(1e-9));
        CHECK(c.psi2 == doctest::Approx(-b / det).epsilon(1e-9));
        CHECK(c.psi1 == doctest::Approx(6.1146).epsilon(1e-4));
        CHECK(c.psi2 == doctest::Approx(15.0475).epsilon(1e-4));
    }
    SUBCASE("defining equations at s = 0.3") {
        const BoundaryCoeffs c = boundary_coeffs(tw, 0.3);
        CHECK(std::fabs(c.psi1 * tw.K0(0.3) + c.psi2 * tw.K1(0.3) - 1.0) <= 1e-12);
        CHECK(std::fabs(c.psi1 * tw.K1(0.3) + c.psi2 * tw.K2(0.3)) <= 1e-12);
    }
    SUBCASE("continuity over the s grid") {
        // sup |psi2'| = 100.62, attained at s = 0 (psi2'(0) =
        // -K1(0) K0'(0) K2(0) terms over det^2), so a 1e-4 step moves psi2
        // by up to 1.007e-2
        for (int i = 0; i < 100; ++i) {
            const double s = i / 100.0;
            const BoundaryCoeffs a = boundary_coeffs(tw, s);
            const BoundaryCoeffs b = boundary_coeffs(tw, s + 1e-4);
            CHECK(std::fabs(a.psi1 - b.psi1) <= 1.1e-2);
            CHECK(std::fabs(a.psi2 - b.psi2) <= 1.1e-2);
        }
    }
    SUBCASE("domain") {
        CHECK_THROWS_AS((void)boundary_coeffs(tw, -0.1), std::invalid_argument);
        CHECK_THROWS_AS((void)boundary_coeffs(tw, 1.1), std::invalid_argument);
    }
}

TEST_CASE("boundary kernel branches and unbiasedness") {
    const KernelSpec& tw = triweight_kernel();
    const double b = 0.1;

    SUBCASE("interior branch is the plain kernel") {
        for (double x : {0.1, 0.33, 0.5, 0.9})
            for (double u : {-0.8, -0.2, 0.0, 0.5})
                CHECK(boundary_kernel_value(tw, x, b, u) == tw.k(u));
    }
    SUBCASE("left branch at x = 0") {
        const BoundaryCoeffs c = boundary_coeffs(tw, 0.0);
        for (double u : {-0.9, -0.3, 0.4})
            CHECK(boundary_kernel_value(tw, 0.0, b, u) ==
                  doctest::Approx((c.psi1 + c.psi2 * u) * tw.k(u)).epsilon(1e-13));
    }
    SUBCASE("unit mass and zero first moment at x = 0.3 b") {
        const double x = 0.3 * b;
        const double mass = integrate_gl(
            [&](double u) { return boundary_kernel_value(tw, x, b, u); }, -1.0, x / b, 128);
        const double moment = integrate_gl(
            [&](double u) { return u * boundary_kernel_value(tw, x, b, u); }, -1.0,
            x / b, 128);
        CHECK(std::fabs(mass - 1.0) <= 1e-10);
        CHECK(std::fabs(moment) <= 1e-10);
    }
    SUBCASE("right branch mirrors the left") {
        for (double u : {-0.7, 0.1, 0.6})
            CHECK(boundary_kernel_value(tw, 1.0, b, u) ==
                  doctest::Approx(boundary_kernel_value(tw, 0.0, b, -u)).epsilon(1e-13));
    }
    SUBCASE("bandwidth domain") {
        CHECK_THROWS_AS((void)boundary_kernel_value(tw, 0.5, 0.6, 0.0),
                        std::invalid_argument);
        CHECK_THROWS_AS((void)boundary_kernel_value(tw, 0.5, 0.0, 0.0),
                        std::invalid_argument);
    }
}

TEST_CASE("kernel autocorrelation and D^2") {
    const KernelSpec& tw = triweight_kernel();

    SUBCASE("triweight D^2 = 350/429 (closed-form polynomial integral)") {
        CHECK(std::fabs(kernel_Dsq(tw) - 350.0 / 429.0) <= 1e-9);
    }
    SUBCASE("r(0) = 1 and r vanishes off [-2,2]") {
        CHECK(autocorrelation_r(tw, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(autocorrelation_r(tw, 2.0) == 0.0);
        CHECK(autocorrelation_r(tw, -2.5) == 0.0);
    }
    SUBCASE("symmetry and boundedness on a 401-point grid") {
        for (int i = 0; i <= 400; ++i) {
            const double s = -2.0 + 4.0 * i / 400.0;
            const double r = autocorrelation_r(tw, s);
            CHECK(std::fabs(r - autocorrelation_r(tw, -s)) <= 1e-10);
            CHECK(std::fabs(r) <= 1.0 + 1e-12);
        }
    }
}
