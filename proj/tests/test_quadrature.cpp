#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>

#include "uavcov/quadrature.hpp"

using namespace uavcov;
using namespace Catch::Matchers;

TEST_CASE("single panel is exact for low-degree polynomials")
{
    auto cubic = [](double x) { return 3.0 * x * x * x - x + 2.0; };
    // antiderivative: 3/4 x^4 - x^2/2 + 2x
    const double exact = 0.75 * 16.0 - 2.0 + 4.0;
    CHECK_THAT(gauss_kronrod_15(cubic, 0.0, 2.0).value, WithinRel(exact, 1e-14));

    auto deg10 = [](double x) { return std::pow(x, 10.0); };
    CHECK_THAT(gauss_kronrod_15(deg10, -1.0, 1.0).value, WithinRel(2.0 / 11.0, 1e-13));
}

TEST_CASE("adaptive integral matches known antiderivatives")
{
    QuadratureSettings q;
    CHECK_THAT(integrate([](double x) { return std::exp(x); }, 0.0, 1.0, q),
               WithinRel(std::exp(1.0) - 1.0, 1e-12));
    CHECK_THAT(integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi, q),
               WithinRel(2.0, 1e-12));
    CHECK_THAT(integrate([](double x) { return 1.0 / (1.0 + x * x); }, -40.0, 40.0, q),
               WithinRel(2.0 * std::atan(40.0), 1e-10));
    CHECK(integrate([](double) { return 1.0; }, 3.0, 3.0, q) == 0.0);
}

TEST_CASE("adaptive integral handles an endpoint sqrt kink")
{
    QuadratureSettings q;
    const double val = integrate([](double x) { return std::sqrt(x); }, 0.0, 4.0, q);
    CHECK_THAT(val, WithinAbs(16.0 / 3.0, 1e-8));
}

TEST_CASE("non-convergence is reported, not truncated")
{
    QuadratureSettings q;
    q.max_depth = 3;
    q.abs_tol = 1e-14;
    q.rel_tol = 1e-14;
    auto nasty = [](double x) { return std::sin(1.0 / (x + 1e-6)); };
    CHECK_THROWS_AS(integrate(nasty, 0.0, 1.0, q, "nasty oscillator"), NumericalError);
    try {
        integrate(nasty, 0.0, 1.0, q, "nasty oscillator");
    } catch (const NumericalError& e) {
        CHECK(std::string(e.what()).find("nasty oscillator") != std::string::npos);
    }
}

TEST_CASE("segment list integrates piecewise")
{
    QuadratureSettings q;
    const std::array<double, 3> pts{0.0, 1.0, 2.0};
    auto kinked = [](double x) { return x < 1.0 ? x : 2.0 - x; };
    CHECK_THAT(integrate_segments(kinked, pts, q), WithinRel(1.0, 1e-12));
}

TEST_CASE("settings validation")
{
    QuadratureSettings q;
    q.abs_tol = 0.0;
    CHECK_THROWS_AS(q.validate(), std::invalid_argument);
    q = {};
    q.max_depth = 0;
    CHECK_THROWS_AS(q.validate(), std::invalid_argument);
    q = {};
    q.r_max = -5.0;
    CHECK_THROWS_AS(q.validate(), std::invalid_argument);
    q = {};
    CHECK_NOTHROW(q.validate());
}
