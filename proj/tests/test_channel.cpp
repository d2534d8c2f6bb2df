#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "uavcov/channel.hpp"

using namespace uavcov;
using namespace Catch::Matchers;

namespace {
const ChannelParams urban{};
}

TEST_CASE("LOS probability, 3D parametrization")
{
    // overhead: theta = 90 degrees
    CHECK_THAT(p_los_3d(urban, 300.0, 300.0), WithinAbs(0.9999709484341895, 1e-13));
    // elevation angle exactly C degrees: sigmoid exponent vanishes
    const double h = 1000.0 * std::sin(urban.c_env * std::numbers::pi / 180.0);
    CHECK_THAT(p_los_3d(urban, h, 1000.0), WithinAbs(1.0 / (1.0 + urban.c_env), 1e-13));
    CHECK_THAT(p_los_3d(urban, h, 1000.0), WithinAbs(0.09423560786678854, 1e-13));
    // theta = 30 degrees
    CHECK_THAT(p_los_3d(urban, 200.0, 400.0), WithinAbs(0.7232037110070928, 1e-13));

    CHECK_THROWS_AS(p_los_3d(urban, 100.0, 50.0), std::invalid_argument);
    CHECK_THROWS_AS(p_los_3d(urban, 0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(p_los_3d(urban, -1.0, 10.0), std::invalid_argument);
}

TEST_CASE("LOS probability, horizontal parametrization")
{
    const double b = std::sqrt(400.0 * 400.0 - 200.0 * 200.0);
    CHECK_THAT(p_los_horizontal(urban, 200.0, b), WithinAbs(0.7232037110070928, 1e-13));
    // ground-level floor: theta = 0 for any rho > 0
    CHECK_THAT(p_los_horizontal(urban, 0.0, 123.0), WithinAbs(0.02225698720502313, 1e-13));
    // directly overhead
    CHECK_THAT(p_los_horizontal(urban, 300.0, 0.0), WithinAbs(0.9999709484341895, 1e-13));

    CHECK_THROWS_AS(p_los_horizontal(urban, 0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(p_los_horizontal(urban, -1.0, 10.0), std::invalid_argument);
    CHECK_THROWS_AS(p_los_horizontal(urban, 10.0, -1.0), std::invalid_argument);
}

TEST_CASE("parametrizations agree to machine precision")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (double h = 0.0; h <= 1000.0; h += 100.0) {
        for (int k = 0; k < 200; ++k) {
            const double r = std::max(h, 1e-3) + unit(rng) * (3000.0 - h);
            const double b = std::sqrt(std::max(r * r - h * h, 0.0));
            if (h == 0.0 && b == 0.0)
                continue;
            CHECK_THAT(p_los_horizontal(urban, h, b), WithinAbs(p_los_3d(urban, h, r), 1e-12));
        }
    }
}

TEST_CASE("LOS probability rises with altitude at fixed slant distance")
{
    double prev = 0.0;
    for (double h = 0.0; h <= 500.0; h += 25.0) {
        const double p = p_los_3d(urban, h, 500.0);
        CHECK(p >= prev);
        prev = p;
    }
}

TEST_CASE("state probabilities are exact complements")
{
    for (double rho : {0.0, 1.0, 50.0, 400.0, 2500.0})
        CHECK(p_state_horizontal(urban, LinkState::los, 120.0, rho) +
                  p_state_horizontal(urban, LinkState::nlos, 120.0, rho) ==
              1.0);
}

TEST_CASE("path gain values")
{
    CHECK(path_gain(urban, LinkState::los, 1.0) == urban.cl);
    CHECK_THAT(path_gain(urban, LinkState::los, 100.0), WithinRel(7.244359600749906e-11, 1e-14));
    CHECK_THAT(path_gain(urban, LinkState::nlos, 100.0), WithinRel(9.120108393559096e-14, 1e-13));

    double prev = path_gain(urban, LinkState::nlos, 1.0);
    for (double r = 10.0; r <= 3000.0; r *= 2.0) {
        const double g = path_gain(urban, LinkState::nlos, r);
        CHECK(g < prev);
        prev = g;
    }

    CHECK_THROWS_AS(path_gain(urban, LinkState::los, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(path_gain(urban, LinkState::los, -3.0), std::invalid_argument);
}

TEST_CASE("equivalent distance: frozen value and defining identity")
{
    CHECK_THAT(equivalent_distance(urban, LinkState::los, 100.0), WithinRel(10.1589615143123, 1e-12));

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> logr(0.0, std::log(3000.0));
    for (int k = 0; k < 500; ++k) {
        const double r = std::exp(logr(rng));
        for (LinkState s : {LinkState::los, LinkState::nlos}) {
            const double a = equivalent_distance(urban, s, r);
            const double lhs = path_gain(urban, opposite(s), a);
            const double rhs = path_gain(urban, s, r);
            CHECK_THAT(lhs, WithinRel(rhs, 1e-10));
        }
        // the two maps invert each other
        const double back =
            equivalent_distance(urban, LinkState::nlos, equivalent_distance(urban, LinkState::los, r));
        CHECK_THAT(back, WithinRel(r, 1e-8));
    }
}

TEST_CASE("equivalent distance: symmetric channel is the identity")
{
    ChannelParams sym = urban;
    sym.cn = sym.cl;
    sym.an = sym.al;
    CHECK_THAT(equivalent_distance(sym, LinkState::los, 137.0), WithinRel(137.0, 1e-14));
    CHECK_THAT(equivalent_distance(sym, LinkState::nlos, 2.5), WithinRel(2.5, 1e-14));
}

TEST_CASE("geometry invariant")
{
    const Geometry g = Geometry::from_slant(200.0, 400.0);
    CHECK_THAT(g.b * g.b + g.h * g.h, WithinRel(g.r * g.r, 1e-14));
    const Geometry g2 = Geometry::from_horizontal(200.0, g.b);
    CHECK_THAT(g2.r, WithinRel(400.0, 1e-14));
    CHECK_THROWS_AS(Geometry::from_slant(10.0, 5.0), std::invalid_argument);
}

TEST_CASE("channel parameter validation")
{
    CHECK_NOTHROW(urban.validate());
    ChannelParams bad = urban;
    bad.cn = bad.cl * 2.0; // NLOS intercept above LOS
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = urban;
    bad.al = 1.5;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = urban;
    bad.y_env = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = urban;
    bad.nakagami_los.m = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("link state opposite")
{
    CHECK(opposite(LinkState::los) == LinkState::nlos);
    CHECK(opposite(LinkState::nlos) == LinkState::los);
}
