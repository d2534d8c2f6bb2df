#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "uavcov/special_functions.hpp"

using namespace uavcov;
using namespace Catch::Matchers;

namespace {

// Composite Simpson oracle, independent of the closed forms under test.
template <class F>
double simpson(F f, double a, double b, int panels)
{
    const double h = (b - a) / panels;
    double sum = f(a) + f(b);
    for (int i = 1; i < panels; ++i)
        sum += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

double lower_gamma_by_quadrature(int m, double x)
{
    if (x == 0.0)
        return 0.0;
    auto integrand = [m](double t) { return std::pow(t, m - 1) * std::exp(-t); };
    double fact = 1.0;
    for (int k = 2; k < m; ++k)
        fact *= k;
    return simpson(integrand, 0.0, x, 200000) / fact;
}

} // namespace

TEST_CASE("regularized lower gamma: closed form values")
{
    CHECK(regularized_lower_gamma(1, 0.0) == 0.0);
    CHECK_THAT(regularized_lower_gamma(1, std::log(2.0)), WithinAbs(0.5, 1e-15));
    // 1 - e^{-2} (1 + 2 + 2)
    CHECK_THAT(regularized_lower_gamma(3, 2.0), WithinAbs(0.3233235838169365, 1e-15));
    CHECK_THAT(regularized_lower_gamma(3, 2.0), WithinAbs(lower_gamma_by_quadrature(3, 2.0), 1e-9));
}

TEST_CASE("regularized lower gamma: agrees with numerical integration")
{
    for (int m : {1, 2, 3})
        for (double x : {0.01, 0.1, 1.0, 5.0, 20.0})
            CHECK_THAT(regularized_lower_gamma(m, x),
                       WithinAbs(lower_gamma_by_quadrature(m, x), 1e-9));
}

TEST_CASE("regularized lower gamma: monotone, saturates to 1")
{
    for (int m : {1, 2, 3, 5}) {
        double prev = regularized_lower_gamma(m, 0.0);
        CHECK(prev == 0.0);
        for (double x = 0.25; x <= 30.0; x += 0.25) {
            const double cur = regularized_lower_gamma(m, x);
            CHECK(cur >= prev);
            CHECK(cur <= 1.0);
            prev = cur;
        }
        CHECK(regularized_lower_gamma(m, 50.0) > 1.0 - 1e-12);
    }
}

TEST_CASE("regularized lower gamma: rejects bad arguments")
{
    CHECK_THROWS_AS(regularized_lower_gamma(0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(regularized_lower_gamma(-2, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(regularized_lower_gamma(2, -0.5), std::invalid_argument);
    CHECK_THROWS_AS(regularized_lower_gamma(2, std::nan("")), std::invalid_argument);
    CHECK_THROWS_AS(regularized_lower_gamma(2, std::numeric_limits<double>::infinity()),
                    std::invalid_argument);
}

TEST_CASE("nakagami ccdf: values and shape")
{
    CHECK(nakagami_ccdf({3, 1.0}, 0.0) == 1.0);
    CHECK_THAT(nakagami_ccdf({1, 1.0}, std::sqrt(std::log(2.0))), WithinAbs(0.5, 1e-15));
    // e^{-2} (1 + 2)
    CHECK_THAT(nakagami_ccdf({2, 1.0}, 1.0), WithinAbs(0.4060058497098381, 1e-15));

    double prev = 1.0;
    for (double x = 0.05; x < 4.0; x += 0.05) {
        const double cur = nakagami_ccdf({2, 1.0}, x);
        CHECK(cur < prev);
        prev = cur;
    }

    CHECK_THROWS_AS(nakagami_ccdf({0, 1.0}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(nakagami_ccdf({2, -1.0}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(nakagami_ccdf({2, 1.0}, -1.0), std::invalid_argument);
}

TEST_CASE("nakagami ccdf and cdf are complements")
{
    for (double x : {0.0, 0.3, 1.0, 2.5})
        CHECK_THAT(nakagami_cdf({3, 2.0}, x) + nakagami_ccdf({3, 2.0}, x), WithinAbs(1.0, 1e-12));
}

TEST_CASE("nakagami sampler: second moment and tail frequency")
{
    std::mt19937_64 rng(2024);
    const NakagamiParams los{3, 1.0};
    const std::size_t n = 1'000'000;
    double power_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double g = nakagami_sample(los, rng);
        power_sum += g * g;
    }
    CHECK_THAT(power_sum / n, WithinAbs(1.0, 0.005));

    const NakagamiParams nlos{2, 1.0};
    std::size_t above = 0;
    for (std::size_t i = 0; i < n; ++i)
        above += nakagami_sample(nlos, rng) > 1.0 ? 1 : 0;
    CHECK_THAT(static_cast<double>(above) / n, WithinAbs(nakagami_ccdf(nlos, 1.0), 0.002));
}

TEST_CASE("nakagami sampler: deterministic for a fixed seed")
{
    std::mt19937_64 a(99), b(99);
    for (int i = 0; i < 1000; ++i)
        REQUIRE(nakagami_sample({3, 1.0}, a) == nakagami_sample({3, 1.0}, b));
}

TEST_CASE("nakagami sampler: Kolmogorov-Smirnov against the analytic CDF")
{
    const NakagamiParams p{3, 1.0};
    const std::size_t n = 100'000;
    std::mt19937_64 rng(7);
    std::vector<double> samples(n);
    for (auto& s : samples)
        s = nakagami_sample(p, rng);
    std::sort(samples.begin(), samples.end());

    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double f = nakagami_cdf(p, samples[i]);
        d = std::max(d, std::fabs(f - static_cast<double>(i + 1) / n));
        d = std::max(d, std::fabs(f - static_cast<double>(i) / n));
    }
    const double critical_1pct = 1.62762 / std::sqrt(static_cast<double>(n));
    CHECK(d < critical_1pct);
}

TEST_CASE("unit conversions")
{
    CHECK(db_to_linear(0.0) == 1.0);
    CHECK_THAT(db_to_linear(5.0), WithinRel(3.1622776601683795, 1e-15));
    CHECK_THAT(dbm_to_watt(20.0), WithinRel(0.1, 1e-15));
    CHECK_THAT(dbm_to_watt(-84.0), WithinRel(3.981071705534969e-12, 1e-15));
    CHECK_THAT(linear_to_db(db_to_linear(-7.3)), WithinAbs(-7.3, 1e-12));
    CHECK_THROWS_AS(db_to_linear(std::nan("")), std::invalid_argument);
    CHECK_THROWS_AS(dbm_to_watt(std::numeric_limits<double>::infinity()), std::invalid_argument);
}
