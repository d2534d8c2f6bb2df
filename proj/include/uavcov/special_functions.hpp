#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "uavcov/rng.hpp"

namespace uavcov {

/// Nakagami-m amplitude fading parameters. The closed-form distribution
/// functions below require an integer shape.
struct NakagamiParams {
    int m = 1;          ///< shape, integer >= 1
    double omega = 1.0; ///< spread E[g^2], > 0

    void validate() const
    {
        if (m < 1)
            throw std::invalid_argument("NakagamiParams: shape m must be an integer >= 1, got " + std::to_string(m));
        if (!(omega > 0.0) || !std::isfinite(omega))
            throw std::invalid_argument("NakagamiParams: spread omega must be finite and > 0");
    }
};

namespace detail {

inline void check_gamma_args(int m, double x)
{
    if (m < 1)
        throw std::invalid_argument("incomplete gamma: shape must be an integer >= 1, got " + std::to_string(m));
    if (!(x >= 0.0) || !std::isfinite(x))
        throw std::invalid_argument("incomplete gamma: argument must be finite and >= 0");
}

} // namespace detail

/// Survival function of the Erlang(m, 1) distribution:
///   e^{-x} * sum_{k=0}^{m-1} x^k / k!
/// Computed directly so values near 0 keep full relative precision.
inline double erlang_sf(int m, double x)
{
    detail::check_gamma_args(m, x);
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < m; ++k) {
        term *= x / k;
        sum += term;
    }
    return std::exp(-x) * sum;
}

/// Regularized lower incomplete gamma gamma(m, x)/Gamma(m) for integer m.
inline double regularized_lower_gamma(int m, double x)
{
    double sf = erlang_sf(m, x);
    return sf >= 1.0 ? 0.0 : 1.0 - sf;
}

/// P[g <= x] for a Nakagami(m, omega) amplitude.
inline double nakagami_cdf(const NakagamiParams& p, double x)
{
    p.validate();
    if (!(x >= 0.0) || !std::isfinite(x))
        throw std::invalid_argument("nakagami_cdf: x must be finite and >= 0");
    return regularized_lower_gamma(p.m, (p.m / p.omega) * x * x);
}

/// P[g > x] for a Nakagami(m, omega) amplitude.
inline double nakagami_ccdf(const NakagamiParams& p, double x)
{
    p.validate();
    if (!(x >= 0.0) || !std::isfinite(x))
        throw std::invalid_argument("nakagami_ccdf: x must be finite and >= 0");
    return erlang_sf(p.m, (p.m / p.omega) * x * x);
}

/// Nakagami(m, omega) amplitude sample. g^2 is gamma(m, omega/m), drawn
/// as a sum of m exponentials (exact for integer shape).
template <class Rng>
double nakagami_sample(const NakagamiParams& p, Rng& rng)
{
    p.validate();
    double power = 0.0;
    for (int k = 0; k < p.m; ++k)
        power += exponential_sample(rng);
    return std::sqrt(power * p.omega / p.m);
}

inline double db_to_linear(double db)
{
    if (!std::isfinite(db))
        throw std::invalid_argument("db_to_linear: input must be finite");
    return std::pow(10.0, db / 10.0);
}

inline double dbm_to_watt(double dbm)
{
    if (!std::isfinite(dbm))
        throw std::invalid_argument("dbm_to_watt: input must be finite");
    return std::pow(10.0, dbm / 10.0) * 1e-3;
}

inline double linear_to_db(double ratio)
{
    if (!(ratio > 0.0) || !std::isfinite(ratio))
        throw std::invalid_argument("linear_to_db: input must be finite and > 0");
    return 10.0 * std::log10(ratio);
}

} // namespace uavcov
