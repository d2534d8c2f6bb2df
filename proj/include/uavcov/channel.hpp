#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "uavcov/special_functions.hpp"

namespace uavcov {

enum class LinkState { los, nlos };

constexpr LinkState opposite(LinkState s)
{
    return s == LinkState::los ? LinkState::nlos : LinkState::los;
}

constexpr const char* to_string(LinkState s)
{
    return s == LinkState::los ? "LOS" : "NLOS";
}

/// Environment constants of the air-to-ground channel: LOS-probability
/// sigmoid, per-state path-gain law and small-scale fading.
struct ChannelParams {
    double c_env = 9.6117;  ///< LOS sigmoid offset C (dimensionless)
    double y_env = 0.1581;  ///< LOS sigmoid slope Y (per degree)
    double cl = 7.244359600749906e-07; ///< LOS path-gain intercept at 1 m (10^-6.14)
    double cn = 6.30957344480193e-08;  ///< NLOS path-gain intercept at 1 m (10^-7.2)
    double al = 2.0;    ///< LOS path-loss exponent
    double an = 2.92;   ///< NLOS path-loss exponent
    NakagamiParams nakagami_los{3, 1.0};
    NakagamiParams nakagami_nlos{2, 1.0};

    double intercept(LinkState s) const { return s == LinkState::los ? cl : cn; }
    double exponent(LinkState s) const { return s == LinkState::los ? al : an; }
    const NakagamiParams& nakagami(LinkState s) const
    {
        return s == LinkState::los ? nakagami_los : nakagami_nlos;
    }

    void validate() const
    {
        if (!(c_env > 0.0) || !(y_env > 0.0))
            throw std::invalid_argument("ChannelParams: LOS sigmoid parameters must be > 0");
        if (!(cn > 0.0) || !(cn <= cl) || !(cl <= 1.0))
            throw std::invalid_argument("ChannelParams: intercepts must satisfy 0 < cn <= cl <= 1");
        if (!(al >= 2.0) || !(al <= an))
            throw std::invalid_argument("ChannelParams: exponents must satisfy 2 <= al <= an");
        nakagami_los.validate();
        nakagami_nlos.validate();
    }
};

/// Altitude / slant distance / horizontal distance triple, b^2 + h^2 = r^2.
struct Geometry {
    double h = 0.0;
    double r = 0.0;
    double b = 0.0;

    static Geometry from_slant(double h, double r)
    {
        if (!(h >= 0.0) || !(r >= h))
            throw std::invalid_argument("Geometry: need r >= h >= 0");
        return {h, r, std::sqrt(std::max(r * r - h * h, 0.0))};
    }

    static Geometry from_horizontal(double h, double b)
    {
        if (!(h >= 0.0) || !(b >= 0.0))
            throw std::invalid_argument("Geometry: need h >= 0 and b >= 0");
        return {h, std::hypot(h, b), b};
    }
};

namespace detail {

/// The LOS sigmoid evaluated at an elevation angle in radians. The single
/// place where the degree conversion happens.
inline double los_sigmoid(const ChannelParams& p, double elevation_rad)
{
    const double deg = elevation_rad * 180.0 / std::numbers::pi;
    return 1.0 / (1.0 + p.c_env * std::exp(-p.y_env * (deg - p.c_env)));
}

} // namespace detail

/// LOS probability as a function of altitude and 3D distance.
inline double p_los_3d(const ChannelParams& p, double h, double r)
{
    if (!(h >= 0.0) || !(r >= h) || !(r > 0.0))
        throw std::invalid_argument("p_los_3d: need r >= h >= 0 and r > 0");
    return detail::los_sigmoid(p, std::asin(h / r));
}

/// LOS probability as a function of altitude and horizontal distance.
/// Identical to p_los_3d at r = sqrt(rho^2 + h^2); rho = 0 is the overhead
/// limit (90 degrees).
inline double p_los_horizontal(const ChannelParams& p, double h, double rho)
{
    if (!(h >= 0.0) || !(rho >= 0.0))
        throw std::invalid_argument("p_los_horizontal: need h >= 0 and rho >= 0");
    if (h == 0.0 && rho == 0.0)
        throw std::invalid_argument("p_los_horizontal: (h=0, rho=0) has no defined elevation angle");
    const double angle = rho == 0.0 ? std::numbers::pi / 2.0 : std::atan(h / rho);
    return detail::los_sigmoid(p, angle);
}

/// Probability of the given link state at horizontal distance rho.
inline double p_state_horizontal(const ChannelParams& p, LinkState s, double h, double rho)
{
    const double pl = p_los_horizontal(p, h, rho);
    return s == LinkState::los ? pl : 1.0 - pl;
}

inline double p_state_3d(const ChannelParams& p, LinkState s, double h, double r)
{
    const double pl = p_los_3d(p, h, r);
    return s == LinkState::los ? pl : 1.0 - pl;
}

/// Path gain C_i * r^{-a_i}.
inline double path_gain(const ChannelParams& p, LinkState s, double r)
{
    if (!(r > 0.0) || !std::isfinite(r))
        throw std::invalid_argument("path_gain: need r > 0");
    const double a = p.exponent(s);
    if (a == 2.0)
        return p.intercept(s) / (r * r);
    return p.intercept(s) * std::pow(r, -a);
}

/// Distance at which a UAV of the opposite state matches the path gain of a
/// state-s UAV at distance r:  path_gain(s*, equivalent_distance(s, r)) ==
/// path_gain(s, r).
inline double equivalent_distance(const ChannelParams& p, LinkState s, double r)
{
    if (!(r > 0.0) || !std::isfinite(r))
        throw std::invalid_argument("equivalent_distance: need r > 0");
    const LinkState o = opposite(s);
    return std::pow(p.intercept(o) / p.intercept(s) * std::pow(r, p.exponent(s)),
                    1.0 / p.exponent(o));
}

} // namespace uavcov
