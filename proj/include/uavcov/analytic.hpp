#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "uavcov/channel.hpp"
#include "uavcov/parallel.hpp"
#include "uavcov/quadrature.hpp"
#include "uavcov/special_functions.hpp"

namespace uavcov {

/// Radio and deployment parameters. Everything is stored in linear SI units
/// (watts, ratios, per-m^2); conversions from dB/dBm/per-km^2 happen once,
/// at config ingestion.
struct NetworkConfig {
    double ptx = 0.1;      ///< transmit power (W)
    int n_uav = 8;         ///< UAV array elements
    int n_ue = 8;          ///< UE array elements
    double nf = 3.1622776601683795;       ///< noise figure (ratio)
    double noise = 3.981071705534969e-12; ///< thermal noise (W)
    double lambda = 5e-6;  ///< UAV density (per m^2)
    double h = 200.0;      ///< deployment altitude (m)
    double gamma = 1.0;    ///< SNR threshold (ratio)
    double aoi_radius = 2000.0; ///< AoI disk radius (m)

    double gain() const { return static_cast<double>(n_uav) * static_cast<double>(n_ue); }

    void validate() const
    {
        auto positive = [](double v, const char* name) {
            if (!(v > 0.0) || !std::isfinite(v))
                throw std::invalid_argument(std::string("NetworkConfig: ") + name + " must be finite and > 0");
        };
        positive(ptx, "ptx");
        positive(nf, "nf");
        positive(noise, "noise");
        positive(gamma, "gamma");
        positive(aoi_radius, "aoi_radius");
        if (n_uav < 1 || n_ue < 1)
            throw std::invalid_argument("NetworkConfig: antenna element counts must be >= 1");
        if (!(lambda >= 0.0) || !std::isfinite(lambda))
            throw std::invalid_argument("NetworkConfig: lambda must be finite and >= 0");
        if (!(h >= 0.0) || !std::isfinite(h))
            throw std::invalid_argument("NetworkConfig: h must be finite and >= 0");
    }
};

/// Integral of p(rho) * rho over [0, b_upper] by adaptive quadrature; the
/// exponent kernel of every void probability.
template <class P>
double exclusion_integral(P&& p, double b_upper, const QuadratureSettings& settings,
                          const char* label = "exclusion integral")
{
    if (!(b_upper >= 0.0) || !std::isfinite(b_upper))
        throw std::invalid_argument("exclusion_integral: b_upper must be finite and >= 0");
    if (b_upper == 0.0)
        return 0.0;
    auto integrand = [&p](double rho) { return p(rho) * rho; };
    return integrate(integrand, 0.0, b_upper, settings, label);
}

inline double exclusion_integral(const ChannelParams& ch, LinkState state, double h,
                                 double b_upper, const QuadratureSettings& settings)
{
    const char* label = state == LinkState::los ? "exclusion integral (LOS)" : "exclusion integral (NLOS)";
    return exclusion_integral([&ch, state, h](double rho) {
        return p_state_horizontal(ch, state, h, rho);
    }, b_upper, settings, label);
}

namespace detail {

/// Cumulative antiderivative of an integrand on [0, b_max]: per-cell
/// Gauss-Kronrod panels accumulated once, with a final partial panel per
/// query. No interpolation error; queries beyond b_max clamp to the end.
class CumulativeIntegral {
public:
    CumulativeIntegral() = default;

    CumulativeIntegral(std::function<double(double)> integrand, double b_max, std::size_t cells)
        : integrand_(std::move(integrand)), b_max_(b_max), step_(b_max / static_cast<double>(cells)),
          cum_(cells + 1, 0.0)
    {
        double sum = 0.0, comp = 0.0; // Kahan
        for (std::size_t i = 0; i < cells; ++i) {
            const double a = static_cast<double>(i) * step_;
            const double val = gauss_kronrod_15(integrand_, a, a + step_).value;
            const double y = val - comp;
            const double t = sum + y;
            comp = (t - sum) - y;
            sum = t;
            cum_[i + 1] = sum;
        }
    }

    double operator()(double b) const
    {
        if (b <= 0.0)
            return 0.0;
        if (b >= b_max_)
            return cum_.back();
        auto k = static_cast<std::size_t>(b / step_);
        if (k >= cum_.size() - 1)
            return cum_.back();
        const double a = static_cast<double>(k) * step_;
        return cum_[k] + gauss_kronrod_15(integrand_, a, b).value;
    }

    double b_max() const { return b_max_; }

private:
    std::function<double(double)> integrand_;
    double b_max_ = 0.0;
    double step_ = 1.0;
    std::vector<double> cum_;
};

} // namespace detail

/// Closed-form coverage machinery for one (channel, network) point: void
/// probabilities, nearest/association distance distributions and the
/// coverage integral, all via adaptive quadrature. Immutable once built;
/// safe for concurrent use.
class CoverageModel {
public:
    /// Exponents beyond this make the void factor indistinguishable from 0;
    /// the cumulative tables are sized so clamped queries sit past it.
    static constexpr double exponent_ceiling = 60.0;
    /// Outer integrals truncate where both defective tail masses drop below
    /// this bound.
    static constexpr double tail_bound = 1e-8;

    CoverageModel(ChannelParams ch, NetworkConfig net, QuadratureSettings settings = {})
        : ch_(ch), net_(net), quad_(settings)
    {
        ch_.validate();
        net_.validate();
        quad_.validate();
        if (quad_.r_max > 0.0 && !(quad_.r_max > net_.h))
            throw std::invalid_argument("QuadratureSettings: r_max must exceed the altitude h");

        two_pi_lambda_ = 2.0 * std::numbers::pi * net_.lambda;
        const double r_default = std::hypot(3.0 * net_.aoi_radius, net_.h);
        if (net_.lambda == 0.0) {
            r_max_ = quad_.r_max > 0.0 ? quad_.r_max : r_default;
            return;
        }

        QuadratureSettings scan = quad_;
        scan.abs_tol = 1e-6;
        scan.rel_tol = 1e-7;
        const double b_tail = std::max(scan_to_exponent(LinkState::los, -std::log(tail_bound), scan),
                                       scan_to_exponent(LinkState::nlos, -std::log(tail_bound), scan));
        r_max_ = quad_.r_max > 0.0 ? quad_.r_max : std::max(r_default, std::hypot(b_tail, net_.h));

        for (LinkState s : {LinkState::los, LinkState::nlos}) {
            const double b_ceiling = scan_to_exponent(s, exponent_ceiling, scan);
            const double b_max = std::max(b_ceiling, horizontal(r_max_)) * (1.0 + 1e-12);
            table(s) = detail::CumulativeIntegral(
                [ch = ch_, s, h = net_.h](double rho) {
                    if (rho == 0.0 && h == 0.0)
                        return 0.0; // zero-measure corner, annihilated by the rho factor
                    return p_state_horizontal(ch, s, h, rho) * rho;
                },
                b_max, table_cells);
        }
    }

    const ChannelParams& channel() const { return ch_; }
    const NetworkConfig& network() const { return net_; }
    const QuadratureSettings& settings() const { return quad_; }
    double r_max() const { return r_max_; }

    /// 2 pi lambda * integral of p_s(rho) rho on [0, b]; the void
    /// probability of state s within horizontal radius b is exp(-this).
    double void_exponent(LinkState s, double b) const
    {
        if (net_.lambda == 0.0)
            return 0.0;
        return two_pi_lambda_ * table(s)(b);
    }

    /// CDF of the distance to the nearest state-s UAV.
    double nearest_cdf(LinkState s, double r) const
    {
        require_radius(r);
        return -std::expm1(-void_exponent(s, horizontal(r)));
    }

    /// PDF of the distance to the nearest state-s UAV.
    double nearest_pdf(LinkState s, double r) const
    {
        require_radius(r);
        if (net_.lambda == 0.0)
            return 0.0;
        const double b = horizontal(r);
        const double p = p_state_horizontal(ch_, s, net_.h, b);
        return two_pi_lambda_ * r * p * std::exp(-void_exponent(s, b));
    }

    /// Void factor of the opposite state within the equal-gain radius: the
    /// probability that no opposite-state UAV beats a state-s UAV at r.
    double exclusion_factor(LinkState s, double r) const
    {
        require_radius(r);
        if (net_.lambda == 0.0)
            return 1.0;
        const double a = equivalent_distance(ch_, s, r);
        if (a <= net_.h)
            return 1.0; // no UAV can be closer than h: empty exclusion region
        const double ba = std::sqrt(a * a - net_.h * net_.h);
        return std::exp(-void_exponent(opposite(s), ba));
    }

    /// PDF of the serving distance restricted to state-s association
    /// (defective: integrates to association_probability(s)).
    double association_pdf(LinkState s, double r) const
    {
        return exclusion_factor(s, r) * nearest_pdf(s, r);
    }

    /// Probability of associating with a state-s UAV.
    double association_probability(LinkState s) const
    {
        if (net_.lambda == 0.0)
            return 0.0;
        const char* label = s == LinkState::los ? "association probability (LOS)"
                                                : "association probability (NLOS)";
        return integrate_radial([this, s](double r) { return association_pdf(s, r); }, s, label);
    }

    /// Integral of f(r) over [h, r_max], split at the exclusion-region kink
    /// of state s. Near r = h the substitution r = h + u^2 removes the
    /// square-root derivative blowup of b(r) = sqrt(r^2 - h^2).
    template <class F>
    double integrate_radial(F&& f, LinkState s, const char* label) const
    {
        const std::vector<double> pts = outer_breakpoints(s);
        const double h = pts.front();
        double total = integrate(
            [&f, h](double u) { return f(h + u * u) * 2.0 * u; },
            0.0, std::sqrt(pts[1] - h), quad_, label);
        for (std::size_t i = 1; i + 1 < pts.size(); ++i)
            total += integrate(f, pts[i], pts[i + 1], quad_, label);
        return total;
    }

    /// Coverage mass carried by serving distances beyond r_from: the part a
    /// simulation misses if its deployment region ends there.
    double coverage_tail(double r_from) const
    {
        if (net_.lambda == 0.0 || r_from >= r_max_)
            return 0.0;
        double total = 0.0;
        for (LinkState s : {LinkState::los, LinkState::nlos}) {
            auto integrand = [this, s](double r) {
                return conditional_coverage(s, r) * association_pdf(s, r);
            };
            if (r_from <= net_.h) {
                total += integrate_radial(integrand, s, "coverage tail");
                continue;
            }
            std::vector<double> pts{r_from};
            for (double p : outer_breakpoints(s))
                if (p > r_from)
                    pts.push_back(p);
            total += integrate_segments(integrand, pts, quad_, "coverage tail");
        }
        return total;
    }

    /// Deployment radius large enough that UAVs beyond it contribute less
    /// than `bound` to the coverage probability (never below `radius_floor`).
    double covering_radius(double radius_floor, double bound = 1e-4) const
    {
        if (net_.lambda == 0.0)
            return radius_floor;
        const double slant_floor = std::hypot(radius_floor, net_.h);
        if (slant_floor >= r_max_ || coverage_tail(slant_floor) <= bound)
            return radius_floor;
        double lo = slant_floor, hi = r_max_;
        while (hi - lo > std::max(50.0, 0.01 * hi))
            (coverage_tail(0.5 * (lo + hi)) > bound ? lo : hi) = 0.5 * (lo + hi);
        return std::sqrt(std::max(hi * hi - net_.h * net_.h, radius_floor * radius_floor));
    }

    /// P[SNR > gamma | serving state s, serving distance r]: the Nakagami
    /// amplitude survival probability at the link-budget threshold.
    double conditional_coverage(LinkState s, double r) const
    {
        require_radius(r);
        const double threshold = fading_threshold(s, r);
        const NakagamiParams& nak = ch_.nakagami(s);
        return erlang_sf(nak.m, (nak.m / nak.omega) * threshold * threshold);
    }

    /// Minimum fading amplitude that keeps the link above the SNR threshold.
    double fading_threshold(LinkState s, double r) const
    {
        return net_.gamma * net_.nf * net_.noise / (net_.ptx * net_.gain() * ch_.intercept(s)) *
               std::pow(r, ch_.exponent(s));
    }

    /// Total coverage probability P[SNR > gamma].
    double coverage_probability() const
    {
        if (net_.lambda == 0.0)
            return 0.0;
        double total = 0.0;
        for (LinkState s : {LinkState::los, LinkState::nlos}) {
            const char* label = s == LinkState::los ? "coverage integral (LOS)"
                                                    : "coverage integral (NLOS)";
            total += integrate_radial(
                [this, s](double r) { return conditional_coverage(s, r) * association_pdf(s, r); },
                s, label);
        }
        return total;
    }

    /// Integration breakpoints of the outer integrals on [h, r_max]: the
    /// radius where the exclusion region opens (A_s(r) = h) is a derivative
    /// kink and gets its own segment boundary.
    std::vector<double> outer_breakpoints(LinkState s) const
    {
        std::vector<double> pts{net_.h};
        if (net_.h > 0.0) {
            const double kink = std::pow(ch_.intercept(s) / ch_.intercept(opposite(s)) *
                                             std::pow(net_.h, ch_.exponent(opposite(s))),
                                         1.0 / ch_.exponent(s));
            if (kink > net_.h && kink < r_max_)
                pts.push_back(kink);
        }
        pts.push_back(r_max_);
        return pts;
    }

private:
    static constexpr std::size_t table_cells = 4096;

    void require_radius(double r) const
    {
        if (!(r >= net_.h) || !std::isfinite(r))
            throw std::invalid_argument("CoverageModel: radius must be finite and >= h");
    }

    double horizontal(double r) const
    {
        return std::sqrt(std::max(r * r - net_.h * net_.h, 0.0));
    }

    /// Smallest b (within 2%) where the void exponent of state s reaches
    /// `target`, by doubling scan plus bisection on direct quadrature.
    double scan_to_exponent(LinkState s, double target, const QuadratureSettings& scan) const
    {
        const double need = target / two_pi_lambda_;
        double lo = 0.0;
        double hi = std::max(net_.aoi_radius, 2.0 * net_.h + 1000.0);
        while (exclusion_integral(ch_, s, net_.h, hi, scan) < need) {
            lo = hi;
            hi *= 2.0;
            if (hi > 1e9)
                throw NumericalError("CoverageModel: void exponent never reaches target; "
                                     "lambda is too small to bound the tail");
        }
        while (hi - lo > 0.02 * hi) {
            const double mid = 0.5 * (lo + hi);
            (exclusion_integral(ch_, s, net_.h, mid, scan) < need ? lo : hi) = mid;
        }
        return hi;
    }

    detail::CumulativeIntegral& table(LinkState s)
    {
        return s == LinkState::los ? table_los_ : table_nlos_;
    }
    const detail::CumulativeIntegral& table(LinkState s) const
    {
        return s == LinkState::los ? table_los_ : table_nlos_;
    }

    ChannelParams ch_;
    NetworkConfig net_;
    QuadratureSettings quad_;
    double two_pi_lambda_ = 0.0;
    double r_max_ = 0.0;
    detail::CumulativeIntegral table_los_, table_nlos_;
};

struct HeightOptimum {
    double height = 0.0;
    double pcov = 0.0;
};

/// Grid search for the coverage-maximizing altitude. Ties break toward the
/// lower altitude.
inline HeightOptimum optimal_height(const ChannelParams& ch, NetworkConfig net,
                                    std::span<const double> height_grid,
                                    const QuadratureSettings& settings = {},
                                    unsigned workers = 1)
{
    if (height_grid.empty())
        throw std::invalid_argument("optimal_height: height grid must be nonempty");
    for (std::size_t i = 0; i + 1 < height_grid.size(); ++i)
        if (!(height_grid[i] < height_grid[i + 1]))
            throw std::invalid_argument("optimal_height: height grid must be strictly increasing");

    std::vector<double> values(height_grid.size());
    parallel_for(height_grid.size(), workers, [&](std::size_t i) {
        NetworkConfig point = net;
        point.h = height_grid[i];
        values[i] = CoverageModel(ch, point, settings).coverage_probability();
    });

    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values[i] > values[best])
            best = i;
    return {height_grid[best], values[best]};
}

} // namespace uavcov
