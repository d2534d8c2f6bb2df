#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include "uavcov/analytic.hpp"
#include "uavcov/channel.hpp"
#include "uavcov/parallel.hpp"
#include "uavcov/rng.hpp"

namespace uavcov {

struct Position {
    double x = 0.0;
    double y = 0.0;
    double horizontal() const { return std::hypot(x, y); }
};

/// One system snapshot: UAV point pattern, link states, and the outcome of
/// the max-path-gain association and SNR threshold test.
struct Realization {
    std::vector<Position> uav_positions;
    std::vector<LinkState> link_states;
    std::optional<std::size_t> serving_index;
    std::optional<LinkState> serving_state;
    double serving_distance = std::numeric_limits<double>::quiet_NaN();
    double snr = 0.0;
    bool covered = false;
};

/// Homogeneous PPP over a disk of the given radius: Poisson count, then
/// independent uniform positions (sqrt law in the radius).
template <class Rng>
std::vector<Position> generate_ppp(double lambda, double radius, Rng& rng)
{
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("generate_ppp: lambda must be finite and >= 0");
    if (!(radius > 0.0) || !std::isfinite(radius))
        throw std::invalid_argument("generate_ppp: radius must be finite and > 0");

    const double mean = lambda * std::numbers::pi * radius * radius;
    const std::size_t count = poisson_sample(mean, rng);
    std::vector<Position> points(count);
    for (auto& pt : points) {
        const double rho = radius * std::sqrt(uniform_unit_positive(rng));
        const double phi = 2.0 * std::numbers::pi * uniform_unit(rng);
        pt = {rho * std::cos(phi), rho * std::sin(phi)};
    }
    return points;
}

/// SNR of a link with the given path gain and fading amplitude.
inline double snr_value(const NetworkConfig& net, double gain, double fading)
{
    return net.ptx * gain * net.gain() * fading / (net.nf * net.noise);
}

/// Max-path-gain association over slant distances and states. Ties break
/// toward LOS, then toward the lower index.
inline std::optional<std::size_t> associate(const ChannelParams& ch,
                                            const std::vector<double>& slant_distances,
                                            const std::vector<LinkState>& states)
{
    std::optional<std::size_t> best;
    double best_gain = -1.0;
    for (std::size_t n = 0; n < slant_distances.size(); ++n) {
        const double g = path_gain(ch, states[n], slant_distances[n]);
        const bool wins = g > best_gain ||
                          (g == best_gain && best && states[n] == LinkState::los &&
                           states[*best] == LinkState::nlos);
        if (wins) {
            best = n;
            best_gain = g;
        }
    }
    return best;
}

/// One realization of the simulation protocol: PPP deployment, independent
/// LOS thinning, best-gain association, Nakagami fading on the serving
/// link, strict SNR threshold test. An empty deployment is uncovered.
template <class Rng>
Realization simulate_one(const ChannelParams& ch, const NetworkConfig& net, Rng& rng)
{
    ch.validate();
    net.validate();

    Realization out;
    if (net.lambda > 0.0)
        out.uav_positions = generate_ppp(net.lambda, net.aoi_radius, rng);

    const std::size_t count = out.uav_positions.size();
    std::vector<double> slant(count);
    out.link_states.resize(count);
    for (std::size_t n = 0; n < count; ++n) {
        const Position& pos = out.uav_positions[n];
        slant[n] = std::sqrt(pos.x * pos.x + pos.y * pos.y + net.h * net.h);
        const double p = slant[n] > 0.0 ? p_los_3d(ch, net.h, slant[n]) : 1.0;
        out.link_states[n] = uniform_unit(rng) < p ? LinkState::los : LinkState::nlos;
    }

    out.serving_index = associate(ch, slant, out.link_states);
    if (!out.serving_index)
        return out; // no UAV in the AoI

    const std::size_t idx = *out.serving_index;
    out.serving_state = out.link_states[idx];
    out.serving_distance = slant[idx];
    const double fading = nakagami_sample(ch.nakagami(*out.serving_state), rng);
    out.snr = snr_value(net, path_gain(ch, *out.serving_state, slant[idx]), fading);
    out.covered = out.snr > net.gamma;
    return out;
}

struct WilsonInterval {
    double low = 0.0;
    double high = 1.0;
};

/// Wilson score interval; stays inside [0,1] and behaves at p near 0 or 1.
inline WilsonInterval wilson_interval(std::size_t successes, std::size_t n, double z)
{
    if (n == 0)
        throw std::invalid_argument("wilson_interval: n must be >= 1");
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(successes) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double center = (p + z2 / (2.0 * nn)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
    // the bounds are exact at the degenerate counts; keep them free of
    // rounding residue there
    const double low = successes == 0 ? 0.0 : std::max(0.0, center - half);
    const double high = successes == n ? 1.0 : std::min(1.0, center + half);
    return {low, high};
}

inline constexpr double z_95 = 1.959963984540054;
inline constexpr double z_99 = 2.5758293035489004;

struct McEstimate {
    double p_hat = 0.0;
    double ci_low = 0.0;
    double ci_high = 1.0;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::size_t covered_count = 0;
    /// (LOS, NLOS, empty) serving outcomes; they sum to n.
    std::array<std::size_t, 3> serving_state_counts{0, 0, 0};
};

/// Coverage estimate over n realizations. Realization k always draws from
/// substream (master_seed, k), so the estimate is bit-identical for any
/// worker count or execution order. The interval is Wilson 95%.
inline McEstimate estimate_coverage(const ChannelParams& ch, const NetworkConfig& net,
                                    std::size_t n_realizations, std::uint64_t master_seed,
                                    unsigned workers = 1)
{
    if (n_realizations < 1)
        throw std::invalid_argument("estimate_coverage: need n_realizations >= 1");

    workers = resolve_workers(workers);
    std::vector<std::array<std::size_t, 4>> partial(workers, {0, 0, 0, 0}); // covered, los, nlos, empty

    const std::size_t chunk = (n_realizations + workers - 1) / workers;
    parallel_for(workers, workers, [&](std::size_t w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(n_realizations, begin + chunk);
        auto& acc = partial[w];
        for (std::size_t k = begin; k < end; ++k) {
            auto rng = make_substream(master_seed, k);
            const Realization r = simulate_one(ch, net, rng);
            acc[0] += r.covered ? 1 : 0;
            if (!r.serving_state)
                ++acc[3];
            else if (*r.serving_state == LinkState::los)
                ++acc[1];
            else
                ++acc[2];
        }
    });

    McEstimate est;
    est.n = n_realizations;
    est.seed = master_seed;
    for (const auto& acc : partial) {
        est.covered_count += acc[0];
        est.serving_state_counts[0] += acc[1];
        est.serving_state_counts[1] += acc[2];
        est.serving_state_counts[2] += acc[3];
    }
    est.p_hat = static_cast<double>(est.covered_count) / static_cast<double>(n_realizations);
    const WilsonInterval ci = wilson_interval(est.covered_count, n_realizations, z_95);
    est.ci_low = ci.low;
    est.ci_high = ci.high;
    return est;
}

} // namespace uavcov
