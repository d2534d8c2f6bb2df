#pragma once

#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "uavcov/config.hpp"
#include "uavcov/montecarlo.hpp"
#include "uavcov/parallel.hpp"

namespace uavcov {

/// One evaluated grid point. The sweep-axis fields keep the config-file
/// units so they round-trip through the CSV unchanged.
struct ResultRow {
    double gamma_db = 0.0;
    double height_m = 0.0;
    double lambda_per_km2 = 0.0;
    int n_uav = 0;
    int n_ue = 0;
    std::optional<double> pcov_analytic; ///< absent if the quadrature failed
    std::optional<McEstimate> mc;        ///< present in validate mode
    bool flagged = false;                ///< analytic outside the validation interval
    std::string error;                   ///< quadrature failure description
};

inline constexpr const char* csv_header =
    "gamma_db,height_m,lambda_per_km2,n_uav,n_ue,pcov_analytic,pcov_mc,mc_ci_low,mc_ci_high,"
    "n_realizations,seed";

struct GridPoint {
    double gamma_db = 0.0;
    double height_m = 0.0;
    double lambda_per_km2 = 0.0;
    AntennaConfig antenna;
};

/// Grid points in output order: lexicographic over (gamma, height, lambda,
/// antenna) as listed in the sweep spec.
inline std::vector<GridPoint> enumerate_grid(const SweepSpec& sweep)
{
    if (sweep.heights_m.empty() || sweep.densities_per_km2.empty() ||
        sweep.thresholds_db.empty() || sweep.antenna_configs.empty())
        throw ConfigError("sweep: all grid lists must be nonempty");
    std::vector<GridPoint> grid;
    grid.reserve(sweep.point_count());
    for (double gamma_db : sweep.thresholds_db)
        for (double h : sweep.heights_m)
            for (double lam : sweep.densities_per_km2)
                for (const AntennaConfig& a : sweep.antenna_configs)
                    grid.push_back({gamma_db, h, lam, a});
    return grid;
}

/// Applies a grid point on top of the base network parameters.
inline NetworkConfig materialize(const NetworkConfig& base, const GridPoint& pt)
{
    NetworkConfig net = base;
    net.gamma = db_to_linear(pt.gamma_db);
    net.h = pt.height_m;
    net.lambda = pt.lambda_per_km2 * 1e-6;
    net.n_uav = pt.antenna.n_uav;
    net.n_ue = pt.antenna.n_ue;
    return net;
}

/// Deployment region used by the Monte Carlo side of `validate`.
enum class ValidationAoi {
    /// Enlarge the disk per point until it carries all but < 1e-4 of the
    /// analytic coverage mass, so the two routes evaluate the same model.
    /// With very high gains and sparse deployments the serving UAV can sit
    /// far outside the nominal AoI, which the analysis (an infinite plane)
    /// includes and a fixed disk does not.
    cover_analytic,
    /// Simulate exactly the configured disk. Rows where the infinite-plane
    /// analysis mispredicts the finite deployment get flagged.
    configured,
};

namespace detail {

inline ResultRow evaluate_point(const AppConfig& cfg, const GridPoint& pt,
                                std::optional<std::pair<std::size_t, std::uint64_t>> mc_run,
                                ValidationAoi aoi_mode = ValidationAoi::configured)
{
    ResultRow row;
    row.gamma_db = pt.gamma_db;
    row.height_m = pt.height_m;
    row.lambda_per_km2 = pt.lambda_per_km2;
    row.n_uav = pt.antenna.n_uav;
    row.n_ue = pt.antenna.n_ue;

    const NetworkConfig net = materialize(cfg.network, pt);
    NetworkConfig mc_net = net;
    try {
        const CoverageModel model(cfg.channel, net, cfg.quadrature);
        row.pcov_analytic = model.coverage_probability();
        if (mc_run && aoi_mode == ValidationAoi::cover_analytic)
            mc_net.aoi_radius = model.covering_radius(net.aoi_radius);
    } catch (const NumericalError& e) {
        row.error = e.what();
    }
    if (mc_run)
        row.mc = estimate_coverage(cfg.channel, mc_net, mc_run->first, mc_run->second);
    return row;
}

} // namespace detail

/// Analytic value at the configured single point.
inline ResultRow run_analyze(const AppConfig& cfg)
{
    const GridPoint pt{linear_to_db(cfg.network.gamma), cfg.network.h,
                       cfg.network.lambda * 1e6, {cfg.network.n_uav, cfg.network.n_ue}};
    ResultRow row = detail::evaluate_point(cfg, pt, std::nullopt);
    if (!row.pcov_analytic)
        throw NumericalError(row.error);
    return row;
}

/// Analytic values over the whole sweep grid. Per-point quadrature failures
/// are recorded in the row, not thrown.
inline std::vector<ResultRow> run_sweep(const AppConfig& cfg, unsigned workers = 1)
{
    const std::vector<GridPoint> grid = enumerate_grid(cfg.sweep);
    std::vector<ResultRow> rows(grid.size());
    parallel_for(grid.size(), workers, [&](std::size_t i) {
        rows[i] = detail::evaluate_point(cfg, grid[i], std::nullopt);
    });
    return rows;
}

struct ValidationSummary {
    std::size_t points = 0;
    std::size_t flagged = 0;
    std::size_t failures = 0;
    double flagged_fraction = 0.0;
    double max_allowed_fraction = 0.05;
    bool within_bound() const { return flagged_fraction <= max_allowed_fraction; }
};

/// Sweep with a Monte Carlo cross-check per point. A row is flagged when
/// the analytic value falls outside the Wilson interval at `confidence_z`
/// (99% by default, the acceptance setting). Row k draws its own master
/// seed from (master_seed, k), so any worker count gives identical output.
inline std::pair<std::vector<ResultRow>, ValidationSummary>
run_validate(const AppConfig& cfg, std::size_t n_realizations, std::uint64_t master_seed,
             unsigned workers = 1, double max_flagged_fraction = 0.05,
             ValidationAoi aoi_mode = ValidationAoi::cover_analytic,
             double confidence_z = z_99)
{
    if (n_realizations < 1)
        throw ConfigError("validate: --realizations must be >= 1");
    const std::vector<GridPoint> grid = enumerate_grid(cfg.sweep);
    std::vector<ResultRow> rows(grid.size());
    parallel_for(grid.size(), workers, [&](std::size_t i) {
        const std::uint64_t row_seed = substream_seed(master_seed, i);
        ResultRow row =
            detail::evaluate_point(cfg, grid[i], std::pair{n_realizations, row_seed}, aoi_mode);
        if (row.pcov_analytic && row.mc) {
            const WilsonInterval ci =
                wilson_interval(row.mc->covered_count, row.mc->n, confidence_z);
            row.flagged = *row.pcov_analytic < ci.low || *row.pcov_analytic > ci.high;
        }
        rows[i] = std::move(row);
    });

    ValidationSummary summary;
    summary.points = rows.size();
    summary.max_allowed_fraction = max_flagged_fraction;
    for (const ResultRow& r : rows) {
        summary.flagged += r.flagged ? 1 : 0;
        summary.failures += r.pcov_analytic ? 0 : 1;
    }
    summary.flagged_fraction =
        rows.empty() ? 0.0 : static_cast<double>(summary.flagged) / static_cast<double>(rows.size());
    return {std::move(rows), summary};
}

namespace detail {

inline std::string format_number(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace detail

/// CSV with the fixed header, one row per grid point in grid order,
/// full-precision values, empty cells for absent fields. Byte-identical
/// for identical inputs.
inline void emit_csv(const std::vector<ResultRow>& rows, std::ostream& out)
{
    if (rows.empty())
        throw std::invalid_argument("emit_csv: no rows to write");
    out << csv_header << '\n';
    for (const ResultRow& r : rows) {
        out << detail::format_number(r.gamma_db) << ',' << detail::format_number(r.height_m) << ','
            << detail::format_number(r.lambda_per_km2) << ',' << r.n_uav << ',' << r.n_ue << ',';
        if (r.pcov_analytic)
            out << detail::format_number(*r.pcov_analytic);
        out << ',';
        if (r.mc) {
            out << detail::format_number(r.mc->p_hat) << ','
                << detail::format_number(r.mc->ci_low) << ','
                << detail::format_number(r.mc->ci_high) << ',' << r.mc->n << ',' << r.mc->seed;
        } else {
            out << ",,,,";
        }
        out << '\n';
    }
}

inline std::string csv_to_string(const std::vector<ResultRow>& rows)
{
    std::ostringstream out;
    emit_csv(rows, out);
    return out.str();
}

/// Human-readable summary: per (gamma, lambda, antenna) sweep the optimal
/// height and peak coverage, plus failure and flag counts.
inline std::string emit_report(const std::vector<ResultRow>& rows)
{
    if (rows.empty())
        throw std::invalid_argument("emit_report: no rows");

    std::ostringstream out;
    using Key = std::tuple<double, double, int, int>;
    std::map<Key, std::vector<const ResultRow*>> groups;
    for (const ResultRow& r : rows)
        groups[{r.gamma_db, r.lambda_per_km2, r.n_uav, r.n_ue}].push_back(&r);

    std::size_t failures = 0, flagged = 0, with_mc = 0;
    for (const ResultRow& r : rows) {
        failures += r.pcov_analytic ? 0 : 1;
        flagged += r.flagged ? 1 : 0;
        with_mc += r.mc ? 1 : 0;
    }

    for (const auto& [key, group] : groups) {
        const auto& [gamma_db, lambda, n_uav, n_ue] = key;
        const ResultRow* best = nullptr;
        std::size_t heights = 0;
        for (const ResultRow* r : group) {
            if (!r->pcov_analytic)
                continue;
            ++heights;
            const bool better = !best || *r->pcov_analytic > *best->pcov_analytic ||
                                (*r->pcov_analytic == *best->pcov_analytic &&
                                 r->height_m < best->height_m);
            if (better)
                best = r;
        }
        if (!best || heights < 2)
            continue;
        char line[160];
        std::snprintf(line, sizeof line,
                      "gamma=%g dB, lambda=%g /km^2, G=%dx%d: h_opt = %g m, peak P_cov = %.6f\n",
                      gamma_db, lambda, n_uav, n_ue, best->height_m, *best->pcov_analytic);
        out << line;
    }

    out << "rows: " << rows.size();
    if (with_mc > 0)
        out << ", flagged: " << flagged;
    out << ", quadrature failures: " << failures << '\n';
    for (const ResultRow& r : rows)
        if (!r.pcov_analytic)
            out << "  FAILED gamma=" << r.gamma_db << " h=" << r.height_m
                << " lambda=" << r.lambda_per_km2 << ": " << r.error << '\n';
    return out.str();
}

} // namespace uavcov
