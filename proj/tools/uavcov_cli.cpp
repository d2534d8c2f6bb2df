// Command-line front end: analytic coverage at a single point, batch
// sweeps, and Monte Carlo cross-validation, with CSV output.
//
// Exit codes: 0 success, 1 validation bound exceeded, 2 usage/config error,
// 3 numerical failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "uavcov/uavcov.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_validation_failed = 1;
constexpr int exit_usage = 2;
constexpr int exit_numerical = 3;

struct Options {
    std::string config_path;
    std::string output_path;
    std::size_t realizations = 1000;
    std::uint64_t seed = 1;
    unsigned workers = 0; // 0 = auto
    double tol = 0.0;     // 0 = keep config value
    double max_flagged = 0.05;
    std::string aoi_mode = "cover";
};

uavcov::AppConfig load(const Options& opt)
{
    uavcov::AppConfig cfg = opt.config_path.empty()
                                ? uavcov::AppConfig::from_raw(uavcov::RawConfig{})
                                : uavcov::load_config(opt.config_path);
    if (opt.tol > 0.0)
        cfg.quadrature.abs_tol = opt.tol;
    return cfg;
}

void write_rows(const std::vector<uavcov::ResultRow>& rows, const Options& opt)
{
    if (opt.output_path.empty() || opt.output_path == "-") {
        uavcov::emit_csv(rows, std::cout);
        return;
    }
    std::ofstream out(opt.output_path, std::ios::binary);
    if (!out)
        throw uavcov::ConfigError("cannot open output file: " + opt.output_path);
    uavcov::emit_csv(rows, out);
    if (!out)
        throw uavcov::ConfigError("failed writing output file: " + opt.output_path);
}

int cmd_analyze(const Options& opt)
{
    const uavcov::AppConfig cfg = load(opt);
    const uavcov::ResultRow row = uavcov::run_analyze(cfg);
    write_rows({row}, opt);
    std::cerr << "P_cov = " << *row.pcov_analytic << " (gamma=" << row.gamma_db
              << " dB, h=" << row.height_m << " m, lambda=" << row.lambda_per_km2
              << " /km^2, G=" << row.n_uav << "x" << row.n_ue << ")\n";
    return exit_ok;
}

int cmd_sweep(const Options& opt)
{
    const uavcov::AppConfig cfg = load(opt);
    const auto rows = uavcov::run_sweep(cfg, opt.workers);
    write_rows(rows, opt);
    std::cerr << uavcov::emit_report(rows);
    for (const auto& r : rows)
        if (!r.pcov_analytic)
            return exit_numerical;
    return exit_ok;
}

int cmd_validate(const Options& opt)
{
    const uavcov::AppConfig cfg = load(opt);
    const auto aoi = opt.aoi_mode == "config" ? uavcov::ValidationAoi::configured
                                              : uavcov::ValidationAoi::cover_analytic;
    auto [rows, summary] =
        uavcov::run_validate(cfg, opt.realizations, opt.seed, opt.workers, opt.max_flagged, aoi);
    write_rows(rows, opt);
    std::cerr << uavcov::emit_report(rows);
    std::cerr << "flagged " << summary.flagged << "/" << summary.points << " ("
              << 100.0 * summary.flagged_fraction << "%, bound "
              << 100.0 * summary.max_allowed_fraction << "%)\n";
    for (const auto& r : rows)
        if (!r.pcov_analytic)
            return exit_numerical;
    return summary.within_bound() ? exit_ok : exit_validation_failed;
}

int cmd_dump_config(const Options& opt)
{
    const std::string text = uavcov::default_config_text();
    if (opt.output_path.empty() || opt.output_path == "-") {
        std::cout << text;
    } else {
        std::ofstream out(opt.output_path, std::ios::binary);
        if (!out)
            throw uavcov::ConfigError("cannot open output file: " + opt.output_path);
        out << text;
    }
    return exit_ok;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Downlink coverage probability of mmWave UAV networks: "
                 "analytic model and Monte Carlo validation"};
    app.require_subcommand(1);

    Options opt;
    app.add_option("--config", opt.config_path, "Config file (JSON); defaults reproduce the built-in scenario");
    app.add_option("--output", opt.output_path, "CSV output path ('-' or empty = stdout)");
    app.add_option("--workers", opt.workers, "Worker threads (0 = all cores)")
        ->default_val(0)
        ->option_text("N|auto");
    app.add_option("--tol", opt.tol, "Override quadrature absolute tolerance");

    CLI::App* analyze = app.add_subcommand("analyze", "Analytic coverage at the configured point");
    CLI::App* sweep = app.add_subcommand("sweep", "Analytic coverage over the configured grid");
    CLI::App* validate = app.add_subcommand(
        "validate", "Sweep plus Monte Carlo cross-check; rows whose analytic value "
                    "falls outside the Wilson 99% interval are flagged");
    CLI::App* dump = app.add_subcommand("dump-config", "Print the default config file");

    validate->add_option("--realizations", opt.realizations, "Monte Carlo realizations per point")
        ->default_val(1000);
    validate->add_option("--seed", opt.seed, "Master seed; row k derives substream (seed, k)")
        ->default_val(1);
    validate->add_option("--max-flagged", opt.max_flagged,
                         "Largest acceptable flagged fraction before exit code 1")
        ->default_val(0.05);
    validate->add_option("--aoi-mode", opt.aoi_mode,
                         "'cover' grows the simulation disk per point to hold the analytic "
                         "coverage mass; 'config' simulates exactly the configured AoI")
        ->default_val("cover")
        ->check(CLI::IsMember({"cover", "config"}));

    // "auto" is accepted for --workers to mean all cores
    for (int i = 1; i < argc; ++i)
        if (std::string(argv[i]) == "auto" && i > 1 && std::string(argv[i - 1]) == "--workers")
            argv[i] = const_cast<char*>("0");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (analyze->parsed())
            return cmd_analyze(opt);
        if (sweep->parsed())
            return cmd_sweep(opt);
        if (validate->parsed())
            return cmd_validate(opt);
        if (dump->parsed())
            return cmd_dump_config(opt);
        std::cerr << "no subcommand given\n";
        return exit_usage;
    } catch (const uavcov::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_usage;
    } catch (const uavcov::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return exit_numerical;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_numerical;
    }
}
