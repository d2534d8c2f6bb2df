#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "uavcov/analytic.hpp"
#include "uavcov/channel.hpp"

namespace uavcov {

/// Configuration problem: unknown or ill-typed key, out-of-range value,
/// unreadable file. The message carries the key path and the accepted range.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct AntennaConfig {
    int n_uav = 8;
    int n_ue = 8;
    bool operator==(const AntennaConfig&) const = default;
};

/// Grids for batch evaluation, in the units of the config file.
struct SweepSpec {
    std::vector<double> heights_m;
    std::vector<double> densities_per_km2;
    std::vector<double> thresholds_db;
    std::vector<AntennaConfig> antenna_configs;

    std::size_t point_count() const
    {
        return heights_m.size() * densities_per_km2.size() * thresholds_db.size() *
               antenna_configs.size();
    }

    bool operator==(const SweepSpec&) const = default;
};

/// The config file verbatim: every value in the unit its key suffix names.
/// Conversions to internal linear units happen in to_channel()/to_network();
/// keeping the raw values makes emit -> load an exact round trip.
struct RawConfig {
    // channel model (urban 28 GHz measurement fit)
    double los_c = 9.6117;
    double los_y_per_deg = 0.1581;
    double path_gain_intercept_log10_los = -6.14;
    double path_gain_intercept_log10_nlos = -7.2;
    double path_loss_exponent_los = 2.0;
    double path_loss_exponent_nlos = 2.92;
    int nakagami_m_los = 3;
    int nakagami_m_nlos = 2;
    double nakagami_omega_los = 1.0;
    double nakagami_omega_nlos = 1.0;

    // radio and deployment
    double ptx_dbm = 20.0;
    int n_uav_elements = 8;
    int n_ue_elements = 8;
    double noise_figure_db = 5.0;
    double thermal_noise_dbm = -84.0;
    double lambda_per_km2 = 5.0;
    double height_m = 200.0;
    double snr_threshold_db = 0.0;
    double aoi_radius_m = 2000.0;

    // quadrature
    double abs_tol = 1e-10;
    double rel_tol = 1e-9;
    int max_depth = 30;
    double r_max_m = 0.0;

    // sweep grids (defaults: the full reference scenario grid)
    SweepSpec sweep{
        {0, 50, 100, 150, 200, 250, 300, 350, 400, 450, 500,
         550, 600, 650, 700, 750, 800, 850, 900, 950, 1000},
        {1, 5, 10, 15, 25},
        {-5, 0, 5},
        {{8, 4}, {8, 8}, {64, 4}, {256, 4}, {256, 8}},
    };

    ChannelParams to_channel() const
    {
        ChannelParams ch;
        ch.c_env = los_c;
        ch.y_env = los_y_per_deg;
        ch.cl = std::pow(10.0, path_gain_intercept_log10_los);
        ch.cn = std::pow(10.0, path_gain_intercept_log10_nlos);
        ch.al = path_loss_exponent_los;
        ch.an = path_loss_exponent_nlos;
        ch.nakagami_los = {nakagami_m_los, nakagami_omega_los};
        ch.nakagami_nlos = {nakagami_m_nlos, nakagami_omega_nlos};
        return ch;
    }

    NetworkConfig to_network() const
    {
        NetworkConfig net;
        net.ptx = dbm_to_watt(ptx_dbm);
        net.n_uav = n_uav_elements;
        net.n_ue = n_ue_elements;
        net.nf = db_to_linear(noise_figure_db);
        net.noise = dbm_to_watt(thermal_noise_dbm);
        net.lambda = lambda_per_km2 * 1e-6;
        net.h = height_m;
        net.gamma = db_to_linear(snr_threshold_db);
        net.aoi_radius = aoi_radius_m;
        return net;
    }

    QuadratureSettings to_quadrature() const
    {
        return {abs_tol, rel_tol, max_depth, r_max_m};
    }

    bool operator==(const RawConfig&) const = default;
};

/// Everything a run needs: raw file values plus the converted model inputs.
struct AppConfig {
    RawConfig raw;
    ChannelParams channel;
    NetworkConfig network;
    QuadratureSettings quadrature;
    SweepSpec sweep;

    static AppConfig from_raw(const RawConfig& raw)
    {
        return {raw, raw.to_channel(), raw.to_network(), raw.to_quadrature(), raw.sweep};
    }
};

namespace detail {

class ConfigReader {
public:
    ConfigReader(const nlohmann::json& section, std::string prefix)
        : section_(section), prefix_(std::move(prefix))
    {
    }

    double number(const char* key, double fallback, double lo, double hi, const char* range_text)
    {
        mark(key);
        if (!section_.contains(key))
            return fallback;
        const auto& v = section_.at(key);
        if (!v.is_number())
            throw ConfigError(path(key) + ": expected a number (" + range_text + ")");
        const double x = v.get<double>();
        check_range(key, x, lo, hi, range_text);
        return x;
    }

    int integer(const char* key, int fallback, int lo, const char* range_text)
    {
        mark(key);
        if (!section_.contains(key))
            return fallback;
        const auto& v = section_.at(key);
        if (!v.is_number_integer())
            throw ConfigError(path(key) + ": expected an integer (" + range_text + ")");
        const auto x = v.get<long long>();
        if (x < lo || x > std::numeric_limits<int>::max())
            throw ConfigError(path(key) + ": value " + std::to_string(x) + " out of range (" +
                              range_text + ")");
        return static_cast<int>(x);
    }

    const nlohmann::json* array(const char* key)
    {
        mark(key);
        if (!section_.contains(key))
            return nullptr;
        const auto& v = section_.at(key);
        if (!v.is_array())
            throw ConfigError(path(key) + ": expected an array");
        return &v;
    }

    void reject_unknown_keys() const
    {
        for (auto it = section_.begin(); it != section_.end(); ++it) {
            if (std::find(known_.begin(), known_.end(), it.key()) == known_.end()) {
                std::string accepted;
                for (const auto& k : known_)
                    accepted += (accepted.empty() ? "" : ", ") + k;
                throw ConfigError(path(it.key().c_str()) + ": unknown key (accepted keys: " +
                                  accepted + ")");
            }
        }
    }

    std::string path(const char* key) const { return prefix_ + "." + key; }

private:
    void mark(const char* key) { known_.emplace_back(key); }

    void check_range(const char* key, double x, double lo, double hi, const char* range_text)
    {
        if (!std::isfinite(x) || x < lo || x > hi)
            throw ConfigError(path(key) + ": value " + std::to_string(x) +
                              " out of range (" + range_text + ")");
    }

    const nlohmann::json& section_;
    std::string prefix_;
    std::vector<std::string> known_;
};

inline const nlohmann::json& get_section(const nlohmann::json& doc, const char* name,
                                         const nlohmann::json& empty)
{
    if (!doc.contains(name))
        return empty;
    if (!doc.at(name).is_object())
        throw ConfigError(std::string(name) + ": expected an object");
    return doc.at(name);
}

} // namespace detail

/// Parses and validates a config document. Absent keys take the built-in
/// urban-scenario defaults; unknown keys, type mismatches and out-of-range values throw
/// ConfigError naming the key path.
inline AppConfig load_config_from_json(const nlohmann::json& doc)
{
    if (!doc.is_object())
        throw ConfigError("config root: expected a JSON object");
    static const nlohmann::json empty = nlohmann::json::object();
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        const std::string& k = it.key();
        if (k != "channel" && k != "network" && k != "quadrature" && k != "sweep")
            throw ConfigError(k + ": unknown section (accepted: channel, network, quadrature, sweep)");
    }

    RawConfig raw;
    constexpr double inf = std::numeric_limits<double>::infinity();

    {
        detail::ConfigReader r(detail::get_section(doc, "channel", empty), "channel");
        raw.los_c = r.number("los_c", raw.los_c, 1e-12, inf, "> 0");
        raw.los_y_per_deg = r.number("los_y_per_deg", raw.los_y_per_deg, 1e-12, inf, "> 0");
        raw.path_gain_intercept_log10_los =
            r.number("path_gain_intercept_log10_los", raw.path_gain_intercept_log10_los, -inf, 0.0, "<= 0");
        raw.path_gain_intercept_log10_nlos =
            r.number("path_gain_intercept_log10_nlos", raw.path_gain_intercept_log10_nlos, -inf, 0.0, "<= 0");
        raw.path_loss_exponent_los = r.number("path_loss_exponent_los", raw.path_loss_exponent_los,
                                              2.0, 8.0, "in [2, 8]");
        raw.path_loss_exponent_nlos = r.number("path_loss_exponent_nlos", raw.path_loss_exponent_nlos,
                                               2.0, 8.0, "in [2, 8]");
        raw.nakagami_m_los = r.integer("nakagami_m_los", raw.nakagami_m_los, 1, "integer >= 1");
        raw.nakagami_m_nlos = r.integer("nakagami_m_nlos", raw.nakagami_m_nlos, 1, "integer >= 1");
        raw.nakagami_omega_los = r.number("nakagami_omega_los", raw.nakagami_omega_los, 1e-12, inf, "> 0");
        raw.nakagami_omega_nlos = r.number("nakagami_omega_nlos", raw.nakagami_omega_nlos, 1e-12, inf, "> 0");
        r.reject_unknown_keys();
        if (raw.path_gain_intercept_log10_nlos > raw.path_gain_intercept_log10_los)
            throw ConfigError("channel.path_gain_intercept_log10_nlos: must not exceed the LOS intercept");
        if (raw.path_loss_exponent_los > raw.path_loss_exponent_nlos)
            throw ConfigError("channel.path_loss_exponent_los: must not exceed the NLOS exponent");
    }
    {
        detail::ConfigReader r(detail::get_section(doc, "network", empty), "network");
        raw.ptx_dbm = r.number("ptx_dbm", raw.ptx_dbm, -200.0, 200.0, "dBm in [-200, 200]");
        raw.n_uav_elements = r.integer("n_uav_elements", raw.n_uav_elements, 1, "integer >= 1");
        raw.n_ue_elements = r.integer("n_ue_elements", raw.n_ue_elements, 1, "integer >= 1");
        raw.noise_figure_db = r.number("noise_figure_db", raw.noise_figure_db, 0.0, 100.0, "dB in [0, 100]");
        raw.thermal_noise_dbm = r.number("thermal_noise_dbm", raw.thermal_noise_dbm, -300.0, 100.0,
                                         "dBm in [-300, 100]");
        raw.lambda_per_km2 = r.number("lambda_per_km2", raw.lambda_per_km2, 1e-9, 1e9, "> 0");
        raw.height_m = r.number("height_m", raw.height_m, 0.0, 1e7, ">= 0");
        raw.snr_threshold_db = r.number("snr_threshold_db", raw.snr_threshold_db, -200.0, 200.0,
                                        "dB in [-200, 200]");
        raw.aoi_radius_m = r.number("aoi_radius_m", raw.aoi_radius_m, 1.0, 1e7, ">= 1");
        r.reject_unknown_keys();
    }
    {
        detail::ConfigReader r(detail::get_section(doc, "quadrature", empty), "quadrature");
        raw.abs_tol = r.number("abs_tol", raw.abs_tol, 1e-300, 1.0, "> 0");
        raw.rel_tol = r.number("rel_tol", raw.rel_tol, 1e-300, 1.0, "> 0");
        raw.max_depth = r.integer("max_depth", raw.max_depth, 1, "integer >= 1");
        raw.r_max_m = r.number("r_max_m", raw.r_max_m, 0.0, 1e9, ">= 0 (0 = automatic)");
        r.reject_unknown_keys();
    }
    {
        detail::ConfigReader r(detail::get_section(doc, "sweep", empty), "sweep");
        auto load_list = [&](const char* key, std::vector<double>& out, double lo, double hi,
                             const char* range_text) {
            const nlohmann::json* arr = r.array(key);
            if (!arr)
                return;
            if (arr->empty())
                throw ConfigError(r.path(key) + ": list must be nonempty");
            out.clear();
            for (const auto& v : *arr) {
                if (!v.is_number())
                    throw ConfigError(r.path(key) + ": expected numbers (" + range_text + ")");
                const double x = v.get<double>();
                if (!std::isfinite(x) || x < lo || x > hi)
                    throw ConfigError(r.path(key) + ": value " + std::to_string(x) +
                                      " out of range (" + range_text + ")");
                out.push_back(x);
            }
        };
        load_list("heights_m", raw.sweep.heights_m, 0.0, 1e7, ">= 0");
        load_list("densities_per_km2", raw.sweep.densities_per_km2, 1e-9, 1e9, "> 0");
        load_list("thresholds_db", raw.sweep.thresholds_db, -200.0, 200.0, "dB in [-200, 200]");
        if (const nlohmann::json* arr = r.array("antenna_configs")) {
            if (arr->empty())
                throw ConfigError("sweep.antenna_configs: list must be nonempty");
            raw.sweep.antenna_configs.clear();
            for (const auto& v : *arr) {
                if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() ||
                    !v[1].is_number_integer())
                    throw ConfigError("sweep.antenna_configs: expected [n_uav, n_ue] integer pairs");
                const auto nu = v[0].get<long long>();
                const auto ne = v[1].get<long long>();
                if (nu < 1 || ne < 1 || nu > 1 << 20 || ne > 1 << 20)
                    throw ConfigError("sweep.antenna_configs: element counts must be integers >= 1");
                raw.sweep.antenna_configs.push_back({static_cast<int>(nu), static_cast<int>(ne)});
            }
        }
        r.reject_unknown_keys();
    }

    AppConfig cfg = AppConfig::from_raw(raw);
    cfg.channel.validate();
    cfg.network.validate();
    cfg.quadrature.validate();
    return cfg;
}

inline AppConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file: " + path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in, nullptr, true, /*ignore_comments=*/true);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config parse error in " + path + ": " + e.what());
    }
    return load_config_from_json(doc);
}

/// The shipped defaults as a JSON document, raw values verbatim.
inline nlohmann::json config_to_json(const RawConfig& raw)
{
    nlohmann::json antennas = nlohmann::json::array();
    for (const auto& a : raw.sweep.antenna_configs)
        antennas.push_back({a.n_uav, a.n_ue});
    return {
        {"channel",
         {{"los_c", raw.los_c},
          {"los_y_per_deg", raw.los_y_per_deg},
          {"path_gain_intercept_log10_los", raw.path_gain_intercept_log10_los},
          {"path_gain_intercept_log10_nlos", raw.path_gain_intercept_log10_nlos},
          {"path_loss_exponent_los", raw.path_loss_exponent_los},
          {"path_loss_exponent_nlos", raw.path_loss_exponent_nlos},
          {"nakagami_m_los", raw.nakagami_m_los},
          {"nakagami_m_nlos", raw.nakagami_m_nlos},
          {"nakagami_omega_los", raw.nakagami_omega_los},
          {"nakagami_omega_nlos", raw.nakagami_omega_nlos}}},
        {"network",
         {{"ptx_dbm", raw.ptx_dbm},
          {"n_uav_elements", raw.n_uav_elements},
          {"n_ue_elements", raw.n_ue_elements},
          {"noise_figure_db", raw.noise_figure_db},
          {"thermal_noise_dbm", raw.thermal_noise_dbm},
          {"lambda_per_km2", raw.lambda_per_km2},
          {"height_m", raw.height_m},
          {"snr_threshold_db", raw.snr_threshold_db},
          {"aoi_radius_m", raw.aoi_radius_m}}},
        {"quadrature",
         {{"abs_tol", raw.abs_tol},
          {"rel_tol", raw.rel_tol},
          {"max_depth", raw.max_depth},
          {"r_max_m", raw.r_max_m}}},
        {"sweep",
         {{"heights_m", raw.sweep.heights_m},
          {"densities_per_km2", raw.sweep.densities_per_km2},
          {"thresholds_db", raw.sweep.thresholds_db},
          {"antenna_configs", antennas}}},
    };
}

inline std::string default_config_text()
{
    return config_to_json(RawConfig{}).dump(2) + "\n";
}

} // namespace uavcov
