#pragma once

// JSON configuration loading. Frequencies are given in Hz under *_hz keys and
// converted to rad/s on load.

#include <array>
#include <cmath>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "omswap/params.hpp"

namespace omswap {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParamsConfig {
    PhysicalParams params;
    std::optional<std::array<double, 3>> mu;  // explicit pulse strengths, if given
};

namespace detail {

inline double require_number(const nlohmann::json& j, const std::string& key) {
    if (!j.at(key).is_number())
        throw ConfigError("config key '" + key + "' must be a number");
    return j.at(key).get<double>();
}

inline std::optional<std::array<double, 3>> optional_triple(const nlohmann::json& j,
                                                            const std::string& key) {
    if (!j.contains(key)) return std::nullopt;
    const auto& v = j.at(key);
    if (!v.is_array() || v.size() != 3)
        throw ConfigError("config key '" + key + "' must be an array of 3 numbers");
    std::array<double, 3> out{};
    for (int i = 0; i < 3; ++i) {
        if (!v[i].is_number())
            throw ConfigError("config key '" + key + "' must contain numbers only");
        out[i] = v[i].get<double>();
    }
    return out;
}

}  // namespace detail

// Reads the parameter keys (omega_m_hz, gamma_hz, kappa_hz, g0_hz,
// temperature_k, eta_l, n_photons, mu) from a JSON object. Missing keys fall
// back to the supplied defaults; extra keys are left for the caller.
inline ParamsConfig params_from_json(const nlohmann::json& j,
                                     const PhysicalParams& defaults = reference_microstring_params(4.0)) {
    ParamsConfig cfg;
    cfg.params = defaults;
    try {
        if (j.contains("omega_m_hz")) cfg.params.omega_m = 2.0 * M_PI * detail::require_number(j, "omega_m_hz");
        if (j.contains("gamma_hz")) cfg.params.gamma = 2.0 * M_PI * detail::require_number(j, "gamma_hz");
        if (j.contains("kappa_hz")) cfg.params.kappa = 2.0 * M_PI * detail::require_number(j, "kappa_hz");
        if (j.contains("g0_hz")) cfg.params.g0 = 2.0 * M_PI * detail::require_number(j, "g0_hz");
        if (j.contains("temperature_k")) cfg.params.temperature = detail::require_number(j, "temperature_k");
        if (j.contains("eta_l")) cfg.params.eta_l = detail::require_number(j, "eta_l");
        cfg.params.photon_numbers = detail::optional_triple(j, "n_photons");
        cfg.mu = detail::optional_triple(j, "mu");
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed parameter config: ") + e.what());
    }
    if (cfg.params.photon_numbers && cfg.mu)
        throw ConfigError("config supplies both 'n_photons' and 'mu'; choose one");
    try {
        cfg.params.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("invalid parameters: ") + e.what());
    }
    return cfg;
}

inline nlohmann::json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("parse error in " + path + ": " + e.what());
    }
}

inline ParamsConfig load_params_file(const std::string& path) {
    const auto j = load_json_file(path);
    if (!j.is_object()) throw ConfigError("config root must be a JSON object: " + path);
    return params_from_json(j);
}

// Resolves the pulse plan for a parameter set: explicit mu wins, photon
// numbers are converted through chi, and the default is the perfect-swap
// plan mu = (1,1,1).
inline PulsePlan resolve_plan(const ParamsConfig& cfg, const DerivedQuantities& d) {
    if (cfg.mu) return chi_for_mu(*cfg.mu, cfg.params.eta_l, d.eta_m, d.sigma);
    if (cfg.params.photon_numbers) {
        std::array<double, 3> chi{};
        for (int i = 0; i < 3; ++i)
            chi[i] = chi_for_photons((*cfg.params.photon_numbers)[i], cfg.params.g0, cfg.params.kappa);
        return pulse_strengths(chi, cfg.params.eta_l, d.eta_m, d.sigma);
    }
    return chi_for_mu({1.0, 1.0, 1.0}, cfg.params.eta_l, d.eta_m, d.sigma);
}

}  // namespace omswap
