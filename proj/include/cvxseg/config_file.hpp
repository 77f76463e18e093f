#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "cvxseg/solver.hpp"

namespace cvxseg {

namespace detail {

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline std::vector<double> parse_number_list(const std::string& value) {
    std::vector<double> out;
    std::string body = value;
    std::erase(body, '{');
    std::erase(body, '}');
    std::erase(body, '[');
    std::erase(body, ']');
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(std::stod(item));
    }
    return out;
}

inline bool parse_bool(const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw std::invalid_argument("expected boolean, got '" + value + "'");
}

inline PadMode parse_pad(const std::string& value, double pad_value) {
    if (value == "replicate") return PadMode::replicate();
    if (value == "constant") return PadMode::constant(pad_value);
    throw std::invalid_argument("pad mode must be 'constant' or 'replicate'");
}

}  // namespace detail

/// Apply one `key = value` override to a SolverConfig. Unknown keys throw.
inline void apply_config_key(SolverConfig& cfg, const std::string& key,
                             const std::string& value) {
    if (key == "radii") cfg.radii = detail::parse_number_list(value);
    else if (key == "lambda") cfg.lambda = std::stod(value);
    else if (key == "w0") cfg.w0 = std::stod(value);
    else if (key == "w1") cfg.w1 = std::stod(value);
    else if (key == "tau") cfg.tau = std::stod(value);
    else if (key == "theta") cfg.theta = std::stod(value);
    else if (key == "rho") cfg.rho = std::stod(value);
    else if (key == "band_radius" || key == "r0") cfg.band_radius = std::stod(value);
    else if (key == "gaussian_size") cfg.gaussian_size = std::stoi(value);
    else if (key == "gaussian_sigma") cfg.gaussian_sigma = std::stod(value);
    else if (key == "background_margin" || key == "s") cfg.background_margin = std::stod(value);
    else if (key == "tolerance" || key == "eps") cfg.tolerance = std::stod(value);
    else if (key == "max_iterations" || key == "T") cfg.max_iterations = std::stoi(value);
    else if (key == "force_refresh_period") cfg.force_refresh_period = std::stoi(value);
    else if (key == "variation_period") cfg.variation_period = std::stoi(value);
    else if (key == "fg_components" || key == "n0") cfg.fg_components = std::stoi(value);
    else if (key == "bg_components" || key == "n1") cfg.bg_components = std::stoi(value);
    else if (key == "gamma0") cfg.gamma0 = std::stod(value);
    else if (key == "gamma1") cfg.gamma1 = std::stod(value);
    else if (key == "p_floor") cfg.p_floor = std::stod(value);
    else if (key == "seed") cfg.seed = std::stoull(value);
    else if (key == "exact_length_gradient")
        cfg.exact_length_gradient = detail::parse_bool(value);
    else if (key == "exact_constraint_gradient")
        cfg.exact_constraint_gradient = detail::parse_bool(value);
    else if (key == "constraint_pad")
        cfg.constraint_pad = detail::parse_pad(value, cfg.constraint_pad.value);
    else if (key == "constraint_pad_value") cfg.constraint_pad.value = std::stod(value);
    else if (key == "length_pad") cfg.length_pad = detail::parse_pad(value, cfg.length_pad.value);
    else if (key == "length_pad_value") cfg.length_pad.value = std::stod(value);
    else throw std::invalid_argument("unknown config key '" + key + "'");
}

/// Flat `key = value` config file; '#' starts a comment, blank lines ignored.
inline SolverConfig load_config_file(const std::string& path, SolverConfig base = {}) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read config file '" + path + "'");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(lineno) +
                                     ": expected 'key = value'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        try {
            apply_config_key(base, key, value);
        } catch (const std::exception& e) {
            throw std::runtime_error("config line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    std::sort(base.radii.begin(), base.radii.end());
    return base;
}

}  // namespace cvxseg
