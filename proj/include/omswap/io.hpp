#pragma once

// Deterministic file output: CSV with fixed 17-significant-digit formatting
// and JSON metadata with the parameter provenance and quadrature convention.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "omswap/constants.hpp"
#include "omswap/params.hpp"
#include "omswap/phasespace.hpp"

namespace omswap {

inline std::string fmt_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path.string());
    out << content;
}

inline std::string csv_content(const std::vector<std::string>& header,
                               const std::vector<std::vector<double>>& rows) {
    std::string s;
    for (size_t i = 0; i < header.size(); ++i) {
        if (i) s += ',';
        s += header[i];
    }
    s += '\n';
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) s += ',';
            s += fmt_g17(row[i]);
        }
        s += '\n';
    }
    return s;
}

inline void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
    write_text_file(path, csv_content(header, rows));
}

inline nlohmann::json params_to_json(const PhysicalParams& p) {
    nlohmann::json j{{"omega_m_hz", p.omega_m / (2.0 * M_PI)},
                     {"gamma_hz", p.gamma / (2.0 * M_PI)},
                     {"kappa_hz", p.kappa / (2.0 * M_PI)},
                     {"g0_hz", p.g0 / (2.0 * M_PI)},
                     {"temperature_k", p.temperature},
                     {"eta_l", p.eta_l}};
    if (p.photon_numbers) j["n_photons"] = *p.photon_numbers;
    return j;
}

inline nlohmann::json base_metadata(const PhysicalParams& p, std::uint64_t seed) {
    return nlohmann::json{{"tool", "omswap"},
                          {"version", kVersion},
                          {"convention", kConventionNote},
                          {"seed", seed},
                          {"params", params_to_json(p)}};
}

inline void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

inline void write_wigner_csv(const std::filesystem::path& path, const WignerGrid& w) {
    std::vector<std::vector<double>> rows;
    rows.reserve(static_cast<size_t>(w.n_points) * w.n_points);
    for (int i = 0; i < w.n_points; ++i)
        for (int k = 0; k < w.n_points; ++k) rows.push_back({w.coord(i), w.coord(k), w.values(i, k)});
    write_csv(path, {"x", "p", "w"}, rows);
}

// Reads back an (x, p, w) grid written by write_wigner_csv.
inline WignerGrid load_wigner_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open wigner csv: " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != "x,p,w")
        throw std::runtime_error("unexpected wigner csv header in " + path.string());
    std::vector<std::array<double, 3>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::array<double, 3> row{};
        std::string cell;
        for (double& v : row) {
            if (!std::getline(ls, cell, ',')) throw std::runtime_error("short wigner csv row");
            v = std::stod(cell);
        }
        rows.push_back(row);
    }
    const int n = static_cast<int>(std::llround(std::sqrt(static_cast<double>(rows.size()))));
    if (static_cast<size_t>(n) * n != rows.size() || n < 2)
        throw std::runtime_error("wigner csv is not a square grid");
    WignerGrid w;
    w.n_points = n;
    w.extent = -rows.front()[0];
    w.values.resize(n, n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) w.values(i, k) = rows[static_cast<size_t>(i) * n + k][2];
    return w;
}

}  // namespace omswap
