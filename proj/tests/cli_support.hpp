#pragma once

// Runs the cantor-energy binary and normalizes its reports for comparison.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include <json.hpp>

#ifndef CANTOR_ENERGY_BIN
#error "CANTOR_ENERGY_BIN must name the cantor-energy executable"
#endif

namespace cli_test {

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

inline std::string shell_quote(const std::string& arg)
{
    std::string q = "'";
    for (const char c : arg) {
        if (c == '\'') {
            q += "'\\''";
        } else {
            q += c;
        }
    }
    return q + "'";
}

inline std::string slurp(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline RunResult run_tool(const std::vector<std::string>& args)
{
    static int counter = 0;
    const auto base = std::filesystem::temp_directory_path() /
                      ("cantor-run-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    const auto out_path = base.string() + ".out";
    const auto err_path = base.string() + ".err";
    std::string cmd = shell_quote(CANTOR_ENERGY_BIN);
    for (const auto& a : args) {
        cmd += ' ' + shell_quote(a);
    }
    cmd += " >" + shell_quote(out_path) + " 2>" + shell_quote(err_path);
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    std::filesystem::remove(out_path);
    std::filesystem::remove(err_path);
    return r;
}

inline bool is_timing_field(const std::string& name)
{
    return name == "seconds" || name == "median_seconds" || name == "elements_per_second" ||
           name.rfind("log2_time_slope_", 0) == 0;
}

/// Blanks wall-clock fields so reports can be compared byte for byte.
inline std::string mask_timing(const std::string& report)
{
    if (!report.empty() && report.front() == '{') {
        auto doc = nlohmann::ordered_json::parse(report);
        for (auto& [key, value] : doc["summary"].items()) {
            if (is_timing_field(key)) {
                value = "*";
            }
        }
        for (auto& row : doc["rows"]) {
            for (auto& [key, value] : row.items()) {
                if (is_timing_field(key)) {
                    value = "*";
                }
            }
        }
        return doc.dump(2);
    }
    std::istringstream in(report);
    std::ostringstream out;
    std::string line;
    std::vector<bool> masked;
    bool in_table = false;
    while (std::getline(in, line)) {
        if (!in_table && line.rfind("# ", 0) == 0) {
            const auto colon = line.find(':');
            if (colon != std::string::npos && is_timing_field(line.substr(2, colon - 2))) {
                line = line.substr(0, colon) + ": *";
            }
            out << line << '\n';
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream cs(line);
        std::string cell;
        while (std::getline(cs, cell, ',')) {
            cells.push_back(cell);
        }
        if (!line.empty() && line.back() == ',') {
            cells.emplace_back();
        }
        if (!in_table) {
            in_table = true;
            for (const auto& c : cells) {
                masked.push_back(is_timing_field(c));
            }
        } else {
            for (std::size_t i = 0; i < cells.size() && i < masked.size(); ++i) {
                if (masked[i]) {
                    cells[i] = "*";
                }
            }
        }
        for (std::size_t i = 0; i < cells.size(); ++i) {
            out << (i ? "," : "") << cells[i];
        }
        out << '\n';
    }
    return out.str();
}

inline bool is_deviation_field(const std::string& name) { return name == "deviation" || name == "max_deviation"; }

/// Largest relative difference between corresponding numbers of two JSON
/// reports with the same shape, skipping timing fields and the flags list.
/// Deviation fields are already relative errors at rounding level and are
/// compared by absolute difference. Returns +inf when the shapes or any
/// non-numeric values differ.
inline double max_numeric_difference(const nlohmann::json& a, const nlohmann::json& b, bool absolute = false)
{
    if (a.is_number() && b.is_number()) {
        if (absolute) {
            return std::abs(a.get<double>() - b.get<double>());
        }
        const double x = a.get<double>();
        const double y = b.get<double>();
        const double scale = std::max(std::abs(x), std::abs(y));
        return scale == 0.0 ? 0.0 : std::abs(x - y) / scale;
    }
    if (a.type() != b.type() || a.size() != b.size()) {
        return HUGE_VAL;
    }
    if (a.is_object()) {
        double worst = 0.0;
        for (auto it = a.begin(); it != a.end(); ++it) {
            if (is_timing_field(it.key()) || it.key() == "flags") {
                continue;
            }
            if (!b.contains(it.key())) {
                return HUGE_VAL;
            }
            worst = std::max(worst, max_numeric_difference(it.value(), b.at(it.key()), is_deviation_field(it.key())));
        }
        return worst;
    }
    if (a.is_array()) {
        double worst = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            worst = std::max(worst, max_numeric_difference(a[i], b[i], absolute));
        }
        return worst;
    }
    return a == b ? 0.0 : HUGE_VAL;
}

}  // namespace cli_test
