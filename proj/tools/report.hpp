#pragma once

// Tabular reports for the command-line tool. Every report carries a header
// block (tool, version, the invocation's flags, resolution) followed by named
// columns and rows. CSV puts the header and summary in '#' comment lines and
// prints reals with 17 significant digits; JSON uses the shortest
// round-tripping representation.

#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

namespace cantor::cli {

inline constexpr const char* kToolName = "cantor-energy";
inline constexpr const char* kToolVersion = "0.1.0";

using Cell = std::variant<std::monostate, long long, double, std::string>;

inline std::string format_real(double v, int digits)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

struct Report {
    std::vector<std::string> args;
    std::optional<int> resolution;
    std::vector<std::pair<std::string, Cell>> summary;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_summary(std::string key, Cell value) { summary.emplace_back(std::move(key), std::move(value)); }
};

inline nlohmann::json to_json(const Cell& cell)
{
    return std::visit(
        [](const auto& v) -> nlohmann::json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) {
                return nullptr;
            } else {
                return v;
            }
        },
        cell);
}

inline std::string to_csv(const Cell& cell)
{
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) {
                return "";
            } else if constexpr (std::is_same_v<T, long long>) {
                return std::to_string(v);
            } else if constexpr (std::is_same_v<T, double>) {
                return format_real(v, 17);
            } else {
                return v;
            }
        },
        cell);
}

inline std::string joined_args(const std::vector<std::string>& args)
{
    std::string out;
    for (const auto& a : args) {
        if (!out.empty()) {
            out += ' ';
        }
        out += a;
    }
    return out;
}

inline void write_csv(const Report& report, std::ostream& out)
{
    out << "# tool: " << kToolName << ' ' << kToolVersion << '\n';
    out << "# flags: " << joined_args(report.args) << '\n';
    if (report.resolution) {
        out << "# resolution: " << *report.resolution << '\n';
    }
    for (const auto& [key, value] : report.summary) {
        out << "# " << key << ": " << to_csv(value) << '\n';
    }
    for (std::size_t c = 0; c < report.columns.size(); ++c) {
        out << (c ? "," : "") << report.columns[c];
    }
    out << '\n';
    for (const auto& row : report.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            out << (c ? "," : "") << to_csv(row[c]);
        }
        out << '\n';
    }
}

inline nlohmann::ordered_json report_json(const Report& report)
{
    nlohmann::ordered_json doc;
    doc["tool"] = kToolName;
    doc["version"] = kToolVersion;
    doc["flags"] = report.args;
    doc["resolution"] = report.resolution ? nlohmann::ordered_json(*report.resolution) : nlohmann::ordered_json();
    nlohmann::ordered_json summary = nlohmann::ordered_json::object();
    for (const auto& [key, value] : report.summary) {
        summary[key] = to_json(value);
    }
    doc["summary"] = summary;
    doc["columns"] = report.columns;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : report.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t c = 0; c < row.size(); ++c) {
            obj[report.columns[c]] = to_json(row[c]);
        }
        rows.push_back(obj);
    }
    doc["rows"] = rows;
    return doc;
}

inline void write_json(const Report& report, std::ostream& out) { out << report_json(report).dump(2) << '\n'; }

}  // namespace cantor::cli
