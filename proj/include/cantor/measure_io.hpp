#pragma once

// Measure files.
//
// A file starts with one ASCII header line
//
//     CANTOR-MEASURE <version> <N> <count> <encoding>\n
//
// with version 1, count = 2^N and encoding either "f64le" (count
// little-endian IEEE-754 doubles follow) or "json" (a JSON array of count
// decimal numbers follows). Writers default to f64le; readers take both.

#include <filesystem>
#include <iosfwd>
#include <string_view>

#include "cantor/measure.hpp"

namespace cantor {

enum class MeasureEncoding { f64le, json };

MeasureEncoding parse_encoding(std::string_view name);
std::string_view encoding_name(MeasureEncoding encoding);

void write_measure(const CylinderMeasure& mu, std::ostream& out,
                   MeasureEncoding encoding = MeasureEncoding::f64le);
void write_measure(const CylinderMeasure& mu, const std::filesystem::path& path,
                   MeasureEncoding encoding = MeasureEncoding::f64le);

/// Throws ValidationError on malformed content or invalid masses.
CylinderMeasure read_measure(std::istream& in);
CylinderMeasure read_measure(const std::filesystem::path& path);

}  // namespace cantor
