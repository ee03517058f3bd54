#include "cantor/measure_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include <json.hpp>

namespace cantor {

namespace {

constexpr std::string_view kMagic = "CANTOR-MEASURE";
constexpr int kVersion = 1;

std::uint64_t to_little_endian(std::uint64_t v)
{
    if constexpr (std::endian::native == std::endian::big) {
        std::uint64_t out = 0;
        for (int i = 0; i < 8; ++i) {
            out = (out << 8) | ((v >> (8 * i)) & 0xffu);
        }
        return out;
    }
    return v;
}

}  // namespace

MeasureEncoding parse_encoding(std::string_view name)
{
    if (name == "f64le") {
        return MeasureEncoding::f64le;
    }
    if (name == "json") {
        return MeasureEncoding::json;
    }
    throw ValidationError("unknown measure encoding '" + std::string(name) + "'");
}

std::string_view encoding_name(MeasureEncoding encoding)
{
    return encoding == MeasureEncoding::json ? "json" : "f64le";
}

void write_measure(const CylinderMeasure& mu, std::ostream& out, MeasureEncoding encoding)
{
    const auto masses = mu.masses();
    out << kMagic << ' ' << kVersion << ' ' << mu.levels() << ' ' << masses.size() << ' '
        << encoding_name(encoding) << '\n';
    if (encoding == MeasureEncoding::json) {
        out << nlohmann::json(std::vector<double>(masses.begin(), masses.end())).dump() << '\n';
    } else {
        for (const double m : masses) {
            const std::uint64_t raw = to_little_endian(std::bit_cast<std::uint64_t>(m));
            std::array<char, 8> bytes{};
            std::memcpy(bytes.data(), &raw, bytes.size());
            out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        }
    }
    if (!out) {
        throw std::runtime_error("failed writing measure data");
    }
}

void write_measure(const CylinderMeasure& mu, const std::filesystem::path& path, MeasureEncoding encoding)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    }
    write_measure(mu, out, encoding);
}

CylinderMeasure read_measure(std::istream& in)
{
    std::string header;
    if (!std::getline(in, header)) {
        throw ValidationError("measure file is empty");
    }
    std::istringstream fields(header);
    std::string magic;
    std::string encoding_text;
    int version = 0;
    long long levels = 0;
    unsigned long long count = 0;
    if (!(fields >> magic >> version >> levels >> count >> encoding_text) || magic != kMagic) {
        throw ValidationError("malformed measure header: '" + header + "'");
    }
    if (version != kVersion) {
        throw ValidationError("unsupported measure file version " + std::to_string(version));
    }
    if (levels < 1 || levels > kMaxLevels) {
        throw ValidationError("declared resolution " + std::to_string(levels) + " out of range");
    }
    const Resolution resolution(static_cast<int>(levels));
    if (count != resolution.size()) {
        throw ValidationError("declared count " + std::to_string(count) + " is not 2^" +
                              std::to_string(levels) + " = " + std::to_string(resolution.size()));
    }
    const MeasureEncoding encoding = parse_encoding(encoding_text);

    std::vector<double> masses;
    if (encoding == MeasureEncoding::json) {
        nlohmann::json parsed;
        try {
            parsed = nlohmann::json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
            throw ValidationError(std::string("malformed JSON payload: ") + e.what());
        }
        if (!parsed.is_array()) {
            throw ValidationError("JSON payload must be an array of numbers");
        }
        masses.reserve(parsed.size());
        for (std::size_t i = 0; i < parsed.size(); ++i) {
            if (!parsed[i].is_number()) {
                throw ValidationError("JSON payload entry " + std::to_string(i) + " is not a number");
            }
            masses.push_back(parsed[i].get<double>());
        }
    } else {
        const std::string payload(std::istreambuf_iterator<char>(in), {});
        if (payload.size() != count * 8) {
            throw ValidationError("f64le payload has " + std::to_string(payload.size()) +
                                  " bytes, expected " + std::to_string(count * 8));
        }
        masses.resize(count);
        for (std::size_t i = 0; i < count; ++i) {
            std::uint64_t raw = 0;
            std::memcpy(&raw, payload.data() + 8 * i, 8);
            masses[i] = std::bit_cast<double>(to_little_endian(raw));
        }
    }
    if (masses.size() != count) {
        throw ValidationError("payload has " + std::to_string(masses.size()) +
                              " masses but header declares " + std::to_string(count));
    }
    return CylinderMeasure(resolution, std::move(masses));
}

CylinderMeasure read_measure(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ValidationError("cannot open measure file '" + path.string() + "'");
    }
    return read_measure(in);
}

}  // namespace cantor
