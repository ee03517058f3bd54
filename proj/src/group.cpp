#include "cantor/group.hpp"

#include <cmath>

namespace cantor {

namespace {

void require_same(const GroupElement& x, const GroupElement& y, const char* op)
{
    if (x.resolution() != y.resolution()) {
        throw UsageError(std::string(op) + ": resolution mismatch (" +
                         std::to_string(x.resolution().levels()) + " vs " +
                         std::to_string(y.resolution().levels()) + ")");
    }
}

Word reverse_low_bits(Word v, int width)
{
    Word out = 0;
    for (int i = 0; i < width; ++i) {
        out = (out << 1) | ((v >> i) & 1u);
    }
    return out;
}

}  // namespace

Resolution::Resolution(int levels) : levels_(levels)
{
    if (levels < 1 || levels > kMaxLevels) {
        throw UsageError("resolution must be in [1, " + std::to_string(kMaxLevels) +
                         "], got " + std::to_string(levels));
    }
}

GroupElement::GroupElement(Word bits, Resolution resolution) : bits_(bits), resolution_(resolution)
{
    if (bits >= resolution.size()) {
        throw UsageError("group element word " + std::to_string(bits) + " does not fit in " +
                         std::to_string(resolution.levels()) + " coordinates");
    }
}

int GroupElement::coordinate(int j) const
{
    if (j < 1 || j > resolution_.levels()) {
        throw UsageError("coordinate index " + std::to_string(j) + " out of range");
    }
    return static_cast<int>((bits_ >> (j - 1)) & 1u);
}

CylinderId::CylinderId(int level_, Word index_) : level(level_), index(index_)
{
    if (level_ < 0 || level_ > kMaxLevels) {
        throw UsageError("cylinder level " + std::to_string(level_) + " out of range");
    }
    if (index_ >= (Word{1} << level_)) {
        throw UsageError("cylinder index " + std::to_string(index_) + " out of range for level " +
                         std::to_string(level_));
    }
}

CylinderId CylinderId::containing(const GroupElement& x, int level)
{
    if (level < 0 || level > x.resolution().levels()) {
        throw UsageError("cylinder level " + std::to_string(level) + " exceeds resolution");
    }
    return CylinderId(level, x.bits() & ((Word{1} << level) - 1));
}

GroupElement add(const GroupElement& x, const GroupElement& y)
{
    require_same(x, y, "add");
    return GroupElement(x.bits() ^ y.bits(), x.resolution());
}

Word metric_numerator(const GroupElement& x, const GroupElement& y)
{
    require_same(x, y, "metric");
    // Coordinate i carries weight 2^{N-i} over 2^N, i.e. the bit-reversed word.
    return reverse_low_bits(x.bits() ^ y.bits(), x.resolution().levels());
}

double metric(const GroupElement& x, const GroupElement& y)
{
    return std::ldexp(static_cast<double>(metric_numerator(x, y)), -x.resolution().levels());
}

std::optional<int> shell_level(const GroupElement& z)
{
    if (z.is_zero()) {
        return std::nullopt;
    }
    return shell_level_of(z.bits());
}

int walsh(Word k, const GroupElement& x)
{
    if (k >= x.resolution().size()) {
        throw UsageError("walsh index " + std::to_string(k) + " must be below 2^" +
                         std::to_string(x.resolution().levels()));
    }
    return walsh_sign(k, x.bits());
}

double haar_measure(const CylinderId& c) { return std::ldexp(1.0, -c.level); }

double cylinder_diameter(int level, Resolution resolution)
{
    if (level < 0 || level > resolution.levels()) {
        throw UsageError("cylinder level " + std::to_string(level) + " exceeds resolution");
    }
    return std::ldexp(1.0, -level) - std::ldexp(1.0, -resolution.levels());
}

}  // namespace cantor
