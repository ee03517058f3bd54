#pragma once

// Finite-resolution arithmetic on the Cantor dyadic group G = {0,1}^N.
//
// An element keeps its first N coordinates in a machine word. Coordinate x_1
// is the least-significant bit, x_j is bit (j - 1). Under this convention the
// level-m cylinder containing x is identified by the low m bits of the word,
// and the Walsh function w_k pairs bit i of k with bit i of the word.

#include <bit>
#include <cstdint>
#include <optional>
#include <ranges>
#include <stdexcept>
#include <string>

namespace cantor {

/// Raised on a violated precondition of the public API (bad argument,
/// mismatched resolutions, index out of range).
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

using Word = std::uint64_t;

inline constexpr int kMaxLevels = 30;
inline constexpr int kDefaultMaxLevels = 24;

/// Number of retained coordinates N, 1 <= N <= 30.
class Resolution {
public:
    explicit Resolution(int levels);

    int levels() const noexcept { return levels_; }
    /// 2^N, the number of level-N cylinders.
    Word size() const noexcept { return Word{1} << levels_; }

    friend bool operator==(Resolution, Resolution) = default;

private:
    int levels_;
};

class GroupElement {
public:
    GroupElement(Word bits, Resolution resolution);

    static GroupElement zero(Resolution resolution) { return GroupElement(0, resolution); }

    Word bits() const noexcept { return bits_; }
    Resolution resolution() const noexcept { return resolution_; }
    bool is_zero() const noexcept { return bits_ == 0; }

    /// Coordinate x_j, 1 <= j <= N.
    int coordinate(int j) const;

    friend bool operator==(const GroupElement&, const GroupElement&) = default;

private:
    Word bits_;
    Resolution resolution_;
};

/// A level-m cylinder (coset of G_m). The index is the integer value of the
/// first m coordinates, so index 0 is G_m = K_m^1 and index 2^{m-1} is K_m^2.
struct CylinderId {
    int level = 0;
    Word index = 0;

    CylinderId() = default;
    CylinderId(int level, Word index);

    /// The level-m cylinder containing x.
    static CylinderId containing(const GroupElement& x, int level);

    bool contains(const GroupElement& x) const noexcept
    {
        return level <= x.resolution().levels() &&
               (x.bits() & ((Word{1} << level) - 1)) == index;
    }

    friend bool operator==(const CylinderId&, const CylinderId&) = default;
};

GroupElement add(const GroupElement& x, const GroupElement& y);

/// rho(x, y) = sum_{i=1}^{N} 2^{-i} |x_i - y_i|, returned exactly.
double metric(const GroupElement& x, const GroupElement& y);

/// Numerator of metric(x, y) over the denominator 2^N.
Word metric_numerator(const GroupElement& x, const GroupElement& y);

/// Position of the first nonzero coordinate (the n with z in K_n^2), or
/// nullopt for z = 0.
std::optional<int> shell_level(const GroupElement& z);

/// Unchecked shell level of a nonzero word.
inline int shell_level_of(Word z) noexcept { return std::countr_zero(z) + 1; }

/// Unchecked Walsh sign: (-1)^{popcount(k & bits)}.
inline int walsh_sign(Word k, Word bits) noexcept
{
    return (std::popcount(k & bits) & 1) ? -1 : 1;
}

/// w_k(x); requires k < 2^N so that w_k is constant on level-N cylinders.
int walsh(Word k, const GroupElement& x);

/// Haar measure of a level-m cylinder, 2^{-m}.
double haar_measure(const CylinderId& c);

/// Diameter of a level-n cylinder under rho when only N coordinates are kept:
/// 2^{-n} - 2^{-N}.
double cylinder_diameter(int level, Resolution resolution);

/// All elements of cylinder c at the given resolution, in increasing word
/// order. Yields 2^{N - m} elements.
inline auto coset_members(const CylinderId& c, Resolution resolution)
{
    if (c.level > resolution.levels()) {
        throw UsageError("coset_members: cylinder level " + std::to_string(c.level) +
                         " exceeds resolution " + std::to_string(resolution.levels()));
    }
    const int shift = c.level;
    const Word count = Word{1} << (resolution.levels() - c.level);
    const Word base = c.index;
    return std::views::iota(Word{0}, count) |
           std::views::transform([=](Word t) { return GroupElement(base | (t << shift), resolution); });
}

}  // namespace cantor
