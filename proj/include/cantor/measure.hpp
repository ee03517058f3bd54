#pragma once

// Finite-resolution mass distributions on G.
//
// A CylinderMeasure stores the masses of the 2^N level-N cylinders and stands
// for the measure with constant density masses[i] * 2^N on cylinder i. The
// level-m cylinder with index c (the first m coordinates of its points) holds
// the mass of every fine cylinder i with i mod 2^m == c.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "cantor/group.hpp"

namespace cantor {

/// Raised when measure data is malformed or violates the measure invariants.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class CylinderMeasure {
public:
    /// Validates: size 2^N, all masses finite and >= 0, total mass > 0.
    CylinderMeasure(Resolution resolution, std::vector<double> masses);

    /// Infers N from the length, which must be a power of two >= 2.
    static CylinderMeasure from_masses(std::vector<double> masses);

    Resolution resolution() const noexcept { return resolution_; }
    int levels() const noexcept { return resolution_.levels(); }
    std::span<const double> masses() const noexcept { return masses_; }
    double total_mass() const noexcept { return total_; }
    /// Number of level-N cylinders carrying positive mass.
    Word support_size() const noexcept;

    /// mu(c) for a cylinder of level <= N.
    double mass(const CylinderId& c) const;

    CylinderMeasure scaled(double factor) const;
    /// The same measure viewed at a coarser resolution 1 <= level <= N.
    CylinderMeasure coarsened(int level) const;

    friend bool operator==(const CylinderMeasure&, const CylinderMeasure&) = default;

private:
    Resolution resolution_;
    std::vector<double> masses_;
    double total_;
};

/// mu_hat(k) = sum_i masses[i] w_k(cylinder i), k < 2^N. No 2^{-N} factor:
/// coeffs[0] is the total mass.
struct WalshSpectrum {
    Resolution resolution;
    std::vector<double> coeffs;
};

WalshSpectrum spectrum(const CylinderMeasure& mu, unsigned threads = 1);

/// Cylinder masses at every level 0..N with their squared-mass sums
/// T_m = sum_c mu(c)^2 and sibling sums P_m = sum 2 mu(c0) mu(c1) over
/// sibling pairs (c0, c1) at level m. P_m = T_{m-1} - T_m, computed without
/// the subtraction.
class LevelMassTable {
public:
    explicit LevelMassTable(const CylinderMeasure& mu);

    int levels() const noexcept { return static_cast<int>(levels_.size()) - 1; }
    std::span<const double> masses(int level) const { return levels_.at(static_cast<std::size_t>(level)); }
    double squared_sum(int level) const { return squared_.at(static_cast<std::size_t>(level)); }
    /// P_m, 1 <= m <= N.
    double sibling_product_sum(int level) const;
    double max_mass(int level) const { return max_.at(static_cast<std::size_t>(level)); }
    Word occupied(int level) const { return occupied_.at(static_cast<std::size_t>(level)); }
    double total_mass() const { return levels_.front().front(); }

private:
    std::vector<std::vector<double>> levels_;
    std::vector<double> squared_;
    std::vector<double> sibling_;
    std::vector<double> max_;
    std::vector<Word> occupied_;
};

LevelMassTable level_masses(const CylinderMeasure& mu);

// Test-measure generators. All produce total mass 1.

/// Uniform masses 2^{-N}.
CylinderMeasure haar(Resolution resolution);

/// Mass 1 spread uniformly over the cells of cylinder c.
CylinderMeasure cylinder_uniform(const CylinderId& c, Resolution resolution);

/// Uniform on the cells whose coordinates listed in zero_positions are all
/// zero: the natural measure on E = {x : x_j = 0 for j in Z}. Positions
/// outside [1, N] are ignored.
CylinderMeasure pattern_measure(std::span<const int> zero_positions, Resolution resolution);

/// Product measure with P(x_j = 1) = p[j-1]; p.size() fixes N.
CylinderMeasure bernoulli_product(std::span<const double> p);

/// Seeded random measure: each cell is empty with probability `sparsity`,
/// otherwise gets a mass uniform in (0, 1]; normalized to total mass 1.
/// Uses the raw output of std::mt19937_64 (a fully specified engine) and
/// converts 53 high bits to [0, 1), so results are portable.
CylinderMeasure random_measure(std::uint64_t seed, Resolution resolution, double sparsity = 0.0);

/// Coordinate lists for the standard fractal patterns.
std::vector<int> even_coordinates(int levels);
/// All j in [1, N] with j mod period != 0; zeroing them keeps every
/// period-th coordinate free (dimension 1/period).
std::vector<int> non_multiples(int period, int levels);

}  // namespace cantor
