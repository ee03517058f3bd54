#pragma once

// s-potential and s-energy of a cylinder measure.
//
// For a measure with constant density on level-N cylinders, a pair of
// distinct cells i, j interacts through the kernel value on the shell of
// i XOR j, and a cell interacts with itself through the diagonal constant
// D = 2^N int_{G_N} phi dlambda (the mean kernel value over same-cell pairs).
// With these two ingredients every algorithm below is exact:
//
//   naive:        sum over all ordered pairs of cells, O(4^N)
//   hierarchical: sum_m shell(m) P_m + D T_N from the level mass table, O(2^N)
//   spectral:     sum_k phi_hat(k) mu_hat(k)^2, O(N 2^N)

#include <optional>
#include <string_view>
#include <vector>

#include "cantor/measure.hpp"

namespace cantor {

enum class EnergyMethod { naive, hierarchical, spectral };

std::string_view method_name(EnergyMethod method);
EnergyMethod parse_method(std::string_view name);

/// The naive method enumerates 4^N pairs; it is refused above this level.
inline constexpr int kNaiveMaxLevels = 14;

struct CellAveragedKernel {
    double s;
    std::optional<int> truncation;
    Resolution resolution;
    /// shell[m] for m = 1..N; shell[0] is unused and zero.
    std::vector<double> shell;
    double diagonal;
};

CellAveragedKernel cell_averaged_kernel(double s, Resolution resolution,
                                        std::optional<int> truncation = std::nullopt);

struct PotentialField {
    Resolution resolution;
    /// Potential on each level-N cell (it is constant there).
    std::vector<double> values;
};

PotentialField potential(const CylinderMeasure& mu, double s,
                         std::optional<int> truncation = std::nullopt, unsigned threads = 1);

struct EnergyResult {
    double value;
    EnergyMethod method;
    double s;
    std::optional<int> truncation;
    int resolution;
};

/// Pair sums grouped by shell: off_diagonal[m] = sum over ordered pairs
/// i != j whose first differing coordinate is m of masses[i] masses[j];
/// diagonal = sum_i masses[i]^2. Enumerates every pair explicitly.
struct ShellPairSums {
    Resolution resolution;
    std::vector<double> off_diagonal;
    double diagonal;
};

/// Threaded runs split the outer index into contiguous chunks whose partial
/// sums are added in chunk order.
ShellPairSums naive_shell_pair_sums(const CylinderMeasure& mu, unsigned threads = 1);

double energy_from_shell_sums(const ShellPairSums& sums, const CellAveragedKernel& kernel);

EnergyResult energy_naive(const CylinderMeasure& mu, double s,
                          std::optional<int> truncation = std::nullopt, unsigned threads = 1);

EnergyResult energy_hierarchical(const CylinderMeasure& mu, double s,
                                 std::optional<int> truncation = std::nullopt);
EnergyResult energy_hierarchical(const LevelMassTable& table, double s,
                                 std::optional<int> truncation = std::nullopt);

EnergyResult energy_spectral(const CylinderMeasure& mu, double s,
                             std::optional<int> truncation = std::nullopt, unsigned threads = 1);
EnergyResult energy_spectral(const WalshSpectrum& spectrum, double s,
                             std::optional<int> truncation = std::nullopt);

EnergyResult energy(const CylinderMeasure& mu, double s, std::optional<int> truncation,
                    EnergyMethod method, unsigned threads = 1);

/// max |a - b| / max(|a|, |b|) over all pairs.
double max_relative_deviation(std::span<const double> values);

}  // namespace cantor
