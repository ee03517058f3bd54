#pragma once

// Dimension lower bounds from energy growth.
//
// A measure with finite s-energy certifies that its support has Hausdorff
// dimension at least s. At finite resolution we look at the truncated
// energies I_s^n, n = 1..N, whose increments are exactly
//
//   I_s^{n+1} - I_s^n = (2^s - 1) 2^{ns} T_{n+1}
//
// with T_m the squared-mass sum at level m. If mu(K_n) scales like 2^{-n d},
// the increments grow by the ratio 2^{s-d} per level: the energies converge
// for s < d and diverge for s > d. The growth ratio reported below is the
// asymptotic ratio of successive energies, max(1, rho), where rho is fitted
// to the increments over the top levels.
//
// The estimate is about the support of the given measure only; it says "this
// measure witnesses dim_H >= s", not what dim_H of an arbitrary set is.

#include <optional>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <vector>

#include "cantor/measure.hpp"

namespace cantor {

enum class Verdict { bounded, divergent, inconclusive };

std::string_view verdict_name(Verdict verdict);

struct Thresholds {
    double eps_bounded = 0.01;
    double eps_divergent = 0.05;

    /// Throws UsageError unless 0 <= eps_bounded < eps_divergent.
    void validate() const;
};

struct EnergyProfile {
    double s = 0.0;
    /// values[n-1] = I_s^n for n = 1..N.
    std::vector<double> values;
    /// increments[n-1] = I_s^{n+1} - I_s^n for n = 1..N-1 (closed form).
    std::vector<double> increments;
    /// Number of trailing increments used in the fit.
    int window = 0;
    /// Fitted per-level ratio of the increments; NaN if the window is < 2.
    double increment_ratio = 0.0;
    /// max(1, increment_ratio); NaN if the window is < 2.
    double growth_ratio = 0.0;
};

/// max(2, ceil(N / 3)).
int default_window(int levels);

EnergyProfile energy_profile(const LevelMassTable& table, double s,
                             std::optional<int> window = std::nullopt);
EnergyProfile energy_profile(const CylinderMeasure& mu, double s,
                             std::optional<int> window = std::nullopt);

struct Classification {
    double s;
    Verdict verdict;
    double growth_ratio;
};

/// bounded if growth_ratio <= 1 + eps_bounded, divergent if it is
/// >= 1 + eps_divergent, inconclusive otherwise (including a window too
/// small to fit).
Classification classify_s(const LevelMassTable& table, double s,
                          std::optional<int> window = std::nullopt, Thresholds thresholds = {});
Classification classify_s(const CylinderMeasure& mu, double s,
                          std::optional<int> window = std::nullopt, Thresholds thresholds = {});

inline constexpr int kMaxBisectionSteps = 10;
inline constexpr double kMinTolerance = 1.0 / 1024.0;

struct DimensionEstimate {
    double lower_bound = 0.0;
    /// Largest probed s classified bounded, or the trivial floor 0.
    double s_finite = 0.0;
    /// Smallest probed s not classified bounded, or the trivial ceiling 1.
    double s_divergent = 1.0;
    /// Empty for the trivial floor.
    std::optional<Verdict> finite_verdict;
    /// divergent or inconclusive; empty for the trivial ceiling.
    std::optional<Verdict> divergent_verdict;
    int resolution = 0;
    double tolerance = 0.0;
    std::vector<Classification> probes;
};

/// Raised when no probe in a bisection gave a definite verdict.
class InconclusiveError : public std::runtime_error {
public:
    InconclusiveError(const std::string& what, std::vector<EnergyProfile> profiles)
        : std::runtime_error(what), profiles_(std::move(profiles))
    {
    }
    const std::vector<EnergyProfile>& profiles() const noexcept { return profiles_; }

private:
    std::vector<EnergyProfile> profiles_;
};

/// Bisection on s in (0, 1) with at most kMaxBisectionSteps probes. A bounded
/// probe raises the low end; a divergent or inconclusive probe lowers the
/// high end, since only bounded verdicts certify a lower bound. Stops once
/// the bracket is no wider than tol (tol >= 2^-10). lower_bound is the
/// bracket midpoint.
DimensionEstimate dim_lower_bound(const CylinderMeasure& mu, double tol, Thresholds thresholds = {},
                                  std::optional<int> window = std::nullopt);
DimensionEstimate dim_lower_bound(const LevelMassTable& table, double tol, Thresholds thresholds = {},
                                  std::optional<int> window = std::nullopt);

struct FourierBlock {
    int block = 0;
    Word k_begin = 0;
    Word k_end = 0;
    /// sum over the block of k^{s-1} mu_hat(k)^2
    double power_weighted = 0.0;
    /// sum over the block of phi_hat_s(k) mu_hat(k)^2
    double kernel_weighted = 0.0;
    /// partial sums over k = 1 .. k_end - 1
    double power_partial = 0.0;
    double kernel_partial = 0.0;
    /// range of phi_hat_s(k) / k^{s-1} over the block
    double weight_ratio_min = 0.0;
    double weight_ratio_max = 0.0;
};

struct FourierSeriesReport {
    double s = 0.0;
    /// Terms k = 1 .. k_max - 1 are included.
    Word k_max = 0;
    std::vector<FourierBlock> blocks;
    /// Totals summed from the highest k down, the order energy_spectral uses.
    double power_total = 0.0;
    double kernel_total = 0.0;
    /// kernel_total / power_total; NaN when both vanish.
    double ratio = 0.0;
};

/// Partial sums of sum_k k^{s-1} mu_hat(k)^2 and sum_k phi_hat_s(k) mu_hat(k)^2
/// per dyadic block. Requires 1 <= k_max <= 2^N.
FourierSeriesReport fourier_series_check(const WalshSpectrum& spectrum, double s, Word k_max);
FourierSeriesReport fourier_series_check(const CylinderMeasure& mu, double s,
                                         std::optional<Word> k_max = std::nullopt);

/// Min and max of phi_hat_s(k) / k^{s-1} over the dyadic block m >= 1.
std::pair<double, double> weight_ratio_bounds(double s, int block);

struct ScalingDiagnostic {
    double s = 0.0;
    /// per_level[n] = max_x mu(K_n(x)) 2^{ns}, n = 0..N
    std::vector<double> per_level;
    double supremum = 0.0;
    int argmax = 0;
};

ScalingDiagnostic scaling_diagnostic(const LevelMassTable& table, double s);
ScalingDiagnostic scaling_diagnostic(const CylinderMeasure& mu, double s);

/// Least-squares slope of log2(#occupied level-n cylinders) against n for
/// n = n_min..N. Dyadic covers only; an upper comparator for dim_H.
double box_counting_dim(const LevelMassTable& table, int n_min = 1);
double box_counting_dim(const CylinderMeasure& mu, int n_min = 1);

}  // namespace cantor
