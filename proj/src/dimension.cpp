#include "cantor/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "cantor/energy.hpp"
#include "cantor/kernel.hpp"

namespace cantor {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double least_squares_slope(std::span<const double> x, std::span<const double> y)
{
    const auto n = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

}  // namespace

std::string_view verdict_name(Verdict verdict)
{
    switch (verdict) {
    case Verdict::bounded:
        return "bounded";
    case Verdict::divergent:
        return "divergent";
    case Verdict::inconclusive:
        return "inconclusive";
    }
    return "unknown";
}

void Thresholds::validate() const
{
    if (!(eps_bounded >= 0.0 && eps_divergent > eps_bounded)) {
        throw UsageError("thresholds must satisfy 0 <= eps_b < eps_d");
    }
}

int default_window(int levels) { return std::max(2, (levels + 2) / 3); }

EnergyProfile energy_profile(const LevelMassTable& table, double s, std::optional<int> window)
{
    check_exponent(s);
    const int n_levels = table.levels();
    EnergyProfile profile;
    profile.s = s;
    profile.values.reserve(static_cast<std::size_t>(n_levels));
    for (int n = 1; n <= n_levels; ++n) {
        profile.values.push_back(energy_hierarchical(table, s, n).value);
    }
    const double step_factor = std::expm1(s * std::numbers::ln2);
    for (int n = 1; n < n_levels; ++n) {
        profile.increments.push_back(step_factor * std::exp2(n * s) * table.squared_sum(n + 1));
    }

    const int requested = window.value_or(default_window(n_levels));
    profile.window = std::min(requested, static_cast<int>(profile.increments.size()));
    if (profile.window < 2) {
        profile.increment_ratio = kNaN;
        profile.growth_ratio = kNaN;
        return profile;
    }
    std::vector<double> x;
    std::vector<double> y;
    const std::size_t first = profile.increments.size() - static_cast<std::size_t>(profile.window);
    for (std::size_t i = first; i < profile.increments.size(); ++i) {
        x.push_back(static_cast<double>(i + 1));
        y.push_back(std::log2(profile.increments[i]));
    }
    profile.increment_ratio = std::exp2(least_squares_slope(x, y));
    profile.growth_ratio = std::max(1.0, profile.increment_ratio);
    return profile;
}

EnergyProfile energy_profile(const CylinderMeasure& mu, double s, std::optional<int> window)
{
    return energy_profile(LevelMassTable(mu), s, window);
}

Classification classify_s(const LevelMassTable& table, double s, std::optional<int> window, Thresholds thresholds)
{
    thresholds.validate();
    const EnergyProfile profile = energy_profile(table, s, window);
    const double ratio = profile.growth_ratio;
    Verdict verdict = Verdict::inconclusive;
    if (ratio <= 1.0 + thresholds.eps_bounded) {
        verdict = Verdict::bounded;
    } else if (ratio >= 1.0 + thresholds.eps_divergent) {
        verdict = Verdict::divergent;
    }
    return Classification{s, verdict, ratio};
}

Classification classify_s(const CylinderMeasure& mu, double s, std::optional<int> window, Thresholds thresholds)
{
    return classify_s(LevelMassTable(mu), s, window, thresholds);
}

DimensionEstimate dim_lower_bound(const LevelMassTable& table, double tol, Thresholds thresholds,
                                  std::optional<int> window)
{
    if (!(tol >= kMinTolerance)) {
        throw UsageError("dimension tolerance must be >= 2^-10");
    }
    thresholds.validate();
    DimensionEstimate est;
    est.resolution = table.levels();
    est.tolerance = tol;
    double lo = 0.0;
    double hi = 1.0;
    for (int step = 0; step < kMaxBisectionSteps && hi - lo > tol; ++step) {
        const double mid = 0.5 * (lo + hi);
        const Classification c = classify_s(table, mid, window, thresholds);
        est.probes.push_back(c);
        if (c.verdict == Verdict::bounded) {
            lo = mid;
            est.finite_verdict = c.verdict;
        } else {
            hi = mid;
            est.divergent_verdict = c.verdict;
        }
    }
    const bool any_definite = std::any_of(est.probes.begin(), est.probes.end(),
                                          [](const Classification& c) { return c.verdict != Verdict::inconclusive; });
    if (!any_definite) {
        std::vector<EnergyProfile> profiles;
        for (const Classification& c : est.probes) {
            profiles.push_back(energy_profile(table, c.s, window));
        }
        throw InconclusiveError("every probed s was inconclusive; increase the resolution or widen the window",
                                std::move(profiles));
    }
    est.s_finite = lo;
    est.s_divergent = hi;
    est.lower_bound = 0.5 * (lo + hi);
    return est;
}

DimensionEstimate dim_lower_bound(const CylinderMeasure& mu, double tol, Thresholds thresholds,
                                  std::optional<int> window)
{
    return dim_lower_bound(LevelMassTable(mu), tol, thresholds, window);
}

std::pair<double, double> weight_ratio_bounds(double s, int block)
{
    if (block < 1 || block > 63) {
        throw UsageError("block must be in [1, 63]");
    }
    const double coeff = full_coefficient(s, Word{1} << (block - 1));
    // k^{s-1} decreases in k, so the ratio is smallest at the block start.
    const double k_first = std::ldexp(1.0, block - 1);
    const double k_last = std::ldexp(1.0, block) - 1.0;
    return {coeff / std::pow(k_first, s - 1.0), coeff / std::pow(k_last, s - 1.0)};
}

FourierSeriesReport fourier_series_check(const WalshSpectrum& spec, double s, Word k_max)
{
    check_exponent(s);
    const auto& mu_hat = spec.coeffs;
    if (k_max < 1 || k_max > mu_hat.size()) {
        throw UsageError("k_max must lie in [1, 2^N]");
    }
    FourierSeriesReport report;
    report.s = s;
    report.k_max = k_max;
    double power_partial = 0.0;
    double kernel_partial = 0.0;
    for (int m = 1; (Word{1} << (m - 1)) < k_max; ++m) {
        FourierBlock block;
        block.block = m;
        block.k_begin = Word{1} << (m - 1);
        block.k_end = std::min<Word>(Word{1} << m, k_max);
        const double coeff = full_coefficient(s, block.k_begin);
        for (Word k = block.k_begin; k < block.k_end; ++k) {
            const double sq = mu_hat[k] * mu_hat[k];
            block.power_weighted += std::pow(static_cast<double>(k), s - 1.0) * sq;
            block.kernel_weighted += coeff * sq;
        }
        power_partial += block.power_weighted;
        kernel_partial += block.kernel_weighted;
        block.power_partial = power_partial;
        block.kernel_partial = kernel_partial;
        block.weight_ratio_min = coeff / std::pow(static_cast<double>(block.k_begin), s - 1.0);
        block.weight_ratio_max = coeff / std::pow(static_cast<double>(block.k_end - 1), s - 1.0);
        report.blocks.push_back(block);
    }
    const std::vector<double> coeffs = coefficient_table(s, spec.resolution, std::nullopt);
    for (Word k = k_max - 1; k >= 1; --k) {
        const double sq = mu_hat[k] * mu_hat[k];
        report.power_total += std::pow(static_cast<double>(k), s - 1.0) * sq;
        report.kernel_total += coeffs[k] * sq;
    }
    report.ratio = report.power_total > 0.0 ? report.kernel_total / report.power_total : kNaN;
    return report;
}

FourierSeriesReport fourier_series_check(const CylinderMeasure& mu, double s, std::optional<Word> k_max)
{
    return fourier_series_check(spectrum(mu), s, k_max.value_or(mu.resolution().size()));
}

ScalingDiagnostic scaling_diagnostic(const LevelMassTable& table, double s)
{
    check_exponent(s);
    ScalingDiagnostic diag;
    diag.s = s;
    for (int n = 0; n <= table.levels(); ++n) {
        const double v = table.max_mass(n) * std::exp2(n * s);
        diag.per_level.push_back(v);
        if (v > diag.supremum) {
            diag.supremum = v;
            diag.argmax = n;
        }
    }
    return diag;
}

ScalingDiagnostic scaling_diagnostic(const CylinderMeasure& mu, double s)
{
    return scaling_diagnostic(LevelMassTable(mu), s);
}

double box_counting_dim(const LevelMassTable& table, int n_min)
{
    const int n_max = table.levels();
    if (n_min < 0 || n_min >= n_max) {
        throw UsageError("box counting needs 0 <= n_min < N");
    }
    std::vector<double> x;
    std::vector<double> y;
    for (int n = n_min; n <= n_max; ++n) {
        x.push_back(n);
        y.push_back(std::log2(static_cast<double>(table.occupied(n))));
    }
    return least_squares_slope(x, y);
}

double box_counting_dim(const CylinderMeasure& mu, int n_min)
{
    return box_counting_dim(LevelMassTable(mu), n_min);
}

}  // namespace cantor
