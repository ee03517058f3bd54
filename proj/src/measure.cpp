#include "cantor/measure.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <string>

#include "cantor/walsh_transform.hpp"

namespace cantor {

CylinderMeasure::CylinderMeasure(Resolution resolution, std::vector<double> masses)
    : resolution_(resolution), masses_(std::move(masses)), total_(0.0)
{
    if (masses_.size() != resolution_.size()) {
        throw ValidationError("measure has " + std::to_string(masses_.size()) +
                              " masses but resolution " + std::to_string(resolution_.levels()) +
                              " requires " + std::to_string(resolution_.size()));
    }
    for (std::size_t i = 0; i < masses_.size(); ++i) {
        const double m = masses_[i];
        if (!std::isfinite(m)) {
            throw ValidationError("mass at index " + std::to_string(i) + " is not finite");
        }
        if (m < 0.0) {
            throw ValidationError("mass at index " + std::to_string(i) + " is negative (" +
                                  std::to_string(m) + ")");
        }
        total_ += m;
    }
    if (!(total_ > 0.0)) {
        throw ValidationError("measure has zero total mass");
    }
}

CylinderMeasure CylinderMeasure::from_masses(std::vector<double> masses)
{
    const std::size_t n = masses.size();
    if (n < 2 || !std::has_single_bit(n)) {
        throw ValidationError("mass array length " + std::to_string(n) +
                              " is not a power of two >= 2");
    }
    const int levels = std::countr_zero(n);
    if (levels > kMaxLevels) {
        throw ValidationError("mass array too large");
    }
    return CylinderMeasure(Resolution(levels), std::move(masses));
}

Word CylinderMeasure::support_size() const noexcept
{
    return static_cast<Word>(std::count_if(masses_.begin(), masses_.end(), [](double m) { return m > 0.0; }));
}

double CylinderMeasure::mass(const CylinderId& c) const
{
    if (c.level > levels()) {
        throw UsageError("cylinder level exceeds measure resolution");
    }
    double acc = 0.0;
    for (const GroupElement& x : coset_members(c, resolution_)) {
        acc += masses_[x.bits()];
    }
    return acc;
}

CylinderMeasure CylinderMeasure::scaled(double factor) const
{
    if (!(factor > 0.0)) {
        throw UsageError("scale factor must be positive");
    }
    std::vector<double> out(masses_);
    for (double& m : out) {
        m *= factor;
    }
    return CylinderMeasure(resolution_, std::move(out));
}

CylinderMeasure CylinderMeasure::coarsened(int level) const
{
    if (level < 1 || level > levels()) {
        throw UsageError("coarsening level must be in [1, N]");
    }
    const LevelMassTable table(*this);
    const auto coarse = table.masses(level);
    return CylinderMeasure(Resolution(level), std::vector<double>(coarse.begin(), coarse.end()));
}

WalshSpectrum spectrum(const CylinderMeasure& mu, unsigned threads)
{
    return WalshSpectrum{mu.resolution(), fwht(mu.masses(), threads)};
}

LevelMassTable::LevelMassTable(const CylinderMeasure& mu)
{
    const int n = mu.levels();
    const auto count = static_cast<std::size_t>(n) + 1;
    levels_.resize(count);
    squared_.resize(count);
    sibling_.assign(count, 0.0);
    max_.resize(count);
    occupied_.resize(count);

    levels_[static_cast<std::size_t>(n)].assign(mu.masses().begin(), mu.masses().end());
    for (int m = n - 1; m >= 0; --m) {
        const auto& fine = levels_[static_cast<std::size_t>(m) + 1];
        auto& coarse = levels_[static_cast<std::size_t>(m)];
        const std::size_t width = std::size_t{1} << m;
        coarse.resize(width);
        double cross = 0.0;
        // children of coarse cylinder c are c and c + 2^m
        for (std::size_t c = 0; c < width; ++c) {
            const double a = fine[c];
            const double b = fine[c + width];
            coarse[c] = a + b;
            cross += 2.0 * a * b;
        }
        sibling_[static_cast<std::size_t>(m) + 1] = cross;
    }
    for (std::size_t m = 0; m < count; ++m) {
        double sq = 0.0;
        double mx = 0.0;
        Word occ = 0;
        for (const double v : levels_[m]) {
            sq += v * v;
            mx = std::max(mx, v);
            occ += v > 0.0 ? 1 : 0;
        }
        squared_[m] = sq;
        max_[m] = mx;
        occupied_[m] = occ;
    }
}

double LevelMassTable::sibling_product_sum(int level) const
{
    if (level < 1 || level > levels()) {
        throw UsageError("sibling sums are defined for levels 1..N");
    }
    return sibling_[static_cast<std::size_t>(level)];
}

LevelMassTable level_masses(const CylinderMeasure& mu) { return LevelMassTable(mu); }

CylinderMeasure haar(Resolution resolution)
{
    return CylinderMeasure(resolution,
                           std::vector<double>(resolution.size(), std::ldexp(1.0, -resolution.levels())));
}

CylinderMeasure cylinder_uniform(const CylinderId& c, Resolution resolution)
{
    if (c.level > resolution.levels()) {
        throw UsageError("cylinder level exceeds resolution");
    }
    std::vector<double> masses(resolution.size(), 0.0);
    const double cell = std::ldexp(1.0, c.level - resolution.levels());
    for (const GroupElement& x : coset_members(c, resolution)) {
        masses[x.bits()] = cell;
    }
    return CylinderMeasure(resolution, std::move(masses));
}

CylinderMeasure pattern_measure(std::span<const int> zero_positions, Resolution resolution)
{
    Word mask = 0;
    for (const int j : zero_positions) {
        if (j >= 1 && j <= resolution.levels()) {
            mask |= Word{1} << (j - 1);
        }
    }
    const int free = resolution.levels() - std::popcount(mask);
    const double cell = std::ldexp(1.0, -free);
    std::vector<double> masses(resolution.size(), 0.0);
    for (Word i = 0; i < resolution.size(); ++i) {
        if ((i & mask) == 0) {
            masses[i] = cell;
        }
    }
    return CylinderMeasure(resolution, std::move(masses));
}

CylinderMeasure bernoulli_product(std::span<const double> p)
{
    if (p.empty() || p.size() > static_cast<std::size_t>(kMaxLevels)) {
        throw UsageError("bernoulli_product needs between 1 and 30 probabilities");
    }
    for (std::size_t j = 0; j < p.size(); ++j) {
        if (!(p[j] >= 0.0 && p[j] <= 1.0)) {
            throw UsageError("probability p_" + std::to_string(j + 1) + " must lie in [0, 1]");
        }
    }
    const Resolution resolution(static_cast<int>(p.size()));
    // Build by doubling: level j+1 masses from level j, no repeated products.
    std::vector<double> masses{1.0};
    masses.reserve(resolution.size());
    for (std::size_t j = 0; j < p.size(); ++j) {
        const std::size_t width = masses.size();
        masses.resize(2 * width);
        for (std::size_t c = 0; c < width; ++c) {
            const double parent = masses[c];
            masses[c] = parent * (1.0 - p[j]);
            masses[c + width] = parent * p[j];
        }
    }
    return CylinderMeasure(resolution, std::move(masses));
}

CylinderMeasure random_measure(std::uint64_t seed, Resolution resolution, double sparsity)
{
    if (!(sparsity >= 0.0 && sparsity < 1.0)) {
        throw UsageError("sparsity must lie in [0, 1)");
    }
    std::mt19937_64 engine(seed);
    const auto unit = [&engine] { return std::ldexp(static_cast<double>(engine() >> 11), -53); };
    std::vector<double> masses(resolution.size(), 0.0);
    double total = 0.0;
    for (double& m : masses) {
        const double gate = unit();
        const double value = 1.0 - unit();
        if (gate >= sparsity) {
            m = value;
            total += value;
        }
    }
    if (total == 0.0) {
        masses[engine() % resolution.size()] = 1.0;
        total = 1.0;
    }
    for (double& m : masses) {
        m /= total;
    }
    return CylinderMeasure(resolution, std::move(masses));
}

std::vector<int> even_coordinates(int levels)
{
    std::vector<int> out;
    for (int j = 2; j <= levels; j += 2) {
        out.push_back(j);
    }
    return out;
}

std::vector<int> non_multiples(int period, int levels)
{
    if (period < 1) {
        throw UsageError("period must be >= 1");
    }
    std::vector<int> out;
    for (int j = 1; j <= levels; ++j) {
        if (j % period != 0) {
            out.push_back(j);
        }
    }
    return out;
}

}  // namespace cantor
