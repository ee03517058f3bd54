#include "cantor/energy.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "cantor/kernel.hpp"
#include "cantor/parallel.hpp"

namespace cantor {

std::string_view method_name(EnergyMethod method)
{
    switch (method) {
    case EnergyMethod::naive:
        return "naive";
    case EnergyMethod::hierarchical:
        return "hierarchical";
    case EnergyMethod::spectral:
        return "spectral";
    }
    return "unknown";
}

EnergyMethod parse_method(std::string_view name)
{
    if (name == "naive") {
        return EnergyMethod::naive;
    }
    if (name == "hierarchical") {
        return EnergyMethod::hierarchical;
    }
    if (name == "spectral") {
        return EnergyMethod::spectral;
    }
    throw UsageError("unknown energy method '" + std::string(name) + "'");
}

CellAveragedKernel cell_averaged_kernel(double s, Resolution resolution, std::optional<int> truncation)
{
    const KernelSpec spec(s, truncation);
    const int n = resolution.levels();
    CellAveragedKernel out{s, truncation, resolution, std::vector<double>(static_cast<std::size_t>(n) + 1, 0.0), 0.0};
    for (int m = 1; m <= n; ++m) {
        out.shell[static_cast<std::size_t>(m)] = spec.shell_value(m);
    }
    out.diagonal = std::ldexp(subgroup_integral(s, n, truncation), n);
    return out;
}

PotentialField potential(const CylinderMeasure& mu, double s, std::optional<int> truncation, unsigned threads)
{
    const CellAveragedKernel kernel = cell_averaged_kernel(s, mu.resolution(), truncation);
    const LevelMassTable table(mu);
    const int n = mu.levels();
    const auto masses = mu.masses();
    std::vector<std::span<const double>> level(static_cast<std::size_t>(n) + 1);
    for (int m = 0; m <= n; ++m) {
        level[static_cast<std::size_t>(m)] = table.masses(m);
    }
    std::vector<double> values(masses.size());
    parallel_chunks(values.size(), threads, [&](std::size_t begin, std::size_t end, std::size_t) {
        for (std::size_t i = begin; i < end; ++i) {
            double acc = kernel.diagonal * masses[i];
            // Cells at shell m from i fill the sibling of i's level-m cylinder.
            for (int m = n; m >= 1; --m) {
                const std::size_t low = i & ((std::size_t{1} << m) - 1);
                const std::size_t sibling = low ^ (std::size_t{1} << (m - 1));
                acc += kernel.shell[static_cast<std::size_t>(m)] * level[static_cast<std::size_t>(m)][sibling];
            }
            values[i] = acc;
        }
    });
    return PotentialField{mu.resolution(), std::move(values)};
}

ShellPairSums naive_shell_pair_sums(const CylinderMeasure& mu, unsigned threads)
{
    const int n = mu.levels();
    if (n > kNaiveMaxLevels) {
        throw UsageError("naive energy enumerates 4^N pairs and is limited to N <= " +
                         std::to_string(kNaiveMaxLevels) + " (got N = " + std::to_string(n) +
                         "); use the hierarchical or spectral method");
    }
    const auto masses = mu.masses();
    const std::size_t size = masses.size();
    const std::size_t chunks = chunk_count(size, threads);
    std::vector<std::vector<double>> partial(chunks, std::vector<double>(static_cast<std::size_t>(n) + 1, 0.0));

    // Row i pairs with j > i; rows get shorter, so chunk boundaries are chosen
    // to give each chunk about the same number of pairs.
    std::vector<std::size_t> bounds(chunks + 1, size);
    bounds[0] = 0;
    {
        const double total_pairs = 0.5 * static_cast<double>(size) * static_cast<double>(size - 1);
        std::size_t row = 0;
        double done = 0.0;
        for (std::size_t c = 1; c < chunks; ++c) {
            const double target = total_pairs * static_cast<double>(c) / static_cast<double>(chunks);
            while (row < size && done < target) {
                done += static_cast<double>(size - row - 1);
                ++row;
            }
            bounds[c] = row;
        }
    }

    parallel_chunks(chunks, static_cast<unsigned>(chunks), [&](std::size_t, std::size_t, std::size_t chunk) {
        auto& acc = partial[chunk];
        std::vector<double> row_acc(static_cast<std::size_t>(n) + 1);
        for (std::size_t i = bounds[chunk]; i < bounds[chunk + 1]; ++i) {
            const double mi = masses[i];
            if (mi == 0.0) {
                continue;
            }
            std::fill(row_acc.begin(), row_acc.end(), 0.0);
            for (std::size_t j = i + 1; j < size; ++j) {
                row_acc[static_cast<std::size_t>(shell_level_of(i ^ j))] += masses[j];
            }
            for (int m = 1; m <= n; ++m) {
                acc[static_cast<std::size_t>(m)] += 2.0 * mi * row_acc[static_cast<std::size_t>(m)];
            }
        }
    });

    ShellPairSums out{mu.resolution(), std::vector<double>(static_cast<std::size_t>(n) + 1, 0.0), 0.0};
    for (const auto& acc : partial) {
        for (int m = 1; m <= n; ++m) {
            out.off_diagonal[static_cast<std::size_t>(m)] += acc[static_cast<std::size_t>(m)];
        }
    }
    for (const double mi : masses) {
        out.diagonal += mi * mi;
    }
    return out;
}

double energy_from_shell_sums(const ShellPairSums& sums, const CellAveragedKernel& kernel)
{
    if (sums.resolution != kernel.resolution) {
        throw UsageError("shell sums and kernel have different resolutions");
    }
    double acc = kernel.diagonal * sums.diagonal;
    for (int m = kernel.resolution.levels(); m >= 1; --m) {
        acc += kernel.shell[static_cast<std::size_t>(m)] * sums.off_diagonal[static_cast<std::size_t>(m)];
    }
    return acc;
}

EnergyResult energy_naive(const CylinderMeasure& mu, double s, std::optional<int> truncation, unsigned threads)
{
    const CellAveragedKernel kernel = cell_averaged_kernel(s, mu.resolution(), truncation);
    const double value = energy_from_shell_sums(naive_shell_pair_sums(mu, threads), kernel);
    return EnergyResult{value, EnergyMethod::naive, s, truncation, mu.levels()};
}

EnergyResult energy_hierarchical(const LevelMassTable& table, double s, std::optional<int> truncation)
{
    const int n = table.levels();
    const CellAveragedKernel kernel = cell_averaged_kernel(s, Resolution(n), truncation);
    double acc = kernel.diagonal * table.squared_sum(n);
    for (int m = n; m >= 1; --m) {
        acc += kernel.shell[static_cast<std::size_t>(m)] * table.sibling_product_sum(m);
    }
    return EnergyResult{acc, EnergyMethod::hierarchical, s, truncation, n};
}

EnergyResult energy_hierarchical(const CylinderMeasure& mu, double s, std::optional<int> truncation)
{
    // Same sums in the same order as the LevelMassTable overload, but folding
    // levels in one half-size buffer instead of keeping all of them.
    const int n = mu.levels();
    const CellAveragedKernel kernel = cell_averaged_kernel(s, mu.resolution(), truncation);
    const auto masses = mu.masses();
    double squared = 0.0;
    for (const double v : masses) {
        squared += v * v;
    }
    double acc = kernel.diagonal * squared;
    std::size_t width = masses.size() / 2;
    std::vector<double> coarse(width);
    const double* fine = masses.data();
    for (int m = n; m >= 1; --m) {
        double cross = 0.0;
        for (std::size_t c = 0; c < width; ++c) {
            const double a = fine[c];
            const double b = fine[c + width];
            coarse[c] = a + b;
            cross += 2.0 * a * b;
        }
        acc += kernel.shell[static_cast<std::size_t>(m)] * cross;
        fine = coarse.data();
        width /= 2;
    }
    return EnergyResult{acc, EnergyMethod::hierarchical, s, truncation, n};
}

EnergyResult energy_spectral(const WalshSpectrum& spec, double s, std::optional<int> truncation)
{
    const std::vector<double> coeffs = coefficient_table(s, spec.resolution, truncation);
    const auto& mu_hat = spec.coeffs;
    double acc = 0.0;
    for (std::size_t k = mu_hat.size() - 1; k >= 1; --k) {
        acc += coeffs[k] * (mu_hat[k] * mu_hat[k]);
    }
    acc += coeffs[0] * (mu_hat[0] * mu_hat[0]);
    return EnergyResult{acc, EnergyMethod::spectral, s, truncation, spec.resolution.levels()};
}

EnergyResult energy_spectral(const CylinderMeasure& mu, double s, std::optional<int> truncation, unsigned threads)
{
    check_exponent(s);
    return energy_spectral(spectrum(mu, threads), s, truncation);
}

EnergyResult energy(const CylinderMeasure& mu, double s, std::optional<int> truncation, EnergyMethod method,
                    unsigned threads)
{
    switch (method) {
    case EnergyMethod::naive:
        return energy_naive(mu, s, truncation, threads);
    case EnergyMethod::hierarchical:
        return energy_hierarchical(mu, s, truncation);
    case EnergyMethod::spectral:
        return energy_spectral(mu, s, truncation, threads);
    }
    throw UsageError("unknown energy method");
}

double max_relative_deviation(std::span<const double> values)
{
    double worst = 0.0;
    for (std::size_t a = 0; a < values.size(); ++a) {
        for (std::size_t b = a + 1; b < values.size(); ++b) {
            const double scale = std::max(std::abs(values[a]), std::abs(values[b]));
            if (scale > 0.0) {
                worst = std::max(worst, std::abs(values[a] - values[b]) / scale);
            }
        }
    }
    return worst;
}

}  // namespace cantor
