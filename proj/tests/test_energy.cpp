#include <doctest.h>

#include <cmath>
#include <random>

#include "cantor/energy.hpp"
#include "oracles.hpp"

using namespace cantor;

namespace {

std::vector<double> to_vector(std::span<const double> s) { return {s.begin(), s.end()}; }

int oracle_trunc(std::optional<int> t) { return t ? *t : -1; }

/// Each cell split evenly between its two children at level N + 1.
CylinderMeasure refined(const CylinderMeasure& mu)
{
    const auto masses = mu.masses();
    std::vector<double> fine(2 * masses.size());
    for (std::size_t i = 0; i < masses.size(); ++i) {
        fine[i] = 0.5 * masses[i];
        fine[i + masses.size()] = 0.5 * masses[i];
    }
    return CylinderMeasure(Resolution(mu.levels() + 1), std::move(fine));
}

}  // namespace

TEST_CASE("method names")
{
    CHECK(parse_method("naive") == EnergyMethod::naive);
    CHECK(parse_method("hierarchical") == EnergyMethod::hierarchical);
    CHECK(method_name(EnergyMethod::spectral) == "spectral");
    CHECK_THROWS_AS(parse_method("fast"), UsageError);
}

TEST_CASE("diagonal constant")
{
    for (const double s : {0.1, 0.5, 0.9}) {
        for (int n = 1; n <= 20; ++n) {
            const auto k = cell_averaged_kernel(s, Resolution(n));
            CHECK(oracle::relative_error(k.diagonal, oracle::diagonal(s, -1, n)) < 1e-13);
            CHECK(k.diagonal > std::exp2(n * s));
            for (int t = 1; t <= n; ++t) {
                CHECK(oracle::relative_error(cell_averaged_kernel(s, Resolution(n), t).diagonal, std::exp2(t * s)) < 1e-15);
            }
            const auto above = cell_averaged_kernel(s, Resolution(n), n + 7);
            CHECK(oracle::relative_error(above.diagonal, oracle::diagonal(s, n + 7, n)) < 1e-13);
        }
    }
}

TEST_CASE("energy examples")
{
    const double s = 0.5;
    // point mass at level N: only same-cell pairs
    for (int n = 1; n <= 12; ++n) {
        const auto point = cylinder_uniform(CylinderId(n, 0), Resolution(n));
        CHECK(oracle::relative_error(energy_naive(point, s).value, oracle::diagonal(s, -1, n)) < 1e-13);
        CHECK(oracle::relative_error(energy_hierarchical(point, s).value, oracle::diagonal(s, -1, n)) < 1e-13);
        CHECK(oracle::relative_error(energy_spectral(point, s).value, oracle::diagonal(s, -1, n)) < 1e-13);
    }
    // two cells differing in x_1 interact through phi = 1
    const auto two = CylinderMeasure::from_masses({0.3, 0.7});
    const double d = oracle::diagonal(s, -1, 1);
    for (const auto method : {EnergyMethod::naive, EnergyMethod::hierarchical, EnergyMethod::spectral}) {
        CHECK(energy(two, s, std::nullopt, method).value ==
              doctest::Approx(d * (0.09 + 0.49) + 2 * 0.21).epsilon(1e-14));
    }
    // Haar measure: int phi, independent of the resolution
    for (int n = 1; n <= 16; ++n) {
        CHECK(energy_hierarchical(haar(Resolution(n)), s).value == doctest::Approx(1.7071067811865475).epsilon(1e-14));
    }
    CHECK(energy_hierarchical(haar(Resolution(6)), s, 2).value == doctest::Approx(0.5 + std::sqrt(2.0) / 4 + 0.5).epsilon(1e-14));
}

TEST_CASE("energies match the explicit double sum")
{
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 8);
        const double s = 0.05 + 0.9 * std::ldexp(static_cast<double>(rng() >> 11), -53);
        const std::optional<int> trunc = trial % 3 == 0 ? std::nullopt : std::optional<int>(1 + static_cast<int>(rng() % 12));
        const auto mu = random_measure(rng(), Resolution(n), 0.3);
        const double expected = oracle::energy(to_vector(mu.masses()), s, oracle_trunc(trunc));
        CHECK(oracle::relative_error(energy_naive(mu, s, trunc).value, expected) < 1e-12);
        CHECK(oracle::relative_error(energy_hierarchical(mu, s, trunc).value, expected) < 1e-12);
        CHECK(oracle::relative_error(energy_spectral(mu, s, trunc).value, expected) < 1e-12);
    }
}

TEST_CASE("the three methods agree on random measures")
{
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 10);
        const double sparsity = (rng() % 4) * 0.3;
        const auto mu = random_measure(rng(), Resolution(n), sparsity);
        const auto sums = naive_shell_pair_sums(mu);
        const LevelMassTable table(mu);
        const auto spec = spectrum(mu);
        for (const double s : {0.1, 0.37, 0.5, 0.83}) {
            for (const std::optional<int> trunc : {std::optional<int>(), std::optional<int>(2), std::optional<int>(n + 3)}) {
                const double naive = energy_from_shell_sums(sums, cell_averaged_kernel(s, mu.resolution(), trunc));
                const double hier = energy_hierarchical(table, s, trunc).value;
                const double spectral = energy_spectral(spec, s, trunc).value;
                const double values[] = {naive, hier, spectral};
                CHECK(max_relative_deviation(values) < 1e-12);
            }
        }
    }
}

TEST_CASE("refining a measure without moving mass leaves the energy unchanged")
{
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto mu = random_measure(seed, Resolution(3 + static_cast<int>(seed % 5)), 0.2);
        const double before = energy_hierarchical(mu, 0.6).value;
        for (int step = 0; step < 4; ++step) {
            mu = refined(mu);
            CHECK(oracle::relative_error(energy_hierarchical(mu, 0.6).value, before) < 1e-13);
            CHECK(oracle::relative_error(energy_spectral(mu, 0.6).value, before) < 1e-12);
        }
    }
}

TEST_CASE("energy is positive, quadratic in mass and increasing in s and truncation")
{
    for (std::uint64_t seed = 10; seed < 40; ++seed) {
        const auto mu = random_measure(seed, Resolution(9), 0.5);
        const LevelMassTable table(mu);
        double previous_s = 0.0;
        for (const double s : {0.1, 0.3, 0.5, 0.7, 0.9}) {
            const double value = energy_hierarchical(table, s).value;
            CHECK(value > 0.0);
            CHECK(value >= previous_s);
            previous_s = value;
            CHECK(energy_hierarchical(mu.scaled(3.0), s).value == doctest::Approx(9.0 * value).epsilon(1e-13));

            double previous_n = 0.0;
            for (int t = 1; t <= 30; ++t) {
                const double truncated = energy_hierarchical(table, s, t).value;
                CHECK(truncated > previous_n);
                CHECK(truncated <= value * (1 + 1e-14));
                previous_n = truncated;
            }
        }
    }
}

TEST_CASE("potential examples")
{
    const double s = 0.4;
    const auto flat = potential(haar(Resolution(8)), s);
    for (const double v : flat.values) {
        CHECK(v == doctest::Approx(oracle::geometric_tail(s, 1)).epsilon(1e-14));
    }

    const Resolution r(6);
    const auto point = potential(cylinder_uniform(CylinderId(6, 0), r), s);
    CHECK(point.values[0] == doctest::Approx(oracle::diagonal(s, -1, 6)).epsilon(1e-14));
    for (Word i = 1; i < r.size(); ++i) {
        CHECK(point.values[i] == doctest::Approx(oracle::kernel(s, -1, i)).epsilon(1e-14));
    }
}

TEST_CASE("potential integrates to the energy")
{
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        const auto mu = random_measure(seed, Resolution(1 + static_cast<int>(seed % 12)), 0.4);
        for (const std::optional<int> trunc : {std::optional<int>(), std::optional<int>(3)}) {
            const auto field = potential(mu, 0.7, trunc);
            long double acc = 0.0L;
            for (std::size_t i = 0; i < field.values.size(); ++i) {
                acc += static_cast<long double>(mu.masses()[i]) * field.values[i];
            }
            CHECK(oracle::relative_error(static_cast<double>(acc), energy_hierarchical(mu, 0.7, trunc).value) < 1e-12);
        }
    }
}

TEST_CASE("potential matches the pairwise sum")
{
    const auto mu = random_measure(5, Resolution(7), 0.3);
    const double s = 0.25;
    const auto field = potential(mu, s);
    const double d = oracle::diagonal(s, -1, 7);
    for (std::size_t i = 0; i < field.values.size(); ++i) {
        long double acc = static_cast<long double>(d) * mu.masses()[i];
        for (std::size_t j = 0; j < field.values.size(); ++j) {
            if (j != i) {
                acc += static_cast<long double>(mu.masses()[j]) * oracle::kernel(s, -1, i ^ j);
            }
        }
        CHECK(oracle::relative_error(field.values[i], static_cast<double>(acc)) < 1e-13);
    }
}

TEST_CASE("threaded runs reproduce single-threaded results")
{
    const auto small = random_measure(8, Resolution(11), 0.1);
    const double one = energy_naive(small, 0.5, std::nullopt, 1).value;
    for (const unsigned threads : {2u, 3u, 8u}) {
        CHECK(oracle::relative_error(energy_naive(small, 0.5, std::nullopt, threads).value, one) < 1e-12);
        CHECK(energy_naive(small, 0.5, std::nullopt, threads).value == energy_naive(small, 0.5, std::nullopt, threads).value);
    }

    const auto big = random_measure(8, Resolution(16), 0.1);
    CHECK(energy_spectral(big, 0.5, std::nullopt, 1).value == energy_spectral(big, 0.5, std::nullopt, 4).value);
    CHECK(potential(big, 0.5, std::nullopt, 1).values == potential(big, 0.5, std::nullopt, 3).values);
}

TEST_CASE("naive method is limited in resolution")
{
    const auto mu = haar(Resolution(kNaiveMaxLevels + 1));
    CHECK_THROWS_AS(energy_naive(mu, 0.5), UsageError);
    CHECK_THROWS_AS(energy(mu, 0.5, std::nullopt, EnergyMethod::naive), UsageError);
    CHECK_NOTHROW(energy(mu, 0.5, std::nullopt, EnergyMethod::hierarchical));
    CHECK_THROWS_AS(energy_hierarchical(mu, 1.0), UsageError);
}

TEST_CASE("max relative deviation")
{
    const double same[] = {2.0, 2.0, 2.0};
    CHECK(max_relative_deviation(same) == 0.0);
    const double spread[] = {1.0, 1.5, 2.0};
    CHECK(max_relative_deviation(spread) == 0.5);
    const double zeros[] = {0.0, 0.0};
    CHECK(max_relative_deviation(zeros) == 0.0);
}

TEST_CASE("hierarchical energy from a measure equals the table-based sum")
{
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto mu = random_measure(seed, Resolution(1 + static_cast<int>(seed % 16)), 0.3);
        const LevelMassTable table(mu);
        for (const double s : {0.2, 0.7}) {
            CHECK(energy_hierarchical(mu, s).value == energy_hierarchical(table, s).value);
            CHECK(energy_hierarchical(mu, s, 4).value == energy_hierarchical(table, s, 4).value);
        }
    }
}
