#include <doctest.h>

#include <cmath>

#include "cantor/kernel.hpp"
#include "cantor/walsh_transform.hpp"
#include "oracles.hpp"

using namespace cantor;

namespace {

const double kSGrid[] = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};

}  // namespace

TEST_CASE("exponent domain")
{
    CHECK_THROWS_AS(KernelSpec(0.0), UsageError);
    CHECK_THROWS_AS(KernelSpec(1.0), UsageError);
    CHECK_THROWS_AS(KernelSpec(-0.2), UsageError);
    CHECK_THROWS_AS(KernelSpec(std::nan("")), UsageError);
    CHECK_THROWS_AS(KernelSpec(0.5, 0), UsageError);
    CHECK_THROWS_AS(truncated_coefficient(1.5, 3, 1), UsageError);
    CHECK_THROWS_AS(full_coefficient(0.0, 1), UsageError);
}

TEST_CASE("kernel values")
{
    const Resolution r(6);
    const KernelSpec full(0.5);
    CHECK(full.value(GroupElement::zero(r)) == 0.0);
    for (const double s : kSGrid) {
        CHECK(KernelSpec(s).value(GroupElement(0b1, r)) == 1.0);
        CHECK(KernelSpec(s).value(GroupElement(0b110001, r)) == 1.0);
    }
    CHECK(full.value(GroupElement(0b100, r)) == doctest::Approx(2.0).epsilon(1e-15));

    // truncated at 2: shells 1, 2 keep their values, deeper shells are capped at 2^{2s}
    const KernelSpec trunc(0.5, 2);
    CHECK(trunc.value(GroupElement(0b10, r)) == full.value(GroupElement(0b10, r)));
    CHECK(trunc.value(GroupElement(0b100, r)) == std::exp2(1.0));
    CHECK(trunc.value(GroupElement(0b100000, r)) == std::exp2(1.0));

    for (Word z = 1; z < r.size(); ++z) {
        for (const double s : kSGrid) {
            CHECK(KernelSpec(s).value(GroupElement(z, r)) == doctest::Approx(oracle::kernel(s, -1, z)).epsilon(1e-15));
            CHECK(KernelSpec(s, 3).value(GroupElement(z, r)) == doctest::Approx(oracle::kernel(s, 3, z)).epsilon(1e-15));
        }
    }
}

TEST_CASE("kernel lower bounds on G_m")
{
    const Resolution r(10);
    for (const double s : kSGrid) {
        for (Word z = 1; z < r.size(); ++z) {
            const GroupElement g(z, r);
            const int depth = std::countr_zero(z);  // z lies in G_m for m <= depth
            for (int m = 0; m <= depth; ++m) {
                CHECK(KernelSpec(s).value(g) >= std::exp2(m * s));
                for (int n = m; n <= 10; ++n) {
                    if (n >= 1) {
                        CHECK(KernelSpec(s, n).value(g) >= std::exp2(m * s));
                    }
                }
            }
        }
    }
}

TEST_CASE("truncated coefficient examples")
{
    CHECK(truncated_coefficient(0.5, 2, 2) == doctest::Approx(0.146447).epsilon(1e-6));
    CHECK(truncated_coefficient(0.5, 2, 3) == truncated_coefficient(0.5, 2, 2));
    CHECK(truncated_coefficient(0.5, 2, 2) == 0.5 * (1.0 - std::exp2(-0.5)));
    for (const double s : kSGrid) {
        for (int n = 1; n <= 12; ++n) {
            CHECK(truncated_coefficient(s, n, Word{1} << n) == 0.0);
            CHECK(truncated_coefficient(s, n, (Word{1} << n) + 17) == 0.0);
        }
    }
    const double quad = oracle::truncated_coefficient_quadrature(0.5, 3, 1, 8);
    CHECK(oracle::relative_error(truncated_coefficient(0.5, 3, 1), quad) < 1e-13);
}

TEST_CASE("truncated coefficients match brute-force quadrature")
{
    // every block m <= n <= N, including the derived lower-block formula
    for (const double s : kSGrid) {
        for (int levels = 1; levels <= 10; ++levels) {
            for (int n = 1; n <= levels; ++n) {
                for (int m = 0; m <= levels; ++m) {
                    const Word k = m == 0 ? 0 : (Word{1} << (m - 1)) + (m > 2 ? 1 : 0);
                    const double quad = oracle::truncated_coefficient_quadrature(s, n, k, levels);
                    const double closed = truncated_coefficient(s, n, k);
                    if (m > n) {
                        CHECK(std::abs(quad) < 1e-14);
                        CHECK(closed == 0.0);
                    } else {
                        CHECK(oracle::relative_error(closed, quad) < 1e-12);
                    }
                }
            }
        }
    }
}

TEST_CASE("Walsh coefficients are positive and increase with the truncation level")
{
    for (const double s : kSGrid) {
        for (int n = 1; n <= 16; ++n) {
            for (int m = 0; m <= n; ++m) {
                const Word k = m == 0 ? 0 : Word{1} << (m - 1);
                const double here = truncated_coefficient(s, n, k);
                CHECK(here > 0.0);
                CHECK(truncated_coefficient(s, n + 1, k) > here);
                CHECK(full_coefficient(s, k) > here);
            }
        }
    }
}

TEST_CASE("full coefficients")
{
    CHECK(full_coefficient(0.5, 0) == doctest::Approx(1.707107).epsilon(1e-6));
    for (const double s : kSGrid) {
        CHECK(oracle::relative_error(full_coefficient(s, 0), oracle::geometric_tail(s, 1)) < 1e-14);
        for (int m = 1; m <= 30; ++m) {
            const Word k = Word{1} << (m - 1);
            const double limit = full_coefficient(s, k);
            CHECK(limit > 0.0);
            // int_{G_m} phi from the summed tail, minus the K_m^2 piece
            const double from_tail = oracle::geometric_tail(s, m + 1) - std::pow(2.0, (m - 1) * s - m);
            CHECK(oracle::relative_error(limit, from_tail) < 1e-12);
            // the truncation residual 2^{n(s-1)} is far below double precision here
            CHECK(oracle::relative_error(limit, truncated_coefficient(s, m + 1000, k)) < 1e-12);
        }
    }
    CHECK(oracle::relative_error(full_coefficient(0.5, 1), truncated_coefficient(0.5, 60, 1)) < 1e-8);
}

TEST_CASE("truncation error shrinks geometrically with ratio 2^{s-1}")
{
    for (const double s : kSGrid) {
        const double r = std::exp2(s - 1.0);
        for (const Word k : {Word{0}, Word{1}, Word{5}}) {
            const double limit = full_coefficient(s, k);
            for (int n = 8; n <= 16; ++n) {
                const double e0 = limit - truncated_coefficient(s, n, k);
                const double e1 = limit - truncated_coefficient(s, n + 1, k);
                CHECK(e1 / e0 == doctest::Approx(r).epsilon(1e-6));
            }
        }
    }
}

TEST_CASE("coefficient decay like k^{s-1}")
{
    for (const double s : {0.25, 0.5, 0.75}) {
        for (int m = 5; m < 20; ++m) {
            const double a = std::log2(full_coefficient(s, Word{1} << m));
            const double b = std::log2(full_coefficient(s, Word{1} << (m + 1)));
            CHECK(b - a == doctest::Approx(s - 1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("coefficient table")
{
    const Resolution r(6);
    for (const double s : kSGrid) {
        const auto table = coefficient_table(s, r, std::nullopt);
        CHECK(table.size() == 64);
        CHECK(table[0] == full_coefficient(s, 0));
        CHECK(table[2] == table[3]);
        for (Word k = 4; k < 8; ++k) {
            CHECK(table[k] == table[4]);
        }
        for (Word k = 0; k < 64; ++k) {
            CHECK(table[k] == full_coefficient(s, k));
        }
    }
}

TEST_CASE("table at truncation N equals the scaled transform of the sampled kernel")
{
    for (const double s : kSGrid) {
        for (int levels = 1; levels <= 12; ++levels) {
            const Resolution r(levels);
            std::vector<double> sampled(r.size());
            sampled[0] = std::exp2(levels * s);  // phi_s^N on G_N \ {0}
            for (Word x = 1; x < r.size(); ++x) {
                sampled[x] = oracle::kernel(s, levels, x);
            }
            const auto transformed = fwht(sampled);
            const auto table = coefficient_table(s, r, levels);
            double worst = 0.0;
            for (Word k = 0; k < r.size(); ++k) {
                worst = std::max(worst, oracle::relative_error(table[k], std::ldexp(transformed[k], -levels)));
            }
            CHECK(worst < 1e-10);
        }
    }
}

TEST_CASE("library quadrature agrees with the closed forms")
{
    for (const double s : {0.2, 0.5, 0.85}) {
        for (int k = 0; k < 64; ++k) {
            const Word kw = static_cast<Word>(k);
            CHECK(oracle::relative_error(coefficient_quadrature(s, std::nullopt, kw, Resolution(8)),
                                         full_coefficient(s, kw)) < 1e-12);
            const double quad = coefficient_quadrature(s, 4, kw, Resolution(8));
            if (k >= 16) {
                CHECK(std::abs(quad) < 1e-14);
            } else {
                CHECK(oracle::relative_error(quad, truncated_coefficient(s, 4, kw)) < 1e-12);
            }
        }
    }
}
