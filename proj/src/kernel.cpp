#include "cantor/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace cantor {

namespace {

void check_truncation(std::optional<int> truncation)
{
    if (truncation && *truncation < 1) {
        throw UsageError("kernel truncation must be >= 1, got " + std::to_string(*truncation));
    }
}

// 1 - 2^{s-1}, computed without cancellation.
double one_minus_ratio(double s) { return -std::expm1((s - 1.0) * std::numbers::ln2); }

}  // namespace

void check_exponent(double s)
{
    if (!(s > 0.0 && s < 1.0)) {
        throw UsageError("kernel exponent s must lie in the open interval (0, 1), got " +
                         std::to_string(s));
    }
}

KernelSpec::KernelSpec(double s, std::optional<int> truncation) : s_(s), truncation_(truncation)
{
    check_exponent(s);
    check_truncation(truncation);
}

double KernelSpec::value(const GroupElement& z) const
{
    const auto m = cantor::shell_level(z);
    return m ? cantor::shell_value(s_, *m, truncation_) : 0.0;
}

double KernelSpec::shell_value(int m) const { return cantor::shell_value(s_, m, truncation_); }

double KernelSpec::coefficient(Word k) const
{
    return truncation_ ? truncated_coefficient(s_, *truncation_, k) : full_coefficient(s_, k);
}

double kernel_value(const KernelSpec& spec, const GroupElement& z) { return spec.value(z); }

double shell_value(double s, int m, std::optional<int> truncation)
{
    if (m < 1) {
        throw UsageError("shell level must be >= 1, got " + std::to_string(m));
    }
    const int exponent = truncation ? std::min(m - 1, *truncation) : m - 1;
    return std::exp2(s * exponent);
}

double subgroup_integral(double s, int m, std::optional<int> truncation)
{
    check_exponent(s);
    check_truncation(truncation);
    if (m < 0) {
        throw UsageError("subgroup level must be >= 0");
    }
    if (!truncation) {
        // sum_{j>m} 2^{(j-1)s-j} = 2^{-s} r^{m+1} / (1 - r), r = 2^{s-1}
        return std::ldexp(std::exp2(m * s), -m - 1) / one_minus_ratio(s);
    }
    const int n = *truncation;
    if (m >= n) {
        // kernel is the constant 2^{ns} on G_m
        return std::ldexp(std::exp2(n * s), -m);
    }
    // Shells m+1..n at their own values, then 2^{ns} on all of G_n.
    double acc = std::ldexp(std::exp2(n * s), -n);
    for (int j = n; j > m; --j) {
        acc += std::ldexp(std::exp2((j - 1) * s), -j);
    }
    return acc;
}

double truncated_coefficient(double s, int n, Word k)
{
    check_exponent(s);
    check_truncation(n);
    const int m = dyadic_block(k);
    if (m > n) {
        return 0.0;
    }
    if (m == n) {
        return std::exp2(n * (s - 1.0)) * (1.0 - std::exp2(-s));
    }
    const double inner = subgroup_integral(s, m, n);
    return m == 0 ? inner : inner - std::ldexp(std::exp2((m - 1) * s), -m);
}

double full_coefficient(double s, Word k)
{
    check_exponent(s);
    const int m = dyadic_block(k);
    if (m == 0) {
        return 0.5 / one_minus_ratio(s);
    }
    // 2^{-s} r^m (2r - 1) / (1 - r)
    return std::ldexp(std::exp2((m - 1) * s), -m) * std::expm1(s * std::numbers::ln2) / one_minus_ratio(s);
}

std::vector<double> coefficient_table(double s, Resolution resolution,
                                      std::optional<int> truncation)
{
    check_exponent(s);
    check_truncation(truncation);
    std::vector<double> table(resolution.size());
    const KernelSpec spec(s, truncation);
    table[0] = spec.coefficient(0);
    for (int m = 1; m <= resolution.levels(); ++m) {
        const Word begin = Word{1} << (m - 1);
        const Word end = Word{1} << m;
        std::fill(table.begin() + static_cast<std::ptrdiff_t>(begin),
                  table.begin() + static_cast<std::ptrdiff_t>(end), spec.coefficient(begin));
    }
    return table;
}

double coefficient_quadrature(double s, std::optional<int> truncation, Word k,
                              Resolution resolution)
{
    const KernelSpec spec(s, truncation);
    if (k >= resolution.size()) {
        throw UsageError("quadrature index must be below 2^R");
    }
    const int levels = resolution.levels();
    // Signed character sums per shell are exact integers.
    std::vector<long long> signed_counts(static_cast<std::size_t>(levels) + 1, 0);
    for (Word x = 1; x < resolution.size(); ++x) {
        signed_counts[static_cast<std::size_t>(shell_level_of(x))] += walsh_sign(k, x);
    }
    const double cell_average_at_zero = std::exp2(levels) * subgroup_integral(s, levels, truncation);
    double acc = cell_average_at_zero;
    for (int m = levels; m >= 1; --m) {
        acc += spec.shell_value(m) * static_cast<double>(signed_counts[static_cast<std::size_t>(m)]);
    }
    return std::ldexp(acc, -levels);
}

}  // namespace cantor
