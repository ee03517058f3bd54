#pragma once

// The s-kernel on the Cantor group and its Walsh-Fourier coefficients.
//
// phi_s(z) = 2^{s(m-1)} on the shell K_m^2 (first nonzero coordinate at m),
// phi_s(0) = 0. The truncated kernel phi_s^n agrees with phi_s off G_n and is
// capped at 2^{ns} on G_n \ {0}; on shell m it equals 2^{s * min(m-1, n)}.
//
// Both kernels are radial, so their coefficients depend on k only through the
// dyadic block m = bit_width(k), i.e. 2^{m-1} <= k < 2^m. For a block m >= 1
//
//   phi_hat(k) = int_{G_m} phi dlambda - 2^{(m-1)s - m}
//
// because w_k is +1 on G_m, -1 on K_m^2, and integrates to zero on every
// level-(m-1) coset where phi is constant.

#include <optional>
#include <vector>

#include "cantor/group.hpp"

namespace cantor {

/// Throws UsageError unless 0 < s < 1.
void check_exponent(double s);

class KernelSpec {
public:
    explicit KernelSpec(double s, std::optional<int> truncation = std::nullopt);

    double s() const noexcept { return s_; }
    std::optional<int> truncation() const noexcept { return truncation_; }

    double value(const GroupElement& z) const;
    /// Value on the shell K_m^2, m >= 1.
    double shell_value(int m) const;
    double coefficient(Word k) const;

private:
    double s_;
    std::optional<int> truncation_;
};

double kernel_value(const KernelSpec& spec, const GroupElement& z);

/// 2^{s * min(m-1, n)}; the full kernel when truncation is empty.
double shell_value(double s, int m, std::optional<int> truncation);

/// int_{G_m} phi dlambda for the full or truncated kernel, m >= 0.
double subgroup_integral(double s, int m, std::optional<int> truncation);

/// Dyadic block of k: 0 for k = 0, otherwise the m with 2^{m-1} <= k < 2^m.
inline int dyadic_block(Word k) noexcept { return static_cast<int>(std::bit_width(k)); }

/// Walsh-Fourier coefficient of phi_s^n at k; zero for k >= 2^n.
double truncated_coefficient(double s, int n, Word k);

/// Walsh-Fourier coefficient of phi_s at k, the increasing limit of the
/// truncated coefficients.
double full_coefficient(double s, Word k);

/// Coefficients for k = 0 .. 2^N - 1.
std::vector<double> coefficient_table(double s, Resolution resolution,
                                      std::optional<int> truncation);

/// Quadrature 2^{-R} sum_x kbar(x) w_k(x) over the 2^R level-R cylinders,
/// where kbar is the kernel averaged over each cylinder. Exact for k < 2^R
/// since w_k is constant on level-R cylinders. Cost O(2^R).
double coefficient_quadrature(double s, std::optional<int> truncation, Word k,
                              Resolution resolution);

}  // namespace cantor
