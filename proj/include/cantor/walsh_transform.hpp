#pragma once

#include <span>
#include <vector>

namespace cantor {

/// In-place Walsh-Hadamard transform in natural (Walsh-Paley under the
/// LSB coordinate convention) order:
///   out[k] = sum_i in[i] * (-1)^{popcount(i & k)}.
/// The length must be a power of two. Applying it twice multiplies by the
/// length. Butterflies inside a stage are independent, so any thread count
/// gives bit-identical output.
void fwht_inplace(std::span<double> values, unsigned threads = 1);

std::vector<double> fwht(std::span<const double> values, unsigned threads = 1);

}  // namespace cantor
