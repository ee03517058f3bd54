#include "cantor/walsh_transform.hpp"

#include <bit>
#include <string>

#include "cantor/group.hpp"
#include "cantor/parallel.hpp"

namespace cantor {

void fwht_inplace(std::span<double> values, unsigned threads)
{
    const std::size_t n = values.size();
    if (n == 0 || !std::has_single_bit(n)) {
        throw UsageError("fwht: length must be a power of two, got " + std::to_string(n));
    }
    // Small inputs are not worth the thread start-up.
    if (n < (std::size_t{1} << 14)) {
        threads = 1;
    }
    double* data = values.data();
    if (threads <= 1) {
        for (std::size_t half = 1; half < n; half <<= 1) {
            for (std::size_t block = 0; block < n; block += 2 * half) {
                for (std::size_t i = block; i < block + half; ++i) {
                    const double a = data[i];
                    const double b = data[i + half];
                    data[i] = a + b;
                    data[i + half] = a - b;
                }
            }
        }
        return;
    }
    for (std::size_t half = 1; half < n; half <<= 1) {
        // Butterfly p pairs (i, i + half) with i = (p / half) * 2 * half + p % half.
        parallel_chunks(n / 2, threads, [=](std::size_t begin, std::size_t end, std::size_t) {
            for (std::size_t p = begin; p < end; ++p) {
                const std::size_t i = (p / half) * 2 * half + (p % half);
                const double a = data[i];
                const double b = data[i + half];
                data[i] = a + b;
                data[i + half] = a - b;
            }
        });
    }
}

std::vector<double> fwht(std::span<const double> values, unsigned threads)
{
    std::vector<double> out(values.begin(), values.end());
    fwht_inplace(out, threads);
    return out;
}

}  // namespace cantor
