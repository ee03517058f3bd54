#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace cantor {

/// Threads to use when the caller asks for "all cores".
inline unsigned default_thread_count()
{
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

/// Splits [0, count) into at most `threads` contiguous chunks and runs
/// body(begin, end, chunk) on each. Chunk boundaries depend only on
/// (count, threads); chunk 0 runs on the calling thread.
template <class Body>
void parallel_chunks(std::size_t count, unsigned threads, Body&& body)
{
    const std::size_t chunks = std::max<std::size_t>(1, std::min<std::size_t>(threads, count));
    if (chunks == 1) {
        body(std::size_t{0}, count, std::size_t{0});
        return;
    }
    const std::size_t step = (count + chunks - 1) / chunks;
    std::vector<std::jthread> workers;
    workers.reserve(chunks - 1);
    for (std::size_t c = 1; c < chunks; ++c) {
        const std::size_t begin = std::min(count, c * step);
        const std::size_t end = std::min(count, begin + step);
        workers.emplace_back([&body, begin, end, c] { body(begin, end, c); });
    }
    body(std::size_t{0}, std::min(count, step), std::size_t{0});
}

/// Number of chunks parallel_chunks will use.
inline std::size_t chunk_count(std::size_t count, unsigned threads)
{
    return std::max<std::size_t>(1, std::min<std::size_t>(threads, count));
}

}  // namespace cantor
