#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace vestokes {

/// Splits [0, n) into `threads` contiguous chunks and runs fn(chunk, begin, end)
/// on each, one thread per chunk. The first exception thrown is rethrown.
template <class Fn>
void parallel_chunks(std::size_t n, int threads, Fn&& fn) {
    const std::size_t parts = std::max<std::size_t>(1, std::min<std::size_t>(threads < 1 ? 1 : threads, n ? n : 1));
    std::vector<std::exception_ptr> errors(parts);
    auto run = [&](std::size_t c) {
        const std::size_t b = n * c / parts, e = n * (c + 1) / parts;
        try {
            fn(c, b, e);
        } catch (...) {
            errors[c] = std::current_exception();
        }
    };
    if (parts == 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(parts);
        for (std::size_t c = 0; c < parts; ++c) pool.emplace_back(run, c);
        for (auto& t : pool) t.join();
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
}

/// Chunk count used by parallel_chunks.
inline std::size_t chunk_count(std::size_t n, int threads) {
    return std::max<std::size_t>(1, std::min<std::size_t>(threads < 1 ? 1 : threads, n ? n : 1));
}

}  // namespace vestokes
