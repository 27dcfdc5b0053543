#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace resonance::parallel {

/// Worker count used by every parallel loop in the library. Defaults to the
/// RESONANCE_THREADS environment variable, else 1.
unsigned threads();
void set_threads(unsigned n);

/// Runs body(chunk) for chunk in [0, chunks). Chunks are claimed dynamically
/// by the workers, so callers must write results into per-chunk slots and
/// reduce them afterwards in chunk order. Chunk boundaries are the caller's,
/// which keeps results independent of the worker count.
void for_chunks(std::size_t chunks, const std::function<void(std::size_t)>& body);

/// Splits [0, n) into fixed-size blocks, maps each block to a partial value
/// and returns the partials in block order.
template <typename T, typename Fn>
std::vector<T> map_blocks(std::size_t n, std::size_t block, Fn&& fn) {
    const std::size_t chunks = block == 0 ? 0 : (n + block - 1) / block;
    std::vector<T> partial(chunks);
    for_chunks(chunks, [&](std::size_t c) {
        const std::size_t lo = c * block;
        const std::size_t hi = lo + block < n ? lo + block : n;
        partial[c] = fn(lo, hi);
    });
    return partial;
}

} // namespace resonance::parallel
