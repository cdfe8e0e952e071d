#pragma once

#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace apack {

inline unsigned default_thread_count() {
    if (const char* env = std::getenv("APACK_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return unsigned(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

/// Runs fn(chunk_index, begin, end) over [0, n) split into `threads` chunks.
/// Chunk boundaries depend only on (n, threads); callers merge per-chunk
/// results in chunk order to stay deterministic. The first exception thrown
/// by any chunk is rethrown here.
template <typename Fn>
void parallel_chunks(std::size_t n, unsigned threads, Fn&& fn) {
    if (threads <= 1 || n < 2) {
        if (n) fn(0, std::size_t(0), n);
        return;
    }
    unsigned used = unsigned(std::min<std::size_t>(threads, n));
    std::size_t per = (n + used - 1) / used;
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(used);
    for (unsigned t = 0; t < used; ++t) {
        std::size_t lo = t * per, hi = std::min(n, lo + per);
        if (lo >= hi) break;
        pool.emplace_back([&, t, lo, hi] {
            try {
                fn(t, lo, hi);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace apack
