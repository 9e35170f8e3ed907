#pragma once

#include <cstddef>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace morawetz {

// Thread cap: MORAWETZ_THREADS if set, else hardware concurrency.
inline int max_threads() {
    if (const char* env = std::getenv("MORAWETZ_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

// Splits [0, n) into contiguous chunks, one per worker.
template <class Fn>
void parallel_for(std::size_t n, Fn&& body) {
    int nt = max_threads();
    if (n == 0) return;
    if (nt == 1 || n < 2048) {
        body(std::size_t{0}, n);
        return;
    }
    std::size_t chunks = static_cast<std::size_t>(nt);
    std::vector<std::thread> workers;
    workers.reserve(chunks);
    std::size_t per = (n + chunks - 1) / chunks;
    for (std::size_t c = 0; c < chunks; ++c) {
        std::size_t lo = c * per;
        std::size_t hi = std::min(n, lo + per);
        if (lo >= hi) break;
        workers.emplace_back([&body, lo, hi] { body(lo, hi); });
    }
    for (auto& w : workers) w.join();
}

// Sum of per-chunk partials, combined in chunk order so results are
// deterministic for a fixed thread cap.
template <class Fn>
double parallel_sum(std::size_t n, Fn&& chunk_sum) {
    int nt = max_threads();
    if (n == 0) return 0.0;
    if (nt == 1 || n < 2048) return chunk_sum(std::size_t{0}, n);
    std::size_t chunks = static_cast<std::size_t>(nt);
    std::size_t per = (n + chunks - 1) / chunks;
    std::vector<double> partial(chunks, 0.0);
    std::vector<std::thread> workers;
    for (std::size_t c = 0; c < chunks; ++c) {
        std::size_t lo = c * per;
        std::size_t hi = std::min(n, lo + per);
        if (lo >= hi) break;
        workers.emplace_back([&chunk_sum, &partial, c, lo, hi] { partial[c] = chunk_sum(lo, hi); });
    }
    for (auto& w : workers) w.join();
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

}  // namespace morawetz
