#pragma once
// Deterministic data-parallel loops. Work is cut into fixed-size blocks whose
// boundaries do not depend on the thread count; per-block partial results are
// merged in block order. Output is therefore identical for 1, 2 or 8 workers
// (bit-identical even for floating-point reductions).

#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace arclab {

inline unsigned clamp_threads(unsigned requested) {
    if (requested == 0) requested = 1;
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    return requested < 4 * hw ? requested : 4 * hw;
}

// Calls body(block_index, begin, end) over [0, total) in fixed blocks and
// returns per-block results merged in index order by fold(acc, block_result).
template <typename R, typename Body, typename Fold>
R parallel_blocks(std::uint64_t total, unsigned threads, R init, Body body, Fold fold) {
    constexpr std::uint64_t kBlock = 1 << 14;
    std::uint64_t nblocks = total == 0 ? 0 : (total + kBlock - 1) / kBlock;
    std::vector<R> partial(static_cast<std::size_t>(nblocks), init);
    threads = clamp_threads(threads);
    if (threads <= 1 || nblocks <= 1) {
        for (std::uint64_t blk = 0; blk < nblocks; ++blk) {
            std::uint64_t lo = blk * kBlock;
            std::uint64_t hi = lo + kBlock < total ? lo + kBlock : total;
            partial[static_cast<std::size_t>(blk)] = body(blk, lo, hi);
        }
    } else {
        std::atomic<std::uint64_t> next{0};
        auto worker = [&] {
            for (;;) {
                std::uint64_t blk = next.fetch_add(1);
                if (blk >= nblocks) return;
                std::uint64_t lo = blk * kBlock;
                std::uint64_t hi = lo + kBlock < total ? lo + kBlock : total;
                partial[static_cast<std::size_t>(blk)] = body(blk, lo, hi);
            }
        };
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    R acc = init;
    for (auto& pr : partial) acc = fold(acc, pr);
    return acc;
}

}  // namespace arclab
