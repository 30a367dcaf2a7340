#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace sdmt {

// Trials are grouped in fixed-size blocks independent of the worker count.
// Each block's partial result lands in its own slot, and callers reduce the
// slots in block order, so floating-point sums are bit-identical for any
// number of workers.
inline constexpr std::uint64_t kTrialBlock = 1u << 14;

// 0 means "one worker per hardware thread".
inline unsigned resolve_workers(unsigned requested) {
    if (requested != 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1u : hw;
}

// Runs fn(begin, end) -> Partial for every block of [0, trials) and returns
// the partials in block order.
template <class Partial, class BlockFn>
std::vector<Partial> run_trial_blocks(std::uint64_t trials, unsigned workers, BlockFn fn) {
    const std::uint64_t blocks = (trials + kTrialBlock - 1) / kTrialBlock;
    std::vector<Partial> partials(blocks);
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        try {
            for (std::uint64_t b = next++; b < blocks; b = next++) {
                const std::uint64_t begin = b * kTrialBlock;
                const std::uint64_t end = std::min(trials, begin + kTrialBlock);
                partials[b] = fn(begin, end);
            }
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = blocks;
        }
    };

    const unsigned n = std::max(1u, std::min<unsigned>(resolve_workers(workers),
                                                       static_cast<unsigned>(std::max<std::uint64_t>(blocks, 1))));
    if (n == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n);
        for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    return partials;
}

}  // namespace sdmt
