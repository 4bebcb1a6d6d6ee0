#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace treerep {

/// Number of workers to use when the caller asks for `requested` (0 = all cores).
inline unsigned resolve_jobs(unsigned requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

/// Calls `work(shard)` for every shard in [0, shards) on up to `jobs` threads.
/// Shards are claimed dynamically; callers write into per-shard slots and
/// reduce in shard order so results never depend on `jobs`. The first
/// exception thrown by a worker is rethrown here.
template <typename Work>
void for_each_shard(std::size_t shards, unsigned jobs, Work&& work) {
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(resolve_jobs(jobs), std::max<std::size_t>(shards, 1)));
    if (workers <= 1) {
        for (std::size_t s = 0; s < shards; ++s) work(s);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            try {
                for (std::size_t s = next++; s < shards; s = next++) work(s);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = shards;
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace treerep
