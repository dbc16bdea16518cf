// Copyright (c) 2026 hatchslicer contributors.
// hatchslicer is released under the terms of the Apache-2.0 license.
#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace hatch {

// Runs fn(i) for i in [0, count) on up to `threads` workers. Results must be
// written to pre-sized storage so the output order is independent of the
// schedule. The first exception is rethrown on the caller.
inline void parallel_for(size_t count, int threads, const std::function<void(size_t)>& fn)
{
    if (threads <= 1 || count <= 1) {
        for (size_t i = 0; i < count; ++i)
            fn(i);
        return;
    }
    const int workers = std::min<int>(threads, static_cast<int>(count));
    std::atomic<size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (;;) {
                const size_t i = next.fetch_add(1);
                if (i >= count)
                    return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (std::thread& t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

inline int default_thread_count()
{
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

} // namespace hatch
