#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace lugsi {

/**
 * Runs body(begin, end) over contiguous chunks of [0, count) on up to `threads`
 * threads. Chunks write disjoint output, so results do not depend on the thread
 * count. The first exception thrown by any chunk is rethrown.
 */
template <typename Body>
void parallel_for(std::size_t count, std::size_t threads, Body &&body) {
    threads = std::max<std::size_t>(1, std::min(threads, count));
    if (threads == 1) {
        if (count > 0) {
            body(std::size_t{ 0 }, count);
        }
        return;
    }
    std::vector<std::thread> workers;
    std::vector<std::exception_ptr> errors(threads);
    const std::size_t chunk = (count + threads - 1) / threads;
    for (std::size_t t = 0; t < threads; ++t) {
        const std::size_t begin = t * chunk;
        const std::size_t end = std::min(count, begin + chunk);
        if (begin >= end) {
            break;
        }
        workers.emplace_back([&, t, begin, end] {
            try {
                body(begin, end);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto &worker : workers) {
        worker.join();
    }
    for (const auto &error : errors) {
        if (error) {
            std::rethrow_exception(error);
        }
    }
}

}  // namespace lugsi
