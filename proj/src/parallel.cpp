#include "evpipe/parallel.hpp"

#include <atomic>
#include <charconv>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace evpipe {

std::size_t worker_count(std::size_t jobs) {
    if (jobs <= 1) return jobs;
    std::size_t cap = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("EVPIPE_THREADS")) {
        unsigned long v = 0;
        auto* end = env;
        while (*end) ++end;
        auto [ptr, ec] = std::from_chars(env, end, v);
        if (ec == std::errc{} && ptr == end && v >= 1) {
            cap = v;
        }
    }
    return std::min(jobs, cap);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    const std::size_t workers = worker_count(n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }

    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto body = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();

    for (const auto& err : errors) {
        if (err) std::rethrow_exception(err);
    }
}

} // namespace evpipe
