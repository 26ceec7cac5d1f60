#pragma once

#include <cstddef>
#include <functional>

namespace evpipe {

// Worker cap: EVPIPE_THREADS when set to a positive integer, otherwise
// the hardware default; never more than jobs.
std::size_t worker_count(std::size_t jobs);

// Runs fn(0..n-1) across worker_count(n) threads. Outputs must depend
// only on the index so the schedule never shows. The lowest-index
// exception, if any, is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace evpipe
