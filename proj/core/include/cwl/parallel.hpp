#pragma once

#include <cstddef>
#include <functional>

namespace cwl {

// Worker cap: CWL_THREADS when set (clamped to >= 1), hardware concurrency
// otherwise.
int max_threads();

// Runs fn(i) for every i in [0, n), splitting the index range into contiguous
// chunks over the workers. fn must only write to caller-owned slot i, so the
// result is independent of the thread count. The first exception thrown by
// any worker is rethrown on the calling thread after all workers joined.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace cwl
