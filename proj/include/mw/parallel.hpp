#pragma once

#include <cstddef>
#include <functional>

namespace mw {

/// Worker count: MW_THREADS when set (>= 1), else the hardware concurrency.
unsigned thread_count();

/// Runs fn(i) for i in [0, n) across up to thread_count() threads. The first
/// exception thrown by any task is rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace mw
