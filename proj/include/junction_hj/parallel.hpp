#pragma once

#include <cstddef>
#include <functional>

namespace junction_hj {

/// Worker count from JUNCTION_HJ_THREADS (unset or 0 = hardware
/// concurrency, at least 1).
unsigned thread_count();

/// Calls body(k) for k in [0, n) across thread_count() workers. The first
/// exception thrown by any call is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace junction_hj
