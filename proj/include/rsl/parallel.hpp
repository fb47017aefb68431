#pragma once

#include <cstddef>
#include <functional>

namespace rsl {

/// Worker count: RSL_THREADS if set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
std::size_t thread_count();

/// Calls body(i) for i in [0, n) across up to thread_count() threads. The
/// first exception thrown by any call is rethrown after all workers stop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace rsl
