#pragma once

#include <cstddef>
#include <functional>

namespace compop {

/// Worker count from COMPOP_THREADS (default: hardware concurrency, at least 1).
int thread_count();

/// Run body(i) for i in [0, n) on thread_count() threads. Work is split into
/// contiguous index blocks; results written by index are deterministic.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace compop
