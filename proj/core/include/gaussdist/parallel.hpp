#pragma once

#include <cstddef>
#include <functional>

namespace gaussdist {

/// Worker count: GAUSSDIST_THREADS if set to a positive integer, otherwise
/// the hardware concurrency (at least 1).
unsigned worker_count();

/// Calls body(i) for i in [0, n) on up to worker_count() threads using
/// contiguous chunks. The first exception thrown by any worker is rethrown
/// after all workers have joined. body must be safe to call concurrently.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace gaussdist
