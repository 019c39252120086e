#pragma once

#include <cstddef>
#include <functional>

namespace ramulus {

/// Worker count: RAMULUS_THREADS when set to a positive integer, otherwise
/// the hardware concurrency (at least 1).
int thread_count();

/// Calls body(i) for every i in [0, count) on up to thread_count() threads.
/// Each index runs exactly once; results must be written to per-index
/// slots so the outcome does not depend on scheduling. The first exception
/// thrown by any call is rethrown after all workers stop. Calls made from
/// inside a body run serially on the calling worker.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace ramulus
