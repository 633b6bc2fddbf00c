#pragma once

#include <cstddef>
#include <functional>

namespace chaoslab {

/// Worker count: hardware concurrency capped by CHAOSLAB_THREADS.
unsigned worker_count();

/// Runs body(i) for i in [0, n) over worker_count() threads. Each index is
/// handled by exactly one call; results must be written to disjoint slots.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

} // namespace chaoslab
