#pragma once

#include <cstddef>
#include <functional>

namespace lqg {

/// Worker count: LG_THREADS when set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
int thread_count();

/// Runs body(index) for index in [0, count). Work items must write to
/// disjoint outputs; results are then independent of the thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)> &body);

} // namespace lqg
