#pragma once

#include <cstddef>
#include <functional>

namespace conjugax {

/// Worker cap: CONJUGAX_THREADS when set to a positive integer, else the
/// hardware concurrency (at least 1).
[[nodiscard]] std::size_t max_threads();

/// Runs body(i) for i in [0, n).  Work is split into contiguous chunks only
/// when n * cost_per_item reaches a threshold; each index is visited once, so
/// bodies that write disjoint outputs give results identical to a serial loop.
void parallel_for(std::size_t n, std::size_t cost_per_item,
                  const std::function<void(std::size_t)>& body);

}  // namespace conjugax
