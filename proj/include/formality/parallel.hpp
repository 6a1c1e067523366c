#pragma once

#include <cstddef>
#include <functional>

namespace formality {

/// Worker count from FORMALITY_THREADS (0 or unset = hardware concurrency).
std::size_t worker_count();

/// Runs body(i) for i in [0, n). Results must be written to per-index slots so
/// that output never depends on scheduling. The exception of the lowest
/// failing index is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace formality
