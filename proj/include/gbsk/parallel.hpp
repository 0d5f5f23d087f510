#pragma once

#include <cstddef>
#include <functional>

namespace gbsk {

/// Runs fn(i) for i in [0, count) on up to `jobs` threads. Work items must
/// write to disjoint outputs. The first exception thrown by any item is
/// rethrown after all threads join.
void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)> &fn);

/// Worker count from the GBSK_JOBS environment variable, else hardware concurrency.
std::size_t default_jobs();

}  // namespace gbsk
