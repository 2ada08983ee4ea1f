#pragma once

#include <cstddef>
#include <functional>

namespace parley::util {

/// PARLEY_JOBS if set to a positive integer, else the hardware concurrency
/// (at least 1).
int default_jobs();

/// Calls body(i) for i in [0, n) on up to `jobs` threads (0: default_jobs()).
/// Rethrows the exception of the lowest failing index after all workers stop.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& body);

} // namespace parley::util
