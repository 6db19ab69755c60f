#pragma once

#include <cstddef>
#include <functional>

namespace diracgap {

// Worker count from DIRAC_GAP_THREADS, falling back to the number of logical cores.
int worker_count();

// Runs fn(i) for i in [0, n) on up to worker_count() threads. Exceptions are
// rethrown on the calling thread (the one with the lowest index wins).
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace diracgap
