#pragma once

#include <cstddef>
#include <functional>

namespace sfd {

/// Number of workers used by parallelFor: the hardware concurrency, replaced by
/// SPHERE_FRACDIFF_THREADS when that variable holds a positive integer.
int workerCount();

/// Forces a worker count for this process (0 restores the default rule).
void setWorkerCount(int n);

/// Calls body(i) for i in [0, n) on up to workerCount() threads. Each index is
/// visited exactly once; callers write results into per-index slots, so the
/// outcome never depends on the schedule. The first exception thrown by any
/// body is rethrown on the calling thread after all workers finish.
void parallelFor(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace sfd
