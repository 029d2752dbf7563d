#pragma once

#include <functional>

namespace vgt {

// Worker count to use: `requested` if positive, else the hardware concurrency.
int resolve_workers(int requested);

// Runs fn(0..n-1) on up to `workers` threads. Work items must be independent;
// the first exception thrown by any item is rethrown on the calling thread.
void parallel_for(int n, int workers, const std::function<void(int)>& fn);

}  // namespace vgt
