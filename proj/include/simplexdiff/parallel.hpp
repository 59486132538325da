#pragma once

#include <functional>

namespace simplexdiff {

// Runs worker(lo, hi) over [0, n) in contiguous chunks, one per thread.
// The first exception raised in a worker is rethrown in the caller.
void parallel_chunks(int n, int threads, const std::function<void(int, int)>& worker);

}  // namespace simplexdiff
