#pragma once

#include <functional>

namespace pulseinterp {

/// Worker count from PULSEINTERP_THREADS, else the hardware concurrency (at least 1).
int default_thread_count();

/// Runs fn(0..n-1) on up to `threads` workers (0 selects default_thread_count()).
/// Indices are handed out dynamically; if any call throws, the exception from the
/// lowest failing index is rethrown after all workers finish.
void parallel_for(int n, const std::function<void(int)>& fn, int threads = 0);

}  // namespace pulseinterp
