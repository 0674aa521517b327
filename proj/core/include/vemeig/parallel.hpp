#pragma once

#include <functional>

namespace vemeig {

/// Worker cap: VEMEIG_THREADS if set, otherwise the hardware concurrency.
int max_threads();

/// Runs fn(0..count-1) on a small thread pool. Nested calls degrade to the
/// serial loop, so callers never oversubscribe. Results must be written to
/// disjoint slots; ordering of side effects is then irrelevant.
void parallel_for(int count, const std::function<void(int)>& fn);

} // namespace vemeig
