#pragma once

#include <cstddef>
#include <functional>

namespace nflab {

/// Worker count: NFLAB_THREADS if set and positive, else hardware concurrency.
std::size_t worker_count();

/// Runs fn(i) for i in [0, count) on up to worker_count() threads. Each index
/// is processed exactly once; callers write results into slot i, so the merged
/// output does not depend on scheduling. The first exception is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace nflab
