#pragma once

#include <cstddef>
#include <functional>

namespace lyap {

/// Worker count: hardware concurrency, capped by the LYAP_THREADS env var.
std::size_t workerCount();

/// Runs fn(i) for i in [0, n) on up to workerCount() threads. Each index is
/// executed exactly once; callers write results into slot i so the join
/// order is deterministic. The first exception thrown is rethrown.
void parallelFor(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace lyap
