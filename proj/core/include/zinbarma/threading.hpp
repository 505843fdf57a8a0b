#pragma once

#include <functional>

namespace zinb {

/// Worker cap: min(hardware_concurrency, ZINBARMA_THREADS) when the
/// environment variable is set and positive.
int max_threads();

/// Runs body(i) for i in [0, count) across worker threads. Exceptions are
/// captured and the first one rethrown after all workers join. Results must
/// be written to disjoint slots so the output is independent of scheduling.
void parallel_for(int count, const std::function<void(int)>& body);

}  // namespace zinb
