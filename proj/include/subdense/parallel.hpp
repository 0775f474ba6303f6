#pragma once

// Fan-out of independent grid evaluations over worker threads.

#include <cstddef>
#include <functional>

namespace subdense {

/// Worker count: SUBDENSE_THREADS if set and positive, else hardware concurrency.
unsigned worker_count();

/// Calls body(i) for i in [0, n) across workers. Exceptions from workers are
/// rethrown (the first one, by index) after all workers have joined.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace subdense
