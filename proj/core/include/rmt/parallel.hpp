#pragma once

#include <cstddef>
#include <functional>

namespace rmt {

// Worker count: RMT_THREADS if set and positive, otherwise hardware concurrency.
int worker_count();

// Runs body(i) for i in [0, count); the first exception thrown by any worker is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace rmt
