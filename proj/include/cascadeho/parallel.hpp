#pragma once

#include <cstddef>
#include <functional>

namespace cascadeho {

// Worker count: hardware concurrency, capped by CASCADEHO_THREADS when set.
std::size_t worker_count();

// Runs fn(i) for i in [0, n). Exceptions are rethrown on the caller's thread
// (the first one by index wins).
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace cascadeho
