#pragma once

#include <cstddef>
#include <functional>

namespace fsmix {

/// Number of worker threads to use when the caller asks for 0 ("auto").
std::size_t default_jobs();

/**
 * Calls fn(i) for i in [0, count) on up to `jobs` threads. Tasks are claimed
 * from a shared counter, so callers must write results by index. The first
 * exception thrown by any task is rethrown after all workers stop.
 */
void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)> &fn);

} // namespace fsmix
