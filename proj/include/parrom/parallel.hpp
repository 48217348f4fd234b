#ifndef PARROM_PARALLEL_HPP
#define PARROM_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace parrom {

/// Worker count: PARROM_THREADS if set, otherwise the hardware concurrency.
int worker_count();

/// Runs body(i) for i in [0, count). Iterations must be independent; the
/// first exception thrown by any iteration is rethrown on the caller.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace parrom

#endif  // PARROM_PARALLEL_HPP
