#ifndef GRAPHSURF_PARALLEL_HPP
#define GRAPHSURF_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace graphsurf {

/// Run fn(i) for i in [0, count) on up to `threads` worker threads. Tasks
/// write to disjoint slots, so results never depend on the schedule; the
/// first exception thrown is rethrown on the calling thread.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

/// Thread count resolution: explicit argument if > 0, else GRAPHSURF_THREADS,
/// else hardware concurrency.
int resolve_threads(int requested);

} // namespace graphsurf

#endif
