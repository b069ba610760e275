#pragma once

#include <tbb/blocked_range.h>
#include <tbb/global_control.h>
#include <tbb/info.h>
#include <tbb/parallel_for.h>
#include <tbb/task_arena.h>

#include <algorithm>
#include <cstddef>

namespace fds {

/// Hardware concurrency as seen by the scheduler, at least 1.
inline std::size_t default_workers() { return std::max(1, tbb::info::default_concurrency()); }

/// Calls fn(i) for every i in [0, count) on a work-stealing arena of
/// `workers` threads, one index per task. An exception thrown by a task
/// cancels the rest and is rethrown to the caller.
template <class Fn>
void parallel_for(std::size_t count, std::size_t workers, Fn&& fn)
{
    workers = std::max<std::size_t>(workers, 1);
    if (workers == 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    workers = std::min<std::size_t>(workers, 1024);
    // lets the arena oversubscribe a machine with fewer cores than workers
    tbb::global_control const limit(tbb::global_control::max_allowed_parallelism, workers);
    tbb::task_arena arena(static_cast<int>(workers));
    arena.execute([&] {
        tbb::parallel_for(tbb::blocked_range<std::size_t>(0, count, 1),
                          [&](tbb::blocked_range<std::size_t> const& r) {
                              for (std::size_t i = r.begin(); i != r.end(); ++i) fn(i);
                          },
                          tbb::simple_partitioner{});
    });
}

} // namespace fds
