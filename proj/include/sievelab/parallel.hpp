#pragma once

#include <cstddef>
#include <functional>

namespace sievelab {

/// Worker count: hardware concurrency, capped by SIEVELAB_THREADS when set.
[[nodiscard]] unsigned worker_count();

/// Runs task(i) for every i in [0, count). Tasks are claimed dynamically, so a
/// task must depend only on its index; callers combine per-index results in
/// index order afterwards. The first exception thrown by a task is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& task);

}  // namespace sievelab
