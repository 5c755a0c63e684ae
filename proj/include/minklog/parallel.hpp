#pragma once

#include <cstddef>
#include <functional>

namespace minklog {

// Worker count: MINKLOG_THREADS if set to a positive integer, else hardware concurrency.
int thread_count();

// Calls body(i) for i in [0, count). Iterations must write only to slot i of
// their own output; callers reduce in index order afterwards. Exceptions from
// any iteration are rethrown (the one with the lowest index wins).
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace minklog
