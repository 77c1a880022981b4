#pragma once

#include <cstddef>
#include <functional>

namespace qbl {

// Global worker cap. 0 restores the default (hardware concurrency).
void set_thread_count(int n);
int thread_count();

// Static contiguous partition of [0, n) into thread_count() chunks. fn(begin, end, chunk)
// runs once per chunk; chunk boundaries depend only on n and the thread count, so
// any per-chunk reduction combined in chunk order is reproducible.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t, int)>& fn);

}  // namespace qbl
