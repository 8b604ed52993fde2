#pragma once

#include <cstddef>
#include <functional>

namespace plateau {

// Process-wide worker cap. 1 means run inline on the caller.
void set_thread_count(int n);
int thread_count();

// Static contiguous chunks, so the work assignment never depends on timing.
// Callers write to per-index slots and reduce in index order afterwards.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace plateau
