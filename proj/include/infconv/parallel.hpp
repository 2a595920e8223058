#pragma once

#include <cstddef>
#include <functional>

namespace infconv {

// Worker count: INFCONV_THREADS if set (>= 1), else hardware concurrency.
unsigned worker_count();

// Runs body(i) for i in [0, n). Nested calls run serially on the calling thread.
// Results must be written by index; scheduling never affects output.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace infconv
