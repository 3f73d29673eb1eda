#pragma once

#include <cstddef>
#include <functional>

namespace cgabor {

// Worker count used by parallel_for. Values < 1 are clamped to 1.
void set_thread_count(int threads);
int thread_count();

// Calls body(i) for i in [0, n) with a static partition. Each index writes its
// own output slot, so results never depend on the worker count.
void parallel_for(std::ptrdiff_t n, const std::function<void(std::ptrdiff_t)>& body);

}  // namespace cgabor
