#include "cgabor/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>

#include <omp.h>

#include "cgabor/error.hpp"

namespace cgabor {

namespace {
std::atomic<int> g_threads{1};
}

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::metric_degenerate: return "metric-degenerate";
    case ErrorCode::chart_exit: return "chart-exit";
    case ErrorCode::missing_parameter: return "missing-parameter";
    case ErrorCode::reeb_degenerate: return "reeb-degenerate";
    case ErrorCode::budget_exceeded: return "budget-exceeded";
    case ErrorCode::iteration_limit: return "iteration-limit";
    case ErrorCode::window_degenerate: return "window-degenerate";
    case ErrorCode::shape_mismatch: return "shape-mismatch";
    case ErrorCode::degenerate_constraint: return "degenerate-constraint";
    case ErrorCode::invalid_argument: return "invalid-argument";
  }
  return "unknown";
}

void set_thread_count(int threads) { g_threads = std::max(1, threads); }

int thread_count() { return g_threads; }

void parallel_for(std::ptrdiff_t n, const std::function<void(std::ptrdiff_t)>& body) {
  if (n <= 0) return;
  const int k = static_cast<int>(std::min<std::ptrdiff_t>(g_threads, n));
  if (k <= 1) {
    for (std::ptrdiff_t i = 0; i < n; ++i) body(i);
    return;
  }
  // Exceptions cannot cross the OpenMP region; keep the one from the lowest index.
  std::exception_ptr first;
  std::ptrdiff_t first_index = n;
  std::mutex mu;
#pragma omp parallel for schedule(static) num_threads(k)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (...) {
      std::lock_guard<std::mutex> lock(mu);
      if (i < first_index) {
        first_index = i;
        first = std::current_exception();
      }
    }
  }
  if (first) std::rethrow_exception(first);
}

}  // namespace cgabor
