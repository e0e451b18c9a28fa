#include "lvattract/parallel.hpp"

#include <omp.h>

#include <cstdlib>
#include <exception>
#include <string>
#include <vector>

namespace lv {

int thread_budget() {
  int threads = omp_get_max_threads();
  if (const char* env = std::getenv("LV_ATTRACT_THREADS")) {
    try {
      const int cap = std::stoi(env);
      if (cap > 0 && cap < threads) threads = cap;
    } catch (const std::exception&) {
      // unparsable value: keep the default
    }
  }
  return threads < 1 ? 1 : threads;
}

void parallel_for_jobs(std::size_t count, const std::function<void(std::size_t)>& job) {
  std::vector<std::exception_ptr> errors(count);
  const auto n = static_cast<long>(count);
#pragma omp parallel for schedule(dynamic, 1) num_threads(thread_budget())
  for (long k = 0; k < n; ++k) {
    try {
      job(static_cast<std::size_t>(k));
    } catch (...) {
      errors[static_cast<std::size_t>(k)] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace lv
