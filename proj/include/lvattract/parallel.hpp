#pragma once

#include <cstddef>
#include <functional>

namespace lv {

/// Thread budget for parallel kernels and sweeps. Honors LV_ATTRACT_THREADS
/// when set to a positive integer, otherwise the OpenMP default.
int thread_budget();

/// Runs job(0..count-1) on up to thread_budget() threads. Jobs must not
/// share mutable state; exceptions are rethrown (lowest index first).
void parallel_for_jobs(std::size_t count, const std::function<void(std::size_t)>& job);

}  // namespace lv
