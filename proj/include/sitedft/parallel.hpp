// Deterministic work distribution. Tasks write into caller-owned,
// index-addressed slots, so the merged result does not depend on the
// number of workers or on scheduling.

#pragma once

#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace sitedft {

// Runs task(i) for every i in [0, count) on up to jobs threads. Blocks
// until all tasks finish. The first exception thrown by a task is
// rethrown in the calling thread after all workers join.
inline void parallel_for(long count, int jobs,
                         const std::function<void(long)>& task) {
  if (count <= 0) return;
  if (jobs > count) jobs = static_cast<int>(count);
  if (jobs <= 1) {
    for (long i = 0; i < count; ++i) task(i);
    return;
  }
  std::mutex error_mutex;
  std::exception_ptr first_error;
  std::vector<std::thread> workers;
  workers.reserve(jobs);
  for (int t = 0; t < jobs; ++t) {
    const long begin = count * t / jobs;
    const long end = count * (t + 1) / jobs;
    workers.emplace_back([&, begin, end] {
      try {
        for (long i = begin; i < end; ++i) task(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (std::thread& worker : workers) worker.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace sitedft
