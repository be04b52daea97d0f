#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace agr {

/// Worker count used by enumeration kernels; results never depend on it.
unsigned thread_count();
void set_thread_count(unsigned n);

/// Runs task(i) for i < n_tasks on thread_count() workers with a static
/// round-robin split, and returns the per-task results in task order.
template <class T>
std::vector<T> parallel_map(std::size_t n_tasks, const std::function<T(std::size_t)>& task) {
  std::vector<T> out(n_tasks);
  const unsigned workers = std::max<unsigned>(1, std::min<std::size_t>(thread_count(), n_tasks));
  if (workers == 1) {
    for (std::size_t i = 0; i < n_tasks; ++i) out[i] = task(i);
    return out;
  }
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n_tasks; i += workers) out[i] = task(i);
    });
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace agr
