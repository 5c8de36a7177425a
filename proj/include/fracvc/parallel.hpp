#ifndef FRACVC_PARALLEL_HPP
#define FRACVC_PARALLEL_HPP

#include <cstddef>
#include <exception>
#include <functional>
#include <optional>
#include <vector>

namespace fracvc {

/// Worker count: FRACVC_THREADS if set and positive, else the hardware concurrency.
int thread_count();

/// Runs task(k) for k in [0, count) on the worker pool. The first exception is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& task);

/// Results in index order, independent of the schedule.
template <class F>
auto parallel_map(std::size_t count, F&& f) -> std::vector<decltype(f(std::size_t{}))> {
  using R = decltype(f(std::size_t{}));
  std::vector<std::optional<R>> slots(count);
  parallel_for(count, [&](std::size_t k) { slots[k].emplace(f(k)); });
  std::vector<R> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace fracvc

#endif  // FRACVC_PARALLEL_HPP
