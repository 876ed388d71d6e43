#pragma once

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace dbeta {

/// Runs f(0..n−1) on `workers` threads, strided by worker; the first
/// exception (by worker index) is rethrown after all threads join.
template <class F>
void parallel_for(long n, int workers, F&& f) {
  workers = static_cast<int>(std::clamp<long>(workers, 1, std::max(1L, n)));
  if (workers == 1) {
    for (long i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (long i = w; i < n; i += workers) f(i);
        } catch (...) {
          errors[static_cast<std::size_t>(w)] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace dbeta
