#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace safe {

// SAFE_THREADS, when set to a positive integer, wins over `requested`.
int resolve_threads(int requested);

// out[i] = fn(in[i]); items are split into contiguous ranges, one per
// thread, so output order never depends on scheduling. The first exception
// thrown by a worker is rethrown.
template <typename In, typename Fn>
auto ordered_map(const std::vector<In>& in, int threads, Fn fn) {
  using Out = decltype(fn(in.front()));
  std::vector<Out> out(in.size());
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), in.size()));
  if (workers == 1) {
    for (std::size_t i = 0; i < in.size(); ++i) out[i] = fn(in[i]);
    return out;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  const std::size_t per = (in.size() + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        const std::size_t end = std::min(in.size(), (w + 1) * per);
        for (std::size_t i = w * per; i < end; ++i) out[i] = fn(in[i]);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace safe
