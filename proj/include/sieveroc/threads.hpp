#pragma once

#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace sieveroc {

// Worker count: SIEVE_ROC_THREADS if set (must be a positive integer),
// otherwise the hardware concurrency.
inline int thread_count_from_env() {
  const char* env = std::getenv("SIEVE_ROC_THREADS");
  if (env == nullptr || *env == '\0') {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
  }
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || v < 1 || v > 4096)
    throw std::invalid_argument("SIEVE_ROC_THREADS must be a positive integer, got '" +
                                std::string(env) + "'");
  return static_cast<int>(v);
}

// Runs body(i) for i in [0, n) on `threads` workers with strided assignment.
// Callers get determinism by writing results to per-index slots.  If any
// iteration throws, the exception with the smallest index is rethrown after
// all workers finish.
inline void parallel_for(int n, int threads, const std::function<void(int)>& body) {
  if (n <= 0) return;
  if (threads < 1) threads = 1;
  if (threads > n) threads = n;
  if (threads == 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::mutex mu;
  std::exception_ptr first_error;
  int first_error_index = n;
  auto work = [&](int w) {
    for (int i = w; i < n; i += threads) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (i < first_error_index) {
          first_error_index = i;
          first_error = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int w = 0; w < threads; ++w) pool.emplace_back(work, w);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace sieveroc
