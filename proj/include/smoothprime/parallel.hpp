#pragma once

// Minimal fork-join helper. Work is split into contiguous index ranges, one
// per worker; callers that need deterministic floating-point results must
// combine per-index outputs in index order (see the Monte Carlo chunking in
// integrate.hpp and the row buffers in the CLI scan command).

#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace smoothprime {

inline unsigned default_jobs() {
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : hc;
}

// Invokes body(i) for every i in [0, n). jobs <= 1 runs inline. The first
// exception thrown by any worker is rethrown on the calling thread.
template <typename Body>
void parallel_for(std::size_t n, unsigned jobs, Body&& body) {
  if (n == 0) return;
  if (jobs <= 1 || n == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(jobs, n);
  std::vector<std::thread> threads;
  threads.reserve(workers);
  std::vector<std::exception_ptr> errors(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    // Contiguous block per worker; block w covers [w*n/W, (w+1)*n/W).
    const std::size_t lo = w * n / workers;
    const std::size_t hi = (w + 1) * n / workers;
    threads.emplace_back([&, w, lo, hi] {
      try {
        for (std::size_t i = lo; i < hi; ++i) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace smoothprime
