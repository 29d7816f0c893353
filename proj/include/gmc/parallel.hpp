#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

namespace gmc {

/// Fixed work-unit size. Reductions sum each chunk sequentially and then
/// combine chunk partials in chunk order, so the result does not depend on
/// how many threads took part.
inline constexpr std::size_t kChunkSize = std::size_t{1} << 14;

/// Calls fn(begin, end) for every chunk of [0, n). Chunks are handed out to
/// at most `threads` workers; fn must only write state owned by its chunk.
template <class Fn>
void parallel_chunks(std::size_t n, int threads, Fn&& fn, std::size_t chunk = kChunkSize) {
  const std::size_t chunks = (n + chunk - 1) / chunk;
  const std::size_t workers =
      std::min<std::size_t>(chunks, static_cast<std::size_t>(std::max(threads, 1)));
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) fn(c * chunk, std::min(n, (c + 1) * chunk));
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_lock;
  auto worker = [&] {
    try {
      for (std::size_t c = next++; c < chunks; c = next++) fn(c * chunk, std::min(n, (c + 1) * chunk));
    } catch (...) {
      next = chunks;  // stop handing out work
      std::scoped_lock lock(failure_lock);
      if (!failure) failure = std::current_exception();
    }
  };
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
  }
  if (failure) std::rethrow_exception(failure);
}

/// Deterministic sum of term(i) over [0, n).
template <class Term>
double chunked_sum(std::size_t n, int threads, Term&& term) {
  const std::size_t chunks = (n + kChunkSize - 1) / kChunkSize;
  std::vector<double> partial(chunks, 0.0);
  parallel_chunks(n, threads, [&](std::size_t begin, std::size_t end) {
    double s = 0.0;
    for (std::size_t i = begin; i < end; ++i) s += term(i);
    partial[begin / kChunkSize] = s;
  });
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

inline double chunked_sum(std::span<const double> v, int threads = 1) {
  return chunked_sum(v.size(), threads, [v](std::size_t i) { return v[i]; });
}

}  // namespace gmc
