#include <doctest.h>

#include <atomic>
#include <vector>

#include "gmc/parallel.hpp"

using namespace gmc;

TEST_CASE("every index is visited exactly once") {
  for (int threads : {1, 2, 7}) {
    for (std::size_t n : {std::size_t{0}, std::size_t{1}, std::size_t{5}, kChunkSize * 3 + 17}) {
      std::vector<std::atomic<int>> hits(n);
      parallel_chunks(n, threads, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) ++hits[i];
      });
      for (auto& h : hits) CHECK(h.load() == 1);
    }
  }
}

TEST_CASE("chunked sums do not depend on the thread count") {
  std::vector<double> v(kChunkSize * 5 + 3);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 1.0 / static_cast<double>(i + 1) * (i % 2 ? -1.0 : 1.0);
  const double one = chunked_sum(v, 1);
  for (int threads : {2, 3, 16}) CHECK(chunked_sum(v, threads) == one);
  CHECK(chunked_sum(std::span<const double>{}, 4) == 0.0);
}

TEST_CASE("exceptions propagate out of workers") {
  CHECK_THROWS(parallel_chunks(kChunkSize * 4, 3, [](std::size_t b, std::size_t) {
    if (b >= kChunkSize * 2) throw std::runtime_error("boom");
  }));
}
