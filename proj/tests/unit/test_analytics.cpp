#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "gmc/analytics.hpp"

using namespace gmc;
using doctest::Approx;

namespace {

std::vector<NodeIndex> identity(std::size_t n) {
  std::vector<NodeIndex> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

std::vector<NodeIndex> shuffled(std::size_t n, std::mt19937_64& rng) {
  auto v = identity(n);
  std::shuffle(v.begin(), v.end(), rng);
  return v;
}

}  // namespace

TEST_CASE("log bins") {
  const LogBins bins(1000, 3);
  CHECK(bins.edges().front() == 1.0);
  CHECK(bins.edges().back() == Approx(1000.0));
  CHECK(bins.bin(1) == 0);
  CHECK(bins.bin(9) == 0);
  CHECK(bins.bin(10) == 1);
  CHECK(bins.bin(999) == 2);
  CHECK(bins.bin(1000) == 2);
  CHECK_THROWS(bins.bin(0));
  CHECK_THROWS(bins.bin(1001));
  const LogBins one(1, 5);
  CHECK(one.bin(1) == 0);
}

TEST_CASE("density grid of a single user") {
  const std::vector<NodeIndex> idx{0};
  const auto grid = density_grid(idx, idx, 4);
  CHECK(grid.count(0, 0) == 1);
  CHECK(std::accumulate(grid.counts.begin(), grid.counts.end(), std::uint64_t{0}) == 1);
}

TEST_CASE("diagonal users fill only the diagonal band") {
  const auto idx = identity(5000);
  const auto grid = density_grid(idx, idx, 50);
  for (std::size_t r = 0; r < 50; ++r)
    for (std::size_t c = 0; c < 50; ++c)
      if (r != c) CHECK(grid.count(r, c) == 0);
  CHECK(grid.count(49, 49) > 0);
}

TEST_CASE("density grid counts every user once") {
  std::mt19937_64 rng(2);
  const std::size_t n = 10000;
  const auto k = shuffled(n, rng), ks = shuffled(n, rng);
  const auto grid = density_grid(k, ks, 200);
  CHECK(std::accumulate(grid.counts.begin(), grid.counts.end(), std::uint64_t{0}) == n);
  // brute-force recount of a corner cell
  const LogBins bins(n, 200);
  std::vector<std::size_t> kpos(n), kspos(n);
  for (std::size_t i = 0; i < n; ++i) kpos[k[i]] = i + 1, kspos[ks[i]] = i + 1;
  std::uint64_t last = 0;
  for (std::size_t u = 0; u < n; ++u) last += bins.bin(kspos[u]) == 199 && bins.bin(kpos[u]) == 199;
  CHECK(grid.count(199, 199) == last);
  CHECK(grid.value(199, 199) == static_cast<double>(last));
  CHECK_THROWS(density_grid(k, std::vector<NodeIndex>(n - 1), 10));
}

TEST_CASE("crisis map extremes and balance") {
  std::mt19937_64 rng(4);
  const std::size_t n = 2000;
  const auto k = shuffled(n, rng), ks = shuffled(n, rng);
  const auto all = crisis_map(k, ks, std::vector<std::uint8_t>(n, 1), 20);
  const auto none = crisis_map(k, ks, std::vector<std::uint8_t>(n, 0), 20);
  for (std::size_t c = 0; c < all.values.size(); ++c) {
    if (all.counts[c] == 0) {
      CHECK(std::isnan(all.values[c]));
      CHECK(std::isnan(none.values[c]));
    } else {
      CHECK(all.values[c] == 1.0);
      CHECK(none.values[c] == -1.0);
    }
  }

  // two users per cell, one bankrupt
  const std::vector<NodeIndex> kk{0, 1}, kks{0, 1};
  const auto half = crisis_map(kk, kks, std::vector<std::uint8_t>{1, 0}, 1);
  CHECK(half.value(0, 0) == 0.0);

  std::vector<std::uint8_t> random_mask(n);
  for (auto& b : random_mask) b = rng() % 3 == 0;
  const auto mixed = crisis_map(k, ks, random_mask, 20);
  for (double v : mixed.values)
    if (!std::isnan(v)) CHECK((v >= -1.0 && v <= 1.0));
}

TEST_CASE("integrated fraction") {
  const std::size_t n = 100;
  const auto idx = identity(n);
  const auto all = integrated_fraction(std::vector<std::uint8_t>(n, 1), idx);
  for (std::size_t k = 0; k < n; ++k) CHECK(all[k] == static_cast<double>(k + 1) / n);
  for (double w : integrated_fraction(std::vector<std::uint8_t>(n, 0), idx)) CHECK(w == 0.0);

  std::mt19937_64 rng(6);
  const auto order = shuffled(n, rng);
  std::vector<std::uint8_t> mask(n);
  std::size_t total = 0;
  for (auto& b : mask) total += (b = rng() % 2);
  const auto curve = integrated_fraction(mask, order);
  for (std::size_t k = 1; k <= n; ++k) {
    std::size_t count = 0;
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t i = 0; i < k; ++i)
        if (order[i] == u && mask[u]) ++count;
    CHECK(curve[k - 1] == static_cast<double>(count) / n);
  }
  CHECK(curve.back() == static_cast<double>(total) / n);
}

TEST_CASE("power-law fits") {
  SUBCASE("exact linear law") {
    const double n = 5.94557e6;
    std::vector<double> k, w;
    for (double x = 11; x < 1e5; x *= 1.3) {
      k.push_back(std::floor(x));
      w.push_back(std::floor(x) / n);
    }
    const auto f = powerlaw_fit(k, w, 10, 1e5);
    CHECK(std::abs(f.beta - 1.0) < 1e-9);
    CHECK(std::abs(f.mu / n - 1.0) < 1e-6);
    CHECK(f.stderr_beta < 1e-9);
  }
  SUBCASE("beta 0.9") {
    std::vector<double> k, w;
    for (int i = 0; i < 100; ++i) {
      k.push_back(std::pow(10.0, 5.0 * i / 99));
      w.push_back(2e-3 * std::pow(k.back(), 0.9));
    }
    const auto f = powerlaw_fit(k, w, 1, 1e5);
    CHECK(f.points == 100);
    CHECK(std::abs(f.beta - 0.9) < 1e-6);
    CHECK(std::abs(f.mu - 500.0) < 1e-6 * 500.0);
  }
  SUBCASE("curve overload uses K = position") {
    std::vector<double> curve(1000);
    for (std::size_t i = 0; i < curve.size(); ++i) curve[i] = static_cast<double>(i + 1) / 1000.0;
    const auto f = powerlaw_fit(curve, 10, 100);
    CHECK(f.points == 91);
    CHECK(f.beta == Approx(1.0).epsilon(1e-12));
    CHECK(f.mu == Approx(1000.0).epsilon(1e-10));
  }
  SUBCASE("degenerate input") {
    CHECK_THROWS(powerlaw_fit(std::vector<double>{1, 2}, std::vector<double>{1, 2}, 0, 10));
    CHECK_THROWS(powerlaw_fit(std::vector<double>{1, 2, 3}, std::vector<double>{0, 0, 0}, 0, 10));
    CHECK_THROWS(powerlaw_fit(std::vector<double>{5, 5, 5}, std::vector<double>{1, 2, 3}, 0, 10));
  }
}

TEST_CASE("top-k occurrence") {
  SUBCASE("single slice returns its head") {
    const std::vector<SliceRanking> s{{"Q1", {"a", "b", "c", "d"}}};
    const auto t = topk_occurrence(s, 3, 2);
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0].id == "a");
    CHECK(t.rows[1].id == "b");
    CHECK(*t.rows[1].ranks[0] == 2);
  }
  SUBCASE("permanent leader comes first") {
    const std::vector<SliceRanking> s{{"Q1", {"x", "a", "b"}}, {"Q2", {"x", "b", "c"}}, {"Q3", {"x", "c", "a"}}};
    const auto t = topk_occurrence(s, 3, 5);
    CHECK(t.rows[0].id == "x");
    CHECK(t.rows[0].appearances == 3);
    for (const auto& r : t.rows[0].ranks) CHECK(*r == 1);
  }
  SUBCASE("hand-placed overlaps enumerated") {
    const std::vector<SliceRanking> s{{"A", {"u", "v", "w", "z"}}, {"B", {"v", "z", "u", "y"}}, {"C", {"y", "v", "q", "u"}}};
    const auto t = topk_occurrence(s, 3, 10);
    CHECK(t.labels == std::vector<std::string>{"A", "B", "C"});
    // counts within top 3: v 3, u 2, w 1, z 1, y 1, q 1
    REQUIRE(t.rows.size() == 6);
    CHECK(t.rows[0].id == "v");
    CHECK(t.rows[0].best_rank == 1);
    CHECK(t.rows[1].id == "u");
    CHECK_FALSE(t.rows[1].ranks[2].has_value());
    // ties at one appearance: best rank first, then id
    CHECK(t.rows[2].id == "y");
    CHECK(t.rows[3].id == "z");
    CHECK(t.rows[4].id == "q");
    CHECK(t.rows[5].id == "w");
  }
}
