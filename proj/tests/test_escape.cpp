#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "trajhedge/escape.hpp"

using namespace trajhedge;

namespace {

Window real_window(std::vector<double> x1, std::vector<double> x2, double dhat = 0.01) {
  Window w;
  w.x1 = std::move(x1);
  w.x2 = std::move(x2);
  for (std::size_t i = 0; i < w.x1.size(); ++i) {
    w.k1.push_back(to_grid(w.x1[i], dhat));
    w.k2.push_back(to_grid(w.x2[i], dhat));
  }
  return w;
}

Window grid_window(std::vector<std::int64_t> k1, std::vector<std::int64_t> k2) {
  Window w;
  w.k1 = std::move(k1);
  w.k2 = std::move(k2);
  w.x1.assign(w.k1.begin(), w.k1.end());
  w.x2.assign(w.k2.begin(), w.k2.end());
  return w;
}

Window random_walk(std::mt19937_64& rng, int steps, double vol) {
  std::normal_distribution<double> z(0.0, vol);
  std::vector<double> x1{1.5}, x2{3.3};
  for (int i = 0; i < steps; ++i) {
    x1.push_back(x1.back() * std::exp(z(rng)));
    x2.push_back(x2.back() * std::exp(z(rng)));
  }
  return real_window(x1, x2);
}

}  // namespace

TEST_CASE("escape: constant window has no escapes") {
  const auto w = real_window(std::vector<double>(10, 2.0), std::vector<double>(10, 3.0));
  for (const auto& p : {EscapeParams::model_a(0.01, 0.01), EscapeParams::model_b(1e-6)}) {
    const auto t = escape_times(w, p);
    CHECK(t.count() == 0);
    CHECK(t.steps == std::vector<int>{0});
  }
}

TEST_CASE("escape: model B first escape at the 0.11 move") {
  const auto w = real_window({1, 1, 1, 1}, {100, 105, 111, 112});
  const auto t = escape_times(w, EscapeParams::model_b(0.1));
  CHECK(t.steps == std::vector<int>{0, 2});
  CHECK(oracle::escape_steps(w.x1, w.x2, EscapeParams::model_b(0.1)) == t.steps);
}

TEST_CASE("escape: model A absolute branch") {
  const auto w = real_window({1.0, 1.2, 1.6}, {5, 5, 5});
  const auto t = escape_times(w, EscapeParams::model_a(0.5, 10.0));
  CHECK(t.steps == std::vector<int>{0, 2});
}

TEST_CASE("escape: thresholds are inclusive at decimal ties") {
  // 1.1 - 1.0 is 0.10000000000000009 and 1.3 - 1.2 is 0.10000000000000009 or less.
  const auto w = real_window({1.0, 1.1, 1.2, 1.3}, {1, 1, 1, 1});
  CHECK(escape_times(w, EscapeParams::model_a(0.1, 10.0)).count() == 3);
  const auto r = real_window({1, 1, 1}, {100, 101, 102.01});
  CHECK(escape_times(r, EscapeParams::model_b(0.01)).count() == 2);
}

TEST_CASE("escape: model A zero anchor disables the relative branch") {
  const auto w = real_window({1.0, 1.0, 1.6}, {0.0, 5.0, 5.0});
  CHECK(escape_times(w, EscapeParams::model_a(0.5, 0.01)).steps == std::vector<int>{0, 2});
}

TEST_CASE("escape: parameters must be positive") {
  const auto w = real_window({1, 1}, {1, 1});
  CHECK_THROWS_AS((void)escape_times(w, EscapeParams::model_b(0.0)), ValidationError);
  CHECK_THROWS_AS((void)escape_times(w, EscapeParams::model_a(0.1, -1.0)), ValidationError);
}

TEST_CASE("escape: matches the rescanning oracle on random walks") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const auto w = random_walk(rng, 130, 0.004);
    for (const auto& p : {EscapeParams::model_a(0.02, 0.006), EscapeParams::model_b(0.011)}) {
      const auto t = escape_times(w, p);
      CHECK(t.steps == oracle::escape_steps(w.x1, w.x2, p));
      // Minimality: nothing fires strictly between consecutive escapes.
      for (std::size_t i = 1; i < t.steps.size(); ++i) {
        for (int s = t.steps[i - 1] + 1; s < t.steps[i]; ++s) CHECK_FALSE(escapes(w, p, t.steps[i - 1], s));
        CHECK(escapes(w, p, t.steps[i - 1], t.steps[i]));
      }
    }
  }
}

TEST_CASE("escape: raising the threshold can add escapes") {
  // The anchor moves with each escape, so counts are not monotone in delta.
  const auto w = real_window({0.0, 1.0, 1.6, 0.1}, {1, 1, 1, 1});
  CHECK(escape_times(w, EscapeParams::model_a(1.0, 100.0)).count() == 1);
  CHECK(escape_times(w, EscapeParams::model_a(1.5, 100.0)).count() == 2);
}

TEST_CASE("escape: first escape time is monotone in the threshold") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const auto w = random_walk(rng, 130, 0.004);
    int prev = 0;
    for (double d = 0.002; d < 0.05; d += 0.002) {
      const auto t = escape_times(w, EscapeParams::model_b(d));
      const int first = t.count() > 0 ? t.steps[1] : w.steps() + 1;
      CHECK(first >= prev);
      prev = first;
    }
    CHECK(escape_times(w, EscapeParams::model_b(10.0)).count() == 0);
  }
}

TEST_CASE("increments: sentinel for a quiet window") {
  const auto w = grid_window({4, 4, 4}, {7, 7, 7});
  const auto inc = window_increments(w, escape_times(w, EscapeParams::model_b(0.5)));
  REQUIRE(inc.size() == 1);
  CHECK(inc[0] == EmpiricalIncrement{0, 0, 0, 0});
  CHECK(EmpiricalIncrement::one == 1);
}

TEST_CASE("increments: segment variation includes the dip") {
  const auto w = grid_window({100, 99, 103}, {50, 50, 50});
  EscapeTimes t;
  t.steps = {0, 2};
  const auto inc = window_increments(w, t);
  REQUIRE(inc.size() == 1);
  CHECK(inc[0] == EmpiricalIncrement{3, 0, 2, 5});
}

TEST_CASE("increments: one-step escape") {
  const auto w = grid_window({10, 11}, {20, 18});
  const auto inc = window_increments(w, escape_times(w, EscapeParams::model_b(0.05)));
  REQUIRE(inc.size() == 1);
  CHECK(inc[0] == EmpiricalIncrement{1, -2, 1, 3});
}

TEST_CASE("increments: variation dominates the net move") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 200; ++trial) {
    const auto w = random_walk(rng, 130, 0.004);
    const auto t = escape_times(w, EscapeParams::model_b(0.008));
    for (const auto& inc : window_increments(w, t)) {
      if (inc.q >= 1) CHECK(inc.eta >= std::abs(inc.m1) + std::abs(inc.m2));
    }
  }
}

TEST_CASE("empirical set: union semantics") {
  const std::vector<EmpiricalIncrement> a{{1, 0, 1, 1}, {2, 0, 1, 2}, {3, 0, 1, 3}};
  const std::vector<EmpiricalIncrement> b{{0, 1, 1, 1}, {0, 2, 1, 2}, {0, 3, 1, 3}, {0, 4, 1, 4}};
  std::vector<EmpiricalIncrement> all(a);
  all.insert(all.end(), b.begin(), b.end());
  CHECK(EmpiricalSet::from(all).size() == 7);

  const std::vector<EmpiricalIncrement> c{{1, 0, 1, 1}, {2, 0, 1, 2}, {5, 5, 2, 10}};
  std::vector<EmpiricalIncrement> shared(a);
  shared.insert(shared.end(), c.begin(), c.end());
  const auto ne = EmpiricalSet::from(shared);
  CHECK(ne.size() == 4);
  CHECK(ne.counts.at({1, 0, 1, 1}) == 2);
  CHECK(ne.counts.at({3, 0, 1, 3}) == 1);
  CHECK(std::is_sorted(ne.increments.begin(), ne.increments.end()));

  // Equal moves with different (q, eta) stay distinct.
  const std::vector<EmpiricalIncrement> d{{1, 1, 1, 2}, {1, 1, 2, 2}, {1, 1, 2, 4}};
  CHECK(EmpiricalSet::from(d).size() == 3);
  CHECK(EmpiricalSet::from(std::vector<EmpiricalIncrement>{}).increments ==
        std::vector<EmpiricalIncrement>{EmpiricalIncrement::sentinel()});
}

TEST_CASE("empirical set: constant chart gives the sentinel only") {
  DiscountedChart c;
  for (int i = 0; i < 20; ++i) {
    c.timestamps.push_back(3 * i);
    c.x1.push_back(1.5);
    c.x2.push_back(3.3);
  }
  const auto ne = build_empirical_set(c, TimeGrid{3, 4}, EscapeParams::model_b(0.01), {0.01, 0.01});
  CHECK(ne.increments == std::vector<EmpiricalIncrement>{EmpiricalIncrement::sentinel()});
  CHECK(ne.counts.at(EmpiricalIncrement::sentinel()) == 4);
}

TEST_CASE("empirical set: csv round trip") {
  const std::vector<EmpiricalIncrement> v{{1, -2, 1, 3}, {0, 0, 0, 0}, {1, -2, 1, 3}, {-4, 2, 7, 12}};
  const auto ne = EmpiricalSet::from(v);
  std::stringstream buf;
  buf << "# comment\n";
  write_empirical_set(buf, ne);
  CHECK(buf.str().find("m1,m2,one,q,eta,count\n") != std::string::npos);
  const auto back = read_empirical_set(buf);
  CHECK(back.increments == ne.increments);
  CHECK(back.counts == ne.counts);
}

TEST_CASE("hull: documented cases") {
  using P = GridPoint;
  CHECK(hull2d(std::vector<P>{{0, 0}}) == std::vector<P>{{0, 0}});
  CHECK(hull2d(std::vector<P>{{0, 0}, {2, 0}, {1, 0}}) == std::vector<P>{{0, 0}, {2, 0}});
  CHECK(hull2d(std::vector<P>{{0, 0}, {2, 0}, {0, 2}, {1, 1}}) == std::vector<P>{{0, 0}, {2, 0}, {0, 2}});
  CHECK(hull2d(std::vector<P>{{1, 1}, {1, 1}}) == std::vector<P>{{1, 1}});
  CHECK(hull2d(std::vector<P>{{-1, -1}, {1, 1}, {-1, 1}, {1, -1}, {0, 0}}) ==
        std::vector<P>{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}});
}

TEST_CASE("hull: agrees with the vertex-exclusion oracle") {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> coord(-4, 4);
  std::uniform_int_distribution<int> size(1, 12);
  for (int trial = 0; trial < 3000; ++trial) {
    std::vector<GridPoint> pts(static_cast<std::size_t>(size(rng)));
    for (auto& p : pts) p = {coord(rng), coord(rng)};
    const auto h = hull2d(pts);
    const std::set<GridPoint> got(h.begin(), h.end());
    CHECK(got.size() == h.size());
    CHECK(got == oracle::hull_vertices(pts));
    if (h.size() >= 3) {
      for (std::size_t e = 0; e < h.size(); ++e) {
        CHECK(cross(h[e], h[(e + 1) % h.size()], h[(e + 2) % h.size()]) > 0);
      }
      CHECK(h.front() == *std::min_element(pts.begin(), pts.end()));
    }
  }
}
