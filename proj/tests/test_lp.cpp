#include <doctest.h>

#include <cmath>
#include <optional>
#include <random>

#include "trajhedge/lp.hpp"

using namespace trajhedge;

namespace {

// Best basic feasible solution by trying every column subset of size m.
std::optional<double> enumerate_bases(const lp::StandardForm& f) {
  const std::size_t m = f.b.size();
  const std::size_t n = f.c.size();
  std::optional<double> best;
  std::vector<std::size_t> pick(m);
  auto solve_basis = [&]() -> std::optional<std::vector<double>> {
    std::vector<std::vector<double>> a(m, std::vector<double>(m + 1));
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t k = 0; k < m; ++k) a[r][k] = f.a[r][pick[k]];
      a[r][m] = f.b[r];
    }
    for (std::size_t col = 0; col < m; ++col) {
      std::size_t piv = col;
      for (std::size_t r = col; r < m; ++r) {
        if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
      }
      if (std::abs(a[piv][col]) < 1e-12) return std::nullopt;
      std::swap(a[piv], a[col]);
      for (std::size_t r = 0; r < m; ++r) {
        if (r == col) continue;
        const double k = a[r][col] / a[col][col];
        for (std::size_t j = col; j <= m; ++j) a[r][j] -= k * a[col][j];
      }
    }
    std::vector<double> x(m);
    for (std::size_t r = 0; r < m; ++r) x[r] = a[r][m] / a[r][r];
    return x;
  };
  auto rec = [&](auto&& self, std::size_t from, std::size_t depth) -> void {
    if (depth == m) {
      const auto x = solve_basis();
      if (!x) return;
      double obj = 0.0;
      for (std::size_t k = 0; k < m; ++k) {
        if ((*x)[k] < -1e-9) return;
        obj += f.c[pick[k]] * (*x)[k];
      }
      if (!best || obj > *best) best = obj;
      return;
    }
    for (std::size_t j = from; j < n; ++j) {
      pick[depth] = j;
      self(self, j + 1, depth + 1);
    }
  };
  rec(rec, 0, 0);
  return best;
}

void check_certificate(const lp::StandardForm& f, const lp::Solution& s) {
  REQUIRE(s.status == lp::Status::Optimal);
  double by = 0.0;
  for (std::size_t r = 0; r < f.b.size(); ++r) by += s.duals[r] * f.b[r];
  CHECK(by == doctest::Approx(s.objective).epsilon(1e-9));
  for (std::size_t j = 0; j < f.c.size(); ++j) {
    double ya = 0.0;
    for (std::size_t r = 0; r < f.b.size(); ++r) ya += s.duals[r] * f.a[r][j];
    CHECK(ya >= f.c[j] - 1e-9);
    CHECK(s.x[j] >= -1e-12);
  }
  for (std::size_t r = 0; r < f.b.size(); ++r) {
    double ax = 0.0;
    for (std::size_t j = 0; j < f.c.size(); ++j) ax += f.a[r][j] * s.x[j];
    CHECK(ax == doctest::Approx(f.b[r]).epsilon(1e-9));
  }
}

std::size_t rank(std::vector<std::vector<double>> a) {
  std::size_t r = 0;
  for (std::size_t col = 0; col < a.front().size() && r < a.size(); ++col) {
    std::size_t piv = r;
    for (std::size_t i = r; i < a.size(); ++i) {
      if (std::abs(a[i][col]) > std::abs(a[piv][col])) piv = i;
    }
    if (std::abs(a[piv][col]) < 1e-12) continue;
    std::swap(a[piv], a[r]);
    for (std::size_t i = r + 1; i < a.size(); ++i) {
      const double k = a[i][col] / a[r][col];
      for (std::size_t j = col; j < a[i].size(); ++j) a[i][j] -= k * a[r][j];
    }
    ++r;
  }
  return r;
}

}  // namespace

TEST_CASE("lp: small optimum") {
  // max x + 2y, x + y + s = 4, x + 3y + t = 6.
  const lp::StandardForm f{{{1, 1, 1, 0}, {1, 3, 0, 1}}, {4, 6}, {1, 2, 0, 0}};
  const auto s = lp::solve(f);
  CHECK(s.objective == doctest::Approx(5.0));
  CHECK(s.x[0] == doctest::Approx(3.0));
  CHECK(s.x[1] == doctest::Approx(1.0));
  check_certificate(f, s);
}

TEST_CASE("lp: infeasible and unbounded") {
  CHECK(lp::solve({{{1, 1}}, {-1}, {1, 0}}).status == lp::Status::Infeasible);
  CHECK(lp::solve({{{1, -1}}, {1}, {1, 0}}).status == lp::Status::Unbounded);
}

TEST_CASE("lp: negative right-hand side and redundant rows") {
  const lp::StandardForm f{{{-1, -1, 1}, {-2, -2, 2}}, {-2, -4}, {-1, -3, 0}};
  const auto s = lp::solve(f);
  REQUIRE(s.status == lp::Status::Optimal);
  CHECK(s.objective == doctest::Approx(-2.0));
  check_certificate(f, s);
}

TEST_CASE("lp: cycling-prone degenerate program terminates") {
  // A classic degenerate instance on which naive Dantzig pricing cycles.
  const lp::StandardForm f{{{0.25, -60, -0.04, 9, 1, 0, 0},
                            {0.5, -90, -0.02, 3, 0, 1, 0},
                            {0, 0, 1, 0, 0, 0, 1}},
                           {0, 0, 1},
                           {0.75, -150, 0.02, -6, 0, 0, 0}};
  const auto s = lp::solve(f);
  CHECK(s.objective == doctest::Approx(0.05));
  check_certificate(f, s);
}

TEST_CASE("lp: agrees with basis enumeration") {
  std::mt19937_64 rng(113);
  std::uniform_int_distribution<int> coef(-3, 3), rows(1, 3), cols(2, 6);
  int optimal = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const auto m = static_cast<std::size_t>(rows(rng));
    const auto n = static_cast<std::size_t>(cols(rng));
    lp::StandardForm f;
    f.a.assign(m, std::vector<double>(n));
    for (auto& row : f.a) {
      for (auto& v : row) v = coef(rng);
    }
    f.b.resize(m);
    for (auto& v : f.b) v = coef(rng);
    f.c.resize(n);
    for (auto& v : f.c) v = coef(rng);
    // A bounding row keeps the feasible set compact.
    f.a.push_back(std::vector<double>(n, 1.0));
    f.a.back().push_back(1.0);
    for (std::size_t r = 0; r < m; ++r) f.a[r].push_back(0.0);
    f.b.push_back(5.0);
    f.c.push_back(0.0);

    // Basis enumeration needs full row rank.
    if (rank(f.a) < f.a.size()) continue;
    const auto s = lp::solve(f);
    const auto want = enumerate_bases(f);
    if (!want) {
      CHECK(s.status == lp::Status::Infeasible);
      continue;
    }
    REQUIRE(s.status == lp::Status::Optimal);
    CHECK(s.objective == doctest::Approx(*want).epsilon(1e-9));
    check_certificate(f, s);
    ++optimal;
  }
  CHECK(optimal > 200);
}
