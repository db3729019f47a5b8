#include "trajhedge/lp.hpp"

#include <cmath>
#include <cstddef>
#include <limits>

#include "trajhedge/common.hpp"

namespace trajhedge::lp {

namespace {

// Tableau with the objective row last and the right-hand side in the last
// column. The objective row holds reduced costs c_B B^-1 A_j - c_j.
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : m_(rows), n_(cols), t_((rows + 1) * (cols + 1), 0.0) {}

  double& at(std::size_t r, std::size_t c) { return t_[r * (n_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, n_); }
  double& cost(std::size_t c) { return at(m_, c); }
  double& objective() { return at(m_, n_); }

  void pivot(std::size_t pr, std::size_t pc) {
    const double inv = 1.0 / at(pr, pc);
    for (std::size_t c = 0; c <= n_; ++c) at(pr, c) *= inv;
    at(pr, pc) = 1.0;
    for (std::size_t r = 0; r <= m_; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c <= n_; ++c) at(r, c) -= f * at(pr, c);
      at(r, pc) = 0.0;
    }
  }

  [[nodiscard]] std::size_t rows() const { return m_; }
  [[nodiscard]] std::size_t cols() const { return n_; }

 private:
  std::size_t m_, n_;
  std::vector<double> t_;
};

// Runs simplex iterations on columns [0, allowed). Returns false if unbounded.
bool iterate(Tableau& t, std::vector<std::size_t>& basis, std::size_t allowed, double tol) {
  constexpr int kStallLimit = 50;
  int stall = 0;
  bool bland = false;
  const std::size_t m = t.rows();
  while (true) {
    std::size_t enter = allowed;
    double best = -tol;
    for (std::size_t c = 0; c < allowed; ++c) {
      const double r = t.cost(c);
      if (r < best) {
        enter = c;
        if (bland) break;
        best = r;
      }
    }
    if (enter == allowed) return true;

    std::size_t leave = m;
    double ratio = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < m; ++r) {
      const double a = t.at(r, enter);
      if (a <= tol) continue;
      const double q = t.rhs(r) / a;
      if (q < ratio - tol || (q <= ratio + tol && leave < m && basis[r] < basis[leave])) {
        ratio = std::min(ratio, q);
        leave = r;
      }
    }
    if (leave == m) return false;

    const double before = t.objective();
    t.pivot(leave, enter);
    basis[leave] = enter;
    if (std::abs(t.objective() - before) <= tol) {
      if (++stall > kStallLimit) bland = true;
    } else {
      stall = 0;
    }
  }
}

}  // namespace

Solution solve(const StandardForm& p, double tol) {
  const std::size_t m = p.a.size();
  const std::size_t n = p.c.size();
  if (p.b.size() != m) throw ValidationError("lp: b has wrong length");
  for (const auto& row : p.a) {
    if (row.size() != n) throw ValidationError("lp: ragged constraint matrix");
  }

  Tableau t(m, n + m);
  std::vector<double> sign(m, 1.0);
  std::vector<std::size_t> basis(m);
  for (std::size_t r = 0; r < m; ++r) {
    sign[r] = p.b[r] < 0.0 ? -1.0 : 1.0;
    for (std::size_t c = 0; c < n; ++c) t.at(r, c) = sign[r] * p.a[r][c];
    t.at(r, n + r) = 1.0;
    t.rhs(r) = sign[r] * p.b[r];
    basis[r] = n + r;
  }

  // Phase 1: maximize minus the sum of artificials.
  for (std::size_t c = 0; c < n; ++c) {
    double s = 0.0;
    for (std::size_t r = 0; r < m; ++r) s += t.at(r, c);
    t.cost(c) = -s;
  }
  {
    double s = 0.0;
    for (std::size_t r = 0; r < m; ++r) s += t.rhs(r);
    t.objective() = -s;
  }
  iterate(t, basis, n, tol);
  Solution sol;
  double scale = 1.0;
  for (double b : p.b) scale = std::max(scale, std::abs(b));
  if (t.objective() < -1e-9 * scale) {
    sol.status = Status::Infeasible;
    return sol;
  }
  for (std::size_t r = 0; r < m; ++r) {
    if (basis[r] < n) continue;
    for (std::size_t c = 0; c < n; ++c) {
      if (std::abs(t.at(r, c)) > 1e-9) {
        t.pivot(r, c);
        basis[r] = c;
        break;
      }
    }
  }

  // Phase 2 reduced costs; artificial columns keep zero cost but never enter.
  for (std::size_t c = 0; c <= n + m; ++c) {
    double s = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
      if (basis[r] < n) s += p.c[basis[r]] * (c == n + m ? t.rhs(r) : t.at(r, c));
    }
    if (c == n + m) {
      t.objective() = s;
    } else {
      t.cost(c) = s - (c < n ? p.c[c] : 0.0);
    }
  }
  if (!iterate(t, basis, n, tol)) {
    sol.status = Status::Unbounded;
    return sol;
  }

  sol.status = Status::Optimal;
  sol.objective = t.objective();
  sol.x.assign(n, 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    if (basis[r] < n) sol.x[basis[r]] = t.rhs(r);
  }
  sol.duals.resize(m);
  for (std::size_t r = 0; r < m; ++r) sol.duals[r] = sign[r] * t.cost(n + r);
  return sol;
}

}  // namespace trajhedge::lp
