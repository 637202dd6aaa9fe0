#include "wtcpir/lp.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "wtcpir/errors.hpp"

namespace wtcpir {

namespace {

// Basic variable basis[i] = b[i] - sum_j a[i][j] * x_{nonbasis[j]}.
// Objective z = z0 + sum_j c[j] * x_{nonbasis[j]}.
struct Dictionary {
  std::vector<std::vector<Rational>> a;
  std::vector<Rational> b;
  std::vector<Rational> c;
  Rational z0;
  std::vector<int> basis;
  std::vector<int> nonbasis;

  void pivot(std::size_t row, std::size_t col) {
    const Rational inv = 1 / a[row][col];
    const std::size_t width = nonbasis.size();
    b[row] *= inv;
    for (std::size_t j = 0; j < width; ++j) {
      if (j != col) a[row][j] *= inv;
    }
    a[row][col] = inv;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (i == row || a[i][col] == 0) continue;
      const Rational f = a[i][col];
      b[i] -= f * b[row];
      for (std::size_t j = 0; j < width; ++j) {
        if (j != col && a[row][j] != 0) a[i][j] -= f * a[row][j];
      }
      a[i][col] = -f * inv;
    }
    if (c[col] != 0) {
      const Rational f = c[col];
      z0 += f * b[row];
      for (std::size_t j = 0; j < width; ++j) {
        if (j != col && a[row][j] != 0) c[j] -= f * a[row][j];
      }
      c[col] = -f * inv;
    }
    std::swap(basis[row], nonbasis[col]);
  }

  // Bland's rule. Returns false when unbounded.
  bool optimize() {
    while (true) {
      std::size_t enter = nonbasis.size();
      for (std::size_t j = 0; j < nonbasis.size(); ++j) {
        if (c[j] > 0 && (enter == nonbasis.size() || nonbasis[j] < nonbasis[enter])) enter = j;
      }
      if (enter == nonbasis.size()) return true;
      std::size_t leave = a.size();
      Rational best;
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i][enter] <= 0) continue;
        Rational ratio = b[i] / a[i][enter];
        if (leave == a.size() || ratio < best || (ratio == best && basis[i] < basis[leave])) {
          leave = i;
          best = std::move(ratio);
        }
      }
      if (leave == a.size()) return false;
      pivot(leave, enter);
    }
  }
};

}  // namespace

LpSolution maximize(const LpProblem& problem) {
  const std::size_t n = problem.objective.size();
  // Every constraint becomes one or two rows of the form a . x <= b.
  std::vector<std::vector<Rational>> rows;
  std::vector<Rational> rhs;
  for (const auto& con : problem.constraints) {
    if (con.coefficients.size() != n) {
      throw UsageError("constraint has " + std::to_string(con.coefficients.size()) + " coefficients, expected " +
                       std::to_string(n));
    }
    if (con.relation != Relation::GreaterEqual) {
      rows.push_back(con.coefficients);
      rhs.push_back(con.rhs);
    }
    if (con.relation != Relation::LessEqual) {
      std::vector<Rational> neg(n);
      for (std::size_t j = 0; j < n; ++j) neg[j] = -con.coefficients[j];
      rows.push_back(std::move(neg));
      rhs.push_back(-con.rhs);
    }
  }
  const std::size_t m = rows.size();

  Dictionary d;
  d.a = std::move(rows);
  d.b = std::move(rhs);
  for (std::size_t j = 0; j < n; ++j) d.nonbasis.push_back(static_cast<int>(j));
  for (std::size_t i = 0; i < m; ++i) d.basis.push_back(static_cast<int>(n + i));

  std::size_t worst = m;
  for (std::size_t i = 0; i < m; ++i) {
    if (d.b[i] < 0 && (worst == m || d.b[i] < d.b[worst])) worst = i;
  }

  if (worst != m) {
    // Phase 1 with a single auxiliary variable x_aux: maximize -x_aux subject to
    // a . x - x_aux <= b.
    const int aux = static_cast<int>(n + m);
    for (auto& row : d.a) row.push_back(-1);
    d.nonbasis.push_back(aux);
    d.c.assign(n + 1, 0);
    d.c[n] = -1;
    d.pivot(worst, n);
    d.optimize();
    if (d.z0 < 0) return LpSolution{LpStatus::Infeasible, 0, {}};
    // Drive x_aux out of the basis if it stayed there at level zero.
    for (std::size_t i = 0; i < d.a.size(); ++i) {
      if (d.basis[i] != aux) continue;
      bool moved = false;
      for (std::size_t j = 0; j < d.nonbasis.size() && !moved; ++j) {
        if (d.a[i][j] != 0) {
          d.pivot(i, j);
          moved = true;
        }
      }
      if (!moved) {
        // The row reads x_aux = 0 identically; it carries no constraint.
        d.a.erase(d.a.begin() + static_cast<std::ptrdiff_t>(i));
        d.b.erase(d.b.begin() + static_cast<std::ptrdiff_t>(i));
        d.basis.erase(d.basis.begin() + static_cast<std::ptrdiff_t>(i));
      }
      break;
    }
    if (std::find(d.nonbasis.begin(), d.nonbasis.end(), aux) == d.nonbasis.end()) {
      throw std::logic_error("auxiliary variable left the nonbasic set");
    }
    std::size_t col = 0;
    while (d.nonbasis[col] != aux) ++col;
    for (auto& row : d.a) row.erase(row.begin() + static_cast<std::ptrdiff_t>(col));
    d.nonbasis.erase(d.nonbasis.begin() + static_cast<std::ptrdiff_t>(col));
  }

  // Express the real objective in terms of the current nonbasic variables.
  d.c.assign(n, 0);
  d.z0 = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const int v = d.nonbasis[j];
    if (static_cast<std::size_t>(v) < n) d.c[j] += problem.objective[static_cast<std::size_t>(v)];
  }
  for (std::size_t i = 0; i < d.a.size(); ++i) {
    const int v = d.basis[i];
    if (static_cast<std::size_t>(v) >= n) continue;
    const Rational& coef = problem.objective[static_cast<std::size_t>(v)];
    if (coef == 0) continue;
    d.z0 += coef * d.b[i];
    for (std::size_t j = 0; j < n; ++j) d.c[j] -= coef * d.a[i][j];
  }
  if (!d.optimize()) return LpSolution{LpStatus::Unbounded, 0, {}};

  LpSolution sol;
  sol.status = LpStatus::Optimal;
  sol.value = d.z0;
  sol.x.assign(n, 0);
  for (std::size_t i = 0; i < d.a.size(); ++i) {
    if (static_cast<std::size_t>(d.basis[i]) < n) sol.x[static_cast<std::size_t>(d.basis[i])] = d.b[i];
  }
  return sol;
}

}  // namespace wtcpir
