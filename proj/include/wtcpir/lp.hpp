#pragma once

#include <vector>

#include "wtcpir/rational.hpp"

namespace wtcpir {

enum class Relation { LessEqual, Equal, GreaterEqual };

struct LinearConstraint {
  std::vector<Rational> coefficients;
  Relation relation = Relation::LessEqual;
  Rational rhs;
};

// maximize objective . x subject to the constraints and x >= 0.
struct LpProblem {
  std::vector<Rational> objective;
  std::vector<LinearConstraint> constraints;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  Rational value;
  std::vector<Rational> x;
};

// Exact two-phase simplex on a dictionary with Bland's rule, so it terminates
// on degenerate problems.
LpSolution maximize(const LpProblem& problem);

}  // namespace wtcpir
