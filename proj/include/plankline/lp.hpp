#pragma once

#include <string>
#include <vector>

namespace plankline {

enum class Sense { minimize, maximize };
enum class Relation { le, ge, eq };

struct LpConstraint {
  std::vector<double> coeffs;  // one entry per variable
  Relation relation = Relation::le;
  double rhs = 0;
};

/// Dense linear program. Variables are bounded below by lower_bounds (0 when
/// the vector is empty) and unbounded above.
struct LinearProgram {
  Sense sense = Sense::maximize;
  std::vector<double> objective;
  std::vector<LpConstraint> constraints;
  std::vector<double> lower_bounds;

  std::size_t variables() const { return objective.size(); }
  void add(std::vector<double> coeffs, Relation rel, double rhs) { constraints.push_back({std::move(coeffs), rel, rhs}); }
};

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

std::string to_string(LpStatus s);

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  std::vector<double> values;
  double objective = 0;
  long iterations = 0;
  /// Rate of change of the optimum per unit of each constraint's right-hand side.
  std::vector<double> duals;
};

struct LpOptions {
  long max_iterations = 1'000'000;
  double eps = 1e-9;
  /// Consecutive degenerate pivots before switching to Bland's rule.
  int degeneracy_streak = 50;
};

/// Dense tableau simplex: largest-coefficient entering rule, Bland's rule after a
/// run of degenerate pivots, two phases when the origin is infeasible.
LpSolution solve_lp(const LinearProgram& lp, const LpOptions& options = {});

}  // namespace plankline
