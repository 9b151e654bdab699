#pragma once

#include <array>
#include <string>
#include <vector>

#include "json.hpp"
#include "plankline/geometry.hpp"
#include "plankline/weights.hpp"

namespace plankline {

/// absolute: coefficient * |x|^px * |y|^py.  signed_power: coefficient * x^px * y^py.
enum class MonomialKind { absolute, signed_power };

std::string to_string(MonomialKind k);
MonomialKind parse_monomial_kind(const std::string& s);

struct DensityTerm {
  Rational coefficient;
  int px = 0;
  int py = 0;
  MonomialKind kind = MonomialKind::absolute;

  bool operator==(const DensityTerm&) const = default;
};

/// A polynomial density on [-1,1]^2 built from monomials in x, y, |x|, |y|.
///
/// Outside the board the density is continued by nearest-point projection,
/// mu(x, y) = mu(clamp(x), clamp(y)); this keeps it nonnegative and keeps the
/// Lipschitz constant.
class Density {
 public:
  /// Validates nonnegativity on a 1000 x 1000 grid and that the sampled gradient
  /// norm stays below the Lipschitz bound. Throws std::invalid_argument otherwise.
  /// A negative `lipschitz_bound` means "use the closed-form bound".
  Density(std::string name, std::vector<DensityTerm> terms, double lipschitz_bound = -1);

  const std::string& name() const { return name_; }
  const std::vector<DensityTerm>& terms() const { return terms_; }
  /// Euclidean Lipschitz constant on [-1,1]^2.
  double lipschitz_bound() const { return lambda_; }

  /// Value at a point; arguments outside the board are clamped.
  double operator()(double x, double y) const;
  /// Analytic gradient at a point of the open board away from the axes.
  std::pair<double, double> gradient(double x, double y) const;

  /// Density composed with the inverse symmetry, so that mu'(g p) = mu(p).
  Density transformed(Symmetry g) const;
  bool invariant_under(Symmetry g) const;
  bool fully_symmetric() const;

 private:
  std::string name_;
  std::vector<DensityTerm> terms_;
  std::vector<double> coef_;
  double lambda_ = 0;
};

/// sqrt((sum |c| px)^2 + (sum |c| py)^2): each monomial has |d/dx| <= px on the board.
double closed_form_lipschitz_bound(const std::vector<DensityTerm>& terms);

/// (3/4)(x^2 + y^2 - 2 x^2 y^2).
Density mu1();
/// 0.3(|x| + |y|) + 0.43(|x|^3 + |y|^3) - 0.585(|x|^3 |y| + |y|^3 |x|) - 0.16 x^2 y^2.
Density mu2();
Density zero_density();
Density constant_density(const Rational& value);
/// "mu1" or "mu2". Throws std::invalid_argument otherwise.
Density builtin_density(const std::string& name);

/// {"name": ..., "terms": [{"coefficient": "p/q" | decimal, "px": int, "py": int,
///  "kind": "absolute" | "signed"}], "lipschitz_bound": optional number}
nlohmann::json to_json(const Density& d);
/// Throws std::runtime_error on malformed input and std::invalid_argument when
/// the density fails validation.
Density density_from_json(const nlohmann::json& j);

/// Integral of mu along line a*x + b*y = c inside [-1,1]^2 against d|x|_1.
/// Zero when the line misses the board.
double line_integral(const Density& d, double a, double b, double c);
double line_integral(const Density& d, const Line& line);

struct DensityArea {
  Rational exact;
  double value = 0;
};
/// Integral over [-1,1]^2, exact.
DensityArea area_integral(const Density& d);

/// A line y = a x + b, or x = a y + b when transposed.
struct SlopeLine {
  double a = 0;
  double b = 0;
  bool transposed = false;

  /// Coefficients (A, B, C) of A x + B y = C.
  std::array<double, 3> coefficients() const;
};

struct LineMaximum {
  double value = 0;
  SlopeLine argmax;
};

struct MaxLineOptions {
  int grid = 2048;
  /// Grid points used as Nelder-Mead starts.
  int starts = 8;
};

/// Maximum of line_integral over all lines. For fully symmetric densities only
/// a in [0,1], b in [0, 1+a] is scanned; otherwise both charts over the whole range.
LineMaximum max_line_integral(const Density& d, const MaxLineOptions& opt = {});

/// Maximum over b in [b_lo, b_hi] of the integral along y = a x + b.
LineMaximum max_line_integral_at_slope(const Density& d, double a, double b_lo, double b_hi);

/// w_ij = (n/2) * integral of mu over cell (i,j), exact.
WeightGrid weights_from_density(const Density& d, const Board& board);

/// Integral of mu (continued outside the board) over the plank
/// {p in [-1-2/n, 1+2/n]^2 : |a x + b y - c| <= (|a| + |b|)/n}.
double plank_integral(const Density& d, int n, double a, double b, double c);

struct ClaimCheck {
  double lhs = 0;
  double plank = 0;
  double slack = 0;
};

/// slack = (n/2) * plank_integral + 34 lambda / n - (sum of w over the snake of `line`).
ClaimCheck plank_claim_check(const Density& d, const Board& board, const WeightGrid& weights,
                             const Line& line);
ClaimCheck plank_claim_check(const Density& d, const Board& board, const Line& line);

}  // namespace plankline
