#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "plankline/geometry.hpp"
#include "plankline/lp.hpp"

namespace plankline {

/// Parameters of the analytic dual density. Derived: tan(beta) = (1 - epsilon)/2,
/// h = tan(gamma)/2 + epsilon, w = 1/(2 phi(gamma)).
struct NuParams {
  double gamma = 0.746;
  double epsilon = 1e-4;

  /// Throws std::invalid_argument unless gamma in [0,1] and 0 < epsilon < 1 - tan(1)/2.
  void validate() const;
  double beta() const;
  double h() const;
  double w() const;
};

/// phi(alpha) = cos(alpha) cos(beta) (1/cos(alpha + beta) + 1/cos(alpha - beta)).
/// Throws std::domain_error for |alpha| >= arctan 2.
double phi(double alpha, const NuParams& params);

/// psi(t) = 1 - phi(arctan 2t)/phi(gamma).
double psi(double t, const NuParams& params);

/// A nonnegative density on the (s,t) square [-1,1]^2 of line parameters, where
/// (s,t) stands for the line s x + (1 - |s|) y = t.
///
/// Analytic: nu1 = (w/epsilon) on each of the parallelograms P1..P4, plus
/// nu2 = max(psi(t), 0)/epsilon on the rectangles P5, P6. Discrete: an m x m grid
/// of values, constant on each grid cell.
class DualDensity {
 public:
  static DualDensity analytic(const NuParams& params);
  /// values[(a-1)*m + (b-1)] is the value on cell a along s, b along t.
  static DualDensity discrete(int m, std::vector<double> values);

  bool is_analytic() const { return analytic_; }
  const NuParams& params() const { return params_; }
  int grid() const { return m_; }
  const std::vector<double>& values() const { return values_; }

  double operator()(double s, double t) const;

  /// A convex polygon in (s,t) carrying either a constant value or psi(t)/epsilon.
  struct Piece {
    std::vector<std::array<double, 2>> vertices;
    double value = 0;
    bool uses_psi = false;
  };
  /// The support split into pieces, none of which straddles s = 0.
  const std::vector<Piece>& pieces() const { return pieces_; }

 private:
  bool analytic_ = true;
  NuParams params_;
  int m_ = 0;
  std::vector<double> values_;
  std::vector<Piece> pieces_;
};

/// The path integral
///   int_{-1}^{0} nu(s, y0 + s(x0 + y0)) ds + int_{0}^{1} nu(s, y0 + s(x0 - y0)) ds,
/// computed exactly piece by piece.
double nu_condition(const DualDensity& d, double x0, double y0);

/// Exact mass of the analytic density: 4/phi(gamma) + 2 * int psi over [-tau, tau],
/// tau = tan(gamma)/2 being where psi vanishes.
double nu_total_mass(const NuParams& params);
/// 4/phi(gamma) + 2 tan(gamma) - (8/phi(gamma)) artanh(tan(gamma)/2), the epsilon -> 0 limit.
double nu_total_mass_limit(double gamma);
/// Sum of piece integrals; equals nu_total_mass for analytic densities.
double total_mass(const DualDensity& d);

/// Integral of nu over a convex polygon (s,t) contained in one half s <= 0 or s >= 0.
double integrate_over(const DualDensity& d, const std::vector<std::array<double, 2>>& polygon);

struct SnakeWeighting {
  int n = 0;
  std::map<Snake, double> rho;
  /// Coverage per cell, by cell_id.
  std::vector<double> coverage;
  double min_coverage = 0;
  double value = 0;
  bool feasible = false;
  double safety_scale = 1;
};

/// rho(sigma) = safety_scale * (n/2) * integral of nu over the lines whose snake is sigma,
/// found by cutting the support of nu along every line of parameters through a
/// grid vertex. Infeasibility is reported, not thrown.
SnakeWeighting snake_weighting_from_nu(const DualDensity& d, const Board& board, double safety_scale = 1);

/// safety_scale * (n/2) * integral of nu over the region of lines piercing the cell.
double region_coverage(const DualDensity& d, const Board& board, const CellIndex& cell, double safety_scale = 1);

struct DiscreteDualLpOptions {
  /// Sample points per axis inside each board cell of the sample grid.
  int oversample = 1;
  LpOptions lp;
};

struct DiscreteDualLpResult {
  LpStatus status = LpStatus::infeasible;
  long iterations = 0;
  /// LP optimum; the density is raised until every sampled condition is at least 1.
  double lp_mass = 0;
  double mass = 0;
  double min_condition = 0;
  DualDensity density = DualDensity::discrete(1, {0.0});
};

/// Minimum mass of an m x m grid density meeting nu_condition >= 1 at the
/// centres of a sample_m x sample_m grid of board points. Solved over densities
/// symmetric in s and in t, which loses nothing.
DiscreteDualLpResult discrete_dual_lp(int grid_m, int sample_m, const DiscreteDualLpOptions& opt = {});

/// Lines "s_index,t_index,value", 1-based, s major.
std::string format_dual_density_csv(const DualDensity& d);
/// Throws std::runtime_error on malformed input.
DualDensity parse_dual_density_csv(const std::string& text);

}  // namespace plankline
