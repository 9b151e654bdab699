#include "plankline/dualdensity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <stdexcept>

#include "plankline/parallel.hpp"

namespace plankline {

namespace {

using Pt = std::array<double, 2>;
using Polygon = std::vector<Pt>;

// 8-point Gauss-Legendre on [0, 1].
constexpr std::array<double, 8> kGaussX = {0.0198550717512319, 0.1016667612931866, 0.2372337950418355,
                                           0.4082826787521751, 0.5917173212478249, 0.7627662049581645,
                                           0.8983332387068134, 0.9801449282487681};
constexpr std::array<double, 8> kGaussW = {0.0506142681451881, 0.1111905172266872, 0.1568533229389436,
                                           0.1813418916891810, 0.1813418916891810, 0.1568533229389436,
                                           0.1111905172266872, 0.0506142681451881};

// Composite rule with four panels; psi is smooth, so this is accurate to rounding.
template <class F>
double gauss01(F&& f) {
  constexpr int panels = 4;
  double s = 0;
  for (int p = 0; p < panels; ++p)
    for (std::size_t k = 0; k < kGaussX.size(); ++k) s += kGaussW[k] * f((p + kGaussX[k]) / panels);
  return s / panels;
}

double signed_area(const Polygon& p) {
  double a = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Pt& u = p[i];
    const Pt& v = p[(i + 1) % p.size()];
    a += u[0] * v[1] - v[0] * u[1];
  }
  return a / 2;
}

// Keeps the part where a*s + b*t <= c.
Polygon clip(const Polygon& p, double a, double b, double c) {
  Polygon out;
  const std::size_t k = p.size();
  for (std::size_t i = 0; i < k; ++i) {
    const Pt& u = p[i];
    const Pt& v = p[(i + 1) % k];
    double fu = a * u[0] + b * u[1] - c, fv = a * v[0] + b * v[1] - c;
    if (fu <= 0) out.push_back(u);
    if ((fu < 0 && fv > 0) || (fu > 0 && fv < 0)) {
      double r = fu / (fu - fv);
      out.push_back({u[0] + r * (v[0] - u[0]), u[1] + r * (v[1] - u[1])});
    }
  }
  if (out.size() < 3) out.clear();
  return out;
}

struct HalfPlane {
  double a, b, c;
};

// Inner half-planes of a convex polygon, either orientation.
std::vector<HalfPlane> half_planes(const Polygon& p) {
  const double o = signed_area(p) > 0 ? 1 : -1;
  std::vector<HalfPlane> hs;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Pt& u = p[i];
    const Pt& v = p[(i + 1) % p.size()];
    // Inside: o * cross(v - u, q - u) >= 0.
    double a = o * (v[1] - u[1]), b = -o * (v[0] - u[0]);
    hs.push_back({a, b, a * u[0] + b * u[1]});
  }
  return hs;
}

Polygon intersect(Polygon p, const std::vector<HalfPlane>& hs) {
  for (const auto& h : hs) {
    if (p.empty()) break;
    p = clip(p, h.a, h.b, h.c);
  }
  return p;
}

bool inside(const std::vector<HalfPlane>& hs, double s, double t) {
  for (const auto& h : hs)
    if (h.a * s + h.b * t > h.c + 1e-15) return false;
  return true;
}

Polygon map_points(const Polygon& p, double fs, double ft) {
  Polygon q;
  for (const auto& v : p) q.push_back({fs * v[0], ft * v[1]});
  return q;
}

}  // namespace

void NuParams::validate() const {
  if (!(gamma >= 0 && gamma <= 1)) throw std::invalid_argument("gamma must lie in [0, 1]");
  if (!(epsilon > 0 && epsilon < 1 - std::tan(1.0) / 2)) throw std::invalid_argument("epsilon must lie in (0, 1 - tan(1)/2)");
}

double NuParams::beta() const { return std::atan((1 - epsilon) / 2); }
double NuParams::h() const { return std::tan(gamma) / 2 + epsilon; }
double NuParams::w() const { return 1 / (2 * phi(gamma, *this)); }

double phi(double alpha, const NuParams& params) {
  if (!(std::fabs(alpha) < std::atan(2.0))) throw std::domain_error("phi needs |alpha| < arctan 2");
  const double b = params.beta();
  return std::cos(alpha) * std::cos(b) * (1 / std::cos(alpha + b) + 1 / std::cos(alpha - b));
}

double psi(double t, const NuParams& params) { return 1 - phi(std::atan(2 * t), params) / phi(params.gamma, params); }

namespace {

// psi in the algebraic form 1 - 2/(phi(gamma) (1 - kappa^2 t^2)), kappa = 1 - epsilon.
double psi_fast(double t, double phi_gamma, double kappa) {
  return 1 - 2 / (phi_gamma * (1 - kappa * kappa * t * t));
}

}  // namespace

DualDensity DualDensity::analytic(const NuParams& params) {
  params.validate();
  DualDensity d;
  d.analytic_ = true;
  d.params_ = params;
  const double e = params.epsilon;
  const double height = params.w() / e;
  const Polygon p1 = {{-1, -1}, {-1 + e, -1}, {0, 1}, {-e, 1}};
  for (auto [fs, ft] : {std::pair{1.0, 1.0}, {1.0, -1.0}, {-1.0, -1.0}, {-1.0, 1.0}})
    d.pieces_.push_back({map_points(p1, fs, ft), height, false});
  // psi is positive exactly on |t| < tan(gamma)/2, inside the rectangle's t-range [-h, h].
  const double tau = std::tan(params.gamma) / 2;
  if (tau > 0) {
    const Polygon p5 = {{-(1 + e) / 2, -tau}, {-(1 - e) / 2, -tau}, {-(1 - e) / 2, tau}, {-(1 + e) / 2, tau}};
    d.pieces_.push_back({p5, 1 / e, true});
    d.pieces_.push_back({map_points(p5, -1, -1), 1 / e, true});
  }
  return d;
}

DualDensity DualDensity::discrete(int m, std::vector<double> values) {
  if (m < 1) throw std::invalid_argument("grid size must be positive");
  if (values.size() != static_cast<std::size_t>(m) * m) throw std::invalid_argument("grid needs m*m values");
  DualDensity d;
  d.analytic_ = false;
  d.m_ = m;
  for (double v : values)
    if (!(v >= 0) || !std::isfinite(v)) throw std::invalid_argument("dual density values must be nonnegative");
  d.values_ = std::move(values);
  for (int a = 0; a < m; ++a) {
    double s0 = -1 + 2.0 * a / m, s1 = -1 + 2.0 * (a + 1) / m;
    for (int b = 0; b < m; ++b) {
      double v = d.values_[static_cast<std::size_t>(a) * m + b];
      if (v == 0) continue;
      double t0 = -1 + 2.0 * b / m, t1 = -1 + 2.0 * (b + 1) / m;
      auto rect = [&](double lo, double hi) { d.pieces_.push_back({{{lo, t0}, {hi, t0}, {hi, t1}, {lo, t1}}, v, false}); };
      if (s0 < 0 && s1 > 0) {
        rect(s0, 0);
        rect(0, s1);
      } else {
        rect(s0, s1);
      }
    }
  }
  return d;
}

double DualDensity::operator()(double s, double t) const {
  if (std::fabs(s) > 1 || std::fabs(t) > 1) return 0;
  if (!analytic_) {
    int a = std::min(m_ - 1, static_cast<int>((s + 1) * m_ / 2));
    int b = std::min(m_ - 1, static_cast<int>((t + 1) * m_ / 2));
    return values_[static_cast<std::size_t>(a) * m_ + b];
  }
  const double pg = phi(params_.gamma, params_), kappa = 1 - params_.epsilon;
  double v = 0;
  for (const auto& p : pieces_)
    if (inside(half_planes(p.vertices), s, t)) v += p.uses_psi ? p.value * psi_fast(t, pg, kappa) : p.value;
  return v;
}

namespace {

double piece_integral(const DualDensity& d, const DualDensity::Piece& piece, const Polygon& poly) {
  if (poly.size() < 3) return 0;
  if (!piece.uses_psi) return piece.value * std::fabs(signed_area(poly));
  // Green's theorem: the integral of f(t) over the region is the boundary integral of s f(t) dt.
  const double pg = phi(d.params().gamma, d.params()), kappa = 1 - d.params().epsilon;
  double total = 0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Pt& u = poly[i];
    const Pt& v = poly[(i + 1) % poly.size()];
    double dt = v[1] - u[1];
    if (dt == 0) continue;
    total += dt * gauss01([&](double r) {
      return (u[0] + r * (v[0] - u[0])) * psi_fast(u[1] + r * dt, pg, kappa);
    });
  }
  if (signed_area(poly) < 0) total = -total;
  return piece.value * total;
}

// Integral of the piece density along t = t0 + m s for s in [lo, hi], against ds.
double piece_path_integral(const DualDensity& d, const DualDensity::Piece& piece, double t0, double m, double lo,
                           double hi) {
  for (const auto& h : half_planes(piece.vertices)) {
    // h.a s + h.b (t0 + m s) <= h.c
    double coef = h.a + h.b * m, rhs = h.c - h.b * t0;
    if (std::fabs(coef) < 1e-300) {
      if (rhs < 0) return 0;
      continue;
    }
    if (coef > 0)
      hi = std::min(hi, rhs / coef);
    else
      lo = std::max(lo, rhs / coef);
  }
  if (!(hi > lo)) return 0;
  if (!piece.uses_psi) return piece.value * (hi - lo);
  const double pg = phi(d.params().gamma, d.params()), kappa = 1 - d.params().epsilon;
  return piece.value * (hi - lo) * gauss01([&](double r) { return psi_fast(t0 + m * (lo + r * (hi - lo)), pg, kappa); });
}

// Sparse s-lengths of the path pieces inside each grid cell, keyed by a*m + b.
std::map<int, double> path_cell_lengths(int m, double x0, double y0) {
  std::map<int, double> out;
  auto branch = [&](double lo, double hi, double slope) {
    std::vector<double> cuts = {lo, hi};
    for (int k = 1; k < m; ++k) {
      double g = -1 + 2.0 * k / m;
      if (g > lo && g < hi) cuts.push_back(g);
      if (slope != 0) {
        double s = (g - y0) / slope;
        if (s > lo && s < hi) cuts.push_back(s);
      }
    }
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      double u = cuts[i], v = cuts[i + 1];
      if (!(v > u)) continue;
      double sm = 0.5 * (u + v), tm = y0 + slope * sm;
      int a = std::clamp(static_cast<int>(std::floor((sm + 1) * m / 2)), 0, m - 1);
      int b = std::clamp(static_cast<int>(std::floor((tm + 1) * m / 2)), 0, m - 1);
      out[a * m + b] += v - u;
    }
  };
  branch(-1, 0, x0 + y0);
  branch(0, 1, x0 - y0);
  return out;
}

}  // namespace

double nu_condition(const DualDensity& d, double x0, double y0) {
  if (!d.is_analytic()) {
    double s = 0;
    for (const auto& [cell, len] : path_cell_lengths(d.grid(), x0, y0)) s += d.values()[cell] * len;
    return s;
  }
  double total = 0;
  for (const auto& piece : d.pieces()) {
    if (piece.vertices[0][0] + piece.vertices[2][0] < 0)
      total += piece_path_integral(d, piece, y0, x0 + y0, -1, 0);
    else
      total += piece_path_integral(d, piece, y0, x0 - y0, 0, 1);
  }
  return total;
}

double nu_total_mass(const NuParams& params) {
  params.validate();
  const double pg = phi(params.gamma, params), kappa = 1 - params.epsilon, tau = std::tan(params.gamma) / 2;
  const double psi_integral = 2 * tau - 4 * std::atanh(kappa * tau) / (pg * kappa);
  return 4 / pg + 2 * psi_integral;
}

double nu_total_mass_limit(double gamma) {
  // As epsilon -> 0, tan(beta) -> 1/2 and phi(gamma) -> 2/(1 - tan(gamma)^2/4).
  const double tg = std::tan(gamma);
  const double pg = 2 / (1 - tg * tg / 4);
  return 4 / pg + 2 * tg - 8 / pg * std::atanh(tg / 2);
}

double total_mass(const DualDensity& d) {
  double s = 0;
  for (const auto& p : d.pieces()) s += piece_integral(d, p, p.vertices);
  return s;
}

double integrate_over(const DualDensity& d, const std::vector<std::array<double, 2>>& polygon) {
  double s = 0;
  for (const auto& p : d.pieces()) s += piece_integral(d, p, intersect(polygon, half_planes(p.vertices)));
  return s;
}

double region_coverage(const DualDensity& d, const Board& board, const CellIndex& cell, double safety_scale) {
  const int n = board.n();
  const double x0 = -1 + (2.0 * cell.i - 1) / n, y0 = -1 + (2.0 * cell.j - 1) / n, r = 1.0 / n;
  // Lines piercing the cell: vertical neighbourhoods of radius 1/n of the two condition branches.
  const Polygon left = {{-1, -x0 - r}, {0, y0 - r}, {0, y0 + r}, {-1, -x0 + r}};
  const Polygon right = {{0, y0 - r}, {1, x0 - r}, {1, x0 + r}, {0, y0 + r}};
  return safety_scale * 0.5 * n * (integrate_over(d, left) + integrate_over(d, right));
}

SnakeWeighting snake_weighting_from_nu(const DualDensity& d, const Board& board, double safety_scale) {
  const int n = board.n();
  // Parameter lines of each grid vertex (xv, yv): t = yv + s (xv + yv) for s <= 0,
  // t = yv + s (xv - yv) for s >= 0.
  std::vector<std::pair<double, double>> left, right;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) {
      double xv = board.coordinate_d(i), yv = board.coordinate_d(j);
      left.push_back({xv + yv, yv});
      right.push_back({xv - yv, yv});
    }

  const auto& pieces = d.pieces();
  std::vector<std::vector<std::pair<Snake, double>>> found(pieces.size());
  parallel_chunks(pieces.size(), pieces.size(), [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      const auto& piece = pieces[k];
      const bool neg = piece.vertices[0][0] + piece.vertices[2][0] < 0;
      std::vector<Polygon> faces = {piece.vertices};
      for (const auto& [slope, icpt] : neg ? left : right) {
        // Side function t - slope s - icpt.
        std::vector<Polygon> next;
        for (auto& f : faces) {
          double lo = 1e300, hi = -1e300;
          for (const auto& v : f) {
            double g = v[1] - slope * v[0] - icpt;
            lo = std::min(lo, g);
            hi = std::max(hi, g);
          }
          if (lo >= -1e-15 || hi <= 1e-15) {
            next.push_back(std::move(f));
            continue;
          }
          Polygon below = clip(f, -slope, 1, icpt), above = clip(f, slope, -1, -icpt);
          if (!below.empty()) next.push_back(std::move(below));
          if (!above.empty()) next.push_back(std::move(above));
        }
        faces = std::move(next);
      }
      for (const auto& f : faces) {
        double mass = piece_integral(d, piece, f);
        if (mass <= 0) continue;
        double cs = 0, ct = 0;
        for (const auto& v : f) cs += v[0], ct += v[1];
        cs /= f.size();
        ct /= f.size();
        Snake s = snake_of_line(board, PerturbedLine(dual_line(from_double(cs), from_double(ct))));
        if (!s.empty()) found[k].push_back({std::move(s), mass});
      }
    }
  });

  SnakeWeighting sw;
  sw.n = n;
  sw.safety_scale = safety_scale;
  const double factor = safety_scale * 0.5 * n;
  for (auto& list : found)
    for (auto& [s, mass] : list) sw.rho[s] += factor * mass;
  sw.coverage.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (const auto& [s, r] : sw.rho) {
    sw.value += r;
    for (const auto& c : s.cells) sw.coverage[cell_id(c, n)] += r;
  }
  sw.min_coverage = *std::min_element(sw.coverage.begin(), sw.coverage.end());
  sw.feasible = sw.min_coverage >= 1 - 1e-12;
  return sw;
}

DiscreteDualLpResult discrete_dual_lp(int grid_m, int sample_m, const DiscreteDualLpOptions& opt) {
  if (grid_m < 4 || sample_m < 4) throw std::invalid_argument("grid and sample sizes must be at least 4");
  const int m = grid_m;
  const int k = sample_m * std::max(1, opt.oversample);
  auto mirror = [](int i, int size) { return size - 1 - i; };

  // Variable classes: cells up to s -> -s and t -> -t.
  std::vector<int> var_of(static_cast<std::size_t>(m) * m, -1);
  std::vector<int> var_size;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      if (var_of[a * m + b] >= 0) continue;
      int id = static_cast<int>(var_size.size());
      var_size.push_back(0);
      for (int aa : {a, mirror(a, m)})
        for (int bb : {b, mirror(b, m)})
          if (var_of[aa * m + bb] < 0) var_of[aa * m + bb] = id, ++var_size[id];
    }

  // One condition per sample orbit under x0 -> -x0 and y0 -> -y0.
  std::vector<std::pair<double, double>> points;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      if (i <= mirror(i, k) && j <= mirror(j, k)) points.push_back({-1 + (2.0 * i + 1) / k, -1 + (2.0 * j + 1) / k});

  const std::size_t nv = var_size.size();
  std::vector<std::vector<double>> rows(points.size(), std::vector<double>(nv, 0.0));
  parallel_chunks(points.size(), 64, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p)
      for (const auto& [cell, len] : path_cell_lengths(m, points[p].first, points[p].second))
        rows[p][var_of[cell]] += len;
  });

  // Packing dual: maximize sum y_p subject to sum_p A_pv y_p <= cost_v; the row duals are the density.
  const double cell_area = (2.0 / m) * (2.0 / m);
  LinearProgram lp;
  lp.sense = Sense::maximize;
  lp.objective.assign(points.size(), 1.0);
  for (std::size_t v = 0; v < nv; ++v) {
    std::vector<double> row(points.size());
    for (std::size_t p = 0; p < points.size(); ++p) row[p] = rows[p][v];
    lp.add(std::move(row), Relation::le, var_size[v] * cell_area);
  }
  LpSolution sol = solve_lp(lp, opt.lp);

  DiscreteDualLpResult res;
  res.status = sol.status;
  res.iterations = sol.iterations;
  if (sol.status != LpStatus::optimal) return res;
  res.lp_mass = sol.objective;
  std::vector<double> values(static_cast<std::size_t>(m) * m);
  for (int c = 0; c < m * m; ++c) values[c] = std::max(0.0, sol.duals[var_of[c]]);

  double worst = 1e300;
  for (const auto& row : rows) {
    double s = 0;
    for (std::size_t v = 0; v < nv; ++v) s += row[v] * std::max(0.0, sol.duals[v]);
    worst = std::min(worst, s);
  }
  if (worst > 0 && worst < 1)
    for (auto& x : values) x /= worst;
  res.density = DualDensity::discrete(m, values);
  res.mass = 0;
  for (double x : values) res.mass += x * cell_area;
  // Recheck on every sample point, not just orbit representatives.
  res.min_condition = 1e300;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      res.min_condition = std::min(res.min_condition, nu_condition(res.density, -1 + (2.0 * i + 1) / k, -1 + (2.0 * j + 1) / k));
  return res;
}

std::string format_dual_density_csv(const DualDensity& d) {
  if (d.is_analytic()) throw std::invalid_argument("only discrete dual densities serialize as CSV");
  std::string out = "s_index,t_index,value\n";
  char buf[64];
  const int m = d.grid();
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      std::snprintf(buf, sizeof buf, "%d,%d,%.17g\n", a + 1, b + 1, d.values()[static_cast<std::size_t>(a) * m + b]);
      out += buf;
    }
  return out;
}

DualDensity parse_dual_density_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "s_index,t_index,value") throw std::runtime_error("missing CSV header");
  std::vector<std::tuple<int, int, double>> entries;
  int m = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    int a, b;
    double v;
    char c1, c2;
    std::istringstream ls(line);
    if (!(ls >> a >> c1 >> b >> c2 >> v) || c1 != ',' || c2 != ',' || a < 1 || b < 1)
      throw std::runtime_error("bad CSV line: " + line);
    entries.emplace_back(a, b, v);
    m = std::max({m, a, b});
  }
  if (m == 0 || entries.size() != static_cast<std::size_t>(m) * m) throw std::runtime_error("CSV does not fill a square grid");
  std::vector<double> values(static_cast<std::size_t>(m) * m, -1);
  for (auto [a, b, v] : entries) {
    auto& slot = values[static_cast<std::size_t>(a - 1) * m + (b - 1)];
    if (slot != -1) throw std::runtime_error("duplicate CSV cell");
    slot = v;
  }
  try {
    return DualDensity::discrete(m, std::move(values));
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(e.what());
  }
}

}  // namespace plankline
