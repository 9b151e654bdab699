#include "plankline/density.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>
#include <gsl/gsl_min.h>
#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

#include "plankline/parallel.hpp"

namespace plankline {

namespace {

// Gauss-Legendre rule on [-1, 1]; exact for polynomials up to degree 2*size-1.
struct GaussRule {
  std::vector<double> x, w;
};

const GaussRule& gauss_rule(int points) {
  static std::mutex m;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(m);
  auto it = cache.find(points);
  if (it != cache.end()) return it->second;
  GaussRule r;
  gsl_integration_glfixed_table* t = gsl_integration_glfixed_table_alloc(points);
  for (int k = 0; k < points; ++k) {
    double xi, wi;
    gsl_integration_glfixed_point(-1, 1, k, &xi, &wi, t);
    r.x.push_back(xi);
    r.w.push_back(wi);
  }
  gsl_integration_glfixed_table_free(t);
  return cache.emplace(points, std::move(r)).first->second;
}

double ipow(double v, int p) {
  double r = 1;
  for (int k = 0; k < p; ++k) r *= v;
  return r;
}

double clamp1(double v) { return std::clamp(v, -1.0, 1.0); }

// A single monomial factor f(v) = |v|^p or v^p, and its antiderivative.
struct Factor {
  int p;
  bool absolute;
  double value(double v) const { return absolute ? ipow(std::fabs(v), p) : ipow(v, p); }
  double slope(double v) const {
    if (p == 0) return 0;
    double d = p * (absolute ? ipow(std::fabs(v), p - 1) : ipow(v, p - 1));
    return absolute && v < 0 ? -d : d;
  }
  double antiderivative(double v) const {
    double r = ipow(v, p + 1) / (p + 1);
    return absolute && p % 2 == 1 && v < 0 ? -r : r;
  }
  Rational antiderivative(const Rational& v) const {
    Rational r = 1;
    for (int k = 0; k <= p; ++k) r *= v;
    r /= p + 1;
    if (absolute && p % 2 == 1 && v < 0) r = -r;
    return r;
  }
};

// Flat evaluation form; `swap` exchanges the roles of x and y.
struct Poly {
  std::vector<double> c;
  std::vector<Factor> fx, fy;
  int degree = 0;

  Poly(const Density& d, const std::vector<double>& coef, bool swap) {
    for (std::size_t k = 0; k < d.terms().size(); ++k) {
      const auto& t = d.terms()[k];
      bool abs = t.kind == MonomialKind::absolute;
      Factor a{t.px, abs}, b{t.py, abs};
      if (swap) std::swap(a, b);
      c.push_back(coef[k]);
      fx.push_back(a);
      fy.push_back(b);
      degree = std::max(degree, t.px + t.py);
    }
  }
  double operator()(double x, double y) const {
    x = clamp1(x);
    y = clamp1(y);
    double s = 0;
    for (std::size_t k = 0; k < c.size(); ++k) s += c[k] * fx[k].value(x) * fy[k].value(y);
    return s;
  }
};

template <class F>
double integrate_pieces(std::vector<double> breaks, double lo, double hi, int degree, F&& f) {
  if (!(hi > lo)) return 0;
  breaks.push_back(lo);
  breaks.push_back(hi);
  std::sort(breaks.begin(), breaks.end());
  const GaussRule& g = gauss_rule(std::max(4, degree / 2 + 2));
  double total = 0;
  double prev = lo;
  for (double x : breaks) {
    if (x <= prev) continue;
    if (x > hi) x = hi;
    double mid = 0.5 * (prev + x), half = 0.5 * (x - prev);
    double s = 0;
    for (std::size_t k = 0; k < g.x.size(); ++k) s += g.w[k] * f(mid + half * g.x[k]);
    total += half * s;
    prev = x;
    if (x >= hi) break;
  }
  return total;
}

std::vector<DensityTerm> canonical_terms(const std::vector<DensityTerm>& terms) {
  std::map<std::tuple<int, int, int>, Rational> merged;
  for (const auto& t : terms) {
    // With both exponents even the two kinds agree.
    int kind = (t.px % 2 == 0 && t.py % 2 == 0) ? 1 : static_cast<int>(t.kind);
    merged[{t.px, t.py, kind}] += t.coefficient;
  }
  std::vector<DensityTerm> out;
  for (const auto& [key, c] : merged)
    if (c != 0) out.push_back({c, std::get<0>(key), std::get<1>(key), static_cast<MonomialKind>(std::get<2>(key))});
  return out;
}

Symmetry inverse(Symmetry g) {
  if (g == Symmetry::rotate90) return Symmetry::rotate270;
  if (g == Symmetry::rotate270) return Symmetry::rotate90;
  return g;
}

}  // namespace

std::string to_string(MonomialKind k) { return k == MonomialKind::absolute ? "absolute" : "signed"; }

MonomialKind parse_monomial_kind(const std::string& s) {
  if (s == "absolute") return MonomialKind::absolute;
  if (s == "signed") return MonomialKind::signed_power;
  throw std::invalid_argument("unknown monomial kind: " + s);
}

double closed_form_lipschitz_bound(const std::vector<DensityTerm>& terms) {
  double gx = 0, gy = 0;
  for (const auto& t : terms) {
    double c = std::fabs(to_double(t.coefficient));
    gx += c * t.px;
    gy += c * t.py;
  }
  return std::hypot(gx, gy);
}

Density::Density(std::string name, std::vector<DensityTerm> terms, double lipschitz_bound)
    : name_(std::move(name)), terms_(std::move(terms)) {
  for (const auto& t : terms_) {
    if (t.px < 0 || t.py < 0) throw std::invalid_argument("density exponents must be nonnegative");
    coef_.push_back(to_double(t.coefficient));
  }
  lambda_ = lipschitz_bound < 0 ? closed_form_lipschitz_bound(terms_) : lipschitz_bound;

  constexpr int kSamples = 1000;
  double scale = 0;
  for (double c : coef_) scale += std::fabs(c);
  const double tol = 1e-12 * std::max(1.0, scale);
  for (int i = 0; i < kSamples; ++i) {
    double x = -1 + 2.0 * i / (kSamples - 1);
    for (int j = 0; j < kSamples; ++j) {
      double y = -1 + 2.0 * j / (kSamples - 1);
      if ((*this)(x, y) < -tol) throw std::invalid_argument("density is negative at (" + std::to_string(x) + ", " +
                                                            std::to_string(y) + ")");
      auto [gx, gy] = gradient(x, y);
      if (std::hypot(gx, gy) > lambda_ * (1 + 1e-9) + tol)
        throw std::invalid_argument("gradient exceeds the Lipschitz bound " + std::to_string(lambda_));
    }
  }
}

double Density::operator()(double x, double y) const {
  x = clamp1(x);
  y = clamp1(y);
  double s = 0;
  for (std::size_t k = 0; k < terms_.size(); ++k) {
    bool abs = terms_[k].kind == MonomialKind::absolute;
    s += coef_[k] * Factor{terms_[k].px, abs}.value(x) * Factor{terms_[k].py, abs}.value(y);
  }
  return s;
}

std::pair<double, double> Density::gradient(double x, double y) const {
  double gx = 0, gy = 0;
  for (std::size_t k = 0; k < terms_.size(); ++k) {
    bool abs = terms_[k].kind == MonomialKind::absolute;
    Factor fx{terms_[k].px, abs}, fy{terms_[k].py, abs};
    gx += coef_[k] * fx.slope(x) * fy.value(y);
    gy += coef_[k] * fx.value(x) * fy.slope(y);
  }
  return {gx, gy};
}

Density Density::transformed(Symmetry g) const {
  // inverse(g) sends (x, y) to (sx * u, sy * v) with (u, v) = (x, y) or (y, x).
  double px = 1, py = 2;
  apply_symmetry(inverse(g), px, py);
  const bool swap = std::fabs(px) == 2;
  const int sx = px < 0 ? -1 : 1, sy = py < 0 ? -1 : 1;
  std::vector<DensityTerm> out;
  for (auto t : terms_) {
    if (t.kind == MonomialKind::signed_power) {
      if ((sx < 0 && t.px % 2 == 1) != (sy < 0 && t.py % 2 == 1)) t.coefficient = -t.coefficient;
    }
    if (swap) std::swap(t.px, t.py);
    out.push_back(t);
  }
  return Density(name_, std::move(out), lambda_);
}

bool Density::invariant_under(Symmetry g) const {
  return canonical_terms(transformed(g).terms_) == canonical_terms(terms_);
}

bool Density::fully_symmetric() const {
  return std::all_of(all_symmetries.begin(), all_symmetries.end(), [&](Symmetry g) { return invariant_under(g); });
}

Density mu1() {
  Rational q = make_rational(3, 4);
  return Density("mu1", {{q, 2, 0, MonomialKind::signed_power},
                         {q, 0, 2, MonomialKind::signed_power},
                         {-2 * q, 2, 2, MonomialKind::signed_power}});
}

Density mu2() {
  const auto abs = MonomialKind::absolute;
  Rational a = make_rational(3, 10), b = make_rational(43, 100), c = make_rational(-117, 200),
           d = make_rational(-4, 25);
  return Density("mu2", {{a, 1, 0, abs},
                         {a, 0, 1, abs},
                         {b, 3, 0, abs},
                         {b, 0, 3, abs},
                         {c, 3, 1, abs},
                         {c, 1, 3, abs},
                         {d, 2, 2, MonomialKind::signed_power}});
}

Density zero_density() { return Density("zero", {}); }

Density constant_density(const Rational& value) {
  return Density("constant", {{value, 0, 0, MonomialKind::signed_power}});
}

Density builtin_density(const std::string& name) {
  if (name == "mu1") return mu1();
  if (name == "mu2") return mu2();
  throw std::invalid_argument("unknown built-in density: " + name);
}

nlohmann::json to_json(const Density& d) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : d.terms())
    terms.push_back({{"coefficient", to_string(t.coefficient)}, {"px", t.px}, {"py", t.py}, {"kind", to_string(t.kind)}});
  return {{"name", d.name()}, {"terms", terms}, {"lipschitz_bound", d.lipschitz_bound()}};
}

Density density_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("terms") || !j["terms"].is_array())
    throw std::runtime_error("density file needs a terms array");
  std::vector<DensityTerm> terms;
  for (const auto& t : j["terms"]) {
    if (!t.is_object() || !t.contains("coefficient")) throw std::runtime_error("density term needs a coefficient");
    DensityTerm term;
    try {
      const auto& c = t["coefficient"];
      term.coefficient = c.is_string() ? parse_rational(c.get<std::string>()) : parse_rational(c.dump());
      term.kind = parse_monomial_kind(t.value("kind", std::string("absolute")));
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error(std::string("bad density term: ") + e.what());
    }
    for (const char* key : {"px", "py"}) {
      if (t.contains(key) && (!t[key].is_number_integer() || t[key].get<long>() < 0))
        throw std::runtime_error(std::string("density exponent ") + key + " must be a nonnegative integer");
    }
    term.px = t.value("px", 0);
    term.py = t.value("py", 0);
    terms.push_back(term);
  }
  double lambda = -1;
  if (j.contains("lipschitz_bound")) {
    if (!j["lipschitz_bound"].is_number()) throw std::runtime_error("lipschitz_bound must be a number");
    lambda = j["lipschitz_bound"].get<double>();
  }
  return Density(j.value("name", std::string("custom")), std::move(terms), lambda);
}

namespace {

// Integral along y = m x + q, x range clipped to the board, times (1 + |m|).
double chart_line_integral(const Poly& p, double m, double q) {
  double lo = -1, hi = 1;
  if (m == 0) {
    if (std::fabs(q) > 1) return 0;
  } else {
    double x1 = (-1 - q) / m, x2 = (1 - q) / m;
    lo = std::max(lo, std::min(x1, x2));
    hi = std::min(hi, std::max(x1, x2));
  }
  if (!(hi > lo)) return 0;
  std::vector<double> breaks = {0};
  if (m != 0) breaks.push_back(-q / m);
  double v = integrate_pieces(breaks, lo, hi, p.degree, [&](double x) { return p(x, m * x + q); });
  return (1 + std::fabs(m)) * v;
}

struct PolyPair {
  Poly direct, swapped;
  explicit PolyPair(const Density& d, const std::vector<double>& coef) : direct(d, coef, false), swapped(d, coef, true) {}
};

std::vector<double> coefficients_of(const Density& d) {
  std::vector<double> c;
  for (const auto& t : d.terms()) c.push_back(to_double(t.coefficient));
  return c;
}

double line_integral_with(const PolyPair& pp, double a, double b, double c) {
  if (a == 0 && b == 0) throw std::invalid_argument("degenerate line");
  if (std::fabs(b) >= std::fabs(a)) return chart_line_integral(pp.direct, -a / b, c / b);
  return chart_line_integral(pp.swapped, -b / a, c / a);
}

}  // namespace

double line_integral(const Density& d, double a, double b, double c) {
  return line_integral_with(PolyPair(d, coefficients_of(d)), a, b, c);
}

double line_integral(const Density& d, const Line& line) {
  return line_integral(d, to_double(line.a()), to_double(line.b()), to_double(line.c()));
}

DensityArea area_integral(const Density& d) {
  auto full = [](int p, MonomialKind k) -> Rational {
    if (k == MonomialKind::signed_power && p % 2 == 1) return 0;
    return make_rational(2, p + 1);
  };
  Rational s = 0;
  for (const auto& t : d.terms()) s += t.coefficient * full(t.px, t.kind) * full(t.py, t.kind);
  return {s, to_double(s)};
}

std::array<double, 3> SlopeLine::coefficients() const {
  if (transposed) return {1, -a, b};
  return {-a, 1, b};
}

namespace {

struct Domain {
  double a_lo, a_hi;
  bool reduced;
  // b in [b_lo(a), b_hi(a)].
  double b_lo(double a) const { return reduced ? 0 : -1 - std::fabs(a); }
  double b_hi(double a) const { return 1 + std::fabs(a); }
};

struct Candidate {
  double value;
  double a, b;
  bool transposed;
};

double chart_value(const PolyPair& pp, double a, double b, bool transposed) {
  return chart_line_integral(transposed ? pp.swapped : pp.direct, a, b);
}

Candidate refine(const PolyPair& pp, const Domain& dom, const Candidate& start, double step) {
  struct Ctx {
    const PolyPair* pp;
    const Domain* dom;
    bool transposed;
  } ctx{&pp, &dom, start.transposed};
  auto project = [](const Domain& d, double& a, double& b) {
    a = std::clamp(a, d.a_lo, d.a_hi);
    b = std::clamp(b, d.b_lo(a), d.b_hi(a));
  };
  gsl_multimin_function f;
  f.n = 2;
  f.params = &ctx;
  f.f = [](const gsl_vector* v, void* params) {
    auto* c = static_cast<Ctx*>(params);
    double a = gsl_vector_get(v, 0), b = gsl_vector_get(v, 1);
    a = std::clamp(a, c->dom->a_lo, c->dom->a_hi);
    b = std::clamp(b, c->dom->b_lo(a), c->dom->b_hi(a));
    return -chart_value(*c->pp, a, b, c->transposed);
  };
  gsl_vector* x = gsl_vector_alloc(2);
  gsl_vector* ss = gsl_vector_alloc(2);
  gsl_vector_set(x, 0, start.a);
  gsl_vector_set(x, 1, start.b);
  gsl_vector_set_all(ss, step);
  gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 2);
  gsl_multimin_fminimizer_set(s, &f, x, ss);
  for (int it = 0; it < 5000; ++it) {
    if (gsl_multimin_fminimizer_iterate(s)) break;
    if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), 1e-12) == GSL_SUCCESS) break;
  }
  double a = gsl_vector_get(s->x, 0), b = gsl_vector_get(s->x, 1);
  project(dom, a, b);
  Candidate out{chart_value(pp, a, b, start.transposed), a, b, start.transposed};
  gsl_multimin_fminimizer_free(s);
  gsl_vector_free(x);
  gsl_vector_free(ss);
  return out.value >= start.value ? out : start;
}

}  // namespace

LineMaximum max_line_integral(const Density& d, const MaxLineOptions& opt) {
  const PolyPair pp(d, coefficients_of(d));
  const bool reduced = d.fully_symmetric();
  const Domain dom{reduced ? 0.0 : -1.0, 1.0, reduced};
  const int g = std::max(2, opt.grid);
  const int charts = reduced ? 1 : 2;
  const std::size_t total = static_cast<std::size_t>(charts) * g;
  const std::size_t keep = std::max(1, opt.starts);

  auto better = [](const Candidate& x, const Candidate& y) { return x.value > y.value; };
  const std::size_t chunks = 64;
  std::vector<std::vector<Candidate>> best(chunks);
  parallel_chunks(total, chunks, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    auto& top = best[chunk];
    for (std::size_t r = begin; r < end; ++r) {
      bool transposed = r >= static_cast<std::size_t>(g);
      int k = static_cast<int>(r % g);
      double a = dom.a_lo + (dom.a_hi - dom.a_lo) * k / (g - 1);
      double blo = dom.b_lo(a), bhi = dom.b_hi(a);
      for (int l = 0; l < g; ++l) {
        double b = blo + (bhi - blo) * l / (g - 1);
        Candidate c{chart_value(pp, a, b, transposed), a, b, transposed};
        if (top.size() < keep || c.value > top.back().value) {
          top.insert(std::upper_bound(top.begin(), top.end(), c, better), c);
          if (top.size() > keep) top.pop_back();
        }
      }
    }
  });
  std::vector<Candidate> all;
  for (const auto& t : best) all.insert(all.end(), t.begin(), t.end());
  std::stable_sort(all.begin(), all.end(), better);
  if (all.size() > keep) all.resize(keep);

  const double step = 2.0 * (dom.a_hi - dom.a_lo) / (g - 1);
  Candidate winner = all.front();
  for (const auto& c : all) {
    Candidate r = refine(pp, dom, c, step);
    if (r.value > winner.value) winner = r;
  }
  return {winner.value, {winner.a, winner.b, winner.transposed}};
}

LineMaximum max_line_integral_at_slope(const Density& d, double a, double b_lo, double b_hi) {
  const PolyPair pp(d, coefficients_of(d));
  auto f = [&](double b) { return chart_value(pp, a, b, false); };
  constexpr int kGrid = 1000;
  int best = 0;
  double best_v = -1e300;
  for (int l = 0; l <= kGrid; ++l) {
    double v = f(b_lo + (b_hi - b_lo) * l / kGrid);
    if (v > best_v) best_v = v, best = l;
  }
  const double h = (b_hi - b_lo) / kGrid;
  double lo = b_lo + h * std::max(0, best - 1), hi = b_lo + h * std::min(kGrid, best + 1);
  // Golden-section search on the bracketing interval.
  const double r = (std::sqrt(5.0) - 1) / 2;
  double x1 = hi - r * (hi - lo), x2 = lo + r * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  while (hi - lo > 1e-12) {
    if (f1 < f2) {
      lo = x1, x1 = x2, f1 = f2, x2 = lo + r * (hi - lo), f2 = f(x2);
    } else {
      hi = x2, x2 = x1, f2 = f1, x1 = hi - r * (hi - lo), f1 = f(x1);
    }
  }
  double b = 0.5 * (lo + hi), v = f(b);
  if (best_v > v) b = b_lo + h * best, v = best_v;
  return {v, {a, b, false}};
}

WeightGrid weights_from_density(const Density& d, const Board& board) {
  const int n = board.n();
  std::vector<Rational> coords(n + 1);
  for (int k = 0; k <= n; ++k) coords[k] = board.coordinate(k);
  const std::size_t terms = d.terms().size();
  // Per term, the exact integral of each factor over each grid interval.
  std::vector<std::vector<Rational>> ix(terms, std::vector<Rational>(n)), iy(terms, std::vector<Rational>(n));
  for (std::size_t t = 0; t < terms; ++t) {
    const auto& term = d.terms()[t];
    bool abs = term.kind == MonomialKind::absolute;
    Factor fx{term.px, abs}, fy{term.py, abs};
    for (int k = 0; k < n; ++k) {
      ix[t][k] = fx.antiderivative(coords[k + 1]) - fx.antiderivative(coords[k]);
      iy[t][k] = fy.antiderivative(coords[k + 1]) - fy.antiderivative(coords[k]);
    }
  }
  const Rational half_n = make_rational(n, 2);
  WeightGrid w(n);
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      Rational s = 0;
      for (std::size_t t = 0; t < terms; ++t) s += d.terms()[t].coefficient * ix[t][i - 1] * iy[t][j - 1];
      s *= half_n;
      w.set({i, j}, s);
    }
  }
  return w;
}

namespace {

// Integral over x in [-B, B] of the y-integral over [y_c(x) - h, y_c(x) + h] ∩ [-B, B],
// with y_c(x) = m x + q.
double chart_plank_integral(const Poly& p, double m, double q, double h, double box) {
  std::vector<double> breaks = {0, -1, 1};
  if (m != 0) {
    for (double level : {-box, -1.0, 0.0, 1.0, box})
      for (double off : {-h, h}) breaks.push_back((level - off - q) / m);
  }
  auto inner = [&](double x) {
    double lo = std::max(m * x + q - h, -box), hi = std::min(m * x + q + h, box);
    if (!(hi > lo)) return 0.0;
    double cx = clamp1(x);
    double below = std::max(0.0, std::min(hi, -1.0) - lo), above = std::max(0.0, hi - std::max(lo, 1.0));
    double s = 0;
    for (std::size_t k = 0; k < p.c.size(); ++k) {
      const Factor& fy = p.fy[k];
      double part = below * fy.value(-1) + above * fy.value(1) + fy.antiderivative(clamp1(hi)) -
                    fy.antiderivative(clamp1(lo));
      s += p.c[k] * p.fx[k].value(cx) * part;
    }
    return s;
  };
  std::vector<double> inside;
  for (double b : breaks)
    if (b > -box && b < box) inside.push_back(b);
  return integrate_pieces(inside, -box, box, p.degree + 1, inner);
}

}  // namespace

double plank_integral(const Density& d, int n, double a, double b, double c) {
  if (a == 0 && b == 0) throw std::invalid_argument("degenerate line");
  const double box = 1 + 2.0 / n;
  const PolyPair pp(d, coefficients_of(d));
  if (std::fabs(b) >= std::fabs(a)) {
    double m = -a / b;
    return chart_plank_integral(pp.direct, m, c / b, (1 + std::fabs(m)) / n, box);
  }
  double m = -b / a;
  return chart_plank_integral(pp.swapped, m, c / a, (1 + std::fabs(m)) / n, box);
}

ClaimCheck plank_claim_check(const Density& d, const Board& board, const WeightGrid& weights, const Line& line) {
  const int n = board.n();
  ClaimCheck r;
  for (const auto& cell : snake_of_line(board, PerturbedLine(line)).cells) r.lhs += to_double(weights.at(cell));
  r.plank = plank_integral(d, n, to_double(line.a()), to_double(line.b()), to_double(line.c()));
  r.slack = 0.5 * n * r.plank + 34 * d.lipschitz_bound() / n - r.lhs;
  return r;
}

ClaimCheck plank_claim_check(const Density& d, const Board& board, const Line& line) {
  return plank_claim_check(d, board, weights_from_density(d, board), line);
}

}  // namespace plankline
