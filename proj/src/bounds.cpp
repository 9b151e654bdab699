#include "plankline/bounds.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <map>
#include <set>
#include <unordered_set>

#include "plankline/lp.hpp"

namespace plankline {

// ---------------------------------------------------------------------------
// LP_d by constraint generation

namespace {

// Cells grouped into classes that share one LP variable: symmetry orbits, or
// singletons.
struct CellClasses {
  std::vector<int> of_cell;
  std::vector<int> size;
};

CellClasses cell_classes(int n, bool symmetric) {
  CellClasses cc;
  cc.of_cell.assign(static_cast<size_t>(n) * n, -1);
  for (int id = 0; id < n * n; ++id) {
    if (cc.of_cell[id] >= 0) continue;
    const int k = static_cast<int>(cc.size.size());
    cc.size.push_back(0);
    const CellIndex c = cell_from_id(id, n);
    for (Symmetry g : all_symmetries) {
      const int img = cell_id(apply_symmetry(g, c, n), n);
      if (cc.of_cell[img] < 0) {
        cc.of_cell[img] = k;
        ++cc.size[k];
      }
      if (!symmetric) break;
    }
  }
  return cc;
}

Snake canonical_snake(const Snake& s, bool symmetric) {
  if (!symmetric) return s;
  Snake best = s;
  for (Symmetry g : all_symmetries) best = std::min(best, apply_symmetry(g, s));
  return best;
}

LinearProgram restricted_master(int n, const CellClasses& cc, const std::vector<Snake>& active) {
  LinearProgram lp;
  lp.sense = Sense::maximize;
  for (int sz : cc.size) lp.objective.push_back(sz);
  for (const auto& s : active) {
    std::vector<double> row(cc.size.size(), 0.0);
    for (const auto& c : s.cells) row[cc.of_cell[cell_id(c, n)]] += 1.0;
    lp.add(std::move(row), Relation::le, 1.0);
  }
  return lp;
}

// Best approximations with denominator <= max_den when small_denominators is
// set, otherwise nearest multiples of 1 / max_den.
WeightGrid round_weights(int n, const std::vector<double>& w, long max_den, bool small_denominators) {
  WeightGrid g(n);
  for (int id = 0; id < n * n; ++id) {
    if (w[id] <= 0) continue;
    if (small_denominators) {
      g.set(cell_from_id(id, n), rationalize(w[id], max_den));
    } else {
      g.set(cell_from_id(id, n), make_rational(std::lround(w[id] * static_cast<double>(max_den)), max_den));
    }
  }
  return g;
}

// Rounded weights pulled just inside feasibility by a factor with a short
// denominator, instead of the exact (and long) 1 / worst_sum.
WeightGrid feasible_rounding(const Board& board, const std::vector<double>& w, long max_den, bool small) {
  WeightGrid g = round_weights(board.n(), w, max_den, small);
  Rational worst = separation_oracle(board, g).worst_sum;
  if (worst > 1) {
    const Integer scale("1000000000000");
    Rational f(floor(Rational(scale) / worst), scale);
    f.canonicalize();
    g.scale(f);
  }
  return g;
}

}  // namespace

DualBoundResult lp_dual_bound(const Board& board, const DualBoundOptions& options) {
  const int n = board.n();
  const std::size_t cuts = options.cuts_per_round ? options.cuts_per_round : static_cast<std::size_t>(4 * n);
  const CellClasses cc = cell_classes(n, options.symmetric);
  std::vector<Snake> active;
  std::set<Snake> known;
  for (int k = 1; k <= n; ++k) {
    std::vector<CellIndex> col, row;
    for (int r = 1; r <= n; ++r) {
      col.push_back({k, r});
      row.push_back({r, k});
    }
    for (auto* cells : {&col, &row}) {
      Snake s = make_snake(n, *cells);
      if (known.insert(canonical_snake(s, options.symmetric)).second) active.push_back(s);
    }
  }

  DualBoundResult res;
  std::vector<double> w(static_cast<size_t>(n) * n, 0.0);
  for (int round = 1; round <= options.max_rounds; ++round) {
    LpSolution sol = solve_lp(restricted_master(n, cc, active));
    if (sol.status != LpStatus::optimal) break;
    for (int id = 0; id < n * n; ++id) w[id] = std::max(sol.values[cc.of_cell[id]], 0.0);
    res.objectives.push_back(sol.objective);
    res.rounds = round;
    if (options.progress) options.progress(round, sol.objective, active.size());
    auto cuts_found = violated_snakes(board, w, 1.0 + options.tolerance, cuts);
    std::size_t added = 0;
    for (auto& c : cuts_found)
      if (known.insert(canonical_snake(c.snake, options.symmetric)).second) {
        active.push_back(std::move(c.snake));
        ++added;
      }
    if (cuts_found.empty() || added == 0) {
      res.converged = cuts_found.empty();
      break;
    }
  }
  res.float_weights = w;

  // Round to nearby rationals and certify; every candidate is exactly valid and
  // the strictly best one wins, so short representations are preferred on ties.
  bool have = false;
  auto consider = [&](long den, bool small) {
    BoundCertificate cert = certify_dual_weights(board, feasible_rounding(board, w, den, small), "lp_dual_bound");
    if (!have || cert.bound > res.certificate.bound) {
      res.certificate = std::move(cert);
      have = true;
    }
  };
  consider(options.small_denominator, true);
  for (long den : options.denominators) consider(den, false);
  res.certificate.converged = res.converged;
  return res;
}

// ---------------------------------------------------------------------------
// Exhaustive cover search

namespace {

struct Bits {
  std::array<std::uint64_t, 2> w{0, 0};

  void set(int id) { w[id >> 6] |= std::uint64_t{1} << (id & 63); }
  bool test(int id) const { return (w[id >> 6] >> (id & 63)) & 1; }
  int count() const { return std::popcount(w[0]) + std::popcount(w[1]); }
  bool any() const { return (w[0] | w[1]) != 0; }
  Bits operator&(const Bits& o) const { return {{w[0] & o.w[0], w[1] & o.w[1]}}; }
  Bits operator|(const Bits& o) const { return {{w[0] | o.w[0], w[1] | o.w[1]}}; }
  Bits operator~() const { return {{~w[0], ~w[1]}}; }
  bool operator==(const Bits& o) const { return w == o.w; }
  int first() const { return w[0] ? std::countr_zero(w[0]) : 64 + std::countr_zero(w[1]); }
};

struct MemoKey {
  Bits uncovered;
  int remaining;
  bool operator==(const MemoKey& o) const { return remaining == o.remaining && uncovered == o.uncovered; }
};

struct MemoHash {
  std::size_t operator()(const MemoKey& k) const {
    std::uint64_t h = k.uncovered.w[0] * 0x9E3779B97F4A7C15ULL ^ (k.uncovered.w[1] + 0x632BE59BD9B4E019ULL);
    h ^= static_cast<std::uint64_t>(k.remaining) * 0xBF58476D1CE4E5B9ULL;
    return static_cast<std::size_t>(h ^ (h >> 31));
  }
};

class CoverSearch {
 public:
  CoverSearch(const Board& board, const SnakeFamily& fam, const CoverOptions& opt)
      : n_(board.n()), fam_(fam), opt_(opt) {
    const int cells = n_ * n_;
    for (const auto& s : fam_.snakes) {
      Bits b;
      for (const auto& c : s.cells) b.set(cell_id(c, n_));
      bits_.push_back(b);
    }
    containing_.resize(cells);
    for (std::size_t k = 0; k < bits_.size(); ++k)
      for (int id = 0; id < cells; ++id)
        if (bits_[k].test(id)) containing_[id].push_back(static_cast<int>(k));
    for (int id = 0; id < cells; ++id) all_.set(id);
    choose_root();
  }

  bool run(int k, std::vector<int>& chosen) {
    nodes_ = 0;
    memo_.clear();
    chosen.clear();
    if (k < 0) return false;
    if (bits_.empty()) return false;
    // Root: branch over stabilizer representatives of the snakes through root_cell_.
    if (k == 0) return false;
    if (!bound_allows(all_, k, 0)) return false;
    for (int s : root_choices_) {
      chosen.push_back(s);
      if (dfs(all_ & ~bits_[s], k - 1, 1, chosen)) return true;
      chosen.pop_back();
    }
    return false;
  }

  std::uint64_t nodes() const { return nodes_; }

 private:
  void choose_root() {
    std::map<Snake, int> index;
    for (std::size_t k = 0; k < fam_.snakes.size(); ++k) index.emplace(fam_.snakes[k], static_cast<int>(k));
    std::size_t best = SIZE_MAX;
    for (int id = 0; id < n_ * n_; ++id) {
      CellIndex c = cell_from_id(id, n_);
      std::vector<Symmetry> stab;
      for (auto g : all_symmetries)
        if (apply_symmetry(g, c, n_) == c) stab.push_back(g);
      std::vector<int> reps;
      for (int s : containing_[id]) {
        bool canonical = true;
        for (auto g : stab) {
          auto it = index.find(apply_symmetry(g, fam_.snakes[s]));
          // The family is symmetry-closed, so the image is always present.
          if (it != index.end() && it->second < s) {
            canonical = false;
            break;
          }
        }
        if (canonical) reps.push_back(s);
      }
      if (reps.size() < best) {
        best = reps.size();
        root_choices_ = reps;
      }
    }
    std::stable_sort(root_choices_.begin(), root_choices_.end(),
                     [&](int a, int b) { return bits_[a].count() > bits_[b].count(); });
  }

  // Weak duality: any w >= 0 on the uncovered cells gives
  // cover size >= sum(w) / max over snakes of w(snake).
  bool bound_allows(const Bits& uncovered, int remaining, int depth) {
    const int need = uncovered.count();
    int best_gain = 0;
    for (const auto& b : bits_) best_gain = std::max(best_gain, (b & uncovered).count());
    if (best_gain == 0) return false;
    if (need > remaining * best_gain) return false;
    if (depth >= opt_.lp_depth || remaining <= 1) return true;

    std::vector<int> cells;
    for (int id = 0; id < n_ * n_; ++id)
      if (uncovered.test(id)) cells.push_back(id);
    std::unordered_set<MemoKey, MemoHash> rows_seen;
    std::vector<Bits> rows;
    for (const auto& b : bits_) {
      Bits r = b & uncovered;
      if (r.any() && rows_seen.insert({r, 0}).second) rows.push_back(r);
    }
    LinearProgram lp;
    lp.objective.assign(cells.size(), 1.0);
    for (const auto& r : rows) {
      std::vector<double> row(cells.size(), 0.0);
      for (std::size_t k = 0; k < cells.size(); ++k)
        if (r.test(cells[k])) row[k] = 1.0;
      lp.add(std::move(row), Relation::le, 1.0);
    }
    LpSolution sol = solve_lp(lp);
    if (sol.status != LpStatus::optimal) return true;
    double total = 0, worst = 0;
    for (auto& v : sol.values) {
      v = std::max(v, 0.0);
      total += v;
    }
    for (const auto& r : rows) {
      double s = 0;
      for (std::size_t k = 0; k < cells.size(); ++k)
        if (r.test(cells[k])) s += sol.values[k];
      worst = std::max(worst, s);
    }
    if (worst <= 0) return true;
    // Relative margin far above the rounding error of these short sums.
    return total / worst <= remaining * (1 + 1e-9);
  }

  bool dfs(const Bits& uncovered, int remaining, int depth, std::vector<int>& chosen) {
    ++nodes_;
    if (opt_.progress && (nodes_ & 0xFFFFF) == 0) opt_.progress(nodes_);
    if (!uncovered.any()) return true;
    if (remaining == 0) return false;
    MemoKey key{uncovered, remaining};
    if (memo_.count(key)) return false;
    if (!bound_allows(uncovered, remaining, depth)) {
      remember(key);
      return false;
    }
    // Most constrained uncovered cell: fewest snakes through it.
    int cell = -1;
    std::size_t fewest = SIZE_MAX;
    for (int id = 0; id < n_ * n_; ++id)
      if (uncovered.test(id) && containing_[id].size() < fewest) {
        fewest = containing_[id].size();
        cell = id;
      }
    std::vector<std::pair<int, int>> order;
    order.reserve(fewest);
    for (int s : containing_[cell]) order.push_back({-(bits_[s] & uncovered).count(), s});
    std::stable_sort(order.begin(), order.end());
    for (auto [neg_gain, s] : order) {
      (void)neg_gain;
      chosen.push_back(s);
      if (dfs(uncovered & ~bits_[s], remaining - 1, depth + 1, chosen)) return true;
      chosen.pop_back();
    }
    remember(key);
    return false;
  }

  void remember(const MemoKey& key) {
    if (memo_.size() < kMemoCap) memo_.insert(key);
  }

  static constexpr std::size_t kMemoCap = 4'000'000;
  int n_;
  const SnakeFamily& fam_;
  const CoverOptions& opt_;
  std::vector<Bits> bits_;
  std::vector<std::vector<int>> containing_;
  Bits all_;
  std::vector<int> root_choices_;
  std::unordered_set<MemoKey, MemoHash> memo_;
  std::uint64_t nodes_ = 0;
};

SnakeFamily search_family(const Board& board, CoverMode mode, const CoverOptions& options) {
  if (options.family) return *options.family;
  return maximal_members(mode == CoverMode::pierce ? enumerate_snakes(board) : enumerate_hit_sets(board));
}

CoverResult run_search(const Board& board, CoverMode mode, int k, const SnakeFamily& fam, CoverSearch& search) {
  CoverResult res;
  res.n = board.n();
  res.mode = mode;
  res.k = k;
  std::vector<int> chosen;
  res.feasible = search.run(k, chosen);
  res.nodes = search.nodes();
  if (res.feasible) {
    for (int s : chosen) res.witness.push_back(fam.witnesses.at(s));
    // Re-validate from the lines themselves.
    certify_cover(board, mode, res.witness, "cover_search");
  }
  return res;
}

}  // namespace

CoverResult cover_search(const Board& board, CoverMode mode, int k, const CoverOptions& options) {
  if (board.n() > kMaxCoverBoard) throw std::invalid_argument("cover_search supports n <= 11");
  if (k < 0 || k > board.n()) throw std::invalid_argument("k must be in [0, n]");
  SnakeFamily fam = search_family(board, mode, options);
  CoverSearch search(board, fam, options);
  return run_search(board, mode, k, fam, search);
}

MinCoverResult exact_min_cover(const Board& board, CoverMode mode, bool force, const CoverOptions& options) {
  const int n = board.n();
  if (n > kExactCoverGuard && !force)
    throw GuardError("exact_min_cover is limited to n <= " + std::to_string(kExactCoverGuard) +
                     " without force");
  if (n > kMaxCoverBoard) throw std::invalid_argument("cover_search supports n <= 11");
  SnakeFamily fam = search_family(board, mode, options);
  CoverSearch search(board, fam, options);
  std::size_t largest = 1;
  for (const auto& s : fam.snakes) largest = std::max(largest, s.size());
  MinCoverResult out;
  const int cells = n * n;
  for (int k = static_cast<int>((cells + largest - 1) / largest); k <= n; ++k) {
    CoverResult r = run_search(board, mode, k, fam, search);
    out.steps.push_back(r);
    if (r.feasible) {
      out.value = k;
      out.witness = r.witness;
      return out;
    }
  }
  throw std::runtime_error("no cover with at most n lines found");
}

}  // namespace plankline
