#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "plankline/certificate.hpp"
#include "plankline/snakes.hpp"

namespace plankline {

struct DualBoundOptions {
  /// Stop once no candidate line has float weight above 1 + tolerance.
  double tolerance = 1e-9;
  int max_rounds = 500;
  /// Most violated snakes added per round.
  std::size_t cuts_per_round = 0;  // 0: 4n
  /// Restrict to weights invariant under the 8 board symmetries. The LP optimum
  /// is attained by such weights, so only the problem size changes.
  bool symmetric = true;
  /// Roundings of the float optimum tried for certification; the best certificate wins.
  /// First best approximations with denominators up to small_denominator, then
  /// each common denominator in turn.
  long small_denominator = 1000;
  std::vector<long> denominators = {1000000, 1000000000, 1000000000000};
  std::function<void(int round, double objective, std::size_t constraints)> progress;
};

struct DualBoundResult {
  BoundCertificate certificate;
  /// Restricted-master optimum after each round; non-increasing.
  std::vector<double> objectives;
  int rounds = 0;
  bool converged = false;
  /// Float optimum of the final restricted master, as weights per cell.
  std::vector<double> float_weights;
};

/// Lower bound on p_n by constraint generation over snakes, exactly certified.
DualBoundResult lp_dual_bound(const Board& board, const DualBoundOptions& options = {});

struct CoverResult {
  int n = 0;
  CoverMode mode = CoverMode::pierce;
  int k = 0;
  bool feasible = false;
  std::vector<PerturbedLine> witness;
  std::uint64_t nodes = 0;
};

struct CoverOptions {
  /// Use the float LP relaxation bound at search depths below this.
  int lp_depth = 2;
  /// Family to search; enumerated (maximal members) when absent.
  std::optional<SnakeFamily> family;
  std::function<void(std::uint64_t nodes)> progress;
};

/// Largest board accepted by cover_search (cells are held in 128-bit sets).
inline constexpr int kMaxCoverBoard = 11;

/// Decides whether k lines cover every cell in the given mode. Exhaustive.
CoverResult cover_search(const Board& board, CoverMode mode, int k, const CoverOptions& options = {});

struct MinCoverResult {
  int value = 0;
  std::vector<PerturbedLine> witness;
  std::vector<CoverResult> steps;
};

class GuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kExactCoverGuard = 7;

/// Exact p_n (pierce) or h_n (hit). Throws GuardError above kExactCoverGuard unless forced.
MinCoverResult exact_min_cover(const Board& board, CoverMode mode, bool force = false, const CoverOptions& options = {});

}  // namespace plankline
