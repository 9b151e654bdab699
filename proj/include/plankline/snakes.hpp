#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "plankline/geometry.hpp"
#include "plankline/weights.hpp"

namespace plankline {

/// Changes whenever candidate generation changes; cached families with another
/// version are regenerated.
inline constexpr const char* kSnakeGeneratorVersion = "vertex-midpoint-1";

enum class CoverMode { pierce, hit };

std::string to_string(CoverMode mode);
/// Accepts "pierce" or "hit"; throws std::invalid_argument otherwise.
CoverMode parse_cover_mode(const std::string& text);

/// The finite witness family for all lines: generic neighbours of every line
/// through two or more grid vertices, plus the corner-touching diagonals.
std::vector<PerturbedLine> candidate_lines(const Board& board);
/// Size of candidate_lines without materializing it.
std::size_t candidate_count(const Board& board);

/// Distinct nonempty snakes (pierce) or hit sets (hit), sorted, each with a
/// witness line reproducing it.
struct SnakeFamily {
  int n = 0;
  CoverMode mode = CoverMode::pierce;
  std::vector<Snake> snakes;
  std::vector<PerturbedLine> witnesses;
  std::string generator_version = kSnakeGeneratorVersion;
};

SnakeFamily enumerate_snakes(const Board& board);
/// Hit sets of the unperturbed lines through two or more vertices (and corners).
/// Every hit set of any line is contained in one of them.
SnakeFamily enumerate_hit_sets(const Board& board);

/// Members not strictly contained in another member, in family order.
SnakeFamily maximal_members(const SnakeFamily& family);

struct SeparationReport {
  PerturbedLine worst_line;
  Rational worst_sum = 0;
  bool violated = false;
  Snake worst_snake;
};

/// Exact maximum of the snake weight over all candidate lines. A floating point
/// pass shortlists candidates; the shortlist is re-summed exactly.
SeparationReport separation_oracle(const Board& board, const WeightGrid& weights);

struct ScoredSnake {
  PerturbedLine line;
  Snake snake;
  double score = 0;
};

/// Up to `limit` distinct snakes with float weight sum above `threshold`, best first.
std::vector<ScoredSnake> violated_snakes(const Board& board, const std::vector<double>& weights, double threshold,
                                         std::size_t limit);

struct MaxCellsResult {
  int count = 0;
  PerturbedLine witness;
};

MaxCellsResult max_cells(const Board& board, CoverMode mode);

// ---------------------------------------------------------------------------
// Cache files

/// `plankline-snakes v1 n=<n> count=<k>` followed by one snake per line.
std::string format_snake_file(const SnakeFamily& family);
/// Parses the snake list; witnesses are left empty. Throws std::runtime_error.
SnakeFamily parse_snake_file(const std::string& text);

/// Cache directory: $PLANKLINE_CACHE, else $XDG_CACHE_HOME/plankline, else ~/.cache/plankline.
std::filesystem::path default_cache_dir();

/// Writes `<dir>/snakes-<mode>-n<n>.txt` and its witness sidecar, each by atomic rename.
void write_snake_cache(const std::filesystem::path& dir, const SnakeFamily& family);
/// Loads a cached family; returns false when missing, unreadable or from another generator.
bool read_snake_cache(const std::filesystem::path& dir, int n, CoverMode mode, SnakeFamily& out);
/// Cached family if current, otherwise enumerates and refreshes the cache.
SnakeFamily load_or_enumerate(const Board& board, CoverMode mode, const std::filesystem::path& dir);

}  // namespace plankline
