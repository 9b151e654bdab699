#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "plankline/geometry.hpp"
#include "plankline/snakes.hpp"

namespace plankline {

struct LineFamily {
  int n = 0;
  CoverMode mode = CoverMode::pierce;
  std::vector<PerturbedLine> lines;
  std::string provenance;

  bool operator==(const LineFamily& o) const {
    return n == o.n && mode == o.mode && lines == o.lines && provenance == o.provenance;
  }
};

/// n - 1 lines piercing every cell, n >= 3. lines[0] is the closing line through
/// (-1 + 1/n, 1 - 1/(2n)) and (1 - 1/n, -1 + 1/(2n)); lines[i] for i in [1, n-2] is
/// y = (1 - 1/n^2) x translated by (1 - (2i+1)/n, -1 + (2i+1)/n).
/// Throws std::logic_error if exact verification fails.
LineFamily piercing_family(const Board& board);

/// ceil(n/2) vertical lines hitting every cell: x = -1 + (4k-2)/n, plus x = 1 for odd n.
LineFamily hitting_family(const Board& board);

/// Cells not pierced (or hit, per the family mode) by any line, sorted.
std::vector<CellIndex> verify_family(const Board& board, const LineFamily& family);

nlohmann::json to_json(const LineFamily& family);
/// Throws std::runtime_error on malformed input.
LineFamily line_family_from_json(const nlohmann::json& j);

}  // namespace plankline
