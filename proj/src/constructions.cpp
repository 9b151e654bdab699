#include "plankline/constructions.hpp"

#include <stdexcept>

#include "plankline/certificate.hpp"

namespace plankline {

LineFamily piercing_family(const Board& board) {
  const int n = board.n();
  if (n < 3) throw std::invalid_argument("piercing_family needs n >= 3");
  LineFamily fam;
  fam.n = n;
  fam.mode = CoverMode::pierce;
  fam.provenance = "piercing_family: slope 1 - 1/n^2 translates plus a closing line";

  const Rational inv_n = make_rational(1, n);
  fam.lines.emplace_back(Line::through(-1 + inv_n, 1 - inv_n / 2, 1 - inv_n, -1 + inv_n / 2));
  const Rational slope = 1 - inv_n * inv_n;
  for (int i = 1; i <= n - 2; ++i) {
    Rational dx = 1 - make_rational(2 * i + 1, n);
    Rational dy = -dx;
    fam.lines.emplace_back(Line::from_slope(slope, dy - slope * dx));
  }
  if (!verify_family(board, fam).empty()) throw std::logic_error("piercing family failed verification");
  return fam;
}

LineFamily hitting_family(const Board& board) {
  const int n = board.n();
  LineFamily fam;
  fam.n = n;
  fam.mode = CoverMode::hit;
  fam.provenance = "hitting_family: every second vertical boundary line";
  for (int k = 1; k <= n / 2; ++k) fam.lines.emplace_back(Line::vertical(-1 + make_rational(4 * k - 2, n)));
  if (n % 2 == 1) fam.lines.emplace_back(Line::vertical(1));
  return fam;
}

std::vector<CellIndex> verify_family(const Board& board, const LineFamily& family) {
  const int n = board.n();
  std::vector<char> covered(static_cast<size_t>(n) * n, 0);
  for (const auto& l : family.lines) {
    if (family.mode == CoverMode::pierce) {
      for (const auto& c : snake_of_line(board, l).cells) covered[cell_id(c, n)] = 1;
    } else {
      for (const auto& c : hit_cells_of_line(board, l.base)) covered[cell_id(c, n)] = 1;
    }
  }
  std::vector<CellIndex> out;
  for (int id = 0; id < n * n; ++id)
    if (!covered[id]) out.push_back(cell_from_id(id, n));
  return out;
}

nlohmann::json to_json(const LineFamily& family) {
  nlohmann::json lines = nlohmann::json::array();
  for (const auto& l : family.lines) lines.push_back(line_to_json(l));
  return {{"n", family.n}, {"mode", to_string(family.mode)}, {"provenance", family.provenance}, {"lines", lines}};
}

LineFamily line_family_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::runtime_error("line family must be a JSON object");
  if (!j.contains("n") || !j["n"].is_number_integer() || j["n"].get<long>() < 1)
    throw std::runtime_error("line family needs a positive integer n");
  if (!j.contains("lines") || !j["lines"].is_array()) throw std::runtime_error("line family needs a lines array");
  LineFamily fam;
  fam.n = j["n"].get<int>();
  try {
    fam.mode = parse_cover_mode(j.value("mode", std::string("pierce")));
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(e.what());
  }
  if (j.contains("provenance") && j["provenance"].is_string()) fam.provenance = j["provenance"].get<std::string>();
  for (const auto& l : j["lines"]) {
    try {
      fam.lines.push_back(line_from_json(l));
    } catch (const CertificateError& e) {
      throw std::runtime_error(std::string("bad line: ") + e.what());
    }
  }
  return fam;
}

}  // namespace plankline
