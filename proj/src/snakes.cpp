#include "plankline/snakes.hpp"

#include <unistd.h>

#include <algorithm>
#include <cfloat>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

#include "plankline/candidates.hpp"
#include "plankline/parallel.hpp"

namespace plankline {

using grid::BaseLine;
using grid::FastLine;

std::string to_string(CoverMode mode) { return mode == CoverMode::pierce ? "pierce" : "hit"; }

CoverMode parse_cover_mode(const std::string& text) {
  if (text == "pierce") return CoverMode::pierce;
  if (text == "hit") return CoverMode::hit;
  throw std::invalid_argument("mode must be 'pierce' or 'hit', got '" + text + "'");
}

namespace {

constexpr std::size_t kChunks = 64;

/// Work item k < directions.size() is one direction; the last item is the corner diagonals.
struct WorkList {
  int n;
  std::vector<std::array<int, 2>> directions;

  explicit WorkList(int n_) : n(n_), directions(grid::candidate_directions(n_)) {}
  std::size_t size() const { return directions.size() + 1; }

  template <class F>
  void run(std::size_t k, F&& f) const {
    if (k < directions.size()) {
      grid::for_each_base_line(n, directions[k][0], directions[k][1], f);
    } else {
      for (const auto& b : grid::corner_lines(n)) f(b);
    }
  }
};

using Key = std::basic_string<std::uint16_t>;

struct KeyHash {
  std::size_t operator()(const Key& k) const {
    return std::hash<std::string_view>{}(
        std::string_view(reinterpret_cast<const char*>(k.data()), k.size() * sizeof(std::uint16_t)));
  }
};

Key cells_key(const FastLine& g, int n, grid::Incidence mode) {
  Key key;
  grid::scan(g, n, mode, [&](int col, int lo, int hi) {
    for (int r = lo; r <= hi; ++r) {
      CellIndex c = g.transposed ? CellIndex{r, col} : CellIndex{col, r};
      key.push_back(static_cast<std::uint16_t>(cell_id(c, n)));
    }
  });
  if (g.transposed) std::sort(key.begin(), key.end());
  return key;
}

Snake snake_from_key(const Key& key, int n) {
  Snake s{n, {}};
  s.cells.reserve(key.size());
  for (auto id : key) s.cells.push_back(cell_from_id(id, n));
  return s;
}

void require_small_board(int n) {
  if (n > 255) throw std::invalid_argument("snake families are limited to n <= 255");
}

SnakeFamily assemble(int n, CoverMode mode, std::vector<std::pair<Key, FastLine>>& entries) {
  std::stable_sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  SnakeFamily fam;
  fam.n = n;
  fam.mode = mode;
  for (std::size_t k = 0; k < entries.size(); ++k) {
    if (k > 0 && entries[k].first == entries[k - 1].first) continue;
    fam.snakes.push_back(snake_from_key(entries[k].first, n));
    fam.witnesses.push_back(grid::to_board(entries[k].second, n));
  }
  return fam;
}

template <class Emit>
SnakeFamily enumerate(const Board& board, CoverMode mode, Emit&& emit_lines) {
  const int n = board.n();
  require_small_board(n);
  WorkList work(n);
  const grid::Incidence inc = mode == CoverMode::pierce ? grid::Incidence::pierce : grid::Incidence::hit;
  std::vector<std::vector<std::pair<Key, FastLine>>> parts(kChunks);
  parallel_chunks(work.size(), kChunks, [&](std::size_t c, std::size_t begin, std::size_t end) {
    std::unordered_set<Key, KeyHash> seen;
    for (std::size_t k = begin; k < end; ++k)
      work.run(k, [&](const BaseLine& b) {
        emit_lines(b, [&](const FastLine& g) {
          Key key = cells_key(g, n, inc);
          if (key.empty() || !seen.insert(key).second) return;
          parts[c].emplace_back(std::move(key), g);
        });
      });
  });
  std::vector<std::pair<Key, FastLine>> all;
  for (auto& p : parts) {
    for (auto& e : p) all.push_back(std::move(e));
    p.clear();
  }
  return assemble(n, mode, all);
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<PerturbedLine> candidate_lines(const Board& board) {
  const int n = board.n();
  std::vector<PerturbedLine> out;
  grid::for_each_base_line(n, [&](const BaseLine& b) {
    grid::for_each_perturbation(b, n, [&](const FastLine& g) { out.push_back(grid::to_board(g, n)); });
  });
  return out;
}

std::size_t candidate_count(const Board& board) {
  std::size_t count = 0;
  grid::for_each_base_line(board.n(), [&](const BaseLine& b) { count += 2 * static_cast<std::size_t>(b.count); });
  return count;
}

SnakeFamily enumerate_snakes(const Board& board) {
  return enumerate(board, CoverMode::pierce, [&](const BaseLine& b, auto&& sink) {
    grid::for_each_perturbation(b, board.n(), sink);
  });
}

SnakeFamily enumerate_hit_sets(const Board& board) {
  return enumerate(board, CoverMode::hit, [](const BaseLine& b, auto&& sink) { sink(b.g); });
}

SnakeFamily maximal_members(const SnakeFamily& family) {
  // Bucket by size; a member is maximal when no larger member contains it.
  const int n = family.n;
  const std::size_t words = (static_cast<std::size_t>(n) * n + 63) / 64;
  std::vector<std::vector<std::uint64_t>> bits(family.snakes.size(), std::vector<std::uint64_t>(words, 0));
  for (std::size_t k = 0; k < family.snakes.size(); ++k)
    for (const auto& c : family.snakes[k].cells) {
      int id = cell_id(c, n);
      bits[k][id / 64] |= std::uint64_t{1} << (id % 64);
    }
  std::vector<std::size_t> order(family.snakes.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return family.snakes[a].size() > family.snakes[b].size(); });
  std::vector<char> keep(family.snakes.size(), 0);
  std::vector<std::size_t> kept;
  for (std::size_t idx : order) {
    bool contained = false;
    for (std::size_t m : kept) {
      if (family.snakes[m].size() <= family.snakes[idx].size()) continue;
      bool sub = true;
      for (std::size_t w = 0; w < words && sub; ++w) sub = (bits[idx][w] & ~bits[m][w]) == 0;
      if (sub) {
        contained = true;
        break;
      }
    }
    if (!contained) {
      keep[idx] = 1;
      kept.push_back(idx);
    }
  }
  SnakeFamily out;
  out.n = n;
  out.mode = family.mode;
  out.generator_version = family.generator_version;
  for (std::size_t k = 0; k < family.snakes.size(); ++k)
    if (keep[k]) {
      out.snakes.push_back(family.snakes[k]);
      if (k < family.witnesses.size()) out.witnesses.push_back(family.witnesses[k]);
    }
  return out;
}

// ---------------------------------------------------------------------------
// Separation

SeparationReport separation_oracle(const Board& board, const WeightGrid& weights) {
  const int n = board.n();
  if (weights.n() != n) throw std::invalid_argument("weight grid size does not match board");
  grid::FloatWeights W(n, weights.to_doubles());
  // Bound on the float summation error of one candidate, with room to spare.
  const double margin = 16.0 * (n + 2) * DBL_EPSILON * W.total + DBL_MIN;
  WorkList work(n);

  struct Part {
    double best = -1;
    std::vector<std::pair<double, FastLine>> keep;
  };
  std::vector<Part> parts(kChunks);
  parallel_chunks(work.size(), kChunks, [&](std::size_t c, std::size_t begin, std::size_t end) {
    Part& part = parts[c];
    std::vector<grid::Transition> scratch;
    auto prune = [&] {
      std::erase_if(part.keep, [&](const auto& e) { return e.first < part.best - margin; });
    };
    std::size_t prune_at = 4096;
    for (std::size_t k = begin; k < end; ++k)
      work.run(k, [&](const BaseLine& b) {
        grid::score_perturbations(b, W, scratch, [&](const FastLine& g, double s) {
          if (s < part.best - margin) return;
          if (s > part.best) part.best = s;
          part.keep.emplace_back(s, g);
          if (part.keep.size() >= prune_at) {
            prune();
            prune_at = std::max<std::size_t>(4096, 2 * part.keep.size());
          }
        });
      });
    prune();
  });

  double best = -1;
  for (const auto& p : parts) best = std::max(best, p.best);

  SeparationReport rep;
  bool have = false;
  std::unordered_set<Key, KeyHash> seen;
  for (const auto& p : parts)
    for (const auto& [s, g] : p.keep) {
      if (s < best - margin) continue;
      Key key = cells_key(g, n, grid::Incidence::pierce);
      if (!seen.insert(key).second) continue;
      Rational sum = 0;
      for (auto id : key) sum += weights.values()[id];
      if (!have || sum > rep.worst_sum) {
        have = true;
        rep.worst_sum = sum;
        rep.worst_line = grid::to_board(g, n);
        rep.worst_snake = snake_from_key(key, n);
      }
    }
  rep.violated = rep.worst_sum > 1;
  return rep;
}

std::vector<ScoredSnake> violated_snakes(const Board& board, const std::vector<double>& weights, double threshold,
                                         std::size_t limit) {
  const int n = board.n();
  if (weights.size() != static_cast<std::size_t>(n) * n) throw std::invalid_argument("weight vector size mismatch");
  if (limit == 0) return {};
  grid::FloatWeights W(n, weights);
  WorkList work(n);
  // Several candidates can share a snake, so each part keeps a generous surplus.
  const std::size_t cap = 16 * limit + 64;
  using Entry = std::pair<double, FastLine>;
  auto better = [](const Entry& a, const Entry& b) { return a.first > b.first; };
  std::vector<std::vector<Entry>> parts(kChunks);
  parallel_chunks(work.size(), kChunks, [&](std::size_t c, std::size_t begin, std::size_t end) {
    auto& keep = parts[c];
    std::vector<grid::Transition> scratch;
    for (std::size_t k = begin; k < end; ++k)
      work.run(k, [&](const BaseLine& b) {
        grid::score_perturbations(b, W, scratch, [&](const FastLine& g, double s) {
          if (s <= threshold) return;
          keep.emplace_back(s, g);
          if (keep.size() >= 2 * cap) {
            std::stable_sort(keep.begin(), keep.end(), better);
            keep.resize(cap);
          }
        });
      });
    std::stable_sort(keep.begin(), keep.end(), better);
    if (keep.size() > cap) keep.resize(cap);
  });
  std::vector<Entry> all;
  for (auto& p : parts) all.insert(all.end(), p.begin(), p.end());
  std::stable_sort(all.begin(), all.end(), better);
  std::vector<ScoredSnake> out;
  std::unordered_set<Key, KeyHash> seen;
  for (const auto& [s, g] : all) {
    if (out.size() >= limit) break;
    Key key = cells_key(g, n, grid::Incidence::pierce);
    if (!seen.insert(key).second) continue;
    out.push_back({grid::to_board(g, n), snake_from_key(key, n), s});
  }
  return out;
}

MaxCellsResult max_cells(const Board& board, CoverMode mode) {
  const int n = board.n();
  WorkList work(n);
  struct Part {
    int best = -1;
    FastLine witness;
  };
  std::vector<Part> parts(kChunks);
  grid::FloatWeights ones(n, std::vector<double>(static_cast<std::size_t>(n) * n, 1.0));
  parallel_chunks(work.size(), kChunks, [&](std::size_t c, std::size_t begin, std::size_t end) {
    Part& part = parts[c];
    std::vector<grid::Transition> scratch;
    for (std::size_t k = begin; k < end; ++k)
      work.run(k, [&](const BaseLine& b) {
        if (mode == CoverMode::pierce) {
          grid::score_perturbations(b, ones, scratch, [&](const FastLine& g, double s) {
            int count = static_cast<int>(s + 0.5);
            if (count > part.best) {
              part.best = count;
              part.witness = g;
            }
          });
        } else {
          int count = 0;
          grid::scan(b.g, n, grid::Incidence::hit, [&](int, int lo, int hi) { count += hi - lo + 1; });
          if (count > part.best) {
            part.best = count;
            part.witness = b.g;
          }
        }
      });
  });
  MaxCellsResult res;
  res.count = -1;
  for (const auto& p : parts)
    if (p.best > res.count) {
      res.count = p.best;
      res.witness = grid::to_board(p.witness, n);
    }
  return res;
}

// ---------------------------------------------------------------------------
// Cache files

std::string format_snake_file(const SnakeFamily& family) {
  std::string out = "plankline-snakes v1 n=" + std::to_string(family.n) + " count=" +
                    std::to_string(family.snakes.size()) + "\n";
  for (const auto& s : family.snakes) {
    for (std::size_t k = 0; k < s.cells.size(); ++k) {
      if (k > 0) out += ' ';
      out += std::to_string(s.cells[k].i);
      out += ',';
      out += std::to_string(s.cells[k].j);
    }
    out += '\n';
  }
  return out;
}

namespace {

int parse_int(std::string_view s, const char* what) {
  if (s.empty() || s.size() > 9) throw std::runtime_error(std::string("bad ") + what);
  int v = 0;
  for (char ch : s) {
    if (ch < '0' || ch > '9') throw std::runtime_error(std::string("bad ") + what);
    v = v * 10 + (ch - '0');
  }
  // Canonical form only, so that a parsed file re-serializes byte for byte.
  if (s.size() > 1 && s[0] == '0') throw std::runtime_error(std::string("bad ") + what);
  return v;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) throw std::runtime_error("missing final newline");
    lines.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  return lines;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_atomic(const std::filesystem::path& p, const std::string& content) {
  std::filesystem::path tmp = p;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, p);
}

std::string witness_header(const SnakeFamily& f) {
  return "plankline-witnesses v1 generator=" + f.generator_version + " mode=" + to_string(f.mode) +
         " n=" + std::to_string(f.n) + " count=" + std::to_string(f.witnesses.size());
}

std::filesystem::path cache_file(const std::filesystem::path& dir, int n, CoverMode mode) {
  return dir / ("snakes-" + to_string(mode) + "-n" + std::to_string(n) + ".txt");
}

}  // namespace

SnakeFamily parse_snake_file(const std::string& text) {
  auto lines = split_lines(text);
  if (lines.empty()) throw std::runtime_error("empty snake file");
  std::string_view head = lines[0];
  const std::string_view prefix = "plankline-snakes v1 n=";
  if (head.substr(0, prefix.size()) != prefix) throw std::runtime_error("bad snake file header");
  head.remove_prefix(prefix.size());
  std::size_t sp = head.find(" count=");
  if (sp == std::string_view::npos) throw std::runtime_error("bad snake file header");
  SnakeFamily fam;
  fam.n = parse_int(head.substr(0, sp), "board size");
  if (fam.n < 1) throw std::runtime_error("bad board size");
  std::size_t count = static_cast<std::size_t>(parse_int(head.substr(sp + 7), "count"));
  if (lines.size() != count + 1) throw std::runtime_error("snake count does not match header");
  for (std::size_t k = 1; k < lines.size(); ++k) {
    Snake s{fam.n, {}};
    std::string_view line = lines[k];
    while (!line.empty()) {
      std::size_t end = line.find(' ');
      std::string_view tok = line.substr(0, end);
      std::size_t comma = tok.find(',');
      if (comma == std::string_view::npos) throw std::runtime_error("bad cell token");
      CellIndex c{parse_int(tok.substr(0, comma), "cell"), parse_int(tok.substr(comma + 1), "cell")};
      if (c.i < 1 || c.i > fam.n || c.j < 1 || c.j > fam.n) throw std::runtime_error("cell outside board");
      if (!s.cells.empty() && !(s.cells.back() < c)) throw std::runtime_error("cells not sorted");
      s.cells.push_back(c);
      if (end == std::string_view::npos) break;
      line.remove_prefix(end + 1);
      if (line.empty()) throw std::runtime_error("trailing space");
    }
    if (s.cells.empty()) throw std::runtime_error("empty snake");
    if (!fam.snakes.empty() && !(fam.snakes.back() < s)) throw std::runtime_error("snakes not sorted");
    fam.snakes.push_back(std::move(s));
  }
  return fam;
}

std::filesystem::path default_cache_dir() {
  if (const char* p = std::getenv("PLANKLINE_CACHE"); p && *p) return p;
  if (const char* p = std::getenv("XDG_CACHE_HOME"); p && *p) return std::filesystem::path(p) / "plankline";
  if (const char* p = std::getenv("HOME"); p && *p) return std::filesystem::path(p) / ".cache" / "plankline";
  return std::filesystem::temp_directory_path() / "plankline";
}

void write_snake_cache(const std::filesystem::path& dir, const SnakeFamily& family) {
  if (family.witnesses.size() != family.snakes.size()) throw std::invalid_argument("family lacks witnesses");
  std::filesystem::create_directories(dir);
  std::filesystem::path file = cache_file(dir, family.n, family.mode);
  std::string w = witness_header(family) + "\n";
  for (const auto& l : family.witnesses) {
    w += to_string(l.base.a()) + " " + to_string(l.base.b()) + " " + to_string(l.base.c()) + " " +
         std::to_string(l.tilt) + " " + std::to_string(l.shift) + " " + to_string(l.pivot) + "\n";
  }
  // Witnesses first: a snake file is only trusted next to a matching sidecar.
  std::filesystem::path side = file;
  side += ".witness";
  write_atomic(side, w);
  write_atomic(file, format_snake_file(family));
}

bool read_snake_cache(const std::filesystem::path& dir, int n, CoverMode mode, SnakeFamily& out) {
  std::filesystem::path file = cache_file(dir, n, mode);
  std::filesystem::path side = file;
  side += ".witness";
  try {
    if (!std::filesystem::exists(file) || !std::filesystem::exists(side)) return false;
    SnakeFamily fam = parse_snake_file(read_file(file));
    if (fam.n != n) return false;
    fam.mode = mode;
    std::istringstream in(read_file(side));
    std::string header;
    std::getline(in, header);
    SnakeFamily probe = fam;
    probe.witnesses.resize(fam.snakes.size());
    if (header != witness_header(probe)) return false;
    std::string a, b, c, pivot;
    int tilt, shift;
    const Board board(n);
    for (std::size_t k = 0; k < fam.snakes.size(); ++k) {
      if (!(in >> a >> b >> c >> tilt >> shift >> pivot)) return false;
      PerturbedLine l(Line(parse_rational(a), parse_rational(b), parse_rational(c)), tilt, shift,
                      parse_rational(pivot));
      fam.witnesses.push_back(std::move(l));
    }
    out = std::move(fam);
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

SnakeFamily load_or_enumerate(const Board& board, CoverMode mode, const std::filesystem::path& dir) {
  SnakeFamily fam;
  if (read_snake_cache(dir, board.n(), mode, fam)) return fam;
  fam = mode == CoverMode::pierce ? enumerate_snakes(board) : enumerate_hit_sets(board);
  try {
    write_snake_cache(dir, fam);
  } catch (const std::exception&) {
    // An unwritable cache only costs recomputation.
  }
  return fam;
}

}  // namespace plankline
