#include "plankline/certificate.hpp"

#include <algorithm>

namespace plankline {

std::string to_string(BoundKind k) { return k == BoundKind::lower ? "lower" : "upper"; }

bool BoundCertificate::operator==(const BoundCertificate& o) const {
  return version == o.version && n == o.n && kind == o.kind && bound == o.bound && weights == o.weights &&
         mode == o.mode && lines == o.lines && generator == o.generator && worst_sum == o.worst_sum &&
         converged == o.converged;
}

BoundCertificate certify_dual_weights(const Board& board, const WeightGrid& weights, const std::string& generator) {
  BoundCertificate cert;
  cert.n = board.n();
  cert.kind = BoundKind::lower;
  cert.generator = generator;
  SeparationReport rep = separation_oracle(board, weights);
  WeightGrid scaled = weights;
  if (rep.worst_sum > 1) {
    scaled.scale(1 / rep.worst_sum);
    cert.worst_sum = 1;
  } else {
    cert.worst_sum = rep.worst_sum;
  }
  cert.bound = scaled.total();
  cert.weights = std::move(scaled);
  return cert;
}

namespace {

std::vector<CellIndex> uncovered(const Board& board, CoverMode mode, const std::vector<PerturbedLine>& lines) {
  const int n = board.n();
  std::vector<char> hit(static_cast<size_t>(n) * n, 0);
  for (const auto& l : lines) {
    if (mode == CoverMode::pierce) {
      for (const auto& c : snake_of_line(board, l).cells) hit[cell_id(c, n)] = 1;
    } else {
      for (const auto& c : hit_cells_of_line(board, l.base)) hit[cell_id(c, n)] = 1;
    }
  }
  std::vector<CellIndex> out;
  for (int id = 0; id < n * n; ++id)
    if (!hit[id]) out.push_back(cell_from_id(id, n));
  return out;
}

[[noreturn]] void fail(CertificateError::Kind k, const std::string& what) { throw CertificateError(k, what); }

Rational rational_field(const nlohmann::json& j, const char* name) {
  if (!j.contains(name) || !j[name].is_string()) fail(CertificateError::Kind::parse, std::string("missing ") + name);
  try {
    return parse_rational(j[name].get<std::string>());
  } catch (const std::exception&) {
    fail(CertificateError::Kind::parse, std::string("bad rational in ") + name);
  }
}

}  // namespace

BoundCertificate certify_cover(const Board& board, CoverMode mode, std::vector<PerturbedLine> lines,
                               const std::string& generator) {
  if (!uncovered(board, mode, lines).empty()) throw std::runtime_error("line family leaves cells uncovered");
  BoundCertificate cert;
  cert.n = board.n();
  cert.kind = BoundKind::upper;
  cert.mode = mode;
  cert.bound = static_cast<long>(lines.size());
  cert.lines = std::move(lines);
  cert.generator = generator;
  return cert;
}

void validate_certificate(const BoundCertificate& cert) {
  using K = CertificateError::Kind;
  if (cert.version != kCertificateVersion) fail(K::version, "unknown certificate version '" + cert.version + "'");
  if (cert.n < 1) fail(K::validation, "board size must be positive");
  Board board(cert.n);
  if (cert.kind == BoundKind::lower) {
    if (!cert.weights || cert.weights->n() != cert.n) fail(K::validation, "lower bound needs an n x n weight grid");
    for (const auto& w : cert.weights->values())
      if (w < 0) fail(K::validation, "negative weight");
    if (cert.weights->total() != cert.bound) fail(K::validation, "bound differs from the total weight");
    SeparationReport rep = separation_oracle(board, *cert.weights);
    if (rep.worst_sum != cert.worst_sum) fail(K::validation, "recorded worst_sum does not match separation");
    if (rep.worst_sum > 1)
      fail(K::validation, "weights are infeasible: a snake sums to " + to_string(rep.worst_sum));
  } else {
    if (cert.bound != static_cast<long>(cert.lines.size())) fail(K::validation, "bound differs from the line count");
    auto missing = uncovered(board, cert.mode, cert.lines);
    if (!missing.empty())
      fail(K::validation, std::to_string(missing.size()) + " cells are not covered by the witness lines");
  }
}

nlohmann::json line_to_json(const PerturbedLine& l) {
  return {{"a", to_string(l.base.a())}, {"b", to_string(l.base.b())}, {"c", to_string(l.base.c())},
          {"tilt", l.tilt},           {"shift", l.shift},             {"pivot", to_string(l.pivot)}};
}

PerturbedLine line_from_json(const nlohmann::json& j) {
  using K = CertificateError::Kind;
  if (!j.is_object()) fail(K::parse, "line must be an object");
  Rational a = rational_field(j, "a"), b = rational_field(j, "b"), c = rational_field(j, "c");
  Rational pivot = j.contains("pivot") ? rational_field(j, "pivot") : Rational(0);
  int tilt = 0, shift = 0;
  if (j.contains("tilt")) {
    if (!j["tilt"].is_number_integer()) fail(K::parse, "tilt must be an integer");
    tilt = j["tilt"].get<int>();
  }
  if (j.contains("shift")) {
    if (!j["shift"].is_number_integer()) fail(K::parse, "shift must be an integer");
    shift = j["shift"].get<int>();
  }
  try {
    return PerturbedLine(Line(a, b, c), tilt, shift, pivot);
  } catch (const std::invalid_argument& e) {
    fail(K::parse, e.what());
  }
}

nlohmann::json to_json(const BoundCertificate& cert) {
  nlohmann::json j;
  j["version"] = cert.version;
  j["n"] = cert.n;
  j["kind"] = to_string(cert.kind);
  j["bound"] = to_string(cert.bound);
  j["generator"] = cert.generator;
  j["converged"] = cert.converged;
  if (cert.kind == BoundKind::lower) {
    j["worst_sum"] = to_string(cert.worst_sum);
    nlohmann::json w = nlohmann::json::object();
    if (cert.weights) {
      for (int id = 0; id < cert.n * cert.n; ++id) {
        const Rational& v = cert.weights->values()[id];
        if (v == 0) continue;
        CellIndex c = cell_from_id(id, cert.n);
        w[std::to_string(c.i) + "," + std::to_string(c.j)] = to_string(v);
      }
    }
    j["witness"] = w;
  } else {
    j["mode"] = to_string(cert.mode);
    nlohmann::json lines = nlohmann::json::array();
    for (const auto& l : cert.lines) lines.push_back(line_to_json(l));
    j["witness"] = lines;
  }
  return j;
}

BoundCertificate certificate_from_json(const nlohmann::json& j) {
  using K = CertificateError::Kind;
  if (!j.is_object()) fail(K::parse, "certificate must be a JSON object");
  if (!j.contains("version") || !j["version"].is_string()) fail(K::parse, "missing version");
  BoundCertificate cert;
  cert.version = j["version"].get<std::string>();
  if (cert.version != kCertificateVersion) fail(K::version, "unknown certificate version '" + cert.version + "'");
  if (!j.contains("n") || !j["n"].is_number_integer() || j["n"].get<long>() < 1 || j["n"].get<long>() > 100000)
    fail(K::parse, "missing or invalid n");
  cert.n = j["n"].get<int>();
  if (!j.contains("kind") || !j["kind"].is_string()) fail(K::parse, "missing kind");
  std::string kind = j["kind"].get<std::string>();
  if (kind == "lower")
    cert.kind = BoundKind::lower;
  else if (kind == "upper")
    cert.kind = BoundKind::upper;
  else
    fail(K::parse, "kind must be 'lower' or 'upper'");
  cert.bound = rational_field(j, "bound");
  if (j.contains("generator")) {
    if (!j["generator"].is_string()) fail(K::parse, "generator must be a string");
    cert.generator = j["generator"].get<std::string>();
  }
  if (j.contains("converged")) {
    if (!j["converged"].is_boolean()) fail(K::parse, "converged must be a boolean");
    cert.converged = j["converged"].get<bool>();
  }
  if (!j.contains("witness")) fail(K::parse, "missing witness");
  const auto& w = j["witness"];
  if (cert.kind == BoundKind::lower) {
    cert.worst_sum = rational_field(j, "worst_sum");
    if (!w.is_object()) fail(K::parse, "lower-bound witness must map cells to weights");
    WeightGrid grid(cert.n);
    for (auto it = w.begin(); it != w.end(); ++it) {
      const std::string& key = it.key();
      auto comma = key.find(',');
      CellIndex c;
      try {
        if (comma == std::string::npos) throw std::invalid_argument("no comma");
        std::size_t used = 0;
        c.i = std::stoi(key.substr(0, comma), &used);
        if (used != comma) throw std::invalid_argument("junk");
        c.j = std::stoi(key.substr(comma + 1), &used);
        if (used != key.size() - comma - 1) throw std::invalid_argument("junk");
      } catch (const std::exception&) {
        fail(K::parse, "bad cell key '" + key + "'");
      }
      if (c.i < 1 || c.i > cert.n || c.j < 1 || c.j > cert.n) fail(K::parse, "cell key outside board: " + key);
      if (!it.value().is_string()) fail(K::parse, "weights must be rational strings");
      Rational v;
      try {
        v = parse_rational(it.value().get<std::string>());
      } catch (const std::exception&) {
        fail(K::parse, "bad weight for " + key);
      }
      if (v < 0) fail(K::parse, "negative weight for " + key);
      grid.set(c, v);
    }
    cert.weights = std::move(grid);
  } else {
    if (!j.contains("mode") || !j["mode"].is_string()) fail(K::parse, "missing mode");
    try {
      cert.mode = parse_cover_mode(j["mode"].get<std::string>());
    } catch (const std::invalid_argument& e) {
      fail(K::parse, e.what());
    }
    if (!w.is_array()) fail(K::parse, "upper-bound witness must be a list of lines");
    for (const auto& l : w) cert.lines.push_back(line_from_json(l));
  }
  return cert;
}

}  // namespace plankline
