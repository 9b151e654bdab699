#include "plankline/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "plankline/bounds.hpp"
#include "plankline/constructions.hpp"
#include "plankline/density.hpp"
#include "plankline/parallel.hpp"
#include "plankline/snakes.hpp"

namespace plankline {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct VerificationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Table = std::vector<std::pair<std::string, std::string>>;

void print_table(std::ostream& out, const std::string& title, const Table& rows) {
  std::size_t width = 0;
  for (const auto& r : rows) width = std::max(width, r.first.size());
  out << title << '\n';
  for (const auto& [k, v] : rows) out << "  " << std::left << std::setw(static_cast<int>(width)) << k << "  " << v << '\n';
}

std::string fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string exact(const Rational& r) { return to_string(r) + " = " + to_decimal(r, 6); }

int require_n(const CommandSpec& spec, int lo = 1) {
  if (!spec.n) throw UsageError(spec.command + " needs --n");
  if (*spec.n < lo) throw UsageError("--n must be at least " + std::to_string(lo));
  return *spec.n;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write " + path.string());
  f << text;
  if (!f.flush()) throw UsageError("cannot write " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot read " + path.string());
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

std::filesystem::path output_or(const CommandSpec& spec, const std::string& fallback) {
  return spec.output ? *spec.output : std::filesystem::path(fallback);
}

// Light to dark, as integer RGB.
std::string ramp(double t) {
  static constexpr int light[3] = {247, 251, 255}, dark[3] = {8, 48, 107};
  t = std::clamp(t, 0.0, 1.0);
  char buf[16];
  int c[3];
  for (int k = 0; k < 3; ++k) c[k] = static_cast<int>(std::lround(light[k] + t * (dark[k] - light[k])));
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c[0], c[1], c[2]);
  return buf;
}

std::string svg_grid(int m, const std::vector<double>& values) {
  const int cell = 10;
  double lo = *std::min_element(values.begin(), values.end()), hi = *std::max_element(values.begin(), values.end());
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << m * cell << "\" height=\"" << m * cell
    << "\" viewBox=\"0 0 " << m * cell << ' ' << m * cell << "\" shape-rendering=\"crispEdges\">\n";
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      double v = values[static_cast<std::size_t>(i) * m + j];
      double t = hi > lo ? (v - lo) / (hi - lo) : 0;
      s << "<rect x=\"" << i * cell << "\" y=\"" << (m - 1 - j) * cell << "\" width=\"" << cell << "\" height=\""
        << cell << "\" fill=\"" << ramp(t) << "\"/>\n";
    }
  s << "</svg>\n";
  return s.str();
}

// ---------------------------------------------------------------------------
// Subcommands

int cmd_bound(const CommandSpec& spec, std::ostream& out) {
  const int n = require_n(spec);
  DualBoundOptions opt;
  opt.tolerance = spec.tolerance;
  DualBoundResult r = lp_dual_bound(Board(n), opt);
  try {
    validate_certificate(r.certificate);
  } catch (const CertificateError& e) {
    throw VerificationError(e.what());
  }
  auto path = output_or(spec, "bound-n" + std::to_string(n) + ".json");
  write_file(path, to_json(r.certificate).dump(2) + "\n");
  print_table(out, "certified lower bound",
              {{"n", std::to_string(n)},
               {"bound", exact(r.certificate.bound)},
               {"bound / n", to_decimal(r.certificate.bound / n, 6)},
               {"heaviest snake", exact(r.certificate.worst_sum)},
               {"rounds", std::to_string(r.rounds)},
               {"converged", r.converged ? "yes" : "no"},
               {"certificate", path.string()}});
  return kExitOk;
}

int cmd_exact(const CommandSpec& spec, std::ostream& out) {
  const int n = require_n(spec);
  const CoverMode mode = parse_cover_mode(spec.mode);
  if (n > kMaxCoverBoard) throw UsageError("exact search supports n <= " + std::to_string(kMaxCoverBoard));
  MinCoverResult r = exact_min_cover(Board(n), mode, spec.force);
  BoundCertificate cert;
  try {
    cert = certify_cover(Board(n), mode, r.witness, "exact_min_cover");
  } catch (const std::runtime_error& e) {
    throw VerificationError(e.what());
  }
  Table rows = {{"n", std::to_string(n)}, {"mode", to_string(mode)}, {"minimum", std::to_string(r.value)}};
  for (const auto& step : r.steps)
    rows.push_back({"k = " + std::to_string(step.k), step.feasible ? "feasible" : "infeasible (" + std::to_string(step.nodes) + " nodes)"});
  if (spec.output) {
    write_file(*spec.output, to_json(cert).dump(2) + "\n");
    rows.push_back({"witness", spec.output->string()});
  }
  print_table(out, "exact minimum cover", rows);
  return kExitOk;
}

int cmd_search(const CommandSpec& spec, std::ostream& out) {
  const int n = require_n(spec);
  const CoverMode mode = parse_cover_mode(spec.mode);
  if (!spec.k || *spec.k < 0) throw UsageError("search needs --k >= 0");
  if (n > kMaxCoverBoard) throw UsageError("search supports n <= " + std::to_string(kMaxCoverBoard));
  if (n > kExactCoverGuard && !spec.force)
    throw GuardError("n = " + std::to_string(n) + " exceeds the search guard " + std::to_string(kExactCoverGuard) +
                     "; pass --force");
  CoverResult r = cover_search(Board(n), mode, *spec.k);
  Table rows = {{"n", std::to_string(n)},
                {"mode", to_string(mode)},
                {"k", std::to_string(*spec.k)},
                {"feasible", r.feasible ? "yes" : "no"},
                {"nodes", std::to_string(r.nodes)}};
  if (r.feasible) {
    BoundCertificate cert;
    try {
      cert = certify_cover(Board(n), mode, r.witness, "cover_search");
    } catch (const std::runtime_error& e) {
      throw VerificationError(e.what());
    }
    if (spec.output) {
      write_file(*spec.output, to_json(cert).dump(2) + "\n");
      rows.push_back({"witness", spec.output->string()});
    }
  }
  print_table(out, "cover search", rows);
  return kExitOk;
}

int cmd_construct(const CommandSpec& spec, std::ostream& out) {
  const CoverMode mode = parse_cover_mode(spec.mode);
  const int n = require_n(spec, mode == CoverMode::pierce ? 3 : 1);
  Board board(n);
  LineFamily family = mode == CoverMode::pierce ? piercing_family(board) : hitting_family(board);
  Table rows = {{"n", std::to_string(n)}, {"mode", to_string(mode)}, {"lines", std::to_string(family.lines.size())}};
  if (spec.verify) {
    auto missed = verify_family(board, family);
    rows.push_back({"uncovered cells", std::to_string(missed.size())});
    if (!missed.empty()) {
      print_table(out, "construction", rows);
      throw VerificationError("construction leaves cells uncovered");
    }
  }
  auto path = output_or(spec, "construct-" + to_string(mode) + "-n" + std::to_string(n) + ".json");
  write_file(path, to_json(family).dump(2) + "\n");
  rows.push_back({"written", path.string()});
  print_table(out, "construction", rows);
  return kExitOk;
}

int cmd_check_density(const CommandSpec& spec, std::ostream& out) {
  if (spec.builtin.empty() == !spec.input) throw UsageError("check-density needs exactly one of --builtin and --input");
  Density d = spec.input ? density_from_json(nlohmann::json::parse(read_file(*spec.input))) : builtin_density(spec.builtin);
  DensityArea area = area_integral(d);
  MaxLineOptions mo;
  if (spec.grid) {
    if (*spec.grid < 16) throw UsageError("--grid must be at least 16");
    mo.grid = *spec.grid;
  }
  LineMaximum mx = max_line_integral(d, mo);
  Table rows = {{"density", d.name()},
                {"area", fixed(area.value) + " (exact " + to_string(area.exact) + ")"},
                {"max line integral", fixed(mx.value)},
                {"argmax", std::string(mx.argmax.transposed ? "x = " : "y = ") + fixed(mx.argmax.a) + " * " +
                               (mx.argmax.transposed ? "y" : "x") + " + " + fixed(mx.argmax.b)},
                {"lipschitz bound", fixed(d.lipschitz_bound())}};
  if (spec.n) {
    const int n = require_n(spec);
    Board board(n);
    BoundCertificate cert = certify_dual_weights(board, weights_from_density(d, board), "weights_from_density");
    try {
      validate_certificate(cert);
    } catch (const CertificateError& e) {
      throw VerificationError(e.what());
    }
    rows.push_back({"certified bound", exact(cert.bound)});
    rows.push_back({"bound / n", to_decimal(cert.bound / n, 6)});
    if (spec.output) {
      write_file(*spec.output, to_json(cert).dump(2) + "\n");
      rows.push_back({"certificate", spec.output->string()});
    }
  }
  print_table(out, "density certificate", rows);
  return kExitOk;
}

int cmd_check_dual_density(const CommandSpec& spec, std::ostream& out) {
  NuParams p{spec.gamma, spec.epsilon};
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  DualDensity d = DualDensity::analytic(p);
  const int g = spec.grid.value_or(200);
  if (g < 1) throw UsageError("--grid must be positive");
  double worst = 1e300;
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < g; ++j) worst = std::min(worst, nu_condition(d, -1 + (2.0 * i + 1) / g, -1 + (2.0 * j + 1) / g));
  Table rows = {{"gamma", fixed(p.gamma, 4)},
                {"epsilon", fixed(p.epsilon, 6)},
                {"phi(gamma)", fixed(phi(p.gamma, p))},
                {"total mass", fixed(nu_total_mass(p))},
                {"epsilon -> 0 mass", fixed(nu_total_mass_limit(p.gamma))},
                {"min condition", fixed(worst) + " on a " + std::to_string(g) + " x " + std::to_string(g) + " grid"}};
  bool ok = worst >= 1 - 1e-6;
  if (spec.n) {
    const int n = require_n(spec);
    SnakeWeighting sw = snake_weighting_from_nu(d, Board(n));
    rows.push_back({"snakes", std::to_string(sw.rho.size())});
    rows.push_back({"weighting value / n", fixed(sw.value / n)});
    rows.push_back({"min coverage", fixed(sw.min_coverage)});
    rows.push_back({"feasible", sw.feasible ? "yes" : "no"});
  }
  print_table(out, "dual density", rows);
  if (!ok) throw VerificationError("condition fails on the sample grid");
  return kExitOk;
}

int cmd_dual_lp(const CommandSpec& spec, std::ostream& out) {
  const int m = spec.grid.value_or(30);
  const int k = spec.sample.value_or(m);
  if (m < 4 || k < 4) throw UsageError("--grid and --sample must be at least 4");
  if (spec.oversample < 1) throw UsageError("--oversample must be positive");
  DiscreteDualLpOptions opt;
  opt.oversample = spec.oversample;
  DiscreteDualLpResult r = discrete_dual_lp(m, k, opt);
  if (r.status != LpStatus::optimal) throw VerificationError("dual LP ended with status " + to_string(r.status));
  if (r.min_condition < 1 - 1e-9) throw VerificationError("density fails a sampled condition");
  auto path = output_or(spec, "dual-lp-" + std::to_string(m) + ".csv");
  write_file(path, format_dual_density_csv(r.density));
  print_table(out, "discrete dual density",
              {{"grid", std::to_string(m) + " x " + std::to_string(m)},
               {"sample points", std::to_string(k * spec.oversample) + " x " + std::to_string(k * spec.oversample)},
               {"mass", fixed(r.mass)},
               {"mass / 2", fixed(r.mass / 2)},
               {"min condition", fixed(r.min_condition)},
               {"written", path.string()}});
  return kExitOk;
}

int cmd_snakes(const CommandSpec& spec, std::ostream& out) {
  const int n = require_n(spec);
  const CoverMode mode = parse_cover_mode(spec.mode);
  const auto dir = spec.cache_dir ? *spec.cache_dir : default_cache_dir();
  SnakeFamily f = load_or_enumerate(Board(n), mode, dir);
  std::size_t longest = 0;
  for (const auto& s : f.snakes) longest = std::max(longest, s.size());
  Table rows = {{"n", std::to_string(n)},
                {"mode", to_string(mode)},
                {"distinct sets", std::to_string(f.snakes.size())},
                {"largest", std::to_string(longest)},
                {"cache", dir.string()}};
  if (spec.output) {
    write_file(*spec.output, format_snake_file(f));
    rows.push_back({"written", spec.output->string()});
  }
  print_table(out, "snakes", rows);
  return kExitOk;
}

int cmd_heatmap(const CommandSpec& spec, std::ostream& out) {
  if (!spec.input) throw UsageError("heatmap needs --input");
  if (!spec.output) throw UsageError("heatmap needs --output");
  if (spec.format != "csv" && spec.format != "svg") throw UsageError("--format must be csv or svg");
  const std::string text = read_file(*spec.input);
  std::string rendered;
  std::string source;
  if (text.rfind("s_index,t_index,value", 0) == 0) {
    DualDensity d = parse_dual_density_csv(text);
    rendered = spec.format == "csv" ? heatmap_csv(d) : heatmap_svg(d);
    source = "dual density " + std::to_string(d.grid()) + " x " + std::to_string(d.grid());
  } else {
    BoundCertificate cert;
    try {
      cert = certificate_from_json(nlohmann::json::parse(text));
    } catch (const nlohmann::json::exception& e) {
      throw UsageError(std::string("not a certificate or dual density: ") + e.what());
    }
    if (!cert.weights) throw UsageError("certificate carries no weights");
    rendered = spec.format == "csv" ? heatmap_csv(*cert.weights) : heatmap_svg(*cert.weights);
    source = "weights n = " + std::to_string(cert.n);
  }
  write_file(*spec.output, rendered);
  print_table(out, "heatmap", {{"source", source}, {"format", spec.format}, {"written", spec.output->string()}});
  return kExitOk;
}

int cmd_verify_cert(const CommandSpec& spec, std::ostream& out) {
  if (!spec.input) throw UsageError("verify-cert needs --input");
  BoundCertificate cert = certificate_roundtrip(*spec.input);
  print_table(out, "certificate verified",
              {{"n", std::to_string(cert.n)},
               {"kind", to_string(cert.kind)},
               {"bound", exact(cert.bound)},
               {"generator", cert.generator}});
  return kExitOk;
}

}  // namespace

std::string heatmap_csv(const WeightGrid& grid) {
  std::string out = "i,j,value\n";
  const int n = grid.n();
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      out += std::to_string(i) + "," + std::to_string(j) + "," + to_decimal(grid.at({i, j}), 12) + "\n";
  return out;
}

std::string heatmap_csv(const DualDensity& grid) {
  if (grid.is_analytic()) throw std::invalid_argument("heatmaps need a grid density");
  std::string out = "i,j,value\n";
  const int m = grid.grid();
  char buf[96];
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= m; ++j) {
      std::snprintf(buf, sizeof buf, "%d,%d,%.12f\n", i, j, grid.values()[static_cast<std::size_t>(i - 1) * m + (j - 1)]);
      out += buf;
    }
  return out;
}

std::string heatmap_svg(const WeightGrid& grid) { return svg_grid(grid.n(), grid.to_doubles()); }

std::string heatmap_svg(const DualDensity& grid) {
  if (grid.is_analytic()) throw std::invalid_argument("heatmaps need a grid density");
  return svg_grid(grid.grid(), grid.values());
}

BoundCertificate certificate_roundtrip(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw CertificateError(CertificateError::Kind::parse, "cannot read " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(f);
  } catch (const nlohmann::json::exception& e) {
    throw CertificateError(CertificateError::Kind::parse, e.what());
  }
  BoundCertificate cert = certificate_from_json(j);
  validate_certificate(cert);
  return cert;
}

std::optional<int> parse_command_line(int argc, const char* const* argv, CommandSpec& spec, std::ostream& out,
                                      std::ostream& err) {
  CLI::App app{"Bounds for covering the cells of an n x n board by lines"};
  app.require_subcommand(1);
  unsigned threads = 0;
  app.add_option("--threads", threads, "worker threads (default: all cores)")->check(CLI::PositiveNumber);
  std::string cache;
  app.add_option("--cache", cache, "snake cache directory (default: $PLANKLINE_CACHE)");

  auto add_n = [&](CLI::App* c) {
    c->add_option("-n,--n", spec.n, "board size");
  };
  auto add_mode = [&](CLI::App* c) {
    c->add_option("--mode", spec.mode, "pierce or hit")->check(CLI::IsMember({"pierce", "hit"}));
  };
  auto add_output = [&](CLI::App* c) { c->add_option("-o,--output", spec.output, "output file"); };

  auto* bound = app.add_subcommand("bound", "certified LP lower bound");
  add_n(bound);
  bound->add_option("--tolerance", spec.tolerance, "separation tolerance")->check(CLI::PositiveNumber);
  add_output(bound);

  auto* ex = app.add_subcommand("exact", "exact minimum cover by exhaustive search");
  add_n(ex);
  add_mode(ex);
  ex->add_flag("--force", spec.force, "run above the size guard");
  add_output(ex);

  auto* search = app.add_subcommand("search", "decide whether k lines cover the board");
  add_n(search);
  add_mode(search);
  search->add_option("-k,--k", spec.k, "number of lines");
  search->add_flag("--force", spec.force, "run above the size guard");
  add_output(search);

  auto* construct = app.add_subcommand("construct", "explicit covering family");
  add_n(construct);
  add_mode(construct);
  construct->add_flag("--verify", spec.verify, "check coverage exactly");
  add_output(construct);

  auto* cd = app.add_subcommand("check-density", "line integrals of a primal density");
  cd->add_option("--builtin", spec.builtin, "mu1 or mu2");
  cd->add_option("--input", spec.input, "density JSON file");
  cd->add_option("--grid", spec.grid, "scan grid for the maximum");
  add_n(cd);
  add_output(cd);

  auto* cdd = app.add_subcommand("check-dual-density", "conditions and mass of the dual density");
  cdd->add_option("--gamma", spec.gamma, "gamma");
  cdd->add_option("--epsilon", spec.epsilon, "epsilon");
  cdd->add_option("--grid", spec.grid, "condition sample grid");
  add_n(cdd);

  auto* dlp = app.add_subcommand("dual-lp", "discrete dual density by linear programming");
  dlp->add_option("--grid", spec.grid, "density grid size");
  dlp->add_option("--sample", spec.sample, "sample grid size");
  dlp->add_option("--oversample", spec.oversample, "sample points per sample cell and axis");
  add_output(dlp);

  auto* snakes = app.add_subcommand("snakes", "enumerate and cache snakes");
  add_n(snakes);
  add_mode(snakes);
  add_output(snakes);

  auto* heat = app.add_subcommand("heatmap", "render weights or a grid density");
  heat->add_option("--input", spec.input, "certificate JSON or dual density CSV");
  heat->add_option("--format", spec.format, "csv or svg");
  add_output(heat);

  auto* vc = app.add_subcommand("verify-cert", "re-validate a certificate file");
  vc->add_option("--input", spec.input, "certificate JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kExitInvalid;
  }
  spec.command = app.get_subcommands().front()->get_name();
  if (threads > 0) spec.threads = threads;
  if (!cache.empty()) spec.cache_dir = cache;
  return std::nullopt;
}

int run(const CommandSpec& spec, std::ostream& out, std::ostream& err) {
  try {
    if (spec.threads) {
      if (*spec.threads == 0) throw UsageError("--threads must be positive");
      set_thread_count(*spec.threads);
    }
    if (spec.command == "bound") return cmd_bound(spec, out);
    if (spec.command == "exact") return cmd_exact(spec, out);
    if (spec.command == "search") return cmd_search(spec, out);
    if (spec.command == "construct") return cmd_construct(spec, out);
    if (spec.command == "check-density") return cmd_check_density(spec, out);
    if (spec.command == "check-dual-density") return cmd_check_dual_density(spec, out);
    if (spec.command == "dual-lp") return cmd_dual_lp(spec, out);
    if (spec.command == "snakes") return cmd_snakes(spec, out);
    if (spec.command == "heatmap") return cmd_heatmap(spec, out);
    if (spec.command == "verify-cert") return cmd_verify_cert(spec, out);
    throw UsageError("unknown command '" + spec.command + "'");
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const GuardError& e) {
    err << "guard: " << e.what() << '\n';
    return kExitGuard;
  } catch (const VerificationError& e) {
    err << "verification failed: " << e.what() << '\n';
    return kExitVerification;
  } catch (const CertificateError& e) {
    switch (e.kind()) {
      case CertificateError::Kind::parse:
        err << "certificate parse error: " << e.what() << '\n';
        return kExitInvalid;
      case CertificateError::Kind::version:
        err << "certificate version error: " << e.what() << '\n';
        return kExitInvalid;
      case CertificateError::Kind::validation:
        err << "certificate rejected: " << e.what() << '\n';
        return kExitVerification;
    }
    return kExitVerification;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
}

}  // namespace plankline
