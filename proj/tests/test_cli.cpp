#include "doctest.h"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "plankline/cli.hpp"
#include "plankline/parallel.hpp"

using namespace plankline;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("plankline-cli-" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

struct Outcome {
  int code;
  std::string out, err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "plankline");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  CommandSpec spec;
  if (auto code = parse_command_line(static_cast<int>(argv.size()), argv.data(), spec, out, err))
    return {*code, out.str(), err.str()};
  int code = run(spec, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

void spit(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

int count_lines(const std::string& s) { return static_cast<int>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("bound writes a certificate that verifies") {
  TempDir tmp;
  auto cert = tmp.path / "b2.json";
  Outcome r = invoke({"bound", "--n", "2", "-o", cert.string()});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("4/3") != std::string::npos);
  REQUIRE(fs::exists(cert));
  CHECK(invoke({"verify-cert", "--input", cert.string()}).code == kExitOk);
  BoundCertificate c = certificate_roundtrip(cert);
  CHECK(c.bound == make_rational(4, 3));
  CHECK(c.n == 2);
}

TEST_CASE("construct and check-density examples") {
  TempDir tmp;
  auto fam = tmp.path / "f.json";
  Outcome r = invoke({"construct", "--n", "10", "--mode", "pierce", "--verify", "-o", fam.string()});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("lines            9") != std::string::npos);
  CHECK(nlohmann::json::parse(slurp(fam))["lines"].size() == 9);

  Outcome d = invoke({"check-density", "--builtin", "mu1", "--grid", "200"});
  CHECK(d.code == kExitOk);
  CHECK(d.out.find("max line integral  1.000000") != std::string::npos);
  CHECK(d.out.find("area               1.333333") != std::string::npos);
}

TEST_CASE("exit codes") {
  TempDir tmp;
  CHECK(invoke({}).code == kExitInvalid);
  CHECK(invoke({"bound"}).code == kExitInvalid);
  CHECK(invoke({"bound", "--n", "0"}).code == kExitInvalid);
  CHECK(invoke({"exact", "--n", "3", "--mode", "sideways"}).code == kExitInvalid);
  CHECK(invoke({"check-density"}).code == kExitInvalid);
  CHECK(invoke({"check-density", "--builtin", "mu7"}).code == kExitInvalid);
  CHECK(invoke({"check-dual-density", "--gamma", "2"}).code == kExitInvalid);
  CHECK(invoke({"dual-lp", "--grid", "2"}).code == kExitInvalid);
  CHECK(invoke({"search", "--n", "4"}).code == kExitInvalid);
  CHECK(invoke({"heatmap", "--input", (tmp.path / "missing.json").string(), "-o", "x.csv"}).code == kExitInvalid);
  // Resource guards.
  CHECK(invoke({"exact", "--n", "8"}).code == kExitGuard);
  CHECK(invoke({"search", "--n", "9", "--k", "7"}).code == kExitGuard);
}

TEST_CASE("exact and search") {
  TempDir tmp;
  Outcome e = invoke({"exact", "--n", "4", "-o", (tmp.path / "w.json").string()});
  CHECK(e.code == kExitOk);
  CHECK(e.out.find("minimum  3") != std::string::npos);
  CHECK(certificate_roundtrip(tmp.path / "w.json").bound == 3);
  Outcome s = invoke({"search", "--n", "3", "--k", "1", "--mode", "hit"});
  CHECK(s.code == kExitOk);
  CHECK(s.out.find("feasible  no") != std::string::npos);
}

TEST_CASE("certificate round trip rejects tampering") {
  TempDir tmp;
  auto cert = tmp.path / "b3.json";
  REQUIRE(invoke({"bound", "--n", "3", "-o", cert.string()}).code == kExitOk);
  nlohmann::json j = nlohmann::json::parse(slurp(cert));

  SUBCASE("bound edited upward") {
    Rational b = parse_rational(j["bound"].get<std::string>()) + 1;
    j["bound"] = to_string(b);
    spit(cert, j.dump());
    try {
      certificate_roundtrip(cert);
      FAIL("accepted");
    } catch (const CertificateError& e) {
      CHECK(e.kind() == CertificateError::Kind::validation);
    }
    CHECK(invoke({"verify-cert", "--input", cert.string()}).code == kExitVerification);
  }
  SUBCASE("unknown version") {
    j["version"] = "plankline-certificate-0";
    spit(cert, j.dump());
    try {
      certificate_roundtrip(cert);
      FAIL("accepted");
    } catch (const CertificateError& e) {
      CHECK(e.kind() == CertificateError::Kind::version);
    }
    Outcome r = invoke({"verify-cert", "--input", cert.string()});
    CHECK(r.code == kExitInvalid);
    CHECK(r.err.find("version") != std::string::npos);
  }
  SUBCASE("not JSON") {
    spit(cert, "{ nope");
    try {
      certificate_roundtrip(cert);
      FAIL("accepted");
    } catch (const CertificateError& e) {
      CHECK(e.kind() == CertificateError::Kind::parse);
    }
    Outcome r = invoke({"verify-cert", "--input", cert.string()});
    CHECK(r.code == kExitInvalid);
    CHECK(r.err.find("parse") != std::string::npos);
  }
}

TEST_CASE("heatmaps") {
  TempDir tmp;
  WeightGrid g(2, make_rational(1, 3));
  std::string csv = heatmap_csv(g);
  CHECK(count_lines(csv) == 5);
  CHECK(csv == "i,j,value\n1,1,0.333333333333\n1,2,0.333333333333\n2,1,0.333333333333\n2,2,0.333333333333\n");

  WeightGrid ramp(3);
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j) ramp.set({i, j}, make_rational(i + j, 7));
  std::string svg = heatmap_svg(ramp);
  CHECK(svg == heatmap_svg(ramp));
  CHECK(svg.rfind("<svg", 0) == 0);
  std::size_t rects = 0;
  for (std::size_t p = svg.find("<rect"); p != std::string::npos; p = svg.find("<rect", p + 1)) ++rects;
  CHECK(rects == 9);
  // Largest value darkest, smallest lightest; cell (3,3) sits at the top right.
  CHECK(svg.find("<rect x=\"20\" y=\"0\" width=\"10\" height=\"10\" fill=\"#08306b\"/>") != std::string::npos);
  CHECK(svg.find("<rect x=\"0\" y=\"20\" width=\"10\" height=\"10\" fill=\"#f7fbff\"/>") != std::string::npos);

  auto cert = tmp.path / "b4.json";
  REQUIRE(invoke({"bound", "--n", "4", "-o", cert.string()}).code == kExitOk);
  auto a = tmp.path / "a.svg", b = tmp.path / "b.svg";
  CHECK(invoke({"heatmap", "--input", cert.string(), "--format", "svg", "-o", a.string()}).code == kExitOk);
  CHECK(invoke({"heatmap", "--input", cert.string(), "--format", "svg", "-o", b.string()}).code == kExitOk);
  CHECK(slurp(a) == slurp(b));
  CHECK(invoke({"heatmap", "--input", cert.string(), "--format", "png", "-o", a.string()}).code == kExitInvalid);
  CHECK(invoke({"heatmap", "--input", cert.string(), "-o", (tmp.path / "no" / "dir.csv").string()}).code == kExitInvalid);

  auto dens = tmp.path / "d.csv";
  REQUIRE(invoke({"dual-lp", "--grid", "6", "-o", dens.string()}).code == kExitOk);
  auto dcsv = tmp.path / "d-heat.csv";
  CHECK(invoke({"heatmap", "--input", dens.string(), "-o", dcsv.string()}).code == kExitOk);
  CHECK(count_lines(slurp(dcsv)) == 37);
}

TEST_CASE("snakes use the cache directory from the environment") {
  TempDir tmp;
  ::setenv("PLANKLINE_CACHE", tmp.path.string().c_str(), 1);
  Outcome r = invoke({"snakes", "--n", "3"});
  ::unsetenv("PLANKLINE_CACHE");
  CHECK(r.code == kExitOk);
  CHECK(fs::exists(tmp.path / "snakes-pierce-n3.txt"));
  auto other = tmp.path / "other";
  CHECK(invoke({"--cache", other.string(), "snakes", "--n", "3", "--mode", "hit"}).code == kExitOk);
  CHECK(fs::exists(other / "snakes-hit-n3.txt"));
}

TEST_CASE("thread count flag") {
  const unsigned before = thread_count();
  CHECK(invoke({"--threads", "2", "check-dual-density", "--grid", "10"}).code == kExitOk);
  CHECK(thread_count() == 2);
  set_thread_count(before);
  CHECK(invoke({"--threads", "0", "bound", "--n", "2"}).code == kExitInvalid);
}
