#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "plankline/certificate.hpp"
#include "plankline/dualdensity.hpp"
#include "plankline/weights.hpp"

namespace plankline {

enum ExitCode : int { kExitOk = 0, kExitInvalid = 1, kExitVerification = 2, kExitGuard = 3 };

/// A parsed command line. Unset optionals fall back to per-command defaults.
struct CommandSpec {
  std::string command;
  std::optional<int> n;
  std::string mode = "pierce";
  std::optional<int> k;
  double gamma = 0.746;
  double epsilon = 1e-4;
  std::optional<int> grid;
  std::optional<int> sample;
  int oversample = 1;
  double tolerance = 1e-9;
  std::optional<std::filesystem::path> output;
  std::optional<std::filesystem::path> input;
  std::optional<unsigned> threads;
  std::optional<std::filesystem::path> cache_dir;
  std::string builtin;
  std::string format = "csv";
  bool verify = false;
  bool force = false;
};

/// Parses argv into `spec`. Returns an exit code when the program should stop
/// (help requested or a parse error, already reported on `err`).
std::optional<int> parse_command_line(int argc, const char* const* argv, CommandSpec& spec, std::ostream& out,
                                      std::ostream& err);

/// Dispatches one subcommand, writing artifacts to disk and a summary to `out`.
int run(const CommandSpec& spec, std::ostream& out, std::ostream& err);

/// Rows "i,j,value" after an "i,j,value" header, i major, values with 12 decimals
/// rounded exactly from the rational weight.
std::string heatmap_csv(const WeightGrid& grid);
/// Rows "i,j,value" with i along s and j along t.
std::string heatmap_csv(const DualDensity& grid);
/// Filled squares, cell (i, j) at column i and row j counted upward, on a linear
/// ramp from light (smallest value) to dark (largest).
std::string heatmap_svg(const WeightGrid& grid);
std::string heatmap_svg(const DualDensity& grid);

/// Reads, parses and re-validates a certificate file. Throws CertificateError
/// whose kind tells a parse error, a version mismatch and a failed check apart.
BoundCertificate certificate_roundtrip(const std::filesystem::path& path);

}  // namespace plankline
