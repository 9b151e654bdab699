#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "plankline/geometry.hpp"
#include "plankline/snakes.hpp"
#include "plankline/weights.hpp"

namespace plankline {

inline constexpr const char* kCertificateVersion = "plankline-certificate-1";

enum class BoundKind { lower, upper };

std::string to_string(BoundKind k);

/// An exactly re-checkable bound on the number of lines needed for an n x n board.
/// Lower bounds carry dual weights whose every snake sums to at most 1; upper
/// bounds carry a line family covering every cell in the given mode.
struct BoundCertificate {
  std::string version = kCertificateVersion;
  int n = 0;
  BoundKind kind = BoundKind::lower;
  Rational bound = 0;
  std::optional<WeightGrid> weights;
  CoverMode mode = CoverMode::pierce;
  std::vector<PerturbedLine> lines;
  std::string generator;
  /// Heaviest snake under `weights` (lower bounds only).
  Rational worst_sum = 0;
  /// False when the producing run stopped early; the bound is still valid.
  bool converged = true;

  bool operator==(const BoundCertificate& o) const;
};

/// Scales the weights into exact feasibility: bound = total / max(worst_sum, 1).
BoundCertificate certify_dual_weights(const Board& board, const WeightGrid& weights,
                                      const std::string& generator = "certify_dual_weights");

/// Upper bound |lines|. Throws std::runtime_error if the lines leave a cell uncovered.
BoundCertificate certify_cover(const Board& board, CoverMode mode, std::vector<PerturbedLine> lines,
                               const std::string& generator);

class CertificateError : public std::runtime_error {
 public:
  enum class Kind { parse, version, validation };
  CertificateError(Kind k, const std::string& what) : std::runtime_error(what), kind_(k) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Recomputes everything the certificate claims. Throws CertificateError(validation).
void validate_certificate(const BoundCertificate& cert);

nlohmann::json to_json(const BoundCertificate& cert);
/// Throws CertificateError(parse) on malformed input and (version) on unknown versions.
BoundCertificate certificate_from_json(const nlohmann::json& j);

nlohmann::json line_to_json(const PerturbedLine& l);
PerturbedLine line_from_json(const nlohmann::json& j);

}  // namespace plankline
