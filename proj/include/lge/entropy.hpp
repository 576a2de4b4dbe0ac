#pragma once

// Certified topological entropy of a Lie group endomorphism: a first-match
// rule chain reducing to the unstable part of a toral component.

#include "lge/group_model.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lge {

enum class CertificateStatus { Exact, LowerBoundOnly, Rejected };

struct RuleApplication {
  std::string rule;
  std::string anchor;
  std::map<std::string, std::size_t> dims;
  std::string note;
};

struct EntropyCertificate {
  CertificateStatus status = CertificateStatus::Rejected;
  std::optional<double> value;
  double lower_bound = 0.0;
  std::vector<RuleApplication> chain;
  std::vector<std::string> diagnostics;
  std::size_t dim_plus = 0;
  std::size_t dim_zero = 0;
  std::size_t dim_minus = 0;
  std::size_t toral_rank = 0;
  std::size_t unstable_toral_rank = 0;
};

/// Sum of log|lambda| over eigenvalues outside the unit circle; exactly 0
/// for a rank 0 block.
double toral_entropy(const TorusBlock& block);

EntropyCertificate entropy_certificate(const GroupSpec& spec, const Endomorphism& phi,
                                       MapKind kind = MapKind::Automorphism,
                                       const std::optional<SpectralDecomposition>& decomp = std::nullopt);

std::string explain_certificate(const EntropyCertificate& cert);
nlohmann::json certificate_to_json(const EntropyCertificate& cert);
std::string to_string(CertificateStatus s);
/// Round to 12 significant digits for reporting.
double round_significant(double x);

}  // namespace lge
