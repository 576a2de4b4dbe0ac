#pragma once

// Command implementations behind the lge executable. Each returns the
// process exit status.

#include "lge/entropy.hpp"
#include "lge/spec_file.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace lge {

namespace exit_code {
constexpr int ok = 0;
constexpr int invalid = 1;
constexpr int lower_bound_only = 2;
constexpr int unreliable = 3;
constexpr int parse_error = 64;
}  // namespace exit_code

struct CliOptions {
  std::string format = "text";  // "text" or "json"
  std::optional<int> n;
  std::optional<std::vector<double>> eps;
  std::optional<std::size_t> grid;
  std::optional<double> tol_rank;
  /// estimate: CSV destination; other commands: report destination.
  std::optional<std::string> out;
  double compare_tolerance = 0.1;
};

int cmd_check(const std::string& path, const CliOptions& opt, std::ostream& out, std::ostream& err);
int cmd_decompose(const std::string& path, const CliOptions& opt, std::ostream& out, std::ostream& err);
int cmd_entropy(const std::string& path, const CliOptions& opt, std::ostream& out, std::ostream& err);
int cmd_estimate(const std::string& path, const CliOptions& opt, std::ostream& out, std::ostream& err);
int cmd_compare(const std::string& path, const CliOptions& opt, std::ostream& out, std::ostream& err);

/// Estimator parameters: spec block, then command-line overrides.
EstimatorParams resolve_estimator(const SpecFile& spec, const CliOptions& opt);

/// Numeric estimate for the compact part a spec certifies: the torus itself,
/// the toral block of a central quotient (plus the compactified complement
/// for abelian algebras), or the compactified map of a simply connected
/// nilpotent group. Throws std::invalid_argument otherwise.
EstimateResult estimate_spec(const SpecFile& spec, const EstimatorParams& params);

}  // namespace lge
