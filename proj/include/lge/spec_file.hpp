#pragma once

// JSON spec files: one document bundles the algebra, the endomorphism, the
// group model and optional estimator parameters.

#include "lge/bowen.hpp"
#include "lge/group_model.hpp"

#include <json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lge {

struct SpecFile {
  std::string name;
  std::string description;
  std::vector<std::string> basis;
  /// Bracket table exactly as listed in the file.
  std::vector<BracketEntry> brackets;
  LieAlgebra algebra;
  QMatrix matrix;
  MapKind kind = MapKind::Automorphism;
  GroupSpec group;
  std::optional<EstimatorParams> estimator;

  Endomorphism endomorphism() const { return Endomorphism::from_exact(matrix); }
};

/// Parse failure with a location: a byte offset for syntax errors, a JSON
/// pointer for structural ones.
class SpecParseError : public std::runtime_error {
public:
  SpecParseError(const std::string& message, std::string pointer, std::optional<std::size_t> offset = std::nullopt);
  const std::string& pointer() const { return pointer_; }
  std::optional<std::size_t> offset() const { return offset_; }

private:
  std::string pointer_;
  std::optional<std::size_t> offset_;
};

SpecFile parse_spec(const std::string& text);
SpecFile load_spec(const std::string& path);
nlohmann::json spec_to_json(const SpecFile& spec);
/// Sorted keys, two-space indent, trailing newline.
std::string canonical_json(const SpecFile& spec);

bool operator==(const SpecFile& a, const SpecFile& b);

nlohmann::json rational_to_json(const Rational& q);

}  // namespace lge
