#pragma once

// Finitely described Lie group models over a Lie algebra: tori, simply
// connected groups, quotients by a central lattice and radical-Levi products,
// plus the toral pieces the entropy rules reduce to.

#include "lge/spectral.hpp"

#include <string>
#include <vector>

namespace lge {

enum class GroupModel { Torus, SimplyConnected, CentralQuotient, RadicalLeviProduct };
enum class MapKind { Automorphism, Endomorphism };

struct GroupFlags {
  bool simply_connected = false;
  bool solvable = false;
  bool finite_semisimple_center = false;
  bool harish_chandra_reductive = false;
  bool g_zero_compact = false;
  /// Finite center of G itself; the hypothesis of the simply connected
  /// zero-entropy rule.
  bool finite_center = false;

  friend bool operator==(const GroupFlags&, const GroupFlags&) = default;
};

struct GroupSpec {
  LieAlgebra algebra;
  GroupModel model = GroupModel::SimplyConnected;
  /// Lattice generators in algebra coordinates; the group is the simply
  /// connected group modulo the subgroup they generate.
  std::vector<QVector> lattice;
  GroupFlags flags;
  std::optional<QSubspace> declared_levi;

  friend bool operator==(const GroupSpec&, const GroupSpec&) = default;
};

struct ValidationReport {
  std::vector<std::string> errors;
  bool valid() const { return errors.empty(); }
};

/// Integer matrix acting on integer coordinates of a subtorus.
using IntMatrix = std::vector<std::vector<Integer>>;

struct TorusBlock {
  std::size_t rank = 0;
  IntMatrix induced;             // rank x rank, column j = image of generator j
  std::vector<QVector> generators;  // algebra coordinates

  Eigen::MatrixXd induced_double() const;
};

struct RadicalRestriction {
  QSubspace basis;
  LieAlgebra algebra;
  Endomorphism phi;
};

ValidationReport validate_group_spec(const GroupSpec& spec, const Endomorphism& phi,
                                     MapKind kind = MapKind::Automorphism);

/// Full lattice block with the integer matrix phi induces on it.
/// Throws std::invalid_argument when phi does not preserve the lattice.
TorusBlock toral_component(const GroupSpec& spec, const Endomorphism& phi);

/// Smallest rational phi-invariant subtorus of the toral component that
/// contains every eigendirection with |lambda| > 1.
TorusBlock unstable_toral_part(const GroupSpec& spec, const Endomorphism& phi);
TorusBlock unstable_block(const TorusBlock& block);

/// phi restricted to rad(g). Throws std::runtime_error when the radical is
/// not invariant.
RadicalRestriction radical_restriction(const GroupSpec& spec, const Endomorphism& phi);
/// The radical as a group model of its own: lattice carried over, model
/// simply connected when no lattice remains.
GroupSpec radical_model(const GroupSpec& spec, const RadicalRestriction& rad);

/// Exact characteristic polynomial, lowest degree first, monic.
std::vector<Integer> characteristic_polynomial(const IntMatrix& m);
/// Monic irreducible factors over Q with multiplicities.
std::vector<std::pair<std::vector<Integer>, std::size_t>> factor_integer_polynomial(const std::vector<Integer>& p);

std::string to_string(GroupModel m);
std::optional<GroupModel> parse_group_model(const std::string& name);

}  // namespace lge
