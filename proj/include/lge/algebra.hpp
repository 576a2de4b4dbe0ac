#pragma once

// Finite-dimensional real Lie algebras given by rational structure constants,
// with the structure-theory primitives the rest of the library relies on.

#include "lge/linalg.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace lge {

struct BracketEntry {
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t k = 0;
  Rational coeff;
};

/// Subspace with an exact rational basis.
struct QSubspace {
  std::size_t ambient = 0;
  std::vector<QVector> basis;

  std::size_t rank() const { return basis.size(); }
  Eigen::MatrixXd to_matrix() const;

  friend bool operator==(const QSubspace&, const QSubspace&) = default;
};

class LieAlgebra {
public:
  LieAlgebra() = default;

  /// Build from sparse entries [e_i, e_j] += coeff e_k. An entry with i < j
  /// also fills the antisymmetric slot unless that slot is listed explicitly,
  /// so a hand-written table can be inconsistent; check_jacobi reports that.
  static LieAlgebra from_entries(std::size_t dim, std::vector<std::string> labels,
                                 const std::vector<BracketEntry>& entries);

  std::size_t dim() const { return dim_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const Rational& constant(std::size_t i, std::size_t j, std::size_t k) const {
    return c_[(i * dim_ + j) * dim_ + k];
  }
  /// Nonzero constants with i < j, in canonical order.
  std::vector<BracketEntry> entries() const;
  bool is_abelian() const;

  QVector bracket(const QVector& x, const QVector& y) const;
  Eigen::VectorXd bracket(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;
  /// Matrix of ad X, columns are [X, e_j].
  QMatrix ad(const QVector& x) const;
  Eigen::MatrixXd ad(const Eigen::VectorXd& x) const;

  /// Structure constants of a subalgebra in the given basis; nullopt when
  /// the span is not closed under the bracket.
  std::optional<LieAlgebra> subalgebra(const std::vector<QVector>& basis) const;

  friend bool operator==(const LieAlgebra&, const LieAlgebra&) = default;

private:
  std::size_t dim_ = 0;
  std::vector<std::string> labels_;
  std::vector<Rational> c_;
};

struct JacobiViolation {
  std::array<std::size_t, 3> triple{};
  QVector residual;
  bool antisymmetry = false;  // pair (triple[0], triple[1]) breaks [x,y] = -[y,x]
};

struct JacobiReport {
  std::vector<JacobiViolation> violations;
  bool valid() const { return violations.empty(); }
};

struct StructureReport {
  bool is_solvable = false;
  bool is_nilpotent = false;
  bool is_semisimple = false;
  QSubspace radical;
  std::optional<QSubspace> levi;
  QSubspace center;
  std::vector<std::size_t> derived_series_dims;
  std::vector<std::size_t> lower_central_dims;
};

QVector basis_vector(std::size_t dim, std::size_t i);

QVector bracket(const LieAlgebra& alg, const QVector& x, const QVector& y);
JacobiReport check_jacobi(const LieAlgebra& alg);
QMatrix killing_form(const LieAlgebra& alg);

/// span{[a, b] : a in A, b in B}.
QSubspace bracket_span(const LieAlgebra& alg, const QSubspace& a, const QSubspace& b);
QSubspace whole(const LieAlgebra& alg);
QSubspace derived_algebra(const LieAlgebra& alg);
QSubspace center(const LieAlgebra& alg);
/// Maximal solvable ideal, as the Killing-orthogonal of [g, g].
QSubspace radical(const LieAlgebra& alg);

bool is_subalgebra(const LieAlgebra& alg, const QSubspace& v);
bool is_subalgebra(const LieAlgebra& alg, const Eigen::MatrixXd& basis, const NumericOptions& opt = {});
bool is_ideal(const LieAlgebra& alg, const QSubspace& v);
bool is_solvable(const LieAlgebra& alg);
bool is_nilpotent(const LieAlgebra& alg);
std::vector<std::size_t> derived_series_dims(const LieAlgebra& alg);
std::vector<std::size_t> lower_central_dims(const LieAlgebra& alg);

/// True when s is a subalgebra, s + rad = g with trivial intersection and the
/// Killing form of s itself is nondegenerate.
bool is_levi_complement(const LieAlgebra& alg, const QSubspace& s, const QSubspace& rad);

/// Levi subalgebra: verified declared candidate if given, else lifted from a
/// complement of the radical level by level through its derived series.
std::optional<QSubspace> levi_subalgebra(const LieAlgebra& alg,
                                         const std::optional<QSubspace>& declared = std::nullopt);

/// Lift a complement of the radical to a Levi subalgebra that is also
/// invariant under phi; float arithmetic, nullopt when some level has no
/// solution within tolerance.
std::optional<Eigen::MatrixXd> invariant_levi_lift(const LieAlgebra& alg, const Eigen::MatrixXd& phi,
                                                   const NumericOptions& opt = {});

StructureReport structure_report(const LieAlgebra& alg,
                                 const std::optional<QSubspace>& declared_levi = std::nullopt);

namespace catalog {
LieAlgebra abelian(std::size_t n);
LieAlgebra heisenberg();
LieAlgebra sl2();
LieAlgebra so3();
/// sl2 acting on R^2 by its standard representation: basis h, e, f, v1, v2.
LieAlgebra sl2_semidirect_r2();
/// R^n (central) plus sl2, basis z1..zn, h, e, f.
LieAlgebra abelian_plus_sl2(std::size_t n);
/// R^n (central) plus so3.
LieAlgebra abelian_plus_so3(std::size_t n);
}  // namespace catalog

}  // namespace lge
