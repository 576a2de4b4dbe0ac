#pragma once

// Generalized eigenspaces of a Lie algebra endomorphism and the seven dynamic
// subalgebras built from them, together with the checks that certify their
// grading, invariance and growth behaviour.

#include "lge/algebra.hpp"

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace lge {

struct Endomorphism {
  Eigen::MatrixXd matrix;
  /// Exact entries when the source provided them (always set by the spec file reader).
  std::optional<QMatrix> exact;

  static Endomorphism from_exact(const QMatrix& m) { return {m.to_double(), m}; }
  static Endomorphism from_double(const Eigen::MatrixXd& m) { return {m, std::nullopt}; }
  std::size_t dim() const { return static_cast<std::size_t>(matrix.rows()); }
};

enum class Stability { Unstable, Central, Stable, Kernel };

struct EigenClass {
  /// Representative eigenvalue; for a conjugate pair the one with positive
  /// imaginary part.
  std::complex<double> value;
  bool conjugate_pair = false;
  double modulus = 0.0;
  /// Real dimension of the class (doubled for conjugate pairs).
  std::size_t multiplicity = 0;
  Eigen::MatrixXd real_subspace;  // orthonormal columns
  Stability stability = Stability::Central;
};

struct SpectralOptions {
  NumericOptions numeric;
  /// |alpha| within this band of 1 is classified as central.
  double unit_band = 1e-9;
  /// Eigenvalues closer than this (relative) belong to one class.
  double cluster_tol = 1e-5;
};

struct SpectralDecomposition {
  std::vector<EigenClass> classes;
  Eigen::MatrixXd g_phi, k_phi, g_plus, g_zero, g_minus, g_plus_zero, g_minus_zero;

  std::size_t dim_of(const Eigen::MatrixXd& v) const { return static_cast<std::size_t>(v.cols()); }
};

struct HomomorphismViolation {
  std::size_t i = 0;
  std::size_t j = 0;
  double defect = 0.0;
};

struct HomomorphismReport {
  std::vector<HomomorphismViolation> violations;
  bool valid() const { return violations.empty(); }
};

struct GradingViolation {
  std::size_t class_a = 0;
  std::size_t class_b = 0;
  double residual = 0.0;
};

struct GradingReport {
  std::size_t pairs_checked = 0;
  std::vector<GradingViolation> violations;
  bool valid() const { return violations.empty(); }
};

struct GrowthViolation {
  std::string subspace;  // "plus", "minus" or "zero"
  int m = 0;
  double lhs = 0.0;
  double bound = 0.0;
};

struct GrowthBoundReport {
  double c = 1.0;
  double mu = 0.5;
  int max_m = 0;
  std::size_t samples = 0;
  std::vector<GrowthViolation> violations;
  bool valid() const { return violations.empty(); }
};

struct GrowthOptions {
  int max_m = 30;
  std::size_t samples = 50;
  /// Exponent a in |phi^m Z| mu^{a|m|} -> 0 on the central part.
  double central_exponent = 0.1;
  int central_horizon = 200;
  /// Optional fixed witness; fitted when absent.
  std::optional<double> mu;
  std::optional<double> c;
  unsigned seed = 20240611;
};

struct CentralityReport {
  bool applicable = false;
  bool plus_central = true;
  bool minus_central = true;
  bool valid() const { return !applicable || (plus_central && minus_central); }
};

/// Exact when phi carries rational entries; otherwise each defect is
/// compared with tol times the size of phi(e_i), phi(e_j).
HomomorphismReport check_homomorphism(const LieAlgebra& alg, const Endomorphism& phi, double tol = 1e-9);

/// Throws std::runtime_error when the eigen solver fails.
std::vector<EigenClass> generalized_eigenspaces(const Endomorphism& phi, const SpectralOptions& opt = {});

/// Throws std::invalid_argument when phi is not a homomorphism of alg.
SpectralDecomposition dynamic_subalgebras(const LieAlgebra& alg, const Endomorphism& phi,
                                          const SpectralOptions& opt = {});

GradingReport check_grading(const LieAlgebra& alg, const SpectralDecomposition& decomp,
                            const SpectralOptions& opt = {});

GrowthBoundReport check_growth_bounds(const Endomorphism& phi, const SpectralDecomposition& decomp,
                                      const GrowthOptions& opt = {});

bool is_semisimple_endo(const Endomorphism& phi, const SpectralOptions& opt = {});

/// Levi subalgebra mapped onto itself by phi, as orthonormal columns.
std::optional<Eigen::MatrixXd> find_invariant_levi(const LieAlgebra& alg, const Endomorphism& phi,
                                                   const std::optional<QSubspace>& declared = std::nullopt,
                                                   bool allow_correction = true,
                                                   const NumericOptions& opt = {});

/// Killing form negative semidefinite.
bool is_compact_type(const LieAlgebra& alg);
CentralityReport check_compact_centrality(const LieAlgebra& alg, const Endomorphism& phi,
                                          const SpectralDecomposition& decomp, const NumericOptions& opt = {});

/// Column span of phi^d equals g_phi.
bool check_image_identity(const Endomorphism& phi, const SpectralDecomposition& decomp,
                          const NumericOptions& opt = {});
/// g+, g0, g- pairwise intersect trivially.
bool check_trivial_intersections(const SpectralDecomposition& decomp, const NumericOptions& opt = {});
bool is_invariant(const Eigen::MatrixXd& phi, const Eigen::MatrixXd& subspace, const NumericOptions& opt = {});

std::string to_string(Stability s);

}  // namespace lge
