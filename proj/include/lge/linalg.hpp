#pragma once

// Exact rational and floating-point linear algebra helpers shared by every
// module. Exact routines work on QMatrix (row-major, GMP rationals); float
// routines work on Eigen::MatrixXd with a relative singular-value threshold.

#include <Eigen/Dense>
#include <boost/multiprecision/gmp.hpp>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace lge {

using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;
using QVector = std::vector<Rational>;

/// Parse "p", "p/q" or a decimal literal into an exact rational.
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& q);
Rational rational_from_double(double x);

class QMatrix {
public:
  QMatrix() = default;
  QMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static QMatrix identity(std::size_t n);
  static QMatrix from_columns(const std::vector<QVector>& columns, std::size_t rows);
  static QMatrix from_double(const Eigen::MatrixXd& m);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  QVector column(std::size_t j) const;
  std::vector<QVector> columns() const;
  QMatrix transpose() const;
  Eigen::MatrixXd to_double() const;
  bool is_zero() const;

  friend QMatrix operator*(const QMatrix& a, const QMatrix& b);
  friend QMatrix operator+(const QMatrix& a, const QMatrix& b);
  friend QMatrix operator-(const QMatrix& a, const QMatrix& b);
  friend bool operator==(const QMatrix& a, const QMatrix& b) = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

QVector operator*(const QMatrix& a, const QVector& v);
QMatrix power(const QMatrix& a, unsigned exponent);

struct RowEchelon {
  QMatrix reduced;
  std::vector<std::size_t> pivots;
};

/// Reduced row echelon form over Q.
RowEchelon rref(QMatrix m);
std::size_t rank(const QMatrix& m);
/// Basis of {x : m x = 0}.
std::vector<QVector> kernel(const QMatrix& m);
/// Some solution of m x = b, or nullopt when inconsistent.
std::optional<QVector> solve(const QMatrix& m, const QVector& b);
/// Maximal linearly independent subset of the given vectors, reduced.
std::vector<QVector> span_basis(const std::vector<QVector>& vectors, std::size_t ambient);
bool in_span(const std::vector<QVector>& basis, const QVector& v, std::size_t ambient);
bool is_zero(const QVector& v);
Eigen::VectorXd to_double(const QVector& v);

/// Scale a rational vector to a primitive integer vector.
std::vector<Integer> primitive_integer(const QVector& v);
/// Z-basis of {x in Z^n : m x = 0} (a saturated lattice).
std::vector<std::vector<Integer>> integer_kernel(const QMatrix& m);

// ---- polynomials ------------------------------------------------------

/// Rational polynomial, coefficients lowest degree first.
using QPoly = std::vector<Rational>;

void poly_trim(QPoly& p);
QPoly poly_mod(QPoly a, const QPoly& b);
QPoly poly_gcd(QPoly a, QPoly b);
/// Exact quotient a / b.
QPoly poly_div(QPoly a, const QPoly& b);
QPoly poly_derivative(const QPoly& p);
QPoly monic(QPoly p);
QPoly minimal_polynomial(const QMatrix& m);
/// Faddeev-LeVerrier, monic.
QPoly characteristic_polynomial(const QMatrix& a);
/// Yun decomposition p = prod f_i^i, f_i squarefree, monic and coprime.
std::vector<std::pair<QPoly, std::size_t>> squarefree_factors(const QPoly& p);
/// Roots of a squarefree polynomial from its companion matrix.
Eigen::VectorXcd simple_roots(const QPoly& p);

// ---- floating point ----------------------------------------------------

struct NumericOptions {
  /// Singular values below rank_tol * sigma_max count as zero.
  double rank_tol = 1e-9;
};

std::size_t numeric_rank(const Eigen::MatrixXd& m, const NumericOptions& opt = {});
/// Orthonormal basis (columns) of the column span.
Eigen::MatrixXd orthonormal_span(const Eigen::MatrixXd& m, const NumericOptions& opt = {});
/// Orthonormal basis (columns) of the null space.
Eigen::MatrixXd null_space(const Eigen::MatrixXd& m, const NumericOptions& opt = {});
Eigen::MatrixXd hconcat(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);
Eigen::MatrixXd matrix_power(const Eigen::MatrixXd& m, unsigned exponent);

}  // namespace lge
