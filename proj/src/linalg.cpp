#include "lge/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lge {

Rational parse_rational(const std::string& text) {
  auto trimmed = text;
  trimmed.erase(0, trimmed.find_first_not_of(" \t"));
  trimmed.erase(trimmed.find_last_not_of(" \t") + 1);
  if (trimmed.empty()) throw std::invalid_argument("empty rational literal");
  if (trimmed.find_first_of(".eE") != std::string::npos) {
    // Decimal literal: read it exactly as a base-10 fraction.
    std::string mantissa = trimmed;
    long exponent = 0;
    if (auto e = trimmed.find_first_of("eE"); e != std::string::npos) {
      mantissa = trimmed.substr(0, e);
      exponent = std::stol(trimmed.substr(e + 1));
    }
    std::string digits;
    long frac_digits = 0;
    bool after_point = false;
    for (char c : mantissa) {
      if (c == '.') {
        after_point = true;
      } else {
        digits.push_back(c);
        if (after_point && c != '-' && c != '+') ++frac_digits;
      }
    }
    if (digits.empty() || digits == "-" || digits == "+")
      throw std::invalid_argument("bad decimal literal: " + text);
    if (digits.front() == '+') digits.erase(0, 1);
    Rational value{Integer(digits)};
    const long shift = exponent - frac_digits;
    Integer ten_pow = 1;
    for (long i = 0; i < std::labs(shift); ++i) ten_pow *= 10;
    return shift >= 0 ? value * Rational(ten_pow) : value / Rational(ten_pow);
  }
  try {
    auto slash = trimmed.find('/');
    std::string num = trimmed.substr(0, slash);
    if (!num.empty() && num.front() == '+') num.erase(0, 1);
    if (slash == std::string::npos) return Rational(Integer(num));
    Integer den(trimmed.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in " + text);
    return Rational(Integer(num), den);
  } catch (const std::runtime_error&) {
    throw std::invalid_argument("bad rational literal: " + text);
  }
}

std::string to_string(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("non-finite matrix entry");
  return Rational(x);
}

// ---- QMatrix ------------------------------------------------------------

QMatrix QMatrix::identity(std::size_t n) {
  QMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

QMatrix QMatrix::from_columns(const std::vector<QVector>& columns, std::size_t rows) {
  QMatrix m(rows, columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].size() != rows) throw std::invalid_argument("column length mismatch");
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = columns[j][i];
  }
  return m;
}

QMatrix QMatrix::from_double(const Eigen::MatrixXd& m) {
  QMatrix q(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) q(i, j) = rational_from_double(m(i, j));
  return q;
}

QVector QMatrix::column(std::size_t j) const {
  QVector v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

std::vector<QVector> QMatrix::columns() const {
  std::vector<QVector> out;
  out.reserve(cols_);
  for (std::size_t j = 0; j < cols_; ++j) out.push_back(column(j));
  return out;
}

QMatrix QMatrix::transpose() const {
  QMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Eigen::MatrixXd QMatrix::to_double() const {
  Eigen::MatrixXd m(rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j).convert_to<double>();
  return m;
}

bool QMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Rational& q) { return q == 0; });
}

QMatrix operator*(const QMatrix& a, const QMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix product dimension mismatch");
  QMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
    }
  return c;
}

QMatrix operator+(const QMatrix& a, const QMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("shape mismatch");
  QMatrix c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) += b(i, j);
  return c;
}

QMatrix operator-(const QMatrix& a, const QMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("shape mismatch");
  QMatrix c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) -= b(i, j);
  return c;
}

QVector operator*(const QMatrix& a, const QVector& v) {
  if (a.cols() != v.size()) throw std::invalid_argument("matrix-vector dimension mismatch");
  QVector out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (v[j] != 0) out[i] += a(i, j) * v[j];
  return out;
}

QMatrix power(const QMatrix& a, unsigned exponent) {
  QMatrix result = QMatrix::identity(a.rows());
  QMatrix base = a;
  while (exponent > 0) {
    if (exponent & 1U) result = result * base;
    exponent >>= 1U;
    if (exponent > 0) base = base * base;
  }
  return result;
}

// ---- exact elimination --------------------------------------------------

RowEchelon rref(QMatrix m) {
  RowEchelon out;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t pivot = row;
    while (pivot < m.rows() && m(pivot, col) == 0) ++pivot;
    if (pivot == m.rows()) continue;
    if (pivot != row)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(pivot, j), m(row, j));
    const Rational inv = 1 / m(row, col);
    for (std::size_t j = col; j < m.cols(); ++j) m(row, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || m(i, col) == 0) continue;
      const Rational f = m(i, col);
      for (std::size_t j = col; j < m.cols(); ++j) m(i, j) -= f * m(row, j);
    }
    out.pivots.push_back(col);
    ++row;
  }
  out.reduced = std::move(m);
  return out;
}

std::size_t rank(const QMatrix& m) { return rref(m).pivots.size(); }

std::vector<QVector> kernel(const QMatrix& m) {
  const auto ech = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : ech.pivots) is_pivot[p] = true;
  std::vector<QVector> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    QVector v(m.cols());
    v[free] = 1;
    for (std::size_t r = 0; r < ech.pivots.size(); ++r) v[ech.pivots[r]] = -ech.reduced(r, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<QVector> solve(const QMatrix& m, const QVector& b) {
  if (b.size() != m.rows()) throw std::invalid_argument("rhs dimension mismatch");
  QMatrix aug(m.rows(), m.cols() + 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
    aug(i, m.cols()) = b[i];
  }
  const auto ech = rref(aug);
  if (!ech.pivots.empty() && ech.pivots.back() == m.cols()) return std::nullopt;
  QVector x(m.cols());
  for (std::size_t r = 0; r < ech.pivots.size(); ++r) x[ech.pivots[r]] = ech.reduced(r, m.cols());
  return x;
}

std::vector<QVector> span_basis(const std::vector<QVector>& vectors, std::size_t ambient) {
  if (vectors.empty()) return {};
  QMatrix rows(vectors.size(), ambient);
  for (std::size_t i = 0; i < vectors.size(); ++i)
    for (std::size_t j = 0; j < ambient; ++j) rows(i, j) = vectors[i][j];
  const auto ech = rref(rows);
  std::vector<QVector> basis;
  for (std::size_t r = 0; r < ech.pivots.size(); ++r) {
    QVector v(ambient);
    for (std::size_t j = 0; j < ambient; ++j) v[j] = ech.reduced(r, j);
    basis.push_back(std::move(v));
  }
  return basis;
}

bool in_span(const std::vector<QVector>& basis, const QVector& v, std::size_t ambient) {
  if (is_zero(v)) return true;
  if (basis.empty()) return false;
  return solve(QMatrix::from_columns(basis, ambient), v).has_value();
}

bool is_zero(const QVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& q) { return q == 0; });
}

Eigen::VectorXd to_double(const QVector& v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i].convert_to<double>();
  return out;
}

std::vector<Integer> primitive_integer(const QVector& v) {
  Integer lcm_den = 1;
  for (const auto& q : v) lcm_den = boost::multiprecision::lcm(lcm_den, denominator(q));
  std::vector<Integer> out;
  out.reserve(v.size());
  Integer g = 0;
  for (const auto& q : v) {
    Integer x = numerator(q) * (lcm_den / denominator(q));
    g = boost::multiprecision::gcd(g, x);
    out.push_back(x);
  }
  if (g > 1)
    for (auto& x : out) x /= g;
  return out;
}

std::vector<std::vector<Integer>> integer_kernel(const QMatrix& m) {
  // Column-style Hermite reduction: A U = [H | 0] with U unimodular; the
  // trailing columns of U form a Z-basis of the integer kernel.
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  std::vector<std::vector<Integer>> a(rows, std::vector<Integer>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    QVector row(cols);
    for (std::size_t j = 0; j < cols; ++j) row[j] = m(i, j);
    a[i] = primitive_integer(row);
  }
  std::vector<std::vector<Integer>> u(cols, std::vector<Integer>(cols));
  for (std::size_t i = 0; i < cols; ++i) u[i][i] = 1;

  auto col_axpy = [&](std::size_t dst, std::size_t src, const Integer& f) {
    // column dst -= f * column src
    for (std::size_t i = 0; i < rows; ++i) a[i][dst] -= f * a[i][src];
    for (std::size_t i = 0; i < cols; ++i) u[i][dst] -= f * u[i][src];
  };
  auto col_swap = [&](std::size_t x, std::size_t y) {
    for (std::size_t i = 0; i < rows; ++i) std::swap(a[i][x], a[i][y]);
    for (std::size_t i = 0; i < cols; ++i) std::swap(u[i][x], u[i][y]);
  };

  std::size_t pivot_col = 0;
  for (std::size_t r = 0; r < rows && pivot_col < cols; ++r) {
    while (true) {
      std::size_t best = cols;
      for (std::size_t j = pivot_col; j < cols; ++j) {
        if (a[r][j] == 0) continue;
        if (best == cols || abs(a[r][j]) < abs(a[r][best])) best = j;
      }
      if (best == cols) break;
      col_swap(pivot_col, best);
      bool done = true;
      for (std::size_t j = pivot_col + 1; j < cols; ++j) {
        if (a[r][j] == 0) continue;
        Integer q = a[r][j] / a[r][pivot_col];
        col_axpy(j, pivot_col, q);
        if (a[r][j] != 0) done = false;
      }
      if (done) {
        ++pivot_col;
        break;
      }
    }
  }
  std::vector<std::vector<Integer>> basis;
  for (std::size_t j = pivot_col; j < cols; ++j) {
    std::vector<Integer> v(cols);
    for (std::size_t i = 0; i < cols; ++i) v[i] = u[i][j];
    basis.push_back(std::move(v));
  }
  return basis;
}

// ---- floating point -----------------------------------------------------

namespace {

Eigen::BDCSVD<Eigen::MatrixXd> thin_svd(const Eigen::MatrixXd& m, unsigned options) {
  return Eigen::BDCSVD<Eigen::MatrixXd>(m, options);
}

std::size_t count_above(const Eigen::VectorXd& sv, const NumericOptions& opt) {
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  const double cut = opt.rank_tol * sv(0);
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++r;
  return r;
}

}  // namespace

std::size_t numeric_rank(const Eigen::MatrixXd& m, const NumericOptions& opt) {
  if (m.size() == 0) return 0;
  return count_above(thin_svd(m, 0).singularValues(), opt);
}

Eigen::MatrixXd orthonormal_span(const Eigen::MatrixXd& m, const NumericOptions& opt) {
  if (m.cols() == 0 || m.rows() == 0) return Eigen::MatrixXd(m.rows(), 0);
  auto svd = thin_svd(m, Eigen::ComputeThinU);
  const auto r = static_cast<Eigen::Index>(count_above(svd.singularValues(), opt));
  return svd.matrixU().leftCols(r);
}

Eigen::MatrixXd null_space(const Eigen::MatrixXd& m, const NumericOptions& opt) {
  const Eigen::Index n = m.cols();
  if (m.rows() == 0) return Eigen::MatrixXd::Identity(n, n);
  if (n == 0) return Eigen::MatrixXd(0, 0);
  auto svd = thin_svd(m, Eigen::ComputeFullV);
  const auto r = static_cast<Eigen::Index>(count_above(svd.singularValues(), opt));
  return svd.matrixV().rightCols(n - r);
}

Eigen::MatrixXd hconcat(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const Eigen::Index rows = a.cols() > 0 ? a.rows() : b.rows();
  Eigen::MatrixXd out(rows, a.cols() + b.cols());
  if (a.cols() > 0) out.leftCols(a.cols()) = a;
  if (b.cols() > 0) out.rightCols(b.cols()) = b;
  return out;
}

Eigen::MatrixXd matrix_power(const Eigen::MatrixXd& m, unsigned exponent) {
  Eigen::MatrixXd result = Eigen::MatrixXd::Identity(m.rows(), m.cols());
  for (unsigned i = 0; i < exponent; ++i) result = result * m;
  return result;
}

// ---- polynomials ------------------------------------------------------

void poly_trim(QPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

QPoly poly_mod(QPoly a, const QPoly& b) {
  poly_trim(a);
  while (a.size() >= b.size() && !a.empty()) {
    const Rational f = a.back() / b.back();
    const std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= f * b[i];
    poly_trim(a);
  }
  return a;
}

QPoly poly_gcd(QPoly a, QPoly b) {
  poly_trim(a);
  poly_trim(b);
  while (!b.empty()) {
    auto r = poly_mod(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

QPoly minimal_polynomial(const QMatrix& m) {
  const std::size_t n = m.rows();
  std::vector<QVector> powers;
  QMatrix p = QMatrix::identity(n);
  auto vec = [n](const QMatrix& x) {
    QVector v(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) v[i * n + j] = x(i, j);
    return v;
  };
  for (std::size_t k = 0; k <= n; ++k) {
    const auto v = vec(p);
    if (!powers.empty()) {
      if (auto coeffs = solve(QMatrix::from_columns(powers, n * n), v)) {
        QPoly poly(k + 1);
        for (std::size_t i = 0; i < k; ++i) poly[i] = -(*coeffs)[i];
        poly[k] = 1;
        return poly;
      }
    }
    powers.push_back(v);
    p = p * m;
  }
  throw std::logic_error("minimal polynomial degree exceeds dimension");
}


QPoly poly_derivative(const QPoly& p) {
  QPoly d;
  for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * Rational(static_cast<long>(i)));
  poly_trim(d);
  return d;
}

QPoly poly_div(QPoly a, const QPoly& b) {
  poly_trim(a);
  if (a.size() < b.size()) return {};
  QPoly q(a.size() - b.size() + 1);
  while (a.size() >= b.size() && !a.empty()) {
    const Rational f = a.back() / b.back();
    const std::size_t shift = a.size() - b.size();
    q[shift] = f;
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= f * b[i];
    poly_trim(a);
  }
  return q;
}

QPoly monic(QPoly p) {
  poly_trim(p);
  if (p.empty()) return p;
  const Rational lead = p.back();
  for (auto& c : p) c /= lead;
  return p;
}

QPoly characteristic_polynomial(const QMatrix& a) {
  const std::size_t n = a.rows();
  QPoly c(n + 1);
  c[n] = 1;
  QMatrix mk(n, n);
  for (std::size_t k = 1; k <= n; ++k) {
    QMatrix next = a * mk;
    for (std::size_t i = 0; i < n; ++i) next(i, i) += c[n - k + 1];
    mk = std::move(next);
    const QMatrix am = a * mk;
    Rational tr = 0;
    for (std::size_t i = 0; i < n; ++i) tr += am(i, i);
    c[n - k] = -tr / Rational(static_cast<long>(k));
  }
  return c;
}

namespace {

QPoly poly_sub(QPoly a, const QPoly& b) {
  a.resize(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
  poly_trim(a);
  return a;
}

}  // namespace

std::vector<std::pair<QPoly, std::size_t>> squarefree_factors(const QPoly& p) {
  std::vector<std::pair<QPoly, std::size_t>> out;
  const QPoly a = monic(p);
  if (a.size() <= 1) return out;
  const QPoly b = monic(poly_gcd(a, poly_derivative(a)));
  QPoly c = poly_div(a, b);
  QPoly d = poly_sub(poly_div(poly_derivative(a), b), poly_derivative(c));
  for (std::size_t i = 1; c.size() > 1; ++i) {
    const QPoly g = monic(poly_gcd(c, d));
    if (g.size() > 1) out.push_back({g, i});
    c = poly_div(c, g);
    d = poly_sub(poly_div(d, g), poly_derivative(c));
  }
  return out;
}

Eigen::VectorXcd simple_roots(const QPoly& p) {
  const auto n = static_cast<Eigen::Index>(p.size() - 1);
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (Eigen::Index i = 0; i < n; ++i) comp(i, n - 1) = -static_cast<double>(p[static_cast<std::size_t>(i)]);
  Eigen::EigenSolver<Eigen::MatrixXd> solver(comp, false);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigenvalue solver did not converge");
  return solver.eigenvalues();
}

}  // namespace lge
