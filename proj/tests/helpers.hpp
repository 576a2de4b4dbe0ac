#pragma once

// Shared fixtures for the test binaries: catalog access and seeded random
// automorphisms of the catalog algebras, built exactly over Q.

#include "lge/algebra.hpp"
#include "lge/entropy.hpp"
#include "lge/spec_file.hpp"
#include "lge/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace lge::test {

inline std::string catalog_path(const std::string& name) { return std::string(LGE_CATALOG_DIR) + "/" + name + ".json"; }

inline std::vector<std::string> catalog_names() {
  std::vector<std::string> names;
  for (const auto& entry : std::filesystem::directory_iterator(LGE_CATALOG_DIR))
    if (entry.path().extension() == ".json") names.push_back(entry.path().stem().string());
  std::sort(names.begin(), names.end());
  return names;
}

inline SpecFile catalog_spec(const std::string& name) { return load_spec(catalog_path(name)); }

inline Rational q(long p, long r = 1) { return Rational(p) / Rational(r); }

inline QMatrix qmatrix(const std::vector<std::vector<Rational>>& rows) {
  QMatrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

inline QMatrix qdiag(const std::vector<Rational>& d) {
  QMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

inline QMatrix block_diag(const QMatrix& a, const QMatrix& b) {
  QMatrix m(a.rows() + b.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) m(a.rows() + i, a.cols() + j) = b(i, j);
  return m;
}

inline QMatrix inverse(const QMatrix& m) {
  QMatrix inv(m.rows(), m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j) {
    const auto col = solve(m, basis_vector(m.rows(), j));
    if (!col) throw std::invalid_argument("singular matrix");
    for (std::size_t i = 0; i < m.rows(); ++i) inv(i, j) = (*col)[i];
  }
  return inv;
}

inline double spectral_radius(const Eigen::MatrixXd& m) {
  return m.eigenvalues().cwiseAbs().maxCoeff();
}

class RandomAutomorphisms {
public:
  explicit RandomAutomorphisms(unsigned seed) : rng_(seed) {}

  int small(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  Rational nonzero_rational() {
    int p = 0;
    while (p == 0) p = small(-4, 4);
    return q(p, small(1, 3));
  }

  /// Random SL2(Q) element as a product of elementary and diagonal factors.
  QMatrix sl2_group() {
    QMatrix g = QMatrix::identity(2);
    for (int k = 0; k < 2; ++k) {
      QMatrix upper = QMatrix::identity(2), lower = QMatrix::identity(2), diag = QMatrix::identity(2);
      upper(0, 1) = q(small(-2, 2), small(1, 2));
      lower(1, 0) = q(small(-2, 2), small(1, 2));
      const Rational t = q(small(1, 2), small(1, 2));
      diag(0, 0) = t;
      diag(1, 1) = 1 / t;
      g = g * upper * diag * lower;
    }
    return g;
  }

  /// Random invertible integer matrix of size n with |det| = 1.
  QMatrix unimodular(std::size_t n, double max_radius = 5.0) {
    for (;;) {
      QMatrix m = QMatrix::identity(n);
      for (int k = 0; k < static_cast<int>(2 * n); ++k) {
        const std::size_t i = static_cast<std::size_t>(small(0, static_cast<int>(n) - 1));
        const std::size_t j = static_cast<std::size_t>(small(0, static_cast<int>(n) - 1));
        QMatrix e = QMatrix::identity(n);
        if (i == j) {
          e(i, i) = small(0, 1) ? 1 : -1;
        } else {
          e(i, j) = small(0, 1) ? 1 : -1;
        }
        m = m * e;
      }
      if (n == 0 || spectral_radius(m.to_double()) <= max_radius) return m;
    }
  }

  /// Random invertible rational matrix: an automorphism of an abelian algebra.
  QMatrix general_linear(std::size_t n) {
    for (;;) {
      QMatrix m(n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = q(small(-3, 3), small(1, 2));
      if (rank(m) == n) return m;
    }
  }

  /// [[a,b,0],[c,d,0],[x,y,ad-bc]] with ad - bc != 0.
  QMatrix heisenberg() {
    for (;;) {
      const Rational a = q(small(-3, 3), small(1, 2)), b = q(small(-3, 3), small(1, 2));
      const Rational c = q(small(-3, 3), small(1, 2)), d = q(small(-3, 3), small(1, 2));
      const Rational det = a * d - b * c;
      if (det == 0) continue;
      return qmatrix({{a, b, 0}, {c, d, 0}, {q(small(-3, 3)), q(small(-3, 3)), det}});
    }
  }

  /// Ad(g) on sl2 in the basis h, e, f, with X = a h + b e + c f <-> [[a,b],[c,-a]].
  static QMatrix adjoint_sl2(const QMatrix& g) {
    const QMatrix ginv = inverse(g);
    const std::vector<QMatrix> basis{qmatrix({{1, 0}, {0, -1}}), qmatrix({{0, 1}, {0, 0}}), qmatrix({{0, 0}, {1, 0}})};
    QMatrix ad(3, 3);
    for (std::size_t j = 0; j < 3; ++j) {
      const QMatrix img = g * basis[j] * ginv;
      ad(0, j) = img(0, 0);
      ad(1, j) = img(0, 1);
      ad(2, j) = img(1, 0);
    }
    return ad;
  }

  QMatrix sl2() { return adjoint_sl2(sl2_group()); }

  /// Rational rotation by the Cayley transform of a random skew matrix; on
  /// so3 with [l_i, l_j] = l_k cyclic the automorphism is the rotation itself.
  QMatrix so3() {
    QMatrix s(3, 3);
    const Rational x = q(small(-3, 3), small(1, 3)), y = q(small(-3, 3), small(1, 3)), z = q(small(-3, 3), small(1, 3));
    s(0, 1) = -z;
    s(1, 0) = z;
    s(0, 2) = y;
    s(2, 0) = -y;
    s(1, 2) = -x;
    s(2, 1) = x;
    const QMatrix id = QMatrix::identity(3);
    return inverse(id - s) * (id + s);
  }

  /// (I + ad w) composed with Ad(g) on sl2 and g on R^2, basis h, e, f, v1, v2.
  QMatrix sl2_semidirect_r2() {
    const QMatrix g = sl2_group();
    const QMatrix base = block_diag(adjoint_sl2(g), g);
    QVector w(5);
    w[3] = q(small(-2, 2), small(1, 2));
    w[4] = q(small(-2, 2), small(1, 2));
    const LieAlgebra alg = catalog::sl2_semidirect_r2();
    return (QMatrix::identity(5) + alg.ad(w)) * base;
  }

  QMatrix abelian_plus_sl2(std::size_t n) { return block_diag(general_linear(n), sl2()); }
  QMatrix abelian_plus_so3(std::size_t n) { return block_diag(general_linear(n), so3()); }

private:
  std::mt19937 rng_;
};

struct RandomCase {
  std::string family;
  LieAlgebra algebra;
  QMatrix phi;
};

/// n random automorphisms spread over the catalog algebras.
inline std::vector<RandomCase> random_automorphisms(std::size_t n, unsigned seed = 7) {
  RandomAutomorphisms gen(seed);
  std::vector<RandomCase> out;
  for (std::size_t k = 0; out.size() < n; ++k) {
    switch (k % 7) {
      case 0: out.push_back({"abelian2", catalog::abelian(2), gen.general_linear(2)}); break;
      case 1: out.push_back({"abelian3", catalog::abelian(3), gen.general_linear(3)}); break;
      case 2: out.push_back({"heisenberg", catalog::heisenberg(), gen.heisenberg()}); break;
      case 3: out.push_back({"sl2", catalog::sl2(), gen.sl2()}); break;
      case 4: out.push_back({"so3", catalog::so3(), gen.so3()}); break;
      case 5: out.push_back({"sl2_semidirect_r2", catalog::sl2_semidirect_r2(), gen.sl2_semidirect_r2()}); break;
      default: out.push_back({"abelian2_plus_sl2", catalog::abelian_plus_sl2(2), gen.abelian_plus_sl2(2)}); break;
    }
  }
  return out;
}

struct RandomGroupCase {
  std::string family;
  GroupSpec group;
  QMatrix phi;
};

/// Valid group models with random automorphisms, cycling through tori,
/// simply connected nilpotent and semisimple groups and sl2 on R^2.
inline std::vector<RandomGroupCase> random_group_specs(std::size_t n, unsigned seed = 29) {
  RandomAutomorphisms gen(seed);
  std::vector<RandomGroupCase> out;
  for (std::size_t k = 0; out.size() < n; ++k) {
    RandomGroupCase c;
    switch (k % 6) {
      case 0:
      case 1: {
        const std::size_t d = 2 + k % 3;
        c.family = "torus" + std::to_string(d);
        c.group.algebra = catalog::abelian(d);
        c.group.model = GroupModel::Torus;
        for (std::size_t i = 0; i < d; ++i) c.group.lattice.push_back(basis_vector(d, i));
        c.group.flags.solvable = true;
        c.phi = gen.unimodular(d);
        break;
      }
      case 2:
        c.family = "heisenberg_sc";
        c.group.algebra = catalog::heisenberg();
        c.group.flags.simply_connected = c.group.flags.solvable = true;
        c.phi = gen.heisenberg();
        break;
      case 3:
        c.family = "sl2";
        c.group.algebra = catalog::sl2();
        c.group.model = GroupModel::RadicalLeviProduct;
        c.group.flags.finite_semisimple_center = true;
        c.phi = gen.sl2();
        break;
      case 4:
        c.family = "su2";
        c.group.algebra = catalog::so3();
        c.group.flags.simply_connected = c.group.flags.finite_center = true;
        c.phi = gen.so3();
        break;
      default:
        c.family = "sl2_semidirect_r2";
        c.group.algebra = catalog::sl2_semidirect_r2();
        c.group.model = GroupModel::RadicalLeviProduct;
        c.group.flags.finite_semisimple_center = true;
        c.phi = gen.sl2_semidirect_r2();
        break;
    }
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace lge::test
