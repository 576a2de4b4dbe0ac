#include "lge/algebra.hpp"

#include <map>
#include <set>
#include <stdexcept>

namespace lge {

Eigen::MatrixXd QSubspace::to_matrix() const {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(ambient), static_cast<Eigen::Index>(basis.size()));
  for (std::size_t j = 0; j < basis.size(); ++j) m.col(static_cast<Eigen::Index>(j)) = to_double(basis[j]);
  return m;
}

QVector basis_vector(std::size_t dim, std::size_t i) {
  QVector v(dim);
  v.at(i) = 1;
  return v;
}

// ---- LieAlgebra ---------------------------------------------------------

LieAlgebra LieAlgebra::from_entries(std::size_t dim, std::vector<std::string> labels,
                                    const std::vector<BracketEntry>& entries) {
  LieAlgebra alg;
  alg.dim_ = dim;
  if (labels.empty())
    for (std::size_t i = 0; i < dim; ++i) labels.push_back("e" + std::to_string(i + 1));
  if (labels.size() != dim) throw std::invalid_argument("basis label count differs from dim");
  alg.labels_ = std::move(labels);
  alg.c_.assign(dim * dim * dim, Rational(0));

  std::set<std::pair<std::size_t, std::size_t>> listed;
  for (const auto& e : entries) {
    if (e.i >= dim || e.j >= dim || e.k >= dim) throw std::invalid_argument("bracket index out of range");
    alg.c_[(e.i * dim + e.j) * dim + e.k] += e.coeff;
    listed.emplace(e.i, e.j);
  }
  for (const auto& [i, j] : listed) {
    if (i == j || listed.contains({j, i})) continue;
    for (std::size_t k = 0; k < dim; ++k) alg.c_[(j * dim + i) * dim + k] = -alg.c_[(i * dim + j) * dim + k];
  }
  return alg;
}

std::vector<BracketEntry> LieAlgebra::entries() const {
  std::vector<BracketEntry> out;
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = i + 1; j < dim_; ++j)
      for (std::size_t k = 0; k < dim_; ++k)
        if (constant(i, j, k) != 0) out.push_back({i, j, k, constant(i, j, k)});
  return out;
}

bool LieAlgebra::is_abelian() const {
  for (const auto& q : c_)
    if (q != 0) return false;
  return true;
}

QVector LieAlgebra::bracket(const QVector& x, const QVector& y) const {
  if (x.size() != dim_ || y.size() != dim_) throw std::invalid_argument("bracket: dimension mismatch");
  QVector out(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    if (x[i] == 0) continue;
    for (std::size_t j = 0; j < dim_; ++j) {
      if (y[j] == 0) continue;
      const Rational xy = x[i] * y[j];
      for (std::size_t k = 0; k < dim_; ++k)
        if (constant(i, j, k) != 0) out[k] += xy * constant(i, j, k);
    }
  }
  return out;
}

Eigen::VectorXd LieAlgebra::bracket(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
  const auto n = static_cast<Eigen::Index>(dim_);
  if (x.size() != n || y.size() != n) throw std::invalid_argument("bracket: dimension mismatch");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  for (std::size_t i = 0; i < dim_; ++i) {
    if (x(i) == 0.0) continue;
    for (std::size_t j = 0; j < dim_; ++j) {
      if (y(j) == 0.0) continue;
      for (std::size_t k = 0; k < dim_; ++k)
        if (constant(i, j, k) != 0) out(k) += x(i) * y(j) * constant(i, j, k).convert_to<double>();
    }
  }
  return out;
}

QMatrix LieAlgebra::ad(const QVector& x) const {
  QMatrix m(dim_, dim_);
  for (std::size_t j = 0; j < dim_; ++j) {
    const auto col = bracket(x, basis_vector(dim_, j));
    for (std::size_t k = 0; k < dim_; ++k) m(k, j) = col[k];
  }
  return m;
}

Eigen::MatrixXd LieAlgebra::ad(const Eigen::VectorXd& x) const {
  const auto n = static_cast<Eigen::Index>(dim_);
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index j = 0; j < n; ++j) m.col(j) = bracket(x, Eigen::VectorXd::Unit(n, j));
  return m;
}

std::optional<LieAlgebra> LieAlgebra::subalgebra(const std::vector<QVector>& basis) const {
  const std::size_t p = basis.size();
  std::vector<BracketEntry> entries;
  const QMatrix b = p > 0 ? QMatrix::from_columns(basis, dim_) : QMatrix(dim_, 0);
  for (std::size_t a = 0; a < p; ++a)
    for (std::size_t c = a + 1; c < p; ++c) {
      const auto br = bracket(basis[a], basis[c]);
      if (is_zero(br)) continue;
      const auto coords = solve(b, br);
      if (!coords) return std::nullopt;
      for (std::size_t k = 0; k < p; ++k)
        if ((*coords)[k] != 0) entries.push_back({a, c, k, (*coords)[k]});
    }
  return from_entries(p, {}, entries);
}

// ---- free functions -----------------------------------------------------

QVector bracket(const LieAlgebra& alg, const QVector& x, const QVector& y) { return alg.bracket(x, y); }

JacobiReport check_jacobi(const LieAlgebra& alg) {
  JacobiReport report;
  const std::size_t d = alg.dim();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j) {
      QVector sum(d);
      bool bad = false;
      for (std::size_t k = 0; k < d; ++k) {
        sum[k] = alg.constant(i, j, k) + alg.constant(j, i, k);
        if (sum[k] != 0) bad = true;
      }
      if (bad) report.violations.push_back({{i, j, j}, sum, true});
    }
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j)
      for (std::size_t k = j + 1; k < d; ++k) {
        const auto ei = basis_vector(d, i);
        const auto ej = basis_vector(d, j);
        const auto ek = basis_vector(d, k);
        QVector r = alg.bracket(ei, alg.bracket(ej, ek));
        const auto r2 = alg.bracket(ej, alg.bracket(ek, ei));
        const auto r3 = alg.bracket(ek, alg.bracket(ei, ej));
        for (std::size_t m = 0; m < d; ++m) r[m] += r2[m] + r3[m];
        if (!is_zero(r)) report.violations.push_back({{i, j, k}, r, false});
      }
  return report;
}

QMatrix killing_form(const LieAlgebra& alg) {
  const std::size_t d = alg.dim();
  QMatrix k(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j) {
      Rational tr = 0;
      for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b) {
          // (ad e_i)_{a,b} = c[i][b][a]
          const auto& x = alg.constant(i, b, a);
          if (x == 0) continue;
          const auto& y = alg.constant(j, a, b);
          if (y != 0) tr += x * y;
        }
      k(i, j) = tr;
      k(j, i) = tr;
    }
  return k;
}

QSubspace whole(const LieAlgebra& alg) {
  QSubspace s{alg.dim(), {}};
  for (std::size_t i = 0; i < alg.dim(); ++i) s.basis.push_back(basis_vector(alg.dim(), i));
  return s;
}

QSubspace bracket_span(const LieAlgebra& alg, const QSubspace& a, const QSubspace& b) {
  std::vector<QVector> products;
  for (const auto& x : a.basis)
    for (const auto& y : b.basis) {
      auto br = alg.bracket(x, y);
      if (!is_zero(br)) products.push_back(std::move(br));
    }
  return {alg.dim(), span_basis(products, alg.dim())};
}

QSubspace derived_algebra(const LieAlgebra& alg) {
  const auto g = whole(alg);
  return bracket_span(alg, g, g);
}

QSubspace center(const LieAlgebra& alg) {
  const std::size_t d = alg.dim();
  // rows indexed by (j, k): sum_i X_i c[i][j][k] = 0
  QMatrix m(d * d, d);
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t k = 0; k < d; ++k)
      for (std::size_t i = 0; i < d; ++i) m(j * d + k, i) = alg.constant(i, j, k);
  return {d, kernel(m)};
}

QSubspace radical(const LieAlgebra& alg) {
  const std::size_t d = alg.dim();
  const auto derived = derived_algebra(alg);
  if (derived.basis.empty()) return whole(alg);
  const auto kf = killing_form(alg);
  QMatrix m(derived.basis.size(), d);
  for (std::size_t r = 0; r < derived.basis.size(); ++r) {
    const auto row = kf * derived.basis[r];
    for (std::size_t c = 0; c < d; ++c) m(r, c) = row[c];
  }
  return {d, span_basis(kernel(m), d)};
}

bool is_subalgebra(const LieAlgebra& alg, const QSubspace& v) {
  for (std::size_t a = 0; a < v.basis.size(); ++a)
    for (std::size_t b = a + 1; b < v.basis.size(); ++b)
      if (!in_span(v.basis, alg.bracket(v.basis[a], v.basis[b]), alg.dim())) return false;
  return true;
}

bool is_subalgebra(const LieAlgebra& alg, const Eigen::MatrixXd& basis, const NumericOptions& opt) {
  if (basis.cols() <= 1) return true;
  const auto q = orthonormal_span(basis, opt);
  const double scale = std::max(1.0, basis.norm() * basis.norm());
  for (Eigen::Index a = 0; a < basis.cols(); ++a)
    for (Eigen::Index b = a + 1; b < basis.cols(); ++b) {
      const Eigen::VectorXd br = alg.bracket(Eigen::VectorXd(basis.col(a)), Eigen::VectorXd(basis.col(b)));
      const Eigen::VectorXd residual = br - q * (q.transpose() * br);
      if (residual.norm() > 1e-7 * scale) return false;
    }
  return true;
}

bool is_ideal(const LieAlgebra& alg, const QSubspace& v) {
  for (std::size_t i = 0; i < alg.dim(); ++i)
    for (const auto& x : v.basis)
      if (!in_span(v.basis, alg.bracket(basis_vector(alg.dim(), i), x), alg.dim())) return false;
  return true;
}

std::vector<std::size_t> derived_series_dims(const LieAlgebra& alg) {
  std::vector<std::size_t> dims;
  auto term = whole(alg);
  dims.push_back(term.rank());
  while (term.rank() > 0) {
    auto next = bracket_span(alg, term, term);
    if (next.rank() == term.rank()) break;
    term = std::move(next);
    dims.push_back(term.rank());
  }
  return dims;
}

std::vector<std::size_t> lower_central_dims(const LieAlgebra& alg) {
  std::vector<std::size_t> dims;
  const auto g = whole(alg);
  auto term = g;
  dims.push_back(term.rank());
  while (term.rank() > 0) {
    auto next = bracket_span(alg, g, term);
    if (next.rank() == term.rank()) break;
    term = std::move(next);
    dims.push_back(term.rank());
  }
  return dims;
}

bool is_solvable(const LieAlgebra& alg) { return derived_series_dims(alg).back() == 0; }
bool is_nilpotent(const LieAlgebra& alg) { return lower_central_dims(alg).back() == 0; }

bool is_levi_complement(const LieAlgebra& alg, const QSubspace& s, const QSubspace& rad) {
  const std::size_t d = alg.dim();
  if (s.rank() + rad.rank() != d) return false;
  std::vector<QVector> all = s.basis;
  all.insert(all.end(), rad.basis.begin(), rad.basis.end());
  if (span_basis(all, d).size() != d) return false;
  const auto sub = alg.subalgebra(s.basis);
  if (!sub) return false;
  return rank(killing_form(*sub)) == s.rank();
}

namespace {

// Layered data for lifting a complement of the radical: the derived series
// R_0 = rad > R_1 > ... > 0 (ideals of g), complements W_k of R_{k+1} in R_k,
// and an initial complement of rad spanned by standard basis vectors.
struct LiftFrame {
  std::vector<QVector> complement;
  std::vector<std::vector<QVector>> layers;  // W_0, W_1, ...
};

LiftFrame lift_frame(const LieAlgebra& alg, const QSubspace& rad) {
  const std::size_t d = alg.dim();
  LiftFrame frame;
  std::vector<QSubspace> chain{rad};
  while (chain.back().rank() > 0) {
    auto next = bracket_span(alg, chain.back(), chain.back());
    if (next.rank() == chain.back().rank()) throw std::logic_error("radical is not solvable");
    chain.push_back(std::move(next));
  }
  for (std::size_t k = 0; k + 1 < chain.size(); ++k) {
    std::vector<QVector> span = chain[k + 1].basis;
    std::vector<QVector> layer;
    for (const auto& v : chain[k].basis) {
      auto trial = span;
      trial.push_back(v);
      if (span_basis(trial, d).size() > span.size()) {
        span.push_back(v);
        layer.push_back(v);
      }
    }
    frame.layers.push_back(std::move(layer));
  }
  std::vector<QVector> span = rad.basis;
  for (std::size_t i = 0; i < d; ++i) {
    auto trial = span;
    trial.push_back(basis_vector(d, i));
    if (span_basis(trial, d).size() > span.size()) {
      span.push_back(basis_vector(d, i));
      frame.complement.push_back(basis_vector(d, i));
    }
  }
  return frame;
}

}  // namespace

std::optional<QSubspace> levi_subalgebra(const LieAlgebra& alg, const std::optional<QSubspace>& declared) {
  const std::size_t d = alg.dim();
  const auto rad = radical(alg);
  if (declared && is_levi_complement(alg, *declared, rad)) return declared;
  if (rad.rank() == d) return QSubspace{d, {}};
  if (rad.rank() == 0) return whole(alg);

  const auto frame = lift_frame(alg, rad);
  auto s = frame.complement;
  const std::size_t p = s.size();

  for (std::size_t level = 0; level < frame.layers.size(); ++level) {
    const auto& layer = frame.layers[level];
    const std::size_t w = layer.size();
    // Coordinates in the adapted basis [s | W_0 | W_1 | ...].
    std::vector<QVector> adapted = s;
    std::size_t offset = p;
    for (std::size_t k = 0; k < frame.layers.size(); ++k) {
      if (k < level) offset += frame.layers[k].size();
      adapted.insert(adapted.end(), frame.layers[k].begin(), frame.layers[k].end());
    }
    const QMatrix basis = QMatrix::from_columns(adapted, d);
    auto coords = [&](const QVector& x) {
      auto c = solve(basis, x);
      if (!c) throw std::logic_error("adapted basis is not a basis");
      return *c;
    };

    // Unknown tau[a][l]: t_a = sum_l tau[a][l] * layer[l].
    const std::size_t unknowns = p * w;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t a = 0; a < p; ++a)
      for (std::size_t b = a + 1; b < p; ++b) pairs.emplace_back(a, b);
    QMatrix sys(pairs.size() * w, unknowns);
    QVector rhs(pairs.size() * w);
    for (std::size_t e = 0; e < pairs.size(); ++e) {
      const auto [a, b] = pairs[e];
      const auto gamma = coords(alg.bracket(s[a], s[b]));
      // constant part: rho_ab restricted to layer coordinates
      for (std::size_t l = 0; l < w; ++l) rhs[e * w + l] = -gamma[offset + l];
      for (std::size_t l = 0; l < w; ++l) {
        // [s_a, t_b] - [s_b, t_a] - sum_c gamma^c t_c
        const auto sa = coords(alg.bracket(s[a], layer[l]));
        const auto sb = coords(alg.bracket(s[b], layer[l]));
        for (std::size_t r = 0; r < w; ++r) {
          sys(e * w + r, b * w + l) += sa[offset + r];
          sys(e * w + r, a * w + l) -= sb[offset + r];
        }
        for (std::size_t c = 0; c < p; ++c) sys(e * w + l, c * w + l) -= gamma[c];
      }
    }
    const auto tau = solve(sys, rhs);
    if (!tau) return std::nullopt;
    for (std::size_t a = 0; a < p; ++a)
      for (std::size_t l = 0; l < w; ++l) {
        const auto& f = (*tau)[a * w + l];
        if (f == 0) continue;
        for (std::size_t i = 0; i < d; ++i) s[a][i] += f * layer[l][i];
      }
  }
  QSubspace result{d, s};
  if (!is_levi_complement(alg, result, rad)) return std::nullopt;
  return result;
}

std::optional<Eigen::MatrixXd> invariant_levi_lift(const LieAlgebra& alg, const Eigen::MatrixXd& phi,
                                                   const NumericOptions& opt) {
  const std::size_t d = alg.dim();
  const auto n = static_cast<Eigen::Index>(d);
  if (phi.rows() != n || phi.cols() != n) throw std::invalid_argument("invariant_levi_lift: shape mismatch");
  const auto rad = radical(alg);
  if (rad.rank() == d) return Eigen::MatrixXd(n, 0);
  if (rad.rank() == 0) return Eigen::MatrixXd(Eigen::MatrixXd::Identity(n, n));

  const auto frame = lift_frame(alg, rad);
  std::vector<Eigen::VectorXd> s;
  for (const auto& v : frame.complement) s.push_back(to_double(v));
  const auto p = static_cast<Eigen::Index>(s.size());

  for (std::size_t level = 0; level < frame.layers.size(); ++level) {
    std::vector<Eigen::VectorXd> layer;
    for (const auto& v : frame.layers[level]) layer.push_back(to_double(v));
    const auto w = static_cast<Eigen::Index>(layer.size());
    Eigen::MatrixXd basis(n, n);
    Eigen::Index col = 0;
    Eigen::Index offset = p;
    for (const auto& v : s) basis.col(col++) = v;
    for (std::size_t k = 0; k < frame.layers.size(); ++k) {
      if (k < level) offset += static_cast<Eigen::Index>(frame.layers[k].size());
      for (const auto& v : frame.layers[k]) basis.col(col++) = to_double(v);
    }
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(basis);
    auto coords = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd { return lu.solve(x); };

    const Eigen::Index pairs = p * (p - 1) / 2;
    Eigen::MatrixXd sys = Eigen::MatrixXd::Zero((pairs + p) * w, p * w);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero((pairs + p) * w);
    Eigen::Index e = 0;
    for (Eigen::Index a = 0; a < p; ++a)
      for (Eigen::Index b = a + 1; b < p; ++b, ++e) {
        const auto gamma = coords(alg.bracket(s[a], s[b]));
        rhs.segment(e * w, w) = -gamma.segment(offset, w);
        for (Eigen::Index l = 0; l < w; ++l) {
          const auto sa = coords(alg.bracket(s[a], layer[l]));
          const auto sb = coords(alg.bracket(s[b], layer[l]));
          sys.block(e * w, b * w + l, w, 1) += sa.segment(offset, w);
          sys.block(e * w, a * w + l, w, 1) -= sb.segment(offset, w);
          for (Eigen::Index c = 0; c < p; ++c) sys(e * w + l, c * w + l) -= gamma(c);
        }
      }
    // phi(s_a + t_a) must stay in span(s') modulo R_{k+1}.
    for (Eigen::Index a = 0; a < p; ++a, ++e) {
      const auto pc = coords(phi * s[a]);
      rhs.segment(e * w, w) = -pc.segment(offset, w);
      for (Eigen::Index l = 0; l < w; ++l) {
        const auto img = coords(phi * layer[l]);
        sys.block(e * w, a * w + l, w, 1) += img.segment(offset, w);
        for (Eigen::Index c = 0; c < p; ++c) sys(e * w + l, c * w + l) -= pc(c);
      }
    }
    const Eigen::VectorXd tau = sys.completeOrthogonalDecomposition().solve(rhs);
    if ((sys * tau - rhs).norm() > 1e-8 * (1.0 + rhs.norm())) return std::nullopt;
    for (Eigen::Index a = 0; a < p; ++a)
      for (Eigen::Index l = 0; l < w; ++l) s[a] += tau(a * w + l) * layer[l];
  }
  Eigen::MatrixXd result(n, p);
  for (Eigen::Index a = 0; a < p; ++a) result.col(a) = s[a];
  if (!is_subalgebra(alg, result, opt)) return std::nullopt;
  const Eigen::MatrixXd both = hconcat(result, phi * result);
  if (numeric_rank(both, opt) != static_cast<std::size_t>(p)) return std::nullopt;
  return result;
}

StructureReport structure_report(const LieAlgebra& alg, const std::optional<QSubspace>& declared_levi) {
  StructureReport r;
  r.derived_series_dims = derived_series_dims(alg);
  r.lower_central_dims = lower_central_dims(alg);
  r.is_solvable = r.derived_series_dims.back() == 0;
  r.is_nilpotent = r.lower_central_dims.back() == 0;
  r.radical = radical(alg);
  r.is_semisimple = r.radical.rank() == 0;
  r.center = center(alg);
  r.levi = levi_subalgebra(alg, declared_levi);
  return r;
}

// ---- catalog --------------------------------------------------------------

namespace catalog {

namespace {
BracketEntry entry(std::size_t i, std::size_t j, std::size_t k, long c) { return {i, j, k, Rational(c)}; }
}  // namespace

LieAlgebra abelian(std::size_t n) { return LieAlgebra::from_entries(n, {}, {}); }

LieAlgebra heisenberg() { return LieAlgebra::from_entries(3, {"x", "y", "z"}, {entry(0, 1, 2, 1)}); }

LieAlgebra sl2() {
  return LieAlgebra::from_entries(3, {"h", "e", "f"},
                                  {entry(0, 1, 1, 2), entry(0, 2, 2, -2), entry(1, 2, 0, 1)});
}

LieAlgebra so3() {
  return LieAlgebra::from_entries(3, {"l1", "l2", "l3"},
                                  {entry(0, 1, 2, 1), entry(1, 2, 0, 1), entry(2, 0, 1, 1)});
}

LieAlgebra sl2_semidirect_r2() {
  return LieAlgebra::from_entries(5, {"h", "e", "f", "v1", "v2"},
                                  {entry(0, 1, 1, 2), entry(0, 2, 2, -2), entry(1, 2, 0, 1), entry(0, 3, 3, 1),
                                   entry(0, 4, 4, -1), entry(1, 4, 3, 1), entry(2, 3, 4, 1)});
}

LieAlgebra abelian_plus_sl2(std::size_t n) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back("z" + std::to_string(i + 1));
  labels.insert(labels.end(), {"h", "e", "f"});
  return LieAlgebra::from_entries(n + 3, labels,
                                  {entry(n, n + 1, n + 1, 2), entry(n, n + 2, n + 2, -2), entry(n + 1, n + 2, n, 1)});
}

LieAlgebra abelian_plus_so3(std::size_t n) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back("z" + std::to_string(i + 1));
  labels.insert(labels.end(), {"l1", "l2", "l3"});
  return LieAlgebra::from_entries(n + 3, labels,
                                  {entry(n, n + 1, n + 2, 1), entry(n + 1, n + 2, n, 1), entry(n + 2, n, n + 1, 1)});
}

}  // namespace catalog

}  // namespace lge
