#include "lge/group_model.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace lge {

std::string to_string(GroupModel m) {
  switch (m) {
    case GroupModel::Torus: return "torus";
    case GroupModel::SimplyConnected: return "simply_connected";
    case GroupModel::CentralQuotient: return "central_quotient";
    case GroupModel::RadicalLeviProduct: return "radical_levi_product";
  }
  return "?";
}

std::optional<GroupModel> parse_group_model(const std::string& name) {
  for (auto m : {GroupModel::Torus, GroupModel::SimplyConnected, GroupModel::CentralQuotient,
                 GroupModel::RadicalLeviProduct})
    if (to_string(m) == name) return m;
  return std::nullopt;
}

Eigen::MatrixXd TorusBlock::induced_double() const {
  const auto b = static_cast<Eigen::Index>(rank);
  Eigen::MatrixXd m(b, b);
  for (Eigen::Index i = 0; i < b; ++i)
    for (Eigen::Index j = 0; j < b; ++j)
      m(i, j) = induced[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].convert_to<double>();
  return m;
}

namespace {

QMatrix to_q(const IntMatrix& m) {
  const std::size_t n = m.size();
  QMatrix q(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) q(i, j) = Rational(m[i][j]);
  return q;
}

bool is_integer(const Rational& q) { return boost::multiprecision::denominator(q) == 1; }

Integer as_integer(const Rational& q) { return boost::multiprecision::numerator(q); }

// Coordinates of phi(gamma_j) in the lattice basis, or an error message.
std::optional<IntMatrix> induced_matrix(const std::vector<QVector>& lattice, const Endomorphism& phi,
                                        std::string& error) {
  const std::size_t b = lattice.size();
  IntMatrix out(b, std::vector<Integer>(b));
  if (b == 0) return out;
  const std::size_t n = lattice.front().size();
  if (phi.exact) {
    const QMatrix basis = QMatrix::from_columns(lattice, n);
    for (std::size_t j = 0; j < b; ++j) {
      const auto coords = solve(basis, (*phi.exact) * lattice[j]);
      if (!coords) {
        error = "automorphism maps lattice generator " + std::to_string(j) + " outside the lattice span";
        return std::nullopt;
      }
      for (std::size_t i = 0; i < b; ++i) {
        if (!is_integer((*coords)[i])) {
          error = "image of lattice generator " + std::to_string(j) + " has non-integer coordinate " +
                  to_string((*coords)[i]);
          return std::nullopt;
        }
        out[i][j] = as_integer((*coords)[i]);
      }
    }
    return out;
  }
  Eigen::MatrixXd basis(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(b));
  for (std::size_t j = 0; j < b; ++j) basis.col(static_cast<Eigen::Index>(j)) = to_double(lattice[j]);
  const Eigen::MatrixXd image = phi.matrix * basis;
  const Eigen::MatrixXd coords = basis.completeOrthogonalDecomposition().solve(image);
  if ((basis * coords - image).norm() > 1e-9) {
    error = "automorphism maps the lattice outside its span";
    return std::nullopt;
  }
  for (std::size_t i = 0; i < b; ++i)
    for (std::size_t j = 0; j < b; ++j) {
      const double c = coords(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (std::abs(c - std::round(c)) > 1e-9) {
        error = "image of lattice generator " + std::to_string(j) + " has non-integer coordinate";
        return std::nullopt;
      }
      out[i][j] = Integer(static_cast<long long>(std::llround(c)));
    }
  return out;
}

Integer determinant(const IntMatrix& m) {
  const auto p = characteristic_polynomial(m);
  Integer det = p.front();
  return (m.size() % 2 == 0) ? det : Integer(-det);
}

bool contains(const QSubspace& space, const std::vector<QVector>& vectors) {
  for (const auto& v : vectors)
    if (!in_span(space.basis, v, space.ambient)) return false;
  return true;
}

}  // namespace

ValidationReport validate_group_spec(const GroupSpec& spec, const Endomorphism& phi, MapKind kind) {
  ValidationReport r;
  const auto& alg = spec.algebra;
  const std::size_t d = alg.dim();
  if (phi.dim() != d) {
    r.errors.push_back("automorphism matrix dimension " + std::to_string(phi.dim()) + " differs from algebra dimension " +
                       std::to_string(d));
    return r;
  }
  for (std::size_t j = 0; j < spec.lattice.size(); ++j)
    if (spec.lattice[j].size() != d) r.errors.push_back("lattice generator " + std::to_string(j) + " has wrong length");
  if (!r.valid()) return r;
  if (!spec.lattice.empty() && rank(QMatrix::from_columns(spec.lattice, d)) != spec.lattice.size())
    r.errors.push_back("lattice generators are linearly dependent");

  const bool solvable = is_solvable(alg);
  if (spec.flags.solvable != solvable)
    r.errors.push_back(std::string("flag solvable=") + (spec.flags.solvable ? "true" : "false") +
                       " contradicts the algebra, which is " + (solvable ? "solvable" : "not solvable"));

  const QSubspace z = center(alg);
  switch (spec.model) {
    case GroupModel::Torus:
      if (!alg.is_abelian()) r.errors.push_back("torus model requires an abelian algebra");
      if (spec.lattice.size() != d) r.errors.push_back("torus model requires a lattice spanning the algebra");
      if (spec.flags.simply_connected && d > 0) r.errors.push_back("a torus is not simply connected");
      break;
    case GroupModel::SimplyConnected:
      if (!spec.lattice.empty()) r.errors.push_back("simply connected model takes no lattice");
      if (!spec.flags.simply_connected) r.errors.push_back("simply connected model requires flag simply_connected");
      break;
    case GroupModel::CentralQuotient:
      if (!contains(z, spec.lattice)) r.errors.push_back("lattice is not contained in the center");
      if (spec.flags.simply_connected && !spec.lattice.empty())
        r.errors.push_back("quotient by a nontrivial lattice is not simply connected");
      break;
    case GroupModel::RadicalLeviProduct: {
      const QSubspace rad = radical(alg);
      if (!contains(z, spec.lattice) || !contains(rad, spec.lattice))
        r.errors.push_back("lattice must lie in the center and in the radical");
      if (spec.flags.simply_connected && !spec.lattice.empty())
        r.errors.push_back("quotient by a nontrivial lattice is not simply connected");
      break;
    }
  }
  if (spec.declared_levi) {
    if (spec.declared_levi->ambient != d)
      r.errors.push_back("declared Levi subalgebra has wrong ambient dimension");
    else if (!is_levi_complement(alg, *spec.declared_levi, radical(alg)))
      r.errors.push_back("declared Levi subalgebra is not a Levi complement");
  }
  if (!r.valid()) return r;

  const auto hom = check_homomorphism(alg, phi);
  if (!hom.valid())
    r.errors.push_back("matrix is not a homomorphism: bracket of basis " + std::to_string(hom.violations.front().i) +
                       "," + std::to_string(hom.violations.front().j) + " defect " +
                       std::to_string(hom.violations.front().defect));
  if (kind == MapKind::Automorphism && numeric_rank(phi.matrix) != d)
    r.errors.push_back("automorphism matrix is singular");

  std::string error;
  const auto induced = induced_matrix(spec.lattice, phi, error);
  if (!induced) {
    r.errors.push_back(error);
  } else if (!induced->empty()) {
    const Integer det = determinant(*induced);
    if (kind == MapKind::Automorphism && abs(det) != 1)
      r.errors.push_back("induced lattice map has determinant " + det.str() +
                         "; the inverse does not preserve the lattice");
    if (kind == MapKind::Endomorphism && det == 0) r.errors.push_back("induced lattice map is not surjective");
  }
  return r;
}

TorusBlock toral_component(const GroupSpec& spec, const Endomorphism& phi) {
  TorusBlock block;
  if (spec.model == GroupModel::SimplyConnected) return block;
  std::string error;
  auto induced = induced_matrix(spec.lattice, phi, error);
  if (!induced) throw std::invalid_argument(error);
  block.rank = spec.lattice.size();
  block.induced = std::move(*induced);
  block.generators = spec.lattice;
  return block;
}

std::vector<Integer> characteristic_polynomial(const IntMatrix& m) {
  // Faddeev-LeVerrier over Q.
  const std::size_t n = m.size();
  const QMatrix a = to_q(m);
  std::vector<Rational> c(n + 1);
  c[n] = 1;
  QMatrix mk(n, n);
  for (std::size_t k = 1; k <= n; ++k) {
    QMatrix next = a * mk;
    for (std::size_t i = 0; i < n; ++i) next(i, i) += c[n - k + 1];
    mk = next;
    const QMatrix am = a * mk;
    Rational tr = 0;
    for (std::size_t i = 0; i < n; ++i) tr += am(i, i);
    c[n - k] = -tr / Rational(static_cast<long>(k));
  }
  std::vector<Integer> out;
  for (const auto& x : c) out.push_back(as_integer(x));
  return out;
}

namespace {

using ZPoly = std::vector<Integer>;

// Exact division by a monic divisor; nullopt when the remainder is nonzero.
std::optional<ZPoly> divide_monic(ZPoly p, const ZPoly& f) {
  if (f.size() > p.size()) return std::nullopt;
  ZPoly q(p.size() - f.size() + 1);
  for (std::size_t k = q.size(); k-- > 0;) {
    const Integer lead = p[k + f.size() - 1];
    q[k] = lead;
    for (std::size_t i = 0; i < f.size(); ++i) p[k + i] -= lead * f[i];
  }
  for (const auto& x : p)
    if (x != 0) return std::nullopt;
  return q;
}

std::optional<ZPoly> integer_poly_from_roots(const std::vector<std::complex<double>>& roots) {
  std::vector<std::complex<double>> c{1.0};
  for (auto r : roots) {
    std::vector<std::complex<double>> next(c.size() + 1);
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i + 1] += c[i];
      next[i] -= r * c[i];
    }
    c = std::move(next);
  }
  ZPoly out;
  for (auto x : c) {
    const double scale = std::max(1.0, std::abs(x));
    if (std::abs(x.imag()) > 1e-6 * scale || std::abs(x.real() - std::round(x.real())) > 1e-6 * scale)
      return std::nullopt;
    out.push_back(Integer(static_cast<long long>(std::llround(x.real()))));
  }
  return out;
}

struct Factor {
  ZPoly poly;
  std::size_t multiplicity = 0;
  bool unstable = false;
};

std::vector<Factor> factor_with_roots(ZPoly p, std::vector<std::complex<double>> roots) {
  std::vector<Factor> factors;
  while (p.size() > 1) {
    bool found = false;
    for (std::size_t s = 1; s <= roots.size() && !found; ++s) {
      std::vector<bool> pick(roots.size(), false);
      std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(s), true);
      do {
        std::vector<std::complex<double>> subset;
        for (std::size_t i = 0; i < roots.size(); ++i)
          if (pick[i]) subset.push_back(roots[i]);
        auto f = integer_poly_from_roots(subset);
        if (!f) continue;
        auto q = divide_monic(p, *f);
        if (!q) continue;
        p = std::move(*q);
        const bool unstable =
            std::any_of(subset.begin(), subset.end(), [](auto r) { return std::abs(r) > 1.0 + 1e-9; });
        auto it = std::find_if(factors.begin(), factors.end(), [&](const Factor& x) { return x.poly == *f; });
        if (it != factors.end())
          ++it->multiplicity;
        else
          factors.push_back({*f, 1, unstable});
        std::vector<std::complex<double>> rest;
        for (std::size_t i = 0; i < roots.size(); ++i)
          if (!pick[i]) rest.push_back(roots[i]);
        roots = std::move(rest);
        found = true;
        break;
      } while (std::prev_permutation(pick.begin(), pick.end()));
    }
    if (!found) throw std::runtime_error("integer polynomial factorization failed");
  }
  return factors;
}

// Irreducible factors over Q: squarefree split first, so the root search
// only ever sees simple roots.
std::vector<Factor> irreducible_factors(const ZPoly& p) {
  QPoly qp;
  for (const auto& c : p) qp.emplace_back(c);
  std::vector<Factor> out;
  for (const auto& [g, mult] : squarefree_factors(qp)) {
    ZPoly zg;
    for (const auto& c : g) zg.push_back(as_integer(c));
    const Eigen::VectorXcd r = simple_roots(g);
    std::vector<std::complex<double>> roots(r.data(), r.data() + r.size());
    for (auto& f : factor_with_roots(zg, roots)) {
      f.multiplicity = mult;
      out.push_back(std::move(f));
    }
  }
  return out;
}

QMatrix evaluate(const ZPoly& f, const QMatrix& a) {
  const std::size_t n = a.rows();
  QMatrix acc(n, n);
  for (std::size_t k = f.size(); k-- > 0;) {
    acc = acc * a;
    for (std::size_t i = 0; i < n; ++i) acc(i, i) += Rational(f[k]);
  }
  return acc;
}

}  // namespace

std::vector<std::pair<std::vector<Integer>, std::size_t>> factor_integer_polynomial(const std::vector<Integer>& p) {
  std::vector<std::pair<std::vector<Integer>, std::size_t>> out;
  for (auto& f : irreducible_factors(p)) out.emplace_back(std::move(f.poly), f.multiplicity);
  return out;
}

TorusBlock unstable_block(const TorusBlock& block) {
  TorusBlock out;
  if (block.rank == 0) return out;
  const std::size_t b = block.rank;
  const auto factors = irreducible_factors(characteristic_polynomial(block.induced));
  ZPoly u{1};
  bool any = false;
  for (const auto& f : factors) {
    if (!f.unstable) continue;
    any = true;
    ZPoly next(u.size() + f.poly.size() - 1);
    for (std::size_t i = 0; i < u.size(); ++i)
      for (std::size_t j = 0; j < f.poly.size(); ++j) next[i + j] += u[i] * f.poly[j];
    u = std::move(next);
  }
  if (!any) return out;
  const QMatrix a = to_q(block.induced);
  const QMatrix q = power(evaluate(u, a), static_cast<unsigned>(b));
  const auto kernel_basis = integer_kernel(q);
  std::vector<QVector> cols;
  for (const auto& k : kernel_basis) {
    QVector v;
    for (const auto& x : k) v.emplace_back(x);
    cols.push_back(std::move(v));
  }
  const std::size_t r = cols.size();
  const QMatrix basis = QMatrix::from_columns(cols, b);
  out.rank = r;
  out.induced.assign(r, std::vector<Integer>(r));
  for (std::size_t j = 0; j < r; ++j) {
    const auto coords = solve(basis, a * cols[j]);
    if (!coords) throw std::logic_error("unstable block is not invariant");
    for (std::size_t i = 0; i < r; ++i) {
      if (!is_integer((*coords)[i])) throw std::logic_error("unstable block map is not integral");
      out.induced[i][j] = as_integer((*coords)[i]);
    }
  }
  const std::size_t n = block.generators.empty() ? 0 : block.generators.front().size();
  for (const auto& c : cols) {
    QVector g(n);
    for (std::size_t i = 0; i < b; ++i)
      for (std::size_t k = 0; k < n; ++k) g[k] += c[i] * block.generators[i][k];
    out.generators.push_back(std::move(g));
  }
  return out;
}

TorusBlock unstable_toral_part(const GroupSpec& spec, const Endomorphism& phi) {
  return unstable_block(toral_component(spec, phi));
}

RadicalRestriction radical_restriction(const GroupSpec& spec, const Endomorphism& phi) {
  RadicalRestriction out;
  out.basis = radical(spec.algebra);
  const std::size_t d = spec.algebra.dim();
  const std::size_t r = out.basis.rank();
  auto sub = spec.algebra.subalgebra(out.basis.basis);
  if (!sub) throw std::logic_error("radical is not a subalgebra");
  out.algebra = std::move(*sub);
  if (phi.exact) {
    const QMatrix basis = QMatrix::from_columns(out.basis.basis, d);
    QMatrix m(r, r);
    for (std::size_t j = 0; j < r; ++j) {
      const auto coords = solve(basis, (*phi.exact) * out.basis.basis[j]);
      if (!coords) throw std::runtime_error("radical is not invariant under the automorphism");
      for (std::size_t i = 0; i < r; ++i) m(i, j) = (*coords)[i];
    }
    out.phi = Endomorphism::from_exact(m);
    return out;
  }
  const Eigen::MatrixXd basis = out.basis.to_matrix();
  const Eigen::MatrixXd image = phi.matrix * basis;
  const Eigen::MatrixXd coords = basis.completeOrthogonalDecomposition().solve(image);
  if ((basis * coords - image).norm() > 1e-8 * std::max(1.0, image.norm()))
    throw std::runtime_error("radical is not invariant under the automorphism");
  out.phi = Endomorphism::from_double(coords);
  return out;
}

GroupSpec radical_model(const GroupSpec& spec, const RadicalRestriction& rad) {
  GroupSpec out;
  out.algebra = rad.algebra;
  const std::size_t d = spec.algebra.dim();
  const QMatrix basis = QMatrix::from_columns(rad.basis.basis, d);
  for (const auto& g : spec.lattice) {
    const auto coords = solve(basis, g);
    if (!coords) throw std::invalid_argument("lattice generator outside the radical");
    out.lattice.push_back(*coords);
  }
  out.model = out.lattice.empty() ? GroupModel::SimplyConnected : GroupModel::CentralQuotient;
  out.flags.simply_connected = out.lattice.empty();
  out.flags.solvable = true;
  return out;
}

}  // namespace lge
