#include "lge/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace lge {

std::string to_string(Stability s) {
  switch (s) {
    case Stability::Unstable: return "unstable";
    case Stability::Central: return "central";
    case Stability::Stable: return "stable";
    case Stability::Kernel: return "kernel";
  }
  return "?";
}

HomomorphismReport check_homomorphism(const LieAlgebra& alg, const Endomorphism& phi, double tol) {
  const auto n = static_cast<Eigen::Index>(alg.dim());
  if (phi.matrix.rows() != n || phi.matrix.cols() != n)
    throw std::invalid_argument("endomorphism matrix is not " + std::to_string(n) + "x" + std::to_string(n));
  HomomorphismReport report;
  if (phi.exact) {
    const QMatrix& m = *phi.exact;
    for (std::size_t i = 0; i < alg.dim(); ++i)
      for (std::size_t j = i + 1; j < alg.dim(); ++j) {
        const QVector lhs = m * alg.bracket(basis_vector(alg.dim(), i), basis_vector(alg.dim(), j));
        const QVector rhs = alg.bracket(m.column(i), m.column(j));
        double defect = 0.0;
        for (std::size_t k = 0; k < lhs.size(); ++k) {
          const double r = static_cast<double>(lhs[k] - rhs[k]);
          defect += r * r;
        }
        if (lhs != rhs) report.violations.push_back({i, j, std::sqrt(defect)});
      }
    return report;
  }
  // Float input: tolerance relative to the size of both sides.
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const Eigen::VectorXd ei = Eigen::VectorXd::Unit(n, i);
      const Eigen::VectorXd ej = Eigen::VectorXd::Unit(n, j);
      const Eigen::VectorXd lhs = phi.matrix * alg.bracket(ei, ej);
      const Eigen::VectorXd rhs = alg.bracket(Eigen::VectorXd(phi.matrix.col(i)), Eigen::VectorXd(phi.matrix.col(j)));
      const double scale = std::max({1.0, lhs.norm(), phi.matrix.col(i).norm() * phi.matrix.col(j).norm()});
      const double defect = (lhs - rhs).norm();
      if (defect > tol * scale) report.violations.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(j), defect});
    }
  return report;
}

namespace {

using Complex = std::complex<double>;

struct Cluster {
  Complex mean;
  std::size_t size = 0;
};

std::vector<Cluster> cluster_eigenvalues(const Eigen::VectorXcd& ev, double tol) {
  const auto n = static_cast<std::size_t>(ev.size());
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      const double scale = std::max(1.0, std::max(std::abs(ev(a)), std::abs(ev(b))));
      if (std::abs(ev(a) - ev(b)) <= tol * scale) parent[find(a)] = find(b);
    }
  std::vector<Cluster> clusters;
  std::vector<std::ptrdiff_t> slot(n, -1);
  for (std::size_t a = 0; a < n; ++a) {
    const auto root = find(a);
    if (slot[root] < 0) {
      slot[root] = static_cast<std::ptrdiff_t>(clusters.size());
      clusters.push_back({});
    }
    auto& c = clusters[static_cast<std::size_t>(slot[root])];
    c.mean += ev(a);
    ++c.size;
  }
  for (auto& c : clusters) c.mean /= static_cast<double>(c.size);
  return clusters;
}

// Right singular vectors for the `count` smallest singular values.
template <typename Matrix>
Matrix smallest_right_singular(const Matrix& m, std::size_t count) {
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeFullV);
  return svd.matrixV().rightCols(static_cast<Eigen::Index>(count));
}

Eigen::MatrixXd top_left_singular(const Eigen::MatrixXd& m, std::size_t count) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU);
  return svd.matrixU().leftCols(static_cast<Eigen::Index>(count));
}

Stability classify(double modulus, const SpectralOptions& opt) {
  if (modulus <= opt.unit_band) return Stability::Kernel;
  if (modulus > 1.0 + opt.unit_band) return Stability::Unstable;
  if (modulus < 1.0 - opt.unit_band) return Stability::Stable;
  return Stability::Central;
}

Eigen::MatrixXd span_of(const std::vector<EigenClass>& classes, std::initializer_list<Stability> kinds,
                        Eigen::Index n, const NumericOptions& opt) {
  Eigen::MatrixXd all(n, 0);
  for (const auto& c : classes)
    if (std::find(kinds.begin(), kinds.end(), c.stability) != kinds.end()) all = hconcat(all, c.real_subspace);
  if (all.cols() == 0) return Eigen::MatrixXd(n, 0);
  return orthonormal_span(all, opt);
}

std::vector<Complex> class_values(const EigenClass& c) {
  if (c.conjugate_pair) return {c.value, std::conj(c.value)};
  return {c.value};
}

}  // namespace

std::vector<EigenClass> generalized_eigenspaces(const Endomorphism& phi, const SpectralOptions& opt) {
  const Eigen::Index n = phi.matrix.rows();
  std::vector<EigenClass> classes;
  if (n == 0) return classes;
  std::vector<Cluster> clusters;
  if (phi.exact) {
    // Exact multiplicities; each squarefree factor has simple roots.
    for (const auto& [factor, mult] : squarefree_factors(characteristic_polynomial(*phi.exact))) {
      const Eigen::VectorXcd roots = simple_roots(factor);
      for (Eigen::Index i = 0; i < roots.size(); ++i) clusters.push_back({roots(i), mult});
    }
  } else {
    Eigen::EigenSolver<Eigen::MatrixXd> solver(phi.matrix, false);
    if (solver.info() != Eigen::Success) throw std::runtime_error("eigenvalue solver did not converge");
    clusters = cluster_eigenvalues(solver.eigenvalues(), opt.cluster_tol);
  }
  for (const auto& cl : clusters) {
    // The algebraic multiplicity bounds the nilpotency index, and the lowest
    // sufficient power keeps the kernel well conditioned.
    const auto power = static_cast<unsigned>(cl.size);
    const double scale = std::max(1.0, std::abs(cl.mean));
    const bool real = std::abs(cl.mean.imag()) <= opt.cluster_tol * scale;
    if (!real && cl.mean.imag() < 0) continue;  // handled with its conjugate
    EigenClass ec;
    ec.multiplicity = real ? cl.size : 2 * cl.size;
    ec.conjugate_pair = !real;
    if (real) {
      ec.value = Complex(cl.mean.real(), 0.0);
      Eigen::MatrixXd shifted = phi.matrix - cl.mean.real() * Eigen::MatrixXd::Identity(n, n);
      ec.real_subspace = smallest_right_singular(matrix_power(shifted, power), cl.size);
    } else {
      ec.value = cl.mean;
      Eigen::MatrixXcd shifted = phi.matrix.cast<Complex>() - cl.mean * Eigen::MatrixXcd::Identity(n, n);
      Eigen::MatrixXcd p = Eigen::MatrixXcd::Identity(n, n);
      for (unsigned i = 0; i < power; ++i) p = p * shifted;
      const Eigen::MatrixXcd v = smallest_right_singular(p, cl.size);
      ec.real_subspace = top_left_singular(hconcat(v.real(), v.imag()), 2 * cl.size);
    }
    ec.modulus = std::abs(ec.value);
    ec.stability = classify(ec.modulus, opt);
    classes.push_back(std::move(ec));
  }
  std::sort(classes.begin(), classes.end(), [](const EigenClass& a, const EigenClass& b) {
    if (a.modulus != b.modulus) return a.modulus > b.modulus;
    if (a.value.real() != b.value.real()) return a.value.real() > b.value.real();
    return a.value.imag() > b.value.imag();
  });
  return classes;
}

SpectralDecomposition dynamic_subalgebras(const LieAlgebra& alg, const Endomorphism& phi, const SpectralOptions& opt) {
  const auto hom = check_homomorphism(alg, phi);
  if (!hom.valid())
    throw std::invalid_argument("matrix is not a Lie algebra homomorphism (first defect at pair " +
                                std::to_string(hom.violations.front().i) + "," +
                                std::to_string(hom.violations.front().j) + ")");
  SpectralDecomposition d;
  const auto n = static_cast<Eigen::Index>(alg.dim());
  d.classes = generalized_eigenspaces(phi, opt);
  const auto& no = opt.numeric;
  d.g_plus = span_of(d.classes, {Stability::Unstable}, n, no);
  d.g_zero = span_of(d.classes, {Stability::Central}, n, no);
  d.g_minus = span_of(d.classes, {Stability::Stable}, n, no);
  d.k_phi = span_of(d.classes, {Stability::Kernel}, n, no);
  d.g_phi = span_of(d.classes, {Stability::Unstable, Stability::Central, Stability::Stable}, n, no);
  d.g_plus_zero = span_of(d.classes, {Stability::Unstable, Stability::Central}, n, no);
  d.g_minus_zero = span_of(d.classes, {Stability::Stable, Stability::Central}, n, no);
  return d;
}

GradingReport check_grading(const LieAlgebra& alg, const SpectralDecomposition& decomp, const SpectralOptions& opt) {
  GradingReport report;
  const auto n = static_cast<Eigen::Index>(alg.dim());
  const auto& cls = decomp.classes;
  for (std::size_t a = 0; a < cls.size(); ++a)
    for (std::size_t b = a; b < cls.size(); ++b) {
      ++report.pairs_checked;
      std::vector<Complex> products;
      for (auto x : class_values(cls[a]))
        for (auto y : class_values(cls[b])) products.push_back(x * y);
      Eigen::MatrixXd target(n, 0);
      for (const auto& c : cls) {
        bool hit = false;
        for (auto v : class_values(c))
          for (auto p : products)
            if (std::abs(v - p) <= 1e-6 * std::max(1.0, std::abs(p))) hit = true;
        if (hit) target = hconcat(target, c.real_subspace);
      }
      const Eigen::MatrixXd q = target.cols() > 0 ? orthonormal_span(target, opt.numeric) : target;
      double worst = 0.0;
      for (Eigen::Index i = 0; i < cls[a].real_subspace.cols(); ++i)
        for (Eigen::Index j = 0; j < cls[b].real_subspace.cols(); ++j) {
          const Eigen::VectorXd br = alg.bracket(Eigen::VectorXd(cls[a].real_subspace.col(i)),
                                                 Eigen::VectorXd(cls[b].real_subspace.col(j)));
          const Eigen::VectorXd residual = q.cols() > 0 ? Eigen::VectorXd(br - q * (q.transpose() * br)) : br;
          worst = std::max(worst, residual.norm());
        }
      if (worst > 1e-7) report.violations.push_back({a, b, worst});
    }
  return report;
}

namespace {

Eigen::MatrixXd restrict_to(const Eigen::MatrixXd& phi, const Eigen::MatrixXd& q) { return q.transpose() * phi * q; }

std::vector<Eigen::VectorXd> sample_unit_vectors(const Eigen::MatrixXd& q, std::size_t count, std::mt19937& rng) {
  std::normal_distribution<double> normal;
  std::vector<Eigen::VectorXd> out;
  if (q.cols() == 0) return out;
  for (std::size_t s = 0; s < count; ++s) {
    Eigen::VectorXd coeff(q.cols());
    for (Eigen::Index i = 0; i < coeff.size(); ++i) coeff(i) = normal(rng);
    Eigen::VectorXd v = q * coeff;
    out.push_back(v / v.norm());
  }
  return out;
}

}  // namespace

GrowthBoundReport check_growth_bounds(const Endomorphism& phi, const SpectralDecomposition& decomp,
                                      const GrowthOptions& opt) {
  GrowthBoundReport report;
  report.max_m = opt.max_m;
  report.samples = opt.samples;
  const Eigen::MatrixXd& a = phi.matrix;

  double bound = 0.0;
  for (const auto& c : decomp.classes) {
    if (c.stability == Stability::Unstable) bound = std::max(bound, 1.0 / c.modulus);
    if (c.stability == Stability::Stable) bound = std::max(bound, c.modulus);
  }
  const double mu = opt.mu.value_or(0.5 * (bound + 1.0));
  report.mu = mu;

  const Eigen::MatrixXd rplus = restrict_to(a, decomp.g_plus);
  const Eigen::MatrixXd rminus = restrict_to(a, decomp.g_minus);
  if (opt.c) {
    report.c = *opt.c;
  } else {
    double c = 1.0;
    Eigen::MatrixXd pp = Eigen::MatrixXd::Identity(rplus.rows(), rplus.cols());
    Eigen::MatrixXd pm = Eigen::MatrixXd::Identity(rminus.rows(), rminus.cols());
    for (int m = 1; m <= opt.max_m; ++m) {
      const double mu_m = std::pow(mu, m);
      if (rplus.size() > 0) {
        pp = pp * rplus;
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(pp);
        c = std::min(c, svd.singularValues().minCoeff() * mu_m);
      }
      if (rminus.size() > 0) {
        pm = pm * rminus;
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(pm);
        const double smax = svd.singularValues().maxCoeff();
        if (smax > 0) c = std::min(c, mu_m / smax);
      }
    }
    report.c = c * (1.0 - 1e-9);
  }

  // Iterate in subspace coordinates so rounding never leaks into the
  // complementary directions.
  std::mt19937 rng(opt.seed);
  const double slack = 1e-12;
  for (const auto& x : sample_unit_vectors(decomp.g_plus, opt.samples, rng)) {
    Eigen::VectorXd v = decomp.g_plus.transpose() * x;
    for (int m = 1; m <= opt.max_m; ++m) {
      v = rplus * v;
      const double rhs = report.c * std::pow(mu, -m);
      if (v.norm() < rhs * (1.0 - slack)) report.violations.push_back({"plus", m, v.norm(), rhs});
    }
  }
  for (const auto& y : sample_unit_vectors(decomp.g_minus, opt.samples, rng)) {
    Eigen::VectorXd v = decomp.g_minus.transpose() * y;
    for (int m = 1; m <= opt.max_m; ++m) {
      v = rminus * v;
      const double rhs = std::pow(mu, m) / report.c;
      if (v.norm() > rhs * (1.0 + slack)) report.violations.push_back({"minus", m, v.norm(), rhs});
    }
  }

  // Central part: |phi^m Z| mu^{a|m|} must decay in both time directions.
  const Eigen::MatrixXd q0 = decomp.g_zero;
  if (q0.cols() > 0) {
    const Eigen::MatrixXd r0 = restrict_to(a, q0);
    const Eigen::MatrixXd r0inv = r0.inverse();
    const int horizon = opt.central_horizon;
    const double rate = std::pow(mu, opt.central_exponent);
    for (const auto& z : sample_unit_vectors(q0, opt.samples, rng)) {
      for (const Eigen::MatrixXd* step : {&r0, &r0inv}) {
        Eigen::VectorXd v = q0.transpose() * z;
        double early_peak = 0.0;
        double last = 0.0;
        for (int m = 0; m <= horizon; ++m) {
          const double f = v.norm() * std::pow(rate, m);
          if (m <= horizon / 2) early_peak = std::max(early_peak, f);
          last = f;
          v = (*step) * v;
        }
        if (!(last < 0.5 * early_peak))
          report.violations.push_back({"zero", step == &r0 ? horizon : -horizon, last, 0.5 * early_peak});
      }
    }
  }
  return report;
}

bool is_semisimple_endo(const Endomorphism& phi, const SpectralOptions& opt) {
  const Eigen::Index n = phi.matrix.rows();
  if (n == 0) return true;
  if (phi.exact) {
    const auto p = minimal_polynomial(*phi.exact);
    QPoly dp;
    for (std::size_t i = 1; i < p.size(); ++i) dp.push_back(p[i] * Rational(static_cast<long>(i)));
    return poly_gcd(p, dp).size() <= 1;
  }
  // Float fallback: geometric multiplicity must equal algebraic multiplicity.
  for (const auto& c : generalized_eigenspaces(phi, opt)) {
    const std::size_t cluster = c.conjugate_pair ? c.multiplicity / 2 : c.multiplicity;
    Eigen::MatrixXcd shifted = phi.matrix.cast<std::complex<double>>() -
                               c.value * Eigen::MatrixXcd::Identity(n, n);
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(shifted);
    const auto& sv = svd.singularValues();
    const double cut = 1e-6 * std::max(1.0, sv(0));
    std::size_t nullity = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      if (sv(i) <= cut) ++nullity;
    if (nullity < cluster) return false;
  }
  return true;
}

bool is_invariant(const Eigen::MatrixXd& phi, const Eigen::MatrixXd& subspace, const NumericOptions& opt) {
  if (subspace.cols() == 0) return true;
  const std::size_t r = numeric_rank(subspace, opt);
  return numeric_rank(hconcat(subspace, phi * subspace), opt) == r && numeric_rank(phi * subspace, opt) == r;
}

std::optional<Eigen::MatrixXd> find_invariant_levi(const LieAlgebra& alg, const Endomorphism& phi,
                                                   const std::optional<QSubspace>& declared, bool allow_correction,
                                                   const NumericOptions& opt) {
  const auto n = static_cast<Eigen::Index>(alg.dim());
  if (const auto levi = levi_subalgebra(alg, declared)) {
    const Eigen::MatrixXd basis = levi->to_matrix();
    if (is_invariant(phi.matrix, basis, opt))
      return basis.cols() > 0 ? orthonormal_span(basis, opt) : Eigen::MatrixXd(n, 0);
  }
  if (allow_correction && is_semisimple_endo(phi)) {
    if (auto lifted = invariant_levi_lift(alg, phi.matrix, opt))
      return lifted->cols() > 0 ? orthonormal_span(*lifted, opt) : Eigen::MatrixXd(n, 0);
  }
  return std::nullopt;
}

bool is_compact_type(const LieAlgebra& alg) {
  if (alg.dim() == 0) return true;
  const Eigen::MatrixXd k = killing_form(alg).to_double();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k);
  return es.eigenvalues().maxCoeff() <= 1e-9 * std::max(1.0, k.norm());
}

CentralityReport check_compact_centrality(const LieAlgebra& alg, const Endomorphism& /*phi*/,
                                          const SpectralDecomposition& decomp, const NumericOptions& opt) {
  CentralityReport report;
  report.applicable = is_compact_type(alg);
  if (!report.applicable) return report;
  const Eigen::MatrixXd z = center(alg).to_matrix();
  auto inside = [&](const Eigen::MatrixXd& v) {
    if (v.cols() == 0) return true;
    if (z.cols() == 0) return false;
    return numeric_rank(hconcat(z, v), opt) == numeric_rank(z, opt);
  };
  report.plus_central = inside(decomp.g_plus);
  report.minus_central = inside(decomp.g_minus);
  return report;
}

bool check_image_identity(const Endomorphism& phi, const SpectralDecomposition& decomp, const NumericOptions& opt) {
  const auto n = static_cast<unsigned>(phi.matrix.rows());
  if (phi.exact) {
    // Im(phi^d) is the orthogonal complement of ker((phi^d)^T), computed exactly.
    const QMatrix p = power(*phi.exact, n);
    if (rank(p) != static_cast<std::size_t>(decomp.g_phi.cols())) return false;
    for (const auto& w : kernel(p.transpose())) {
      const Eigen::VectorXd wd = to_double(w);
      if ((decomp.g_phi.transpose() * wd).norm() > 1e-9 * wd.norm()) return false;
    }
    return true;
  }
  const Eigen::MatrixXd image = matrix_power(phi.matrix, n);
  const std::size_t r = numeric_rank(image, opt);
  if (r != static_cast<std::size_t>(decomp.g_phi.cols())) return false;
  if (r == 0) return true;
  return numeric_rank(hconcat(decomp.g_phi, orthonormal_span(image, opt)), opt) == r;
}

bool check_trivial_intersections(const SpectralDecomposition& decomp, const NumericOptions& opt) {
  auto trivial = [&](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    return numeric_rank(hconcat(a, b), opt) == static_cast<std::size_t>(a.cols() + b.cols());
  };
  return trivial(decomp.g_plus, decomp.g_minus) && trivial(decomp.g_plus, decomp.g_zero) &&
         trivial(decomp.g_zero, decomp.g_minus);
}

}  // namespace lge
