#include "helpers.hpp"

#include <doctest.h>

using namespace lge;
using lge::test::q;
using lge::test::qdiag;
using lge::test::qmatrix;

namespace {

Endomorphism exact(const QMatrix& m) { return Endomorphism::from_exact(m); }

// True when the column spans of a and b coincide.
bool same_span(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.cols() != b.cols()) return false;
  if (a.cols() == 0) return true;
  return numeric_rank(hconcat(a, b)) == static_cast<std::size_t>(a.cols());
}

Eigen::MatrixXd unit_span(std::size_t d, std::vector<int> axes) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(axes.size()));
  for (std::size_t k = 0; k < axes.size(); ++k) m(axes[k], static_cast<Eigen::Index>(k)) = 1.0;
  return m;
}

// Real roots of x^2 - t x + n, larger first.
std::pair<double, double> quadratic_roots(double t, double n) {
  const double disc = std::sqrt(t * t - 4 * n);
  return {(t + disc) / 2, (t - disc) / 2};
}

void check_invariants(const LieAlgebra& alg, const QMatrix& phi_q, const std::string& label) {
  const Endomorphism phi = exact(phi_q);
  const std::size_t d = alg.dim();
  const auto decomp = dynamic_subalgebras(alg, phi);
  INFO(label);
  CHECK(decomp.dim_of(decomp.g_phi) + decomp.dim_of(decomp.k_phi) == d);
  CHECK(check_image_identity(phi, decomp));
  const auto grading = check_grading(alg, decomp);
  for (const auto& v : grading.violations) MESSAGE(v.class_a, " ", v.class_b, " ", v.residual);
  CHECK(grading.valid());
  CHECK(check_trivial_intersections(decomp));

  std::size_t total = 0;
  for (const auto& c : decomp.classes) total += c.multiplicity;
  CHECK(total == d);

  // phi restricted to g_phi is invertible.
  if (decomp.g_phi.cols() > 0) {
    const Eigen::MatrixXd restricted = decomp.g_phi.transpose() * phi.matrix * decomp.g_phi;
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(restricted);
    CHECK(svd.singularValues().minCoeff() > 1e-9 * std::max(1.0, svd.singularValues().maxCoeff()));
  }

  if (is_solvable(alg) && rank(phi_q) == d)
    CHECK(decomp.dim_of(decomp.g_plus) + decomp.dim_of(decomp.g_zero) + decomp.dim_of(decomp.g_minus) == d);
}

}  // namespace

TEST_CASE("homomorphism check") {
  const auto h3 = catalog::heisenberg();
  CHECK(check_homomorphism(h3, exact(QMatrix::identity(3))).valid());
  CHECK(check_homomorphism(catalog::sl2(), exact(QMatrix::identity(3))).valid());
  CHECK(check_homomorphism(h3, exact(qdiag({2, 3, 6}))).valid());

  const auto bad = check_homomorphism(h3, exact(qdiag({2, 3, 5})));
  REQUIRE(bad.violations.size() == 1);
  CHECK(bad.violations[0].i == 0);
  CHECK(bad.violations[0].j == 1);
  CHECK(bad.violations[0].defect == doctest::Approx(1.0));

  CHECK_THROWS_AS(dynamic_subalgebras(h3, exact(qdiag({2, 3, 5}))), std::invalid_argument);
}

TEST_CASE("generalized eigenspaces of diagonal and cat matrices") {
  const auto diag = generalized_eigenspaces(exact(qdiag({2, q(1, 2)})));
  REQUIRE(diag.size() == 2);
  CHECK(diag[0].value.real() == doctest::Approx(2.0));
  CHECK(diag[0].multiplicity == 1);
  CHECK(diag[0].stability == Stability::Unstable);
  CHECK(diag[1].value.real() == doctest::Approx(0.5));
  CHECK(diag[1].stability == Stability::Stable);
  CHECK(same_span(diag[0].real_subspace, unit_span(2, {0})));

  const QMatrix cat = qmatrix({{2, 1}, {1, 1}});
  const auto [big, small] = quadratic_roots(3, 1);
  const auto classes = generalized_eigenspaces(exact(cat));
  REQUIRE(classes.size() == 2);
  CHECK(classes[0].value.real() == doctest::Approx(big).epsilon(1e-12));
  CHECK(classes[1].value.real() == doctest::Approx(small).epsilon(1e-12));
  const Eigen::MatrixXd a = cat.to_double();
  for (const auto& c : classes) {
    CHECK(c.multiplicity == 1);
    CHECK(!c.conjugate_pair);
    const Eigen::VectorXd v = c.real_subspace.col(0);
    CHECK((a * v - c.value.real() * v).norm() < 1e-10);
  }
}

TEST_CASE("Jordan block and rotation classes") {
  const auto jordan = generalized_eigenspaces(exact(qmatrix({{1, 1}, {0, 1}})));
  REQUIRE(jordan.size() == 1);
  CHECK(jordan[0].multiplicity == 2);
  CHECK(jordan[0].stability == Stability::Central);
  CHECK(jordan[0].real_subspace.cols() == 2);

  const auto rot = generalized_eigenspaces(exact(qmatrix({{0, -1}, {1, 0}})));
  REQUIRE(rot.size() == 1);
  CHECK(rot[0].conjugate_pair);
  CHECK(rot[0].multiplicity == 2);
  CHECK(rot[0].value.imag() == doctest::Approx(1.0));
  CHECK(rot[0].modulus == doctest::Approx(1.0));

  const auto nil = generalized_eigenspaces(exact(qmatrix({{0, 1}, {0, 0}})));
  REQUIRE(nil.size() == 1);
  CHECK(nil[0].stability == Stability::Kernel);
}

TEST_CASE("dynamic subalgebras") {
  const auto h3 = catalog::heisenberg();
  const auto d = dynamic_subalgebras(h3, exact(qdiag({2, q(1, 2), 1})));
  CHECK(same_span(d.g_plus, unit_span(3, {0})));
  CHECK(same_span(d.g_minus, unit_span(3, {1})));
  CHECK(same_span(d.g_zero, unit_span(3, {2})));
  CHECK(d.k_phi.cols() == 0);
  CHECK(same_span(d.g_plus_zero, unit_span(3, {0, 2})));
  CHECK(same_span(d.g_minus_zero, unit_span(3, {1, 2})));

  const auto sl2 = catalog::sl2();
  const auto id = dynamic_subalgebras(sl2, exact(QMatrix::identity(3)));
  CHECK(id.g_zero.cols() == 3);
  CHECK(id.g_plus.cols() == 0);
  CHECK(id.g_minus.cols() == 0);
  CHECK(id.k_phi.cols() == 0);

  const QMatrix cat = qmatrix({{2, 1}, {1, 1}});
  const auto c = dynamic_subalgebras(catalog::abelian(2), exact(cat));
  REQUIRE(c.g_plus.cols() == 1);
  REQUIRE(c.g_minus.cols() == 1);
  CHECK(c.g_zero.cols() == 0);
  const auto [big, small] = quadratic_roots(3, 1);
  const Eigen::MatrixXd a = cat.to_double();
  CHECK((a * c.g_plus.col(0) - big * c.g_plus.col(0)).norm() < 1e-10);
  CHECK((a * c.g_minus.col(0) - small * c.g_minus.col(0)).norm() < 1e-10);
}

TEST_CASE("kernel part of a singular endomorphism") {
  // Projection onto the first coordinate of R^2.
  const auto d = dynamic_subalgebras(catalog::abelian(2), exact(qdiag({1, 0})));
  CHECK(same_span(d.g_phi, unit_span(2, {0})));
  CHECK(same_span(d.k_phi, unit_span(2, {1})));
}

TEST_CASE("grading") {
  const auto h3 = catalog::heisenberg();
  const auto a = dynamic_subalgebras(h3, exact(qdiag({2, 3, 6})));
  const auto ra = check_grading(h3, a);
  CHECK(ra.valid());
  CHECK(ra.pairs_checked > 0);

  CHECK(check_grading(h3, dynamic_subalgebras(h3, exact(qdiag({2, q(1, 2), 1})))).valid());

  const auto ab = catalog::abelian(3);
  CHECK(check_grading(ab, dynamic_subalgebras(ab, exact(qdiag({5, q(1, 3), 7})))).valid());

  // A decomposition taken from the wrong map: g_2 = e1, g_3 = e2, g_6 absent.
  const auto wrong = dynamic_subalgebras(catalog::abelian(3), exact(qdiag({2, 3, 5})));
  const auto rw = check_grading(h3, wrong);
  CHECK_FALSE(rw.valid());
}

TEST_CASE("growth bounds") {
  const auto ab = catalog::abelian(2);
  const Endomorphism phi = exact(qdiag({2, q(1, 2)}));
  const auto decomp = dynamic_subalgebras(ab, phi);
  GrowthOptions fixed;
  fixed.mu = 0.6;
  fixed.c = 1.0;
  const auto r = check_growth_bounds(phi, decomp, fixed);
  CHECK(r.valid());
  CHECK(r.max_m == 30);
  CHECK(r.mu == doctest::Approx(0.6));

  const auto fitted = check_growth_bounds(phi, decomp);
  CHECK(fitted.valid());
  CHECK(fitted.mu < 1.0);
  CHECK(fitted.c <= 1.0);
  CHECK(fitted.c > 0.0);

  // Too small a rate on the expanding side must be caught.
  GrowthOptions strict;
  strict.mu = 0.4;
  strict.c = 1.0;
  CHECK_FALSE(check_growth_bounds(phi, decomp, strict).valid());

  // g+ empty: a pure contraction still passes.
  const Endomorphism contraction = exact(qdiag({q(1, 2), q(1, 3)}));
  CHECK(check_growth_bounds(contraction, dynamic_subalgebras(ab, contraction)).valid());

  // Jordan block in g0: polynomial growth is beaten by mu^{0.1 m}.
  const Endomorphism jordan = exact(qmatrix({{1, 1}, {0, 1}}));
  const auto jr = check_growth_bounds(jordan, dynamic_subalgebras(ab, jordan));
  CHECK(jr.valid());
}

TEST_CASE("semisimple endomorphisms") {
  CHECK(is_semisimple_endo(exact(qdiag({2, 3}))));
  CHECK_FALSE(is_semisimple_endo(exact(qmatrix({{1, 1}, {0, 1}}))));
  CHECK(is_semisimple_endo(exact(qmatrix({{0, -1}, {1, 0}}))));
  CHECK(is_semisimple_endo(exact(QMatrix::identity(4))));
  CHECK(is_semisimple_endo(Endomorphism::from_double(Eigen::MatrixXd::Identity(3, 3))));
  Eigen::MatrixXd j(2, 2);
  j << 1, 1, 0, 1;
  CHECK_FALSE(is_semisimple_endo(Endomorphism::from_double(j)));
}

TEST_CASE("invariant Levi subalgebra") {
  const auto semi = catalog::sl2_semidirect_r2();
  const Endomorphism block = exact(qdiag({1, 4, q(1, 4), 2, q(1, 2)}));
  const auto s = find_invariant_levi(semi, block);
  REQUIRE(s);
  CHECK(same_span(*s, unit_span(5, {0, 1, 2})));

  const auto sl2 = catalog::sl2();
  test::RandomAutomorphisms gen(5);
  const auto whole_levi = find_invariant_levi(sl2, exact(gen.sl2()));
  REQUIRE(whole_levi);
  CHECK(whole_levi->cols() == 3);

  const auto solv = find_invariant_levi(catalog::heisenberg(), exact(qdiag({2, 3, 6})));
  REQUIRE(solv);
  CHECK(solv->cols() == 0);

  // Twisted: phi0 = id + 2 on R^2, conjugated by exp(ad v1). The canonical
  // sl2 copy is no longer invariant; the lift finds the conjugate one.
  const QMatrix t = QMatrix::identity(5) + semi.ad(basis_vector(5, 3));
  const QMatrix phi0 = qdiag({1, 1, 1, 2, 2});
  const QMatrix twisted = t * phi0 * test::inverse(t);
  const Endomorphism tw = exact(twisted);
  CHECK_FALSE(is_invariant(tw.matrix, unit_span(5, {0, 1, 2})));
  CHECK_FALSE(find_invariant_levi(semi, tw, std::nullopt, false));
  const auto lifted = find_invariant_levi(semi, tw, std::nullopt, true);
  REQUIRE(lifted);
  CHECK(is_invariant(tw.matrix, *lifted));
  CHECK(same_span(*lifted, (t.to_double() * unit_span(5, {0, 1, 2})).eval()));
}

TEST_CASE("compact centrality") {
  const auto ab = catalog::abelian(2);
  const Endomorphism cat = exact(qmatrix({{2, 1}, {1, 1}}));
  const auto rc = check_compact_centrality(ab, cat, dynamic_subalgebras(ab, cat));
  CHECK(rc.applicable);
  CHECK(rc.valid());

  const auto so3 = catalog::so3();
  test::RandomAutomorphisms gen(9);
  for (int k = 0; k < 10; ++k) {
    const Endomorphism rot = exact(gen.so3());
    const auto d = dynamic_subalgebras(so3, rot);
    CHECK(d.g_plus.cols() == 0);
    CHECK(d.g_minus.cols() == 0);
    const auto r = check_compact_centrality(so3, rot, d);
    CHECK(r.applicable);
    CHECK(r.valid());
  }
  CHECK(is_compact_type(so3));

  const auto sl2 = catalog::sl2();
  CHECK_FALSE(is_compact_type(sl2));
  const Endomorphism ad = exact(qdiag({1, 4, q(1, 4)}));
  const auto rn = check_compact_centrality(sl2, ad, dynamic_subalgebras(sl2, ad));
  CHECK_FALSE(rn.applicable);
  CHECK(rn.valid());
}

TEST_CASE("decomposition invariants on catalog specs") {
  for (const auto& name : test::catalog_names()) {
    const auto spec = test::catalog_spec(name);
    check_invariants(spec.algebra, spec.matrix, name);
    const auto decomp = dynamic_subalgebras(spec.algebra, spec.endomorphism());
    CHECK_MESSAGE(check_growth_bounds(spec.endomorphism(), decomp).valid(), name);
  }
}

TEST_CASE("decomposition invariants on random automorphisms") {
  const auto cases = test::random_automorphisms(210, 17);
  for (std::size_t k = 0; k < cases.size(); ++k) {
    REQUIRE(check_homomorphism(cases[k].algebra, exact(cases[k].phi)).valid());
    check_invariants(cases[k].algebra, cases[k].phi, cases[k].family + " #" + std::to_string(k));
  }
}
