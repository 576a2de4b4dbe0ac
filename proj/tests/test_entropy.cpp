#include "helpers.hpp"

#include <doctest.h>

using namespace lge;
using lge::test::q;
using lge::test::qdiag;
using lge::test::qmatrix;

namespace {

Endomorphism exact(const QMatrix& m) { return Endomorphism::from_exact(m); }

// log of the larger root of x^2 - 3x + 1.
const double kCat = std::log((3.0 + std::sqrt(5.0)) / 2.0);

EntropyCertificate certify(const std::string& name) {
  const auto spec = test::catalog_spec(name);
  return entropy_certificate(spec.group, spec.endomorphism(), spec.kind);
}

std::vector<std::string> rules(const EntropyCertificate& c) {
  std::vector<std::string> out;
  for (const auto& r : c.chain) out.push_back(r.rule);
  return out;
}

std::vector<std::string> anchors(const EntropyCertificate& c) {
  std::vector<std::string> out;
  for (const auto& r : c.chain) out.push_back(r.anchor);
  return out;
}

GroupSpec torus(std::size_t n) {
  GroupSpec s;
  s.algebra = catalog::abelian(n);
  s.model = GroupModel::Torus;
  for (std::size_t i = 0; i < n; ++i) s.lattice.push_back(basis_vector(n, i));
  s.flags.solvable = true;
  return s;
}

bool all_unit_moduli(const QMatrix& m) {
  const Eigen::VectorXcd ev = m.to_double().eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (std::abs(std::abs(ev(i)) - 1.0) > 1e-6) return false;
  return true;
}

void check_certificate_invariants(const EntropyCertificate& c, const std::string& label) {
  INFO(label);
  if (c.status == CertificateStatus::Exact) {
    REQUIRE(c.value);
    CHECK(*c.value >= c.lower_bound - 1e-12);
  }
  if (c.status != CertificateStatus::Rejected) CHECK_FALSE(c.chain.empty());
  CHECK(c.lower_bound >= 0.0);
}

}  // namespace

TEST_CASE("toral entropy") {
  CHECK(toral_entropy(TorusBlock{}) == 0.0);
  const QMatrix cat = qmatrix({{2, 1}, {1, 1}});
  CHECK(toral_entropy(toral_component(torus(2), exact(cat))) == doctest::Approx(kCat).epsilon(1e-13));
  CHECK(toral_entropy(toral_component(torus(2), exact(qmatrix({{0, -1}, {1, 0}})))) == 0.0);
  CHECK(toral_entropy(toral_component(torus(2), exact(qmatrix({{1, 1}, {0, 1}})))) == 0.0);
  CHECK(toral_entropy(toral_component(torus(2), exact(qdiag({2, 3})))) ==
        doctest::Approx(std::log(2.0) + std::log(3.0)).epsilon(1e-13));
}

TEST_CASE("cat map certificate") {
  const auto c = certify("torus_cat");
  REQUIRE(c.status == CertificateStatus::Exact);
  CHECK(*c.value == doctest::Approx(kCat).epsilon(1e-12));
  CHECK(std::abs(*c.value - 0.9624236501) < 1e-9);
  CHECK(rules(c) == std::vector<std::string>{"R0", "R3", "R3"});
  CHECK(anchors(c) == std::vector<std::string>{"Prop 3.7", "Thm 3.8", "Cor 3.9"});
  CHECK(c.toral_rank == 2);
  CHECK(c.unstable_toral_rank == 2);
  CHECK(c.dim_plus == 1);
  CHECK(c.dim_minus == 1);
  CHECK(c.dim_zero == 0);
}

TEST_CASE("zero entropy theorems on the catalog") {
  const auto h3 = certify("heisenberg_sc");
  REQUIRE(h3.status == CertificateStatus::Exact);
  CHECK(*h3.value == 0.0);
  CHECK(h3.chain.back().rule == "R2");
  CHECK(h3.chain.back().anchor == "Cor 3.11");

  const auto sl2 = certify("sl2");
  REQUIRE(sl2.status == CertificateStatus::Exact);
  CHECK(*sl2.value == 0.0);
  CHECK(sl2.chain.back().rule == "R1");

  const auto semi = certify("sl2_semidirect_r2");
  REQUIRE(semi.status == CertificateStatus::Exact);
  CHECK(*semi.value == 0.0);
  CHECK(semi.chain.back().rule == "R4");
  CHECK(semi.chain.back().anchor == "Thm 3.14");
  CHECK(semi.chain.back().dims.at("radical_toral_unstable") == 0);

  const auto twisted = certify("sl2_semidirect_r2_twisted");
  REQUIRE(twisted.status == CertificateStatus::Exact);
  CHECK(*twisted.value == 0.0);
  CHECK(rules(twisted) == std::vector<std::string>{"R0", "R6", "R4"});

  const auto su2 = certify("su2_sc");
  REQUIRE(su2.status == CertificateStatus::Exact);
  CHECK(*su2.value == 0.0);
  CHECK(su2.chain.back().rule == "R7");
  CHECK(su2.chain.back().anchor == "Cor 3.16");

  const auto line = certify("line_contraction");
  REQUIRE(line.status == CertificateStatus::Exact);
  CHECK(*line.value == 0.0);
}

TEST_CASE("positive entropy through reductions") {
  const auto cq = certify("heisenberg_central_quotient");
  REQUIRE(cq.status == CertificateStatus::Exact);
  CHECK(*cq.value == 0.0);
  CHECK(cq.toral_rank == 1);

  const auto so3 = certify("so3_x_torus_cat");
  REQUIRE(so3.status == CertificateStatus::Exact);
  CHECK(*so3.value == doctest::Approx(kCat).epsilon(1e-12));
  CHECK(so3.chain.back().anchor == "Cor 3.10");

  const auto hc = certify("torus2_x_sl2");
  REQUIRE(hc.status == CertificateStatus::Exact);
  CHECK(*hc.value == doctest::Approx(kCat).epsilon(1e-12));
  CHECK(hc.chain.back().rule == "R5");
  CHECK(hc.chain.back().anchor == "Cor 3.15");

  const auto line = certify("cat_x_line");
  REQUIRE(line.status == CertificateStatus::Exact);
  CHECK(*line.value == doctest::Approx(kCat).epsilon(1e-12));
}

TEST_CASE("toral endomorphism diag(2,3)") {
  const auto c = certify("torus_diag23");
  REQUIRE(c.status == CertificateStatus::Exact);
  CHECK(std::abs(*c.value - 1.791759469) < 1e-9);
  CHECK(*c.value == doctest::Approx(std::log(6.0)).epsilon(1e-13));
  CHECK(c.chain.back().rule == "T0");
}

TEST_CASE("fallback reports the lower bound only") {
  const auto c = certify("sl2_noflags");
  CHECK(c.status == CertificateStatus::LowerBoundOnly);
  CHECK_FALSE(c.value);
  CHECK_FALSE(c.diagnostics.empty());

  // Endomorphisms outside the torus model are never certified exactly.
  GroupSpec h3;
  h3.algebra = catalog::heisenberg();
  h3.flags.simply_connected = h3.flags.solvable = true;
  const auto e = entropy_certificate(h3, exact(qdiag({2, 3, 6})), MapKind::Endomorphism);
  CHECK(e.status == CertificateStatus::LowerBoundOnly);
}

TEST_CASE("invalid specs are rejected with diagnostics") {
  const auto c = entropy_certificate(torus(2), exact(qdiag({2, 1})));
  CHECK(c.status == CertificateStatus::Rejected);
  CHECK(c.chain.empty());
  CHECK_FALSE(c.diagnostics.empty());
  const std::string text = explain_certificate(c);
  CHECK(text.find(c.diagnostics.front()) != std::string::npos);
}

TEST_CASE("certificate report formatting") {
  const auto cat = certify("torus_cat");
  const std::string text = explain_certificate(cat);
  CHECK(text.find("Thm 3.8") != std::string::npos);
  CHECK(text.find("h_top = 0.962423650119") != std::string::npos);

  const auto lb = certify("sl2_noflags");
  const std::string lbt = explain_certificate(lb);
  CHECK(lbt.find("h_top >= ") != std::string::npos);
  CHECK(lbt.find("h_top = ") == std::string::npos);

  const auto j = certificate_to_json(cat);
  CHECK(j["status"] == "exact");
  CHECK(j["value"].get<double>() == 0.962423650119);
  CHECK(j["chain"].size() == 3);
  CHECK(j["chain"][1]["anchor"] == "Thm 3.8");

  const auto zero = certificate_to_json(certify("heisenberg_sc"));
  CHECK(zero["value"].get<double>() == 0.0);
  CHECK(round_significant(0.1234567890123456) == 0.123456789012);
}

TEST_CASE("additivity on products") {
  const auto catcat = certify("cat_x_cat_product");
  REQUIRE(catcat.status == CertificateStatus::Exact);
  CHECK(*catcat.value == doctest::Approx(2 * *certify("torus_cat").value).epsilon(1e-12));

  const QMatrix cat = qmatrix({{2, 1}, {1, 1}});
  const auto with_id = entropy_certificate(torus(3), exact(test::block_diag(cat, QMatrix::identity(1))));
  const auto id = entropy_certificate(torus(1), exact(QMatrix::identity(1)));
  REQUIRE(with_id.status == CertificateStatus::Exact);
  REQUIRE(id.status == CertificateStatus::Exact);
  CHECK(*with_id.value == doctest::Approx(*certify("torus_cat").value + *id.value).epsilon(1e-12));

  // Random unimodular pairs.
  test::RandomAutomorphisms gen(31);
  for (int k = 0; k < 20; ++k) {
    const QMatrix a = gen.unimodular(2), b = gen.unimodular(2);
    const auto ca = entropy_certificate(torus(2), exact(a));
    const auto cb = entropy_certificate(torus(2), exact(b));
    const auto cab = entropy_certificate(torus(4), exact(test::block_diag(a, b)));
    REQUIRE(cab.status == CertificateStatus::Exact);
    CHECK(*cab.value == doctest::Approx(*ca.value + *cb.value).epsilon(1e-10));
  }
}

TEST_CASE("simply connected solvable specs agree under both rules") {
  for (const auto& name : test::catalog_names()) {
    const auto spec = test::catalog_spec(name);
    const auto& f = spec.group.flags;
    if (!(f.simply_connected && f.solvable)) continue;
    const auto c = entropy_certificate(spec.group, spec.endomorphism(), spec.kind);
    INFO(name);
    CHECK(c.toral_rank == 0);
    CHECK(c.unstable_toral_rank == 0);
    REQUIRE(c.value);
    CHECK(*c.value == 0.0);
  }
}

TEST_CASE("certificate invariants on the catalog") {
  for (const auto& name : test::catalog_names()) check_certificate_invariants(certify(name), name);
}

TEST_CASE("certificate invariants on random automorphisms") {
  std::size_t exact_count = 0;
  for (const auto& c : test::random_group_specs(120)) {
    const Endomorphism phi = exact(c.phi);
    REQUIRE(validate_group_spec(c.group, phi).valid());
    const auto cert = entropy_certificate(c.group, phi);
    check_certificate_invariants(cert, c.family);
    if (cert.status != CertificateStatus::Exact) continue;
    ++exact_count;
    // Isometric spectrum: every rule yields 0.
    if (all_unit_moduli(c.phi)) CHECK(*cert.value == 0.0);
    if (c.group.model == GroupModel::Torus) {
      double oracle = 0.0;
      const Eigen::VectorXcd ev = c.phi.to_double().eigenvalues();
      for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (std::abs(ev(i)) > 1.0 + 1e-3) oracle += std::log(std::abs(ev(i)));
      CHECK(*cert.value == doctest::Approx(oracle).epsilon(1e-9));
    }
  }
  CHECK(exact_count >= 100);
}
