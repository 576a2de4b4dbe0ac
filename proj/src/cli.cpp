#include "lge/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

namespace lge {

using nlohmann::json;

namespace {

std::string fmt(double x, int digits = 12) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

std::optional<SpecFile> load(const std::string& path, std::ostream& err, int& status) {
  try {
    return load_spec(path);
  } catch (const SpecParseError& e) {
    err << path << ": parse error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << path << ": " << e.what() << "\n";
  }
  status = exit_code::parse_error;
  return std::nullopt;
}

// Emits the report to --out when given, else to out.
int emit(const CliOptions& opt, std::ostream& out, std::ostream& err, const std::string& report, int status) {
  if (opt.out) {
    std::ofstream f(*opt.out);
    if (!f) {
      err << "cannot write " << *opt.out << "\n";
      return exit_code::invalid;
    }
    f << report;
  } else {
    out << report;
  }
  return status;
}

std::string pair_label(const SpecFile& s, std::size_t i, std::size_t j) {
  return "(" + s.basis[i] + ", " + s.basis[j] + ")";
}

struct CheckResult {
  JacobiReport jacobi;
  HomomorphismReport hom;
  ValidationReport group;
  bool valid() const { return jacobi.valid() && hom.valid() && group.valid(); }
};

CheckResult run_checks(const SpecFile& s) {
  CheckResult r;
  r.jacobi = check_jacobi(s.algebra);
  r.hom = check_homomorphism(s.algebra, s.endomorphism());
  r.group = validate_group_spec(s.group, s.endomorphism(), s.kind);
  return r;
}

std::vector<std::string> check_messages(const SpecFile& s, const CheckResult& r) {
  std::vector<std::string> msgs;
  for (const auto& v : r.jacobi.violations) {
    const auto [i, j, k] = v.triple;
    if (v.antisymmetry)
      msgs.push_back("antisymmetry fails for pair " + pair_label(s, i, j));
    else
      msgs.push_back("Jacobi identity fails for triple (" + s.basis[i] + ", " + s.basis[j] + ", " + s.basis[k] + ")");
  }
  for (const auto& v : r.hom.violations)
    msgs.push_back("phi[x,y] != [phi x, phi y] for pair " + pair_label(s, v.i, v.j) + ", defect " + fmt(v.defect, 6));
  for (const auto& e : r.group.errors)
    if (e.rfind("matrix is not a homomorphism", 0) != 0) msgs.push_back(e);
  return msgs;
}

// Loads and checks; returns a spec only when every check passes.
std::optional<SpecFile> load_checked(const std::string& path, std::ostream& err, int& status) {
  auto spec = load(path, err, status);
  if (!spec) return spec;
  const auto r = run_checks(*spec);
  if (!r.valid()) {
    for (const auto& m : check_messages(*spec, r)) err << path << ": " << m << "\n";
    status = exit_code::invalid;
    return std::nullopt;
  }
  return spec;
}

json matrix_columns(const Eigen::MatrixXd& m) {
  json cols = json::array();
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    json c = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const double x = m(i, j);
      c.push_back(std::abs(x) < 1e-14 ? 0.0 : round_significant(x));
    }
    cols.push_back(c);
  }
  return cols;
}

}  // namespace

int cmd_check(const std::string& path, const CliOptions& opt, std::ostream& out, std::ostream& err) {
  int status = exit_code::ok;
  auto spec = load(path, err, status);
  if (!spec) return status;
  const auto r = run_checks(*spec);
  const auto msgs = check_messages(*spec, r);
  status = r.valid() ? exit_code::ok : exit_code::invalid;
  std::ostringstream rep;
  if (opt.format == "json") {
    json j{{"name", spec->name},
           {"valid", r.valid()},
           {"jacobi", r.jacobi.valid()},
           {"homomorphism", r.hom.valid()},
           {"group", r.group.valid()},
           {"errors", msgs}};
    json triples = json::array();
    for (const auto& v : r.jacobi.violations)
      triples.push_back({{"triple", v.triple}, {"antisymmetry", v.antisymmetry}});
    j["jacobi_violations"] = triples;
    rep << j.dump(2) << "\n";
  } else {
    rep << spec->name << ": " << (r.valid() ? "valid" : "invalid") << "\n";
    rep << "  jacobi: " << (r.jacobi.valid() ? "ok" : "FAILED") << "\n";
    rep << "  homomorphism: " << (r.hom.valid() ? "ok" : "FAILED") << "\n";
    rep << "  group model: " << (r.group.valid() ? "ok" : "FAILED") << "\n";
    for (const auto& m : msgs) rep << "  error: " << m << "\n";
  }
  return emit(opt, out, err, rep.str(), status);
}

int cmd_decompose(const std::string& path, const CliOptions& opt, std::ostream& out, std::ostream& err) {
  int status = exit_code::ok;
  auto spec = load_checked(path, err, status);
  if (!spec) return status;
  SpectralOptions so;
  if (opt.tol_rank) so.numeric.rank_tol = *opt.tol_rank;
  const auto phi = spec->endomorphism();
  const auto d = dynamic_subalgebras(spec->algebra, phi, so);
  const auto grading = check_grading(spec->algebra, d, so);
  const std::vector<std::pair<std::string, const Eigen::MatrixXd*>> spaces{
      {"g_phi", &d.g_phi}, {"k_phi", &d.k_phi},           {"g_plus", &d.g_plus},
      {"g_zero", &d.g_zero}, {"g_minus", &d.g_minus}, {"g_plus_zero", &d.g_plus_zero},
      {"g_minus_zero", &d.g_minus_zero}};
  std::ostringstream rep;
  if (opt.format == "json") {
    json j;
    j["name"] = spec->name;
    j["classes"] = json::array();
    for (const auto& c : d.classes)
      j["classes"].push_back({{"re", round_significant(c.value.real())},
                              {"im", round_significant(c.value.imag())},
                              {"modulus", round_significant(c.modulus)},
                              {"multiplicity", c.multiplicity},
                              {"conjugate_pair", c.conjugate_pair},
                              {"stability", to_string(c.stability)}});
    for (const auto& [name, m] : spaces) {
      j["dims"][name] = m->cols();
      j["bases"][name] = matrix_columns(*m);
    }
    json viol = json::array();
    for (const auto& v : grading.violations)
      viol.push_back({{"class_a", v.class_a}, {"class_b", v.class_b}, {"residual", v.residual}});
    j["grading"] = {{"pairs_checked", grading.pairs_checked}, {"violations", viol}};
    rep << j.dump(2) << "\n";
  } else {
    rep << spec->name << "\n";
    rep << "eigenvalue classes:\n";
    for (const auto& c : d.classes) {
      rep << "  " << fmt(c.value.real(), 10);
      if (c.conjugate_pair) rep << " +/- " << fmt(c.value.imag(), 10) << "i";
      rep << "  |a|=" << fmt(c.modulus, 10) << "  dim " << c.multiplicity << "  " << to_string(c.stability) << "\n";
    }
    rep << "dims:";
    for (const auto& [name, m] : spaces) rep << " " << name << "=" << m->cols();
    rep << "\n";
    for (const auto& [name, m] : spaces) {
      if (m->cols() == 0) continue;
      rep << name << " basis:";
      for (const auto& col : matrix_columns(*m)) rep << " " << col.dump();
      rep << "\n";
    }
    rep << "grading: " << grading.pairs_checked << " class pairs checked, " << grading.violations.size()
        << " violations\n";
  }
  return emit(opt, out, err, rep.str(), grading.valid() ? exit_code::ok : exit_code::invalid);
}

int cmd_entropy(const std::string& path, const CliOptions& opt, std::ostream& out, std::ostream& err) {
  int status = exit_code::ok;
  auto spec = load(path, err, status);
  if (!spec) return status;
  const auto jac = check_jacobi(spec->algebra);
  EntropyCertificate cert;
  if (!jac.valid()) {
    cert.diagnostics.push_back("bracket table violates the Jacobi identity or antisymmetry");
  } else {
    cert = entropy_certificate(spec->group, spec->endomorphism(), spec->kind);
  }
  switch (cert.status) {
    case CertificateStatus::Exact: status = exit_code::ok; break;
    case CertificateStatus::LowerBoundOnly: status = exit_code::lower_bound_only; break;
    case CertificateStatus::Rejected: status = exit_code::invalid; break;
  }
  std::ostringstream rep;
  if (opt.format == "json") {
    json j = certificate_to_json(cert);
    j["name"] = spec->name;
    rep << j.dump(2) << "\n";
  } else {
    rep << spec->name << "\n" << explain_certificate(cert);
  }
  return emit(opt, out, err, rep.str(), status);
}

EstimatorParams resolve_estimator(const SpecFile& spec, const CliOptions& opt) {
  EstimatorParams p = spec.estimator.value_or(EstimatorParams{});
  if (opt.n) p.n_max = *opt.n;
  if (opt.eps) p.eps_list = *opt.eps;
  if (opt.grid) p.grid_density = *opt.grid;
  return p;
}

EstimateResult estimate_spec(const SpecFile& spec, const EstimatorParams& params) {
  const auto phi = spec.endomorphism();
  const auto& g = spec.group;
  if (g.model == GroupModel::Torus)
    return estimate_entropy(torus_system(toral_component(g, phi).induced_double()), params);
  if ((g.model == GroupModel::CentralQuotient || g.model == GroupModel::RadicalLeviProduct) && !g.lattice.empty()) {
    const TorusBlock block = toral_component(g, phi);
    EstimateResult torus = estimate_entropy(torus_system(block.induced_double()), params);
    const std::size_t d = spec.algebra.dim();
    if (!spec.algebra.is_abelian() || block.rank == d) return torus;
    // Abelian: G = T^b x R^(d-b); add the compactified complement.
    Eigen::MatrixXd lat(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(block.rank));
    for (std::size_t j = 0; j < block.rank; ++j) lat.col(static_cast<Eigen::Index>(j)) = to_double(g.lattice[j]);
    const Eigen::MatrixXd comp = null_space(lat.transpose());
    const Eigen::MatrixXd quotient = comp.transpose() * phi.matrix * comp;
    return combine_product(torus, estimate_entropy(compactify_linear(quotient), params));
  }
  const bool simply_connected = g.model == GroupModel::SimplyConnected ||
                                (g.model == GroupModel::CentralQuotient && g.lattice.empty());
  if (simply_connected && is_nilpotent(spec.algebra))
    return estimate_entropy(compactify_linear(phi.matrix), params);
  throw std::invalid_argument("group model is neither compact nor a compactifiable nilpotent group");
}

namespace {

int run_estimate(const SpecFile& spec, const CliOptions& opt, std::ostream& err, EstimateResult& result,
                 const std::string& path) {
  try {
    result = estimate_spec(spec, resolve_estimator(spec, opt));
  } catch (const std::invalid_argument& e) {
    err << path << ": " << e.what() << "\n";
    return exit_code::invalid;
  } catch (const std::domain_error& e) {
    err << path << ": " << e.what() << "\n";
    return exit_code::invalid;
  }
  return result.reliable ? exit_code::ok : exit_code::unreliable;
}

std::string estimate_summary(const SpecFile& spec, const EstimateResult& r) {
  std::ostringstream rep;
  rep << spec.name << "\n";
  rep << "method: " << r.method << "\n";
  for (const auto& [e, s] : r.per_eps_slopes) rep << "  eps " << fmt(e, 6) << ": slope " << fmt(s, 10) << "\n";
  rep << "estimate: " << fmt(r.estimate, 10) << (r.reliable ? "" : " (unreliable)") << "\n";
  for (const auto& w : r.warnings) rep << "warning: " << w << "\n";
  return rep.str();
}

}  // namespace

int cmd_estimate(const std::string& path, const CliOptions& opt, std::ostream& out, std::ostream& err) {
  int status = exit_code::ok;
  auto spec = load_checked(path, err, status);
  if (!spec) return status;
  EstimateResult r;
  status = run_estimate(*spec, opt, err, r, path);
  if (status == exit_code::invalid) return status;
  if (opt.out) {
    std::ofstream f(*opt.out);
    if (!f) {
      err << "cannot write " << *opt.out << "\n";
      return exit_code::invalid;
    }
    f << estimate_csv(r);
  }
  if (opt.format == "json") {
    json j = estimate_to_json(r);
    j["name"] = spec->name;
    out << j.dump(2) << "\n";
  } else {
    out << estimate_summary(*spec, r);
    if (!opt.out) out << "\n" << estimate_csv(r);
  }
  if (!r.reliable) err << path << ": estimate marked unreliable\n";
  return status;
}

int cmd_compare(const std::string& path, const CliOptions& opt, std::ostream& out, std::ostream& err) {
  int status = exit_code::ok;
  auto spec = load_checked(path, err, status);
  if (!spec) return status;
  const auto cert = entropy_certificate(spec->group, spec->endomorphism(), spec->kind);
  if (cert.status == CertificateStatus::Rejected) {
    for (const auto& d : cert.diagnostics) err << path << ": " << d << "\n";
    return exit_code::invalid;
  }
  if (cert.status != CertificateStatus::Exact) {
    err << path << ": no exact certificate (lower bound " << fmt(cert.lower_bound) << "); comparison refused\n";
    return exit_code::lower_bound_only;
  }
  EstimateResult r;
  status = run_estimate(*spec, opt, err, r, path);
  if (status == exit_code::invalid) return status;
  if (status == exit_code::unreliable) {
    for (const auto& w : r.warnings) err << path << ": warning: " << w << "\n";
    err << path << ": estimate unreliable; comparison refused\n";
    return status;
  }
  const double gap = std::abs(r.estimate - *cert.value);
  const bool pass = gap <= opt.compare_tolerance;
  std::ostringstream rep;
  if (opt.format == "json") {
    json j{{"name", spec->name},
           {"certified", round_significant(*cert.value)},
           {"estimate", r.estimate},
           {"gap", gap},
           {"tolerance", opt.compare_tolerance},
           {"pass", pass}};
    rep << j.dump(2) << "\n";
  } else {
    rep << spec->name << "\n";
    rep << "certified: " << fmt(*cert.value) << "\n";
    rep << "estimate:  " << fmt(r.estimate, 10) << "\n";
    rep << "gap:       " << fmt(gap, 6) << " (tolerance " << fmt(opt.compare_tolerance, 6) << ")\n";
    rep << (pass ? "PASS" : "FAIL") << "\n";
  }
  return emit(opt, out, err, rep.str(), pass ? exit_code::ok : exit_code::invalid);
}

}  // namespace lge
