#include "lge/entropy.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace lge {

std::string to_string(CertificateStatus s) {
  switch (s) {
    case CertificateStatus::Exact: return "exact";
    case CertificateStatus::LowerBoundOnly: return "lower_bound_only";
    case CertificateStatus::Rejected: return "rejected";
  }
  return "?";
}

double round_significant(double x) {
  if (x == 0.0) return 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

double toral_entropy(const TorusBlock& block) {
  if (block.rank == 0) return 0.0;
  // Roots of each irreducible factor are simple, so their moduli are
  // accurate even when the matrix itself is defective.
  double h = 0.0;
  for (const auto& [factor, mult] : factor_integer_polynomial(characteristic_polynomial(block.induced))) {
    const auto deg = static_cast<Eigen::Index>(factor.size() - 1);
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(deg, deg);
    for (Eigen::Index i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
    for (Eigen::Index i = 0; i < deg; ++i) comp(i, deg - 1) = -static_cast<double>(factor[static_cast<std::size_t>(i)]);
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
    for (Eigen::Index i = 0; i < deg; ++i) {
      const double m = std::abs(es.eigenvalues()(i));
      if (m > 1.0 + 1e-9) h += static_cast<double>(mult) * std::log(m);
    }
  }
  return h;
}

namespace {

struct Chain {
  EntropyCertificate& cert;

  void add(std::string rule, std::string anchor, std::map<std::string, std::size_t> dims = {},
           std::string note = {}) {
    cert.chain.push_back({std::move(rule), std::move(anchor), std::move(dims), std::move(note)});
  }
  void exact(double v) {
    cert.status = CertificateStatus::Exact;
    cert.value = v;
  }
};

// Entropy of the unstable toral part of the radical, with phi restricted.
std::optional<double> radical_entropy(const GroupSpec& spec, const Endomorphism& phi, Chain& chain,
                                      const Eigen::MatrixXd& levi, const std::string& rule) {
  try {
    const auto rad = radical_restriction(spec, phi);
    const auto model = radical_model(spec, rad);
    const auto block = unstable_toral_part(model, rad.phi);
    chain.add(rule, "Thm 3.14",
              {{"radical", rad.basis.rank()},
               {"levi", static_cast<std::size_t>(levi.cols())},
               {"radical_toral", model.lattice.size()},
               {"radical_toral_unstable", block.rank}},
              "phi-invariant Levi subalgebra; entropy of the unstable toral part of the radical");
    return toral_entropy(block);
  } catch (const std::exception& e) {
    chain.cert.diagnostics.push_back(std::string("radical reduction failed: ") + e.what());
    return std::nullopt;
  }
}

}  // namespace

EntropyCertificate entropy_certificate(const GroupSpec& spec, const Endomorphism& phi, MapKind kind,
                                       const std::optional<SpectralDecomposition>& decomp_in) {
  EntropyCertificate cert;
  const auto report = validate_group_spec(spec, phi, kind);
  if (!report.valid()) {
    cert.diagnostics = report.errors;
    return cert;
  }
  Chain chain{cert};
  const auto& alg = spec.algebra;
  const SpectralDecomposition decomp = decomp_in ? *decomp_in : dynamic_subalgebras(alg, phi);
  cert.dim_plus = decomp.dim_of(decomp.g_plus);
  cert.dim_zero = decomp.dim_of(decomp.g_zero);
  cert.dim_minus = decomp.dim_of(decomp.g_minus);

  const TorusBlock full = toral_component(spec, phi);
  const TorusBlock unstable = unstable_block(full);
  cert.toral_rank = full.rank;
  cert.unstable_toral_rank = unstable.rank;
  const double toral_h = toral_entropy(unstable);
  cert.lower_bound = toral_h;
  cert.status = CertificateStatus::LowerBoundOnly;
  chain.add("R0", "Prop 3.7",
            {{"g_plus", cert.dim_plus},
             {"g_zero", cert.dim_zero},
             {"g_minus", cert.dim_minus},
             {"toral", full.rank},
             {"toral_unstable", unstable.rank}},
            "lower bound from the unstable toral part");

  const bool nilpotent = is_nilpotent(alg);
  const auto& f = spec.flags;

  if (spec.model == GroupModel::Torus && kind == MapKind::Endomorphism) {
    chain.add("T0", "toral endomorphism", {{"toral_unstable", unstable.rank}},
              "surjective integer endomorphism of a torus; sum of log|lambda| over |lambda| > 1");
    chain.exact(toral_h);
    return cert;
  }
  if (kind == MapKind::Endomorphism) {
    cert.diagnostics.push_back("reduction rules apply to automorphisms only");
    return cert;
  }

  const std::size_t rad_dim = radical(alg).rank();
  if (rad_dim == 0 && f.finite_semisimple_center) {
    chain.add("R1", "Thm 3.14", {{"radical", 0}}, "semisimple group with finite center");
    chain.exact(0.0);
    return cert;
  }
  if (f.simply_connected && f.solvable) {
    chain.add("R2", "Cor 3.11", {{"toral", full.rank}}, "simply connected solvable group");
    chain.exact(0.0);
    return cert;
  }
  if (f.solvable || f.g_zero_compact) {
    chain.add("R3", "Thm 3.8", {{"toral_unstable", unstable.rank}},
              f.solvable ? "decomposable because solvable" : "decomposable because G0 is compact");
    if (nilpotent)
      chain.add("R3", "Cor 3.9", {{"toral_unstable", unstable.rank}}, "nilpotent: T(G+) = T(G)+");
    else if (f.g_zero_compact)
      chain.add("R3", "Cor 3.10", {{"g_zero", cert.dim_zero}}, "G0 compact");
    chain.exact(toral_h);
    return cert;
  }
  if (f.finite_semisimple_center) {
    if (auto levi = find_invariant_levi(alg, phi, spec.declared_levi, false)) {
      if (auto h = radical_entropy(spec, phi, chain, *levi, "R4")) {
        chain.exact(*h);
        return cert;
      }
    }
  }
  if (f.harish_chandra_reductive) {
    chain.add("R5", "Cor 3.15", {{"toral_unstable", unstable.rank}}, "reductive group in the Harish-Chandra class");
    chain.exact(toral_h);
    return cert;
  }
  if (f.finite_semisimple_center && is_semisimple_endo(phi)) {
    auto levi = find_invariant_levi(alg, phi, spec.declared_levi, true);
    if (!levi) {
      chain.add("R6", "Cor 3.18", {}, "semisimple automorphism but no invariant Levi subalgebra was exhibited");
      cert.diagnostics.push_back("invariant Levi subalgebra not found; reporting the lower bound only");
      return cert;
    }
    chain.add("R6", "Cor 3.18", {{"levi", static_cast<std::size_t>(levi->cols())}},
              "semisimple automorphism; invariant Levi subalgebra constructed");
    if (auto h = radical_entropy(spec, phi, chain, *levi, "R4")) chain.exact(*h);
    return cert;
  }
  if (f.simply_connected && f.finite_center) {
    if (auto levi = find_invariant_levi(alg, phi, spec.declared_levi, true)) {
      chain.add("R7", "Cor 3.16", {{"levi", static_cast<std::size_t>(levi->cols())}},
                "simply connected with finite center and an invariant Levi subalgebra");
      chain.exact(0.0);
      return cert;
    }
  }
  cert.diagnostics.push_back("no reduction rule applies; reporting the lower bound only");
  return cert;
}

nlohmann::json certificate_to_json(const EntropyCertificate& cert) {
  nlohmann::json j;
  j["status"] = to_string(cert.status);
  j["value"] = cert.value ? nlohmann::json(round_significant(*cert.value)) : nlohmann::json(nullptr);
  j["lower_bound"] = round_significant(cert.lower_bound);
  j["chain"] = nlohmann::json::array();
  for (const auto& r : cert.chain) {
    nlohmann::json e{{"rule", r.rule}, {"anchor", r.anchor}, {"dims", r.dims}};
    if (!r.note.empty()) e["note"] = r.note;
    j["chain"].push_back(std::move(e));
  }
  j["diagnostics"] = cert.diagnostics;
  j["dims"] = {{"g_plus", cert.dim_plus},
               {"g_zero", cert.dim_zero},
               {"g_minus", cert.dim_minus},
               {"toral", cert.toral_rank},
               {"toral_unstable", cert.unstable_toral_rank}};
  return j;
}

std::string explain_certificate(const EntropyCertificate& cert) {
  std::ostringstream out;
  char buf[64];
  if (cert.status == CertificateStatus::Rejected) {
    out << "status: rejected\n";
    for (const auto& d : cert.diagnostics) out << "  error: " << d << "\n";
    return out.str();
  }
  out << "status: " << to_string(cert.status) << "\n";
  out << "dims: g+ " << cert.dim_plus << ", g0 " << cert.dim_zero << ", g- " << cert.dim_minus << "\n";
  out << "toral component rank " << cert.toral_rank << ", T(G+) rank " << cert.unstable_toral_rank << "\n";
  out << "chain:\n";
  for (const auto& r : cert.chain) {
    out << "  " << r.rule << " [" << r.anchor << "]";
    for (const auto& [k, v] : r.dims) out << " " << k << "=" << v;
    if (!r.note.empty()) out << " : " << r.note;
    out << "\n";
  }
  std::snprintf(buf, sizeof buf, "%.12g", cert.lower_bound);
  out << "lower bound: " << buf << "\n";
  if (cert.status == CertificateStatus::Exact) {
    std::snprintf(buf, sizeof buf, "%.12g", *cert.value);
    out << "h_top = " << buf << "\n";
  } else {
    out << "h_top >= " << buf << "\n";
  }
  for (const auto& d : cert.diagnostics) out << "note: " << d << "\n";
  return out.str();
}

}  // namespace lge
