#include "lge/spec_file.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace lge {

using nlohmann::json;

SpecParseError::SpecParseError(const std::string& message, std::string pointer, std::optional<std::size_t> offset)
    : std::runtime_error(offset ? message + " (at byte " + std::to_string(*offset) + ")"
                                : message + " (at " + (pointer.empty() ? std::string("/") : pointer) + ")"),
      pointer_(std::move(pointer)),
      offset_(offset) {}

json rational_to_json(const Rational& q) {
  if (boost::multiprecision::denominator(q) == 1) {
    const Integer& num = boost::multiprecision::numerator(q);
    if (num >= std::numeric_limits<long long>::min() && num <= std::numeric_limits<long long>::max())
      return json(num.convert_to<long long>());
  }
  return json(to_string(q));
}

namespace {

struct Reader {
  [[noreturn]] static void fail(const std::string& msg, const std::string& ptr) { throw SpecParseError(msg, ptr); }

  static const json& field(const json& obj, const std::string& key, const std::string& ptr) {
    if (!obj.is_object()) fail("expected an object", ptr);
    auto it = obj.find(key);
    if (it == obj.end()) fail("missing field '" + key + "'", ptr);
    return *it;
  }

  static const json& array(const json& v, const std::string& ptr) {
    if (!v.is_array()) fail("expected an array", ptr);
    return v;
  }

  static std::size_t index(const json& v, const std::string& ptr) {
    if (!v.is_number_integer() || v.get<long long>() < 0) fail("expected a nonnegative integer", ptr);
    return v.get<std::size_t>();
  }

  static bool boolean(const json& v, const std::string& ptr) {
    if (!v.is_boolean()) fail("expected true or false", ptr);
    return v.get<bool>();
  }

  static std::string string(const json& v, const std::string& ptr) {
    if (!v.is_string()) fail("expected a string", ptr);
    return v.get<std::string>();
  }

  static Rational rational(const json& v, const std::string& ptr) {
    try {
      if (v.is_number_integer()) return Rational(Integer(v.dump()));
      if (v.is_number_float()) {
        char buf[64];
        auto res = std::to_chars(buf, buf + sizeof buf, v.get<double>());
        return parse_rational(std::string(buf, res.ptr));
      }
      if (v.is_string()) return parse_rational(v.get<std::string>());
    } catch (const std::exception& e) {
      fail(std::string("bad number: ") + e.what(), ptr);
    }
    fail("expected a number or a \"p/q\" string", ptr);
  }

  static QVector vector(const json& v, std::size_t len, const std::string& ptr) {
    array(v, ptr);
    if (v.size() != len) fail("expected " + std::to_string(len) + " entries, found " + std::to_string(v.size()), ptr);
    QVector out;
    for (std::size_t i = 0; i < len; ++i) out.push_back(rational(v[i], ptr + "/" + std::to_string(i)));
    return out;
  }

  static double positive(const json& v, const std::string& ptr) {
    if (!v.is_number() || !(v.get<double>() > 0)) fail("expected a positive number", ptr);
    return v.get<double>();
  }
};

const char* kFlagNames[] = {"simply_connected", "solvable", "finite_semisimple_center",
                            "harish_chandra_reductive", "g_zero_compact", "finite_center"};

bool* flag_slot(GroupFlags& f, std::size_t i) {
  bool* slots[] = {&f.simply_connected, &f.solvable, &f.finite_semisimple_center,
                   &f.harish_chandra_reductive, &f.g_zero_compact, &f.finite_center};
  return slots[i];
}

}  // namespace

SpecFile parse_spec(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SpecParseError(std::string("malformed JSON: ") + e.what(), "", e.byte);
  }
  using R = Reader;
  SpecFile s;
  if (!doc.is_object()) R::fail("top level must be an object", "");
  s.name = R::string(R::field(doc, "name", ""), "/name");
  if (doc.contains("description")) s.description = R::string(doc["description"], "/description");

  const json& alg = R::field(doc, "algebra", "");
  const std::size_t dim = R::index(R::field(alg, "dim", "/algebra"), "/algebra/dim");
  if (alg.contains("basis")) {
    const json& b = R::array(alg["basis"], "/algebra/basis");
    if (b.size() != dim) R::fail("basis must list " + std::to_string(dim) + " labels", "/algebra/basis");
    for (std::size_t i = 0; i < dim; ++i) s.basis.push_back(R::string(b[i], "/algebra/basis/" + std::to_string(i)));
  } else {
    for (std::size_t i = 0; i < dim; ++i) s.basis.push_back("e" + std::to_string(i + 1));
  }
  const json& br = R::array(R::field(alg, "brackets", "/algebra"), "/algebra/brackets");
  for (std::size_t t = 0; t < br.size(); ++t) {
    const std::string ptr = "/algebra/brackets/" + std::to_string(t);
    const json& e = R::array(br[t], ptr);
    if (e.size() != 4) R::fail("bracket entry must be [i, j, k, coeff]", ptr);
    BracketEntry entry;
    entry.i = R::index(e[0], ptr + "/0");
    entry.j = R::index(e[1], ptr + "/1");
    entry.k = R::index(e[2], ptr + "/2");
    for (std::size_t c = 0; c < 3; ++c)
      if (R::index(e[c], ptr + "/" + std::to_string(c)) >= dim)
        R::fail("basis index out of range", ptr + "/" + std::to_string(c));
    entry.coeff = R::rational(e[3], ptr + "/3");
    s.brackets.push_back(entry);
  }
  s.algebra = LieAlgebra::from_entries(dim, s.basis, s.brackets);

  const json& aut = R::field(doc, "automorphism", "");
  const json& rows = R::array(R::field(aut, "matrix", "/automorphism"), "/automorphism/matrix");
  if (rows.size() != dim) R::fail("matrix must have " + std::to_string(dim) + " rows", "/automorphism/matrix");
  s.matrix = QMatrix(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    const auto row = R::vector(rows[i], dim, "/automorphism/matrix/" + std::to_string(i));
    for (std::size_t j = 0; j < dim; ++j) s.matrix(i, j) = row[j];
  }
  if (aut.contains("kind")) {
    const auto kind = R::string(aut["kind"], "/automorphism/kind");
    if (kind == "automorphism")
      s.kind = MapKind::Automorphism;
    else if (kind == "endomorphism")
      s.kind = MapKind::Endomorphism;
    else
      R::fail("kind must be \"automorphism\" or \"endomorphism\"", "/automorphism/kind");
  }

  const json& grp = R::field(doc, "group", "");
  s.group.algebra = s.algebra;
  const auto model_name = R::string(R::field(grp, "model", "/group"), "/group/model");
  const auto model = parse_group_model(model_name);
  if (!model) R::fail("unknown group model '" + model_name + "'", "/group/model");
  s.group.model = *model;
  if (grp.contains("lattice")) {
    const json& lat = R::array(grp["lattice"], "/group/lattice");
    for (std::size_t i = 0; i < lat.size(); ++i)
      s.group.lattice.push_back(R::vector(lat[i], dim, "/group/lattice/" + std::to_string(i)));
  }
  if (grp.contains("flags")) {
    const json& fl = grp["flags"];
    if (!fl.is_object()) R::fail("expected an object", "/group/flags");
    for (auto it = fl.begin(); it != fl.end(); ++it) {
      std::size_t slot = std::size(kFlagNames);
      for (std::size_t i = 0; i < std::size(kFlagNames); ++i)
        if (it.key() == kFlagNames[i]) slot = i;
      if (slot == std::size(kFlagNames)) R::fail("unknown flag '" + it.key() + "'", "/group/flags/" + it.key());
      *flag_slot(s.group.flags, slot) = R::boolean(it.value(), "/group/flags/" + it.key());
    }
  }
  if (grp.contains("declared_levi")) {
    const json& lv = R::array(grp["declared_levi"], "/group/declared_levi");
    QSubspace levi;
    levi.ambient = dim;
    for (std::size_t i = 0; i < lv.size(); ++i)
      levi.basis.push_back(R::vector(lv[i], dim, "/group/declared_levi/" + std::to_string(i)));
    s.group.declared_levi = std::move(levi);
  }

  if (doc.contains("estimator")) {
    const json& est = doc["estimator"];
    if (!est.is_object()) R::fail("expected an object", "/estimator");
    EstimatorParams p;
    if (est.contains("n_max")) {
      p.n_max = static_cast<int>(R::index(est["n_max"], "/estimator/n_max"));
      if (p.n_max < 1) R::fail("n_max must be at least 1", "/estimator/n_max");
    }
    if (est.contains("eps_list")) {
      const json& el = R::array(est["eps_list"], "/estimator/eps_list");
      if (el.empty()) R::fail("eps_list is empty", "/estimator/eps_list");
      p.eps_list.clear();
      for (std::size_t i = 0; i < el.size(); ++i)
        p.eps_list.push_back(R::positive(el[i], "/estimator/eps_list/" + std::to_string(i)));
    }
    if (est.contains("grid_density")) {
      p.grid_density = R::index(est["grid_density"], "/estimator/grid_density");
      if (p.grid_density < 2) R::fail("grid_density must be at least 2", "/estimator/grid_density");
    }
    s.estimator = p;
  }
  return s;
}

SpecFile load_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_spec(buf.str());
}

json spec_to_json(const SpecFile& s) {
  json doc;
  doc["name"] = s.name;
  if (!s.description.empty()) doc["description"] = s.description;
  const std::size_t dim = s.algebra.dim();
  json brackets = json::array();
  for (const auto& e : s.brackets) brackets.push_back({e.i, e.j, e.k, rational_to_json(e.coeff)});
  doc["algebra"] = {{"dim", dim}, {"basis", s.basis}, {"brackets", brackets}};
  json rows = json::array();
  for (std::size_t i = 0; i < dim; ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < dim; ++j) row.push_back(rational_to_json(s.matrix(i, j)));
    rows.push_back(row);
  }
  doc["automorphism"] = {{"matrix", rows},
                         {"kind", s.kind == MapKind::Automorphism ? "automorphism" : "endomorphism"}};
  auto vectors = [](const std::vector<QVector>& vs) {
    json out = json::array();
    for (const auto& v : vs) {
      json row = json::array();
      for (const auto& x : v) row.push_back(rational_to_json(x));
      out.push_back(row);
    }
    return out;
  };
  json flags = json::object();
  GroupFlags f = s.group.flags;
  for (std::size_t i = 0; i < std::size(kFlagNames); ++i) flags[kFlagNames[i]] = *flag_slot(f, i);
  json grp{{"model", to_string(s.group.model)}, {"lattice", vectors(s.group.lattice)}, {"flags", flags}};
  if (s.group.declared_levi) grp["declared_levi"] = vectors(s.group.declared_levi->basis);
  doc["group"] = grp;
  if (s.estimator)
    doc["estimator"] = {{"n_max", s.estimator->n_max},
                        {"eps_list", s.estimator->eps_list},
                        {"grid_density", s.estimator->grid_density}};
  return doc;
}

std::string canonical_json(const SpecFile& spec) { return spec_to_json(spec).dump(2) + "\n"; }

bool operator==(const SpecFile& a, const SpecFile& b) {
  auto same_entries = [](const std::vector<BracketEntry>& x, const std::vector<BracketEntry>& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i].i != y[i].i || x[i].j != y[i].j || x[i].k != y[i].k || x[i].coeff != y[i].coeff) return false;
    return true;
  };
  auto same_estimator = [](const std::optional<EstimatorParams>& x, const std::optional<EstimatorParams>& y) {
    if (x.has_value() != y.has_value()) return false;
    if (!x) return true;
    return x->n_max == y->n_max && x->eps_list == y->eps_list && x->grid_density == y->grid_density;
  };
  return a.name == b.name && a.description == b.description && a.basis == b.basis &&
         same_entries(a.brackets, b.brackets) && a.algebra == b.algebra && a.matrix == b.matrix &&
         a.kind == b.kind && a.group == b.group && same_estimator(a.estimator, b.estimator);
}

}  // namespace lge
