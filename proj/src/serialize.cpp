#include "serialize.hpp"

namespace hallbase {

std::string canonical_dump(const ordered_json& doc) { return doc.dump(2) + "\n"; }

uint64_t json_u64(const ordered_json& v, const char* what) {
  if (v.is_number_unsigned()) return v.get<uint64_t>();
  if (v.is_number_integer()) {
    int64_t s = v.get<int64_t>();
    if (s >= 0) return static_cast<uint64_t>(s);
  }
  fail(Errc::usage, std::string(what) + " must be a nonnegative integer");
}

ordered_json field_to_json(const FieldPtr& k) {
  ordered_json j;
  j["p"] = k->p();
  j["f"] = k->f();
  j["q"] = k->q();
  j["modulus"] = k->modulus();
  return j;
}

ordered_json element_to_json(const FieldPtr& k, uint32_t code) {
  return ordered_json(k->coeffs(code));
}

uint32_t element_from_json(const FieldPtr& k, const ordered_json& j) {
  std::vector<uint32_t> c;
  if (!j.is_array()) fail(Errc::parse_error, "field element must be a coefficient array");
  for (const auto& v : j) {
    uint64_t d = json_u64(v, "field element coefficient");
    if (d >= k->p()) fail(Errc::parse_error, "field element coefficient out of range");
    c.push_back(static_cast<uint32_t>(d));
  }
  if (c.size() != k->f()) fail(Errc::parse_error, "field element coefficient count mismatch");
  return k->from_coeffs(c);
}

ordered_json matrix_to_json(const Matrix& m) {
  ordered_json entries = ordered_json::array();
  for (uint32_t r = 0; r < m.rows; ++r) {
    ordered_json row = ordered_json::array();
    for (uint32_t c = 0; c < m.cols; ++c) row.push_back(element_to_json(m.field, m.at(r, c)));
    entries.push_back(std::move(row));
  }
  ordered_json j;
  j["rows"] = m.rows;
  j["cols"] = m.cols;
  j["entries"] = std::move(entries);
  return j;
}

Matrix matrix_from_json(const FieldPtr& k, const ordered_json& j) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("entries"))
    fail(Errc::parse_error, "matrix must carry rows, cols, entries");
  uint32_t rows = j.at("rows").get<uint32_t>();
  uint32_t cols = j.at("cols").get<uint32_t>();
  const ordered_json& entries = j.at("entries");
  if (!entries.is_array() || entries.size() != rows)
    fail(Errc::parse_error, "matrix entry row count mismatch");
  Matrix m(k, rows, cols);
  for (uint32_t r = 0; r < rows; ++r) {
    const ordered_json& row = entries.at(r);
    if (!row.is_array() || row.size() != cols)
      fail(Errc::parse_error, "matrix entry column count mismatch");
    for (uint32_t c = 0; c < cols; ++c) m.at(r, c) = element_from_json(k, row.at(c));
  }
  return m;
}

std::string spec_code(const GroupSpec& spec) {
  std::string name = family_name(spec.family);
  if (spec.family == Family::GO || spec.family == Family::SO) {
    switch (spec.eps) {
      case FormEps::plus: name += "+"; break;
      case FormEps::minus: name += "-"; break;
      case FormEps::circ: name += "o"; break;
      default: break;
    }
  }
  return name;
}

GroupSpec spec_from_code(const std::string& code, uint32_t n, uint64_t q) {
  std::string base = code;
  FormEps eps = FormEps::none;
  if (!base.empty() && (base.back() == '+' || base.back() == '-' || base.back() == 'o') &&
      (base.rfind("GO", 0) == 0 || base.rfind("SO", 0) == 0)) {
    switch (base.back()) {
      case '+': eps = FormEps::plus; break;
      case '-': eps = FormEps::minus; break;
      default: eps = FormEps::circ; break;
    }
    base.pop_back();
  }
  static const std::pair<const char*, Family> table[] = {
      {"GL", Family::GL},   {"SL", Family::SL}, {"GU", Family::GU}, {"SU", Family::SU},
      {"GSp", Family::GSp}, {"Sp", Family::Sp}, {"GO", Family::GO}, {"SO", Family::SO}};
  for (const auto& [name, fam] : table)
    if (base == name) return make_spec(fam, n, q, eps);
  fail(Errc::parse_error, "unknown family code: " + code);
}

ordered_json spec_to_json(const GroupSpec& spec) {
  ordered_json j;
  j["family"] = spec_code(spec);
  j["n"] = spec.n;
  j["q"] = spec.q;
  return j;
}

GroupSpec spec_from_json(const ordered_json& j) {
  if (!j.is_object() || !j.contains("family") || !j.contains("n") || !j.contains("q"))
    fail(Errc::parse_error, "group must carry family, n, q");
  return spec_from_code(j.at("family").get<std::string>(), j.at("n").get<uint32_t>(),
                        j.at("q").get<uint64_t>());
}

const char* hall_existence_name(HallExistence e) {
  switch (e) {
    case HallExistence::yes: return "yes";
    case HallExistence::no: return "no";
    default: return "unknown";
  }
}

ordered_json verdict_to_json(const EpiVerdict& v) {
  ordered_json j;
  j["exists"] = hall_existence_name(v.exists);
  j["clause"] = v.clause;
  j["r"] = v.r;
  j["tau"] = v.tau;
  j["a"] = v.a;
  j["b"] = v.b;
  j["warnings"] = v.warnings;
  j["notes"] = v.notes;
  return j;
}

ordered_json base_to_json(const BaseResult& b) {
  ordered_json j;
  j["bounded"] = b.bounded;
  j["value"] = b.value;
  j["nodes"] = b.nodes;
  return j;
}

ordered_json reg_to_json(const RegResult& r) {
  ordered_json j;
  j["exact"] = r.exact;
  j["value"] = r.value;
  j["seed"] = r.seed;
  j["nodes"] = r.nodes;
  return j;
}

ordered_json certificate_to_json(const WitnessCertificate& cert,
                                 const std::vector<Matrix>& hall_generators) {
  ordered_json j;
  j["level"] = cert.method == "matrix-level" ? "matrix" : "table";
  j["group"] = spec_to_json(cert.group);
  FieldPtr k;
  if (!hall_generators.empty())
    k = hall_generators.front().field;
  else if (!cert.witnesses.empty())
    k = cert.witnesses.front().field;
  else if (cert.group.family != Family::User)
    k = matrix_field(cert.group);
  j["field"] = k ? field_to_json(k) : ordered_json(nullptr);
  j["pi"] = cert.pi;
  j["hall_order"] = cert.hall_order;
  ordered_json gens = ordered_json::array();
  for (const Matrix& g : hall_generators) gens.push_back(matrix_to_json(g));
  j["hall_generators"] = std::move(gens);
  ordered_json wits = ordered_json::array();
  for (const Matrix& w : cert.witnesses) wits.push_back(matrix_to_json(w));
  j["witnesses"] = std::move(wits);
  j["intersection_order"] = cert.intersection_order;
  j["verdict"] = witness_verdict_name(cert.verdict);
  j["equals_kernel_core"] = cert.equals_kernel_core;
  j["kernel_core_order"] = cert.kernel_core_order;
  j["method"] = cert.method;
  j["seed"] = cert.seed;
  j["budget"] = cert.budget;
  j["evaluated"] = cert.evaluated;
  j["adapted_basis"] =
      cert.adapted_basis ? matrix_to_json(*cert.adapted_basis) : ordered_json(nullptr);
  return j;
}

ordered_json report_to_json(const TheoremReport& rep) {
  ordered_json j;
  j["group"] = spec_to_json(rep.spec);
  j["pi"] = rep.pi;
  j["out_of_scope"] = rep.out_of_scope;
  j["existence"] = verdict_to_json(rep.verdict);
  j["hall_found"] = rep.hall_found;
  j["hall_in_ambient"] = rep.hall_in_ambient;
  j["hall_order"] = rep.hall_order;
  j["hall_solvable"] = rep.hall_solvable;
  j["container"] = rep.container;
  j["ambient_enumerated"] = rep.ambient_enumerated;
  ordered_json gens = ordered_json::array();
  for (const Matrix& g : rep.hall_generators) gens.push_back(matrix_to_json(g));
  j["hall_generators"] = std::move(gens);
  j["base"] = rep.base ? base_to_json(*rep.base) : ordered_json(nullptr);
  j["reg5"] = rep.reg5 ? reg_to_json(*rep.reg5) : ordered_json(nullptr);
  j["certificate"] =
      rep.certificate ? certificate_to_json(*rep.certificate, rep.hall_generators)
                      : ordered_json(nullptr);
  j["notes"] = rep.notes;
  return j;
}

}  // namespace hallbase
