#include "runner.hpp"

#include <algorithm>

namespace hallbase {

namespace {

constexpr uint64_t kDefaultCap = 2'000'000;
constexpr uint64_t kDefaultBudget = 50'000'000;

uint64_t req_u64(const ordered_json& req, const char* key, uint64_t dflt) {
  if (!req.contains(key) || req.at(key).is_null()) return dflt;
  return json_u64(req.at(key), key);
}

uint64_t need_u64(const ordered_json& req, const char* key) {
  if (!req.contains(key) || req.at(key).is_null())
    fail(Errc::usage, std::string(key) + " is required");
  return req_u64(req, key, 0);
}

std::string req_str(const ordered_json& req, const char* key, const std::string& dflt) {
  if (!req.contains(key) || req.at(key).is_null()) return dflt;
  const ordered_json& v = req.at(key);
  if (!v.is_string()) fail(Errc::usage, std::string(key) + " must be a string");
  return v.get<std::string>();
}

std::vector<uint64_t> req_pi(const ordered_json& req) {
  if (!req.contains("pi") || !req.at("pi").is_array() || req.at("pi").empty())
    fail(Errc::usage, "pi must be a nonempty array of primes");
  std::vector<uint64_t> pi;
  for (const auto& v : req.at("pi")) pi.push_back(json_u64(v, "pi entry"));
  std::sort(pi.begin(), pi.end());
  pi.erase(std::unique(pi.begin(), pi.end()), pi.end());
  return pi;
}

struct Instance {
  GroupSpec spec;
  std::vector<uint64_t> pi;
  uint64_t cap = kDefaultCap;
  uint64_t seed = 0;
  uint64_t budget = kDefaultBudget;
};

Instance parse_instance(const ordered_json& req, bool need_pi) {
  Instance in;
  std::string family = req_str(req, "family", "");
  if (family.empty()) fail(Errc::usage, "family is required");
  in.spec = spec_from_code(family, static_cast<uint32_t>(need_u64(req, "n")), need_u64(req, "q"));
  if (need_pi) in.pi = req_pi(req);
  in.cap = req_u64(req, "cap", kDefaultCap);
  in.seed = req_u64(req, "seed", 0);
  in.budget = req_u64(req, "budget", kDefaultBudget);
  return in;
}

ordered_json normalized_instance(const char* command, const Instance& in, bool with_pi) {
  ordered_json norm;
  norm["command"] = command;
  norm["family"] = spec_code(in.spec);
  norm["n"] = in.spec.n;
  norm["q"] = in.spec.q;
  if (with_pi) norm["pi"] = in.pi;
  norm["cap"] = in.cap;
  norm["seed"] = in.seed;
  norm["budget"] = in.budget;
  return norm;
}

std::vector<Matrix> subgroup_generator_matrices(const ElementTable& host, const Subgroup& h) {
  std::vector<Matrix> out;
  for (uint32_t g : small_generating_set(h)) out.push_back(host.matrix(g));
  return out;
}

struct Handled {
  ordered_json norm;
  ordered_json result;
  std::string status = "ok";
};

Handled handle_field(const ordered_json& req) {
  Handled h;
  uint64_t p, f;
  if (req.contains("p") || req.contains("f")) {
    p = need_u64(req, "p");
    f = req_u64(req, "f", 1);
  } else {
    uint64_t q = need_u64(req, "q");
    if (q < 2) fail(Errc::usage, "q must be at least 2");
    auto fac = factorize(q);
    if (fac.size() != 1) fail(Errc::not_prime, "q must be a prime power");
    p = fac[0].first;
    f = fac[0].second;
  }
  FieldPtr k = Field::make(p, static_cast<uint32_t>(f));
  h.norm["command"] = "field";
  h.norm["p"] = p;
  h.norm["f"] = f;
  h.result = field_to_json(k);
  ordered_json tables;
  tables["generator"] = element_to_json(k, k->generator());
  tables["least_nonsquare"] =
      (k->q() % 2 == 1) ? element_to_json(k, k->least_nonsquare()) : ordered_json(nullptr);
  h.result["sample"] = std::move(tables);
  return h;
}

Handled handle_group_order(const ordered_json& req) {
  Handled h;
  Instance in = parse_instance(req, false);
  h.norm = normalized_instance("group-order", in, false);
  h.norm.erase("cap");
  h.norm.erase("seed");
  h.norm.erase("budget");
  FactoredOrder fo = order_formula(in.spec);
  ordered_json fac = ordered_json::array();
  for (const auto& [prime, exp] : fo.factorization()) fac.push_back({prime, exp});
  h.result["factorization"] = std::move(fac);
  h.result["primes"] = fo.primes();
  h.result["value"] = fo.fits_u64() ? ordered_json(fo.value()) : ordered_json(nullptr);
  return h;
}

Handled handle_epi(const ordered_json& req) {
  Handled h;
  Instance in = parse_instance(req, true);
  h.norm = normalized_instance("epi", in, true);
  h.norm.erase("cap");
  h.norm.erase("seed");
  h.norm.erase("budget");
  h.result = verdict_to_json(epi_condition(in.spec, in.pi));
  return h;
}

Handled handle_hall_find(const ordered_json& req) {
  Handled h;
  Instance in = parse_instance(req, true);
  std::string strat = req_str(req, "strategy", "automatic");
  HallStrategy strategy;
  if (strat == "automatic")
    strategy = HallStrategy::automatic;
  else if (strat == "structural")
    strategy = HallStrategy::structural;
  else if (strat == "exhaustive")
    strategy = HallStrategy::exhaustive;
  else
    fail(Errc::usage, "strategy must be automatic, structural, or exhaustive");
  h.norm = normalized_instance("hall-find", in, true);
  h.norm["strategy"] = strat;

  HallSearch hs = hall_find_for_spec(in.spec, in.pi, strategy, in.cap, in.budget);
  h.result["existence"] = verdict_to_json(hs.verdict);
  h.result["found"] = hs.result.found;
  h.result["complete"] = hs.result.complete;
  h.result["provenance"] = hs.result.provenance;
  h.result["container"] = hs.container_name;
  h.result["hall_in_ambient"] = hs.hall_in_ambient;
  h.result["ambient_enumerated"] = hs.ambient != nullptr;
  h.result["nodes"] = hs.result.nodes;
  if (hs.result.found) {
    h.result["order"] = hs.result.subgroup.order();
    ordered_json gens = ordered_json::array();
    for (const Matrix& g : subgroup_generator_matrices(*hs.container, hs.result.subgroup))
      gens.push_back(matrix_to_json(g));
    h.result["generators"] = std::move(gens);
  } else {
    h.result["order"] = nullptr;
    h.result["generators"] = nullptr;
  }
  h.status = (hs.result.found || hs.result.complete) ? "ok" : "fail";
  return h;
}

Handled handle_witness_verify(const ordered_json& req) {
  Handled h;
  Instance in = parse_instance(req, true);
  uint32_t k_max = static_cast<uint32_t>(req_u64(req, "kmax", 4));
  h.norm = normalized_instance("witness-verify", in, true);
  h.norm["kmax"] = k_max;

  WorkingSubgroup ws = acquire_working_subgroup(in.spec, in.pi, in.cap, in.budget);
  std::vector<std::string> notes = ws.notes;
  h.result["existence"] = verdict_to_json(ws.verdict);
  h.result["hall_found"] = ws.hall_found;
  h.result["hall_in_ambient"] = ws.hall_in_ambient;
  h.result["container"] = ws.container;
  std::optional<WitnessCertificate> cert;
  if (ws.subgroup) {
    h.result["hall_order"] = ws.subgroup->order();
    if (ws.host_is_ambient())
      cert = table_witness_stage(*ws.ambient, *ws.subgroup, in.spec, in.budget, notes, k_max);
    else
      cert = matrix_witness_stage(*ws.host, *ws.subgroup, in.spec, notes);
    std::vector<Matrix> gens = subgroup_generator_matrices(*ws.host, *ws.subgroup);
    h.result["certificate"] = cert ? certificate_to_json(*cert, gens) : ordered_json(nullptr);
  } else {
    h.result["hall_order"] = nullptr;
    h.result["certificate"] = nullptr;
    notes.push_back("no working subgroup available");
  }
  h.result["notes"] = notes;
  h.status = (cert && cert->verdict != WitnessVerdict::failed) ? "ok" : "fail";
  return h;
}

Handled handle_base(const ordered_json& req) {
  Handled h;
  Instance in = parse_instance(req, true);
  uint32_t k_max = static_cast<uint32_t>(req_u64(req, "kmax", 5));
  h.norm = normalized_instance("base", in, true);
  h.norm["kmax"] = k_max;

  WorkingSubgroup ws = acquire_working_subgroup(in.spec, in.pi, in.cap, in.budget);
  h.result["container"] = ws.container;
  if (!ws.subgroup || !ws.host_is_ambient()) {
    h.result["base"] = nullptr;
    std::vector<std::string> notes = ws.notes;
    notes.push_back("coset action needs the full group enumerated");
    h.result["notes"] = notes;
    h.status = "fail";
    return h;
  }
  h.result["hall_order"] = ws.subgroup->order();
  h.result["omega"] = ws.ambient->size() / ws.subgroup->order();
  BaseResult b = base_size(*ws.ambient, *ws.subgroup, k_max, in.budget);
  h.result["base"] = base_to_json(b);
  h.result["notes"] = ws.notes;
  h.status = b.bounded ? "ok" : "fail";
  return h;
}

Handled handle_reg(const ordered_json& req) {
  Handled h;
  Instance in = parse_instance(req, true);
  uint32_t m = static_cast<uint32_t>(req_u64(req, "m", 5));
  uint64_t goal = req_u64(req, "goal", 5);
  std::string method = req_str(req, "method", "auto");
  if (method != "auto" && method != "exact" && method != "lower-bound")
    fail(Errc::usage, "method must be auto, exact, or lower-bound");
  if (m == 0) fail(Errc::usage, "m must be positive");
  h.norm = normalized_instance("reg", in, true);
  h.norm["m"] = m;
  h.norm["method"] = method;
  h.norm["goal"] = goal;

  WorkingSubgroup ws = acquire_working_subgroup(in.spec, in.pi, in.cap, in.budget);
  h.result["container"] = ws.container;
  if (!ws.subgroup || !ws.host_is_ambient()) {
    h.result["reg"] = nullptr;
    std::vector<std::string> notes = ws.notes;
    notes.push_back("coset action needs the full group enumerated");
    h.result["notes"] = notes;
    h.status = "fail";
    return h;
  }
  const ElementTable& t = *ws.ambient;
  const Subgroup& hw = *ws.subgroup;
  h.result["hall_order"] = hw.order();
  uint64_t omega = t.size() / hw.order();
  h.result["omega"] = omega;
  RegMethod rm;
  if (method == "exact")
    rm = RegMethod::exact;
  else if (method == "lower-bound")
    rm = RegMethod::lower_bound;
  else
    rm = (omega <= 64) ? RegMethod::exact : RegMethod::lower_bound;
  RegResult r = reg_count(t, hw, m, rm, in.seed, in.budget, goal);
  h.result["m"] = m;
  h.result["method_used"] = r.exact ? "exact" : "lower-bound";
  h.result["reg"] = reg_to_json(r);
  h.result["notes"] = ws.notes;
  return h;
}

Handled handle_theorem_check(const ordered_json& req) {
  Handled h;
  Instance in = parse_instance(req, true);
  h.norm = normalized_instance("theorem-check", in, true);
  TheoremReport rep = theorem_check(in.spec, in.pi, in.cap, in.seed, in.budget);
  h.result = report_to_json(rep);
  bool cert_ok =
      !rep.certificate || rep.certificate->verdict != WitnessVerdict::failed;
  h.status = (rep.hall_order > 0 && cert_ok) ? "ok" : "fail";
  return h;
}

}  // namespace

RunOutcome run_request(const ordered_json& request) {
  RunOutcome out;
  try {
    if (!request.is_object()) fail(Errc::usage, "request must be a JSON object");
    std::string cmd = req_str(request, "command", "");
    Handled h;
    if (cmd == "field")
      h = handle_field(request);
    else if (cmd == "group-order")
      h = handle_group_order(request);
    else if (cmd == "epi")
      h = handle_epi(request);
    else if (cmd == "hall-find")
      h = handle_hall_find(request);
    else if (cmd == "witness-verify")
      h = handle_witness_verify(request);
    else if (cmd == "base")
      h = handle_base(request);
    else if (cmd == "reg")
      h = handle_reg(request);
    else if (cmd == "theorem-check")
      h = handle_theorem_check(request);
    else
      fail(Errc::usage, "unknown command: " + cmd);
    out.response["request"] = std::move(h.norm);
    out.response["status"] = h.status;
    out.response["result"] = std::move(h.result);
    out.exit_code = h.status == "ok" ? 0 : 1;
  } catch (const Error& e) {
    out.response = ordered_json();
    out.response["request"] = request;
    out.response["status"] = "error";
    out.response["error"] = {{"code", errc_name(e.code())}, {"message", e.what()}};
    out.exit_code = 2;
  } catch (const std::exception& e) {
    out.response = ordered_json();
    out.response["request"] = request;
    out.response["status"] = "error";
    out.response["error"] = {{"code", "internal"}, {"message", e.what()}};
    out.exit_code = 2;
  }
  return out;
}

RunOutcome replay_document(const ordered_json& document) {
  RunOutcome out;
  try {
    if (!document.is_object() || !document.contains("request"))
      fail(Errc::usage, "document does not embed a request");
    RunOutcome rerun = run_request(document.at("request"));
    std::string stored = canonical_dump(document);
    std::string fresh = canonical_dump(rerun.response);
    bool identical = stored == fresh;
    out.response["request"] = ordered_json{{"command", "replay"}};
    out.response["status"] = identical ? "ok" : "fail";
    ordered_json res;
    res["identical"] = identical;
    res["stored_bytes"] = stored.size();
    res["fresh_bytes"] = fresh.size();
    if (!identical) res["fresh"] = rerun.response;
    out.response["result"] = std::move(res);
    out.exit_code = identical ? 0 : 1;
  } catch (const Error& e) {
    out.response = ordered_json();
    out.response["request"] = ordered_json{{"command", "replay"}};
    out.response["status"] = "error";
    out.response["error"] = {{"code", errc_name(e.code())}, {"message", e.what()}};
    out.exit_code = 2;
  }
  return out;
}

}  // namespace hallbase
