#include "basesize.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace hallbase {

namespace {

std::string members_key(const std::vector<uint32_t>& members) {
  std::string s;
  s.reserve(members.size() * 4);
  for (uint32_t m : members) {
    s.push_back(static_cast<char>(m & 0xff));
    s.push_back(static_cast<char>((m >> 8) & 0xff));
    s.push_back(static_cast<char>((m >> 16) & 0xff));
    s.push_back(static_cast<char>((m >> 24) & 0xff));
  }
  return s;
}

// Members of s fixing the point, in ascending order.
std::vector<uint32_t> point_stab(const CosetAction& ca, const std::vector<uint32_t>& s,
                                 uint32_t point) {
  const ElementTable& t = *ca.parent;
  uint32_t rep = ca.reps[point];
  std::vector<uint32_t> out;
  for (uint32_t m : s)
    if (ca.point_of[t.mul(rep, m)] == point) out.push_back(m);
  return out;
}

struct Budget {
  uint64_t left;
  void charge(uint64_t cost) {
    if (cost > left) fail(Errc::budget_exceeded, "stabilizer-chain budget exhausted");
    left -= cost;
  }
};

}  // namespace

uint32_t CosetAction::act(uint32_t point, uint32_t g) const {
  return point_of[parent->mul(reps[point], g)];
}

CosetAction coset_action(const ElementTable& t, const Subgroup& h) {
  if (h.parent != &t) fail(Errc::parent_mismatch, "subgroup belongs to another table");
  CosetAction ca;
  ca.parent = &t;
  ca.point_of.assign(t.size(), UINT32_MAX);
  for (uint32_t g = 0; g < t.size(); ++g) {
    if (ca.point_of[g] != UINT32_MAX) continue;
    uint32_t id = static_cast<uint32_t>(ca.reps.size());
    ca.reps.push_back(g);
    for (uint32_t m : h.members) ca.point_of[t.mul(m, g)] = id;
  }
  for (uint32_t gen : t.generator_ids()) {
    std::vector<uint32_t> img(ca.reps.size());
    for (size_t i = 0; i < ca.reps.size(); ++i)
      img[i] = ca.point_of[t.mul(ca.reps[i], gen)];
    ca.images.push_back(std::move(img));
  }
  return ca;
}

BaseResult base_size(const ElementTable& t, const Subgroup& h, uint32_t k_max,
                     uint64_t node_budget) {
  BaseResult res;
  CosetAction ca = coset_action(t, h);
  std::vector<uint32_t> core = kernel_core(h).members;
  Budget budget{node_budget};

  // Stabilizers of tuples are intersections of point stabilizers; the first
  // point is normalised to the trivial coset (conjugating a base moves it
  // there), whose stabilizer is h itself.
  if (h.members == core) {
    res.bounded = true;
    res.value = 1;
    return res;
  }
  std::unordered_set<std::string> visited;
  std::vector<std::vector<uint32_t>> layer = {h.members};
  visited.insert(members_key(h.members));
  uint64_t nodes = 0;
  for (uint32_t depth = 2; depth <= k_max; ++depth) {
    std::vector<std::vector<uint32_t>> next_layer;
    for (const auto& s : layer) {
      for (uint32_t pt = 0; pt < ca.omega(); ++pt) {
        budget.charge(s.size());
        nodes += 1;
        std::vector<uint32_t> sub = point_stab(ca, s, pt);
        if (sub == core) {
          res.bounded = true;
          res.value = depth;
          res.nodes = nodes;
          return res;
        }
        std::string key = members_key(sub);
        if (visited.insert(std::move(key)).second) next_layer.push_back(std::move(sub));
      }
    }
    if (next_layer.empty()) break;  // stabilizer lattice exhausted
    layer = std::move(next_layer);
  }
  res.nodes = nodes;
  return res;
}

namespace {

struct ExactCounter {
  const CosetAction* ca;
  const std::vector<uint32_t>* core;
  Budget* budget;
  uint64_t nodes = 0;
  std::unordered_map<std::string, uint64_t> memo;

  uint64_t rec(const std::vector<uint32_t>& s, uint32_t j) {
    if (j == 0) return s == *core ? 1 : 0;
    std::string key = members_key(s);
    key.push_back(static_cast<char>(j));
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    unsigned __int128 total = 0;
    for (uint32_t pt = 0; pt < ca->omega(); ++pt) {
      budget->charge(s.size());
      ++nodes;
      total += rec(point_stab(*ca, s, pt), j - 1);
      if (total > UINT64_MAX)
        fail(Errc::budget_exceeded, "regular-tuple count exceeds 64 bits");
    }
    uint64_t value = static_cast<uint64_t>(total);
    memo.emplace(std::move(key), value);
    return value;
  }
};

}  // namespace

RegResult reg_count(const ElementTable& t, const Subgroup& h, uint32_t m, RegMethod method,
                    uint64_t seed, uint64_t node_budget, uint64_t goal) {
  RegResult res;
  res.seed = seed;
  if (m == 0) fail(Errc::index_out_of_range, "tuple length must be positive");
  CosetAction ca = coset_action(t, h);
  std::vector<uint32_t> core = kernel_core(h).members;
  Budget budget{node_budget};

  if (method == RegMethod::exact) {
    ExactCounter counter{&ca, &core, &budget, 0, {}};
    // All one-point stabilizers are conjugate, and conjugate stabilizers
    // admit the same counts (translate the tuple), so the first level is a
    // single branch scaled by the number of points.
    uint64_t per_first = counter.rec(h.members, m - 1);
    unsigned __int128 total = static_cast<unsigned __int128>(ca.omega()) * per_first;
    // Each orbit of regular tuples has |G| / |core| members.
    unsigned __int128 orbit = t.size() / core.size();
    if (total % orbit != 0)
      fail(Errc::internal, "regular-tuple count does not split into orbits");
    unsigned __int128 orbits = total / orbit;
    if (orbits > UINT64_MAX) fail(Errc::budget_exceeded, "orbit count exceeds 64 bits");
    res.exact = true;
    res.value = static_cast<uint64_t>(orbits);
    res.nodes = counter.nodes;
    return res;
  }

  // Lower bound: regular tuples, counted up to the action by canonical
  // (lexicographically least translate) forms.
  auto canonical = [&](const std::vector<uint32_t>& tuple) {
    std::vector<uint32_t> best;
    std::vector<uint32_t> cur(tuple.size());
    for (uint32_t g = 0; g < t.size(); ++g) {
      for (size_t i = 0; i < tuple.size(); ++i) cur[i] = ca.act(tuple[i], g);
      if (best.empty() || cur < best) best = cur;
    }
    return best;
  };
  auto chain_is_regular = [&](const std::vector<uint32_t>& tuple) {
    std::vector<uint32_t> s = conjugate_subgroup(h, ca.reps[tuple[0]]).members;
    for (size_t i = 1; i < tuple.size() && s != core; ++i) {
      budget.charge(s.size());
      s = point_stab(ca, s, tuple[i]);
    }
    return s == core;
  };

  std::set<std::vector<uint32_t>> orbits_seen;
  std::mt19937_64 rng(seed);
  uint64_t tries = std::max<uint64_t>(64, goal * 64);
  for (uint64_t i = 0; i < tries && orbits_seen.size() < goal; ++i) {
    std::vector<uint32_t> tuple(m);
    for (auto& pt : tuple) pt = static_cast<uint32_t>(rng() % ca.omega());
    ++res.nodes;
    budget.charge(m);
    if (chain_is_regular(tuple)) orbits_seen.insert(canonical(tuple));
  }
  if (orbits_seen.size() < goal) {
    // Deterministic sweep in lexicographic order.
    std::vector<uint32_t> tuple(m, 0);
    std::vector<std::vector<uint32_t>> chain(m + 1);
    uint32_t depth = 0;
    chain[0] = whole_group(t).members;
    bool done = false;
    while (!done && orbits_seen.size() < goal) {
      if (depth == m) {
        if (chain[m] == core) orbits_seen.insert(canonical(tuple));
        // step the odometer
        while (depth > 0 && tuple[depth - 1] + 1 == ca.omega()) --depth;
        if (depth == 0) {
          done = true;
        } else {
          ++tuple[depth - 1];
          for (uint32_t i = depth; i < m; ++i) tuple[i] = 0;
        }
        continue;
      }
      budget.charge(depth == 0 ? h.order() : chain[depth].size());
      ++res.nodes;
      chain[depth + 1] = depth == 0
                             ? conjugate_subgroup(h, ca.reps[tuple[0]]).members
                             : point_stab(ca, chain[depth], tuple[depth]);
      ++depth;
    }
  }
  res.exact = false;
  res.value = orbits_seen.size();
  return res;
}

WorkingSubgroup acquire_working_subgroup(const GroupSpec& spec,
                                         const std::vector<uint64_t>& pi, uint64_t cap,
                                         uint64_t node_budget) {
  WorkingSubgroup ws;
  ws.verdict = epi_condition(spec, pi);
  HallSearch search = hall_find_for_spec(spec, pi, HallStrategy::automatic, cap, node_budget);
  ws.ambient = search.ambient;
  if (search.result.found) {
    ws.hall_found = true;
    ws.hall_in_ambient = search.hall_in_ambient;
    ws.container = search.container_name + ":" + search.result.provenance;
    ws.host = search.container;
    ws.subgroup = search.result.subgroup;
    return ws;
  }
  ws.container = search.result.provenance;
  if (!ws.ambient) {
    ws.notes.push_back("ambient group exceeds the enumeration budget");
    return ws;
  }
  const std::shared_ptr<ElementTable>& amb = ws.ambient;
  // No Hall subgroup of the full group: fall back to the best structural
  // candidate and take a Hall subgroup of the candidate itself.
  std::vector<HallCandidate> cands;
  try {
    cands = hall_candidates(spec, pi, ws.verdict);
  } catch (const Error& e) {
    ws.notes.push_back(std::string("candidate construction failed: ") + e.what());
  }
  Subgroup best;
  std::string best_name;
  uint64_t best_part = 1;
  for (const auto& cand : cands) {
    std::vector<uint32_t> ids;
    bool all = true;
    for (const Matrix& g : cand.gens) {
      auto idx = amb->find(g);
      if (!idx) {
        all = false;
        break;
      }
      ids.push_back(*idx);
    }
    if (!all || ids.empty()) continue;
    Subgroup c = subgroup_closure(*amb, ids);
    uint64_t part = pi_part(c.order(), pi);
    if (part > best_part) {
      best_part = part;
      best = c;
      best_name = cand.name;
    }
  }
  if (best_part > 1) {
    HallResult inner = find_hall_exhaustive(best, pi, pi_part(best.order(), pi), node_budget);
    if (inner.found) {
      ws.host = amb;
      ws.subgroup = inner.subgroup;
      ws.container = "candidate:" + best_name;
      ws.notes.push_back("no Hall subgroup of the full group; working inside " + best_name);
    }
  }
  if (!ws.subgroup) {
    // Last resort: the heaviest Sylow subgroup among the pi primes.
    uint64_t best_r = 0, best_rp = 1;
    for (uint64_t r : pi) {
      uint64_t part = pi_part(amb->size(), {r});
      if (part > best_rp) {
        best_rp = part;
        best_r = r;
      }
    }
    if (best_r != 0) {
      ws.host = amb;
      ws.subgroup = find_sylow(whole_group(*amb), best_r);
      ws.container = "sylow-fallback";
      ws.notes.push_back("no Hall subgroup and no pi-full candidate; using a Sylow subgroup");
    }
  }
  return ws;
}

std::optional<WitnessCertificate> table_witness_stage(const ElementTable& t, const Subgroup& hw,
                                                      const GroupSpec& spec,
                                                      uint64_t node_budget,
                                                      std::vector<std::string>& notes,
                                                      uint32_t k_max) {
  std::optional<WitnessCertificate> out;
  // Explicit conjugators first, then the abelian two-step, then the greedy
  // search.
  try {
    if (spec.family == Family::GSp && spec.n == 4 && spec.q % 2 == 1) {
      WitnessCertificate cert = verify_witnesses(t, hw, sp4_witnesses(t.field()));
      if (cert.verdict == WitnessVerdict::central_containment) out = cert;
    }
    if (!out && spec.n % 2 == 1 && spec.n >= 3 &&
        (spec.family == Family::GL || spec.family == Family::SL ||
         spec.family == Family::GU || spec.family == Family::SU)) {
      Matrix x = lemma_witness(WitnessKind::linear_odd_n, spec.n, t.field());
      auto xi = t.find(x);
      if (xi) {
        Subgroup a = intersect(hw, conjugate_subgroup(hw, *xi));
        if (is_abelian(a)) {
          WitnessCertificate cert = two_step_abelian_finish(t, hw, x, t.size());
          if (cert.verdict == WitnessVerdict::central_containment) out = cert;
        }
      }
    }
    if (!out) {
      auto cert = search_witnesses(t, hw, k_max, node_budget);
      if (cert) out = *cert;
    }
  } catch (const Error& e) {
    notes.push_back(std::string("witness search stopped: ") + e.what());
  }
  return out;
}

std::optional<WitnessCertificate> matrix_witness_stage(const ElementTable& host,
                                                       const Subgroup& hw, const GroupSpec& spec,
                                                       std::vector<std::string>& notes) {
  std::optional<WitnessCertificate> out;
  // The lemma conjugators act on explicit matrices even when the ambient
  // group is not enumerated.
  std::vector<Matrix> hm;
  hm.reserve(hw.members.size());
  for (uint32_t m : hw.members) hm.push_back(host.matrix(m));
  std::vector<std::vector<Matrix>> menus;
  FieldPtr k = host.field();
  if (spec.family == Family::GSp && spec.n == 4 && spec.q % 2 == 1)
    menus.push_back(sp4_witnesses(k));
  if (spec.n % 2 == 1 && spec.n >= 3 &&
      (spec.family == Family::GL || spec.family == Family::SL || spec.family == Family::GU ||
       spec.family == Family::SU))
    menus.push_back({lemma_witness(WitnessKind::linear_odd_n, spec.n, k)});
  if ((spec.family == Family::GL || spec.family == Family::SL) && spec.n >= 2)
    menus.push_back({lemma_witness(WitnessKind::circulant, spec.n, k)});
  for (const auto& menu : menus) {
    try {
      WitnessCertificate cert = verify_witnesses_matrices(spec, hm, menu);
      if (!out || cert.verdict == WitnessVerdict::central_containment) out = cert;
      if (cert.verdict == WitnessVerdict::central_containment) break;
    } catch (const Error& e) {
      notes.push_back(std::string("matrix-level verification failed: ") + e.what());
    }
  }
  return out;
}

TheoremReport theorem_check(const GroupSpec& spec, const std::vector<uint64_t>& pi,
                            uint64_t cap, uint64_t seed, uint64_t node_budget) {
  TheoremReport rep;
  rep.spec = spec;
  rep.pi = pi;
  std::sort(rep.pi.begin(), rep.pi.end());
  rep.pi.erase(std::unique(rep.pi.begin(), rep.pi.end()), rep.pi.end());

  WorkingSubgroup ws = acquire_working_subgroup(spec, rep.pi, cap, node_budget);
  rep.verdict = ws.verdict;
  rep.ambient_enumerated = ws.ambient != nullptr;
  rep.hall_found = ws.hall_found;
  rep.hall_in_ambient = ws.hall_in_ambient;
  rep.container = ws.container;
  rep.notes = ws.notes;
  if (ws.ambient) rep.out_of_scope = is_solvable(whole_group(*ws.ambient));
  if (rep.out_of_scope) rep.notes.push_back("ambient group is solvable: outside the studied range");

  if (!ws.subgroup) return rep;
  const Subgroup& hw = *ws.subgroup;
  rep.hall_order = hw.order();
  rep.hall_solvable = is_solvable(hw);
  for (uint32_t g : small_generating_set(hw)) rep.hall_generators.push_back(ws.host->matrix(g));

  if (!ws.host_is_ambient()) {
    rep.notes.push_back("working subgroup lives in a candidate table; base and orbit "
                        "counts against the full group are out of reach");
    rep.certificate = matrix_witness_stage(*ws.host, hw, spec, rep.notes);
    return rep;
  }

  const ElementTable& t = *ws.ambient;
  rep.certificate = table_witness_stage(t, hw, spec, node_budget, rep.notes);

  try {
    rep.base = base_size(t, hw, 5, node_budget);
  } catch (const Error& e) {
    rep.notes.push_back(std::string("base search stopped: ") + e.what());
  }

  uint64_t omega = t.size() / hw.order();
  try {
    if (hw.order() == 1) {
      // Trivial working subgroup: every tuple is regular.
      if (t.size() <= 200) {
        RegResult r;
        r.exact = true;
        r.value = 1;
        for (int i = 0; i < 4; ++i) r.value *= t.size();
        r.seed = seed;
        rep.reg5 = r;
      } else {
        rep.reg5 = reg_count(t, hw, 5, RegMethod::lower_bound, seed, node_budget, 5);
        rep.notes.push_back("trivial working subgroup over 200 elements: lower bound only");
      }
    } else if (omega <= 64) {
      rep.reg5 = reg_count(t, hw, 5, RegMethod::exact, seed, node_budget, 5);
    } else {
      rep.reg5 = reg_count(t, hw, 5, RegMethod::lower_bound, seed, node_budget, 5);
    }
  } catch (const Error& e) {
    rep.notes.push_back(std::string("orbit count stopped: ") + e.what());
    try {
      rep.reg5 = reg_count(t, hw, 5, RegMethod::lower_bound, seed, node_budget, 5);
    } catch (const Error& e2) {
      rep.notes.push_back(std::string("orbit lower bound stopped: ") + e2.what());
    }
  }

  if (rep.reg5) {
    const RegResult& r = *rep.reg5;
    std::string cmp = r.exact ? "exact" : "at-least";
    rep.notes.push_back("Reg(5) " + cmp + " " + std::to_string(r.value) +
                        "; >=5: " + ((r.value >= 5) ? "yes" : (r.exact ? "no" : "open")) +
                        "; <=5: " + (r.exact ? ((r.value <= 5) ? "yes" : "no") : "open"));
  }
  return rep;
}

}  // namespace hallbase
