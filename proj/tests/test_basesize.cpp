#include "basesize.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace hallbase;

namespace {

std::vector<uint32_t> members_of(const Subgroup& h) { return h.members; }

// Run both library methods against the brute-force coset machinery for one
// instance: action invariants, base size and orbit counts.
void cross_check(const ElementTable& t, const Subgroup& h, uint32_t m_max) {
  oracle::BruteCosets bc = oracle::brute_cosets(t, members_of(h));
  CosetAction act = coset_action(t, h);
  REQUIRE(act.omega() == bc.labels.size());

  // the permutation images agree with brute coset multiplication and the
  // action is transitive with kernel equal to the core of h
  std::vector<bool> seen(act.omega(), false);
  seen[0] = true;
  for (uint32_t g = 0; g < t.size(); ++g) {
    uint32_t from = act.point_of[0];
    seen[act.act(from, g)] = true;
  }
  for (bool b : seen) CHECK(b);

  Subgroup core = kernel_core(h);
  CHECK(core.members == bc.core);
  for (uint32_t g = 0; g < t.size(); ++g) {
    bool fixes_all = true;
    for (uint32_t pt = 0; pt < act.omega(); ++pt)
      if (act.act(pt, g) != pt) {
        fixes_all = false;
        break;
      }
    CHECK(fixes_all == core.contains(g));
  }

  // base size against the brute definition
  BaseResult base = base_size(t, h, m_max);
  uint32_t brute_base = oracle::brute_base(bc, m_max);
  if (brute_base == 0) {
    CHECK_FALSE(base.bounded);
  } else {
    REQUIRE(base.bounded);
    CHECK(base.value == brute_base);
  }

  // exact orbit counts for every tuple length up to m_max
  for (uint32_t m = 1; m <= m_max; ++m) {
    uint64_t br = oracle::brute_reg(bc, m);
    REQUIRE(br != UINT64_MAX);
    RegResult reg = reg_count(t, h, m, RegMethod::exact);
    CHECK(reg.exact);
    CHECK(reg.value == br);
    // the lower bound sweep never exceeds the truth and hits the goal cap
    RegResult lo = reg_count(t, h, m, RegMethod::lower_bound, 11, 50'000'000, 5);
    CHECK_FALSE(lo.exact);
    CHECK(lo.value <= br);
    CHECK(lo.value >= std::min<uint64_t>(br, 1));
    if (br >= 5) CHECK(lo.value == 5);
  }
}

}  // namespace

TEST_CASE("degree three coset action of the symmetric group") {
  ElementTable t = ElementTable::for_spec(make_spec(Family::GL, 2, 2), 100);
  REQUIRE(t.size() == 6);
  // point stabilizer of order 2: cosets are the three points
  Matrix swap = Matrix::from_rows(t.field(), {{0, 1}, {1, 0}});
  Subgroup h = subgroup_closure(t, {t.index_of(swap)});
  REQUIRE(h.order() == 2);
  cross_check(t, h, 3);

  BaseResult base = base_size(t, h, 5);
  REQUIRE(base.bounded);
  CHECK(base.value == 2);
  CHECK(reg_count(t, h, 2, RegMethod::exact).value == 1);
  CHECK(reg_count(t, h, 3, RegMethod::exact).value == 4);

  // normal subgroup of order 3: the action is regular of degree 2
  Subgroup n3 = find_sylow(whole_group(t), 3);
  REQUIRE(n3.order() == 3);
  cross_check(t, n3, 5);
  BaseResult b3 = base_size(t, n3, 5);
  CHECK(b3.bounded);
  CHECK(b3.value == 1);
}

TEST_CASE("coset actions of linear groups agree with brute force") {
  // GL2(3) with its Sylow 3-subgroup: degree 16 action
  {
    ElementTable t = ElementTable::for_spec(make_spec(Family::GL, 2, 3), 1000);
    Subgroup h = find_sylow(whole_group(t), 3);
    cross_check(t, h, 2);
  }
  // GL2(3) with its Sylow 2-subgroup: degree 3, quaternion kernel
  {
    ElementTable t = ElementTable::for_spec(make_spec(Family::GL, 2, 3), 1000);
    Subgroup h = find_sylow(whole_group(t), 2);
    cross_check(t, h, 3);
  }
  // GL2(3) with its centre: degree 24
  {
    ElementTable t = ElementTable::for_spec(make_spec(Family::GL, 2, 3), 1000);
    cross_check(t, center(t), 2);
  }
  // SL2(3) with its Sylow 3-subgroup: degree 8
  {
    ElementTable t = ElementTable::for_spec(make_spec(Family::SL, 2, 3), 1000);
    Subgroup h = find_sylow(whole_group(t), 3);
    cross_check(t, h, 2);
  }
  // GL2(4) with a Hall {3}-subgroup: degree 20
  {
    ElementTable t = ElementTable::for_spec(make_spec(Family::GL, 2, 4), 1000);
    Subgroup h = find_sylow(whole_group(t), 3);
    cross_check(t, h, 2);
  }
  // GL2(4) with a Sylow 5-subgroup: degree 36
  {
    ElementTable t = ElementTable::for_spec(make_spec(Family::GL, 2, 4), 1000);
    Subgroup h = find_sylow(whole_group(t), 5);
    cross_check(t, h, 2);
  }
  // GU2(2) with a Sylow 3-subgroup: degree 2
  {
    ElementTable t = ElementTable::for_spec(make_spec(Family::GU, 2, 2), 1000);
    Subgroup h = find_sylow(whole_group(t), 3);
    cross_check(t, h, 4);
  }
  // GL2(5) with a Hall {3}-subgroup: degree 160, single tuple length
  {
    ElementTable t = ElementTable::for_spec(make_spec(Family::GL, 2, 5), 1000);
    Subgroup h = find_sylow(whole_group(t), 3);
    cross_check(t, h, 1);
  }
}

TEST_CASE("trivial subgroup gives the regular action") {
  ElementTable t = ElementTable::for_spec(make_spec(Family::GL, 2, 2), 100);
  Subgroup one = subgroup_closure(t, {});
  REQUIRE(one.order() == 1);
  CosetAction act = coset_action(t, one);
  CHECK(act.omega() == 6);
  BaseResult base = base_size(t, one, 3);
  REQUIRE(base.bounded);
  CHECK(base.value == 1);
  // m-tuples in the regular action: |G|^(m-1) orbits, all regular
  CHECK(reg_count(t, one, 1, RegMethod::exact).value == 1);
  CHECK(reg_count(t, one, 2, RegMethod::exact).value == 6);
  CHECK(reg_count(t, one, 3, RegMethod::exact).value == 36);
}

TEST_CASE("acquisition prefers the ambient hall subgroup") {
  // full-group Hall subgroup available
  {
    WorkingSubgroup w = acquire_working_subgroup(make_spec(Family::GL, 2, 16), {3, 5},
                                                 2'000'000, 50'000'000);
    REQUIRE(w.subgroup.has_value());
    CHECK(w.hall_found);
    CHECK(w.hall_in_ambient);
    CHECK(w.host_is_ambient());
    CHECK(w.subgroup->order() == 225);
    CHECK(w.container.rfind("ambient", 0) == 0);
  }
  // no Hall subgroup exists: Sylow fallback, still in the ambient table
  {
    WorkingSubgroup w = acquire_working_subgroup(make_spec(Family::GL, 2, 7), {2, 3},
                                                 2'000'000, 50'000'000);
    REQUIRE(w.subgroup.has_value());
    CHECK_FALSE(w.hall_found);
    CHECK(w.host_is_ambient());
    // heaviest Sylow fallback: the 2-part 32 beats the 3-part 9
    CHECK(w.subgroup->order() == 32);
  }
  // over the cap: subgroup lives in a candidate table
  {
    WorkingSubgroup w = acquire_working_subgroup(make_spec(Family::GL, 3, 16), {3, 5},
                                                 2'000'000, 50'000'000);
    REQUIRE(w.subgroup.has_value());
    CHECK(w.hall_found);
    CHECK_FALSE(w.host_is_ambient());
    CHECK_FALSE(w.ambient);
    CHECK(w.subgroup->order() == 10125);
    CHECK(w.container.rfind("monomial", 0) == 0);
  }
}

TEST_CASE("full pipeline on a small positive instance") {
  TheoremReport r = theorem_check(make_spec(Family::GL, 2, 5), {3}, 2'000'000, 0, 50'000'000);
  CHECK_FALSE(r.out_of_scope);
  CHECK(r.hall_found);
  CHECK(r.hall_in_ambient);
  CHECK(r.hall_order == 3);
  CHECK(r.hall_solvable);
  CHECK(r.ambient_enumerated);
  REQUIRE_FALSE(r.hall_generators.empty());
  REQUIRE(r.base.has_value());
  CHECK(r.base->bounded);
  REQUIRE(r.certificate.has_value());
  CHECK(r.certificate->verdict != WitnessVerdict::failed);
  REQUIRE(r.reg5.has_value());
  CHECK(r.reg5->value >= 1);

  // the reported Hall generators regenerate the subgroup
  ElementTable t = ElementTable::for_spec(make_spec(Family::GL, 2, 5), 1000);
  std::vector<uint32_t> gens;
  for (const Matrix& g : r.hall_generators) gens.push_back(t.index_of(g));
  CHECK(subgroup_closure(t, gens).order() == r.hall_order);
}

TEST_CASE("pipeline marks solvable ambient groups out of scope") {
  TheoremReport r = theorem_check(make_spec(Family::GL, 1, 7), {2}, 2'000'000, 0, 50'000'000);
  CHECK(r.out_of_scope);
}
