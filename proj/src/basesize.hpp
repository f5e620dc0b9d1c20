#pragma once

#include <optional>
#include <string>
#include <vector>

#include "witness.hpp"

namespace hallbase {

// Right-multiplication action on the right cosets of a subgroup. Cosets are
// indexed by discovery over ascending element index, so each coset id is the
// least element index it contains.
struct CosetAction {
  const ElementTable* parent = nullptr;
  std::vector<uint32_t> reps;      // least member of each coset
  std::vector<uint32_t> point_of;  // element index -> coset id
  std::vector<std::vector<uint32_t>> images;  // per table generator

  uint64_t omega() const { return reps.size(); }
  uint32_t act(uint32_t point, uint32_t g) const;
};

CosetAction coset_action(const ElementTable& t, const Subgroup& h);

struct BaseResult {
  bool bounded = false;  // false: every tuple of length <= k_max fails
  uint32_t value = 0;
  uint64_t nodes = 0;
};

// Least k such that some k-tuple of cosets has pointwise stabilizer equal to
// the kernel core of h; the first point is normalised to the trivial coset.
BaseResult base_size(const ElementTable& t, const Subgroup& h, uint32_t k_max,
                     uint64_t node_budget = 50'000'000);

enum class RegMethod { exact, lower_bound };

struct RegResult {
  bool exact = false;
  uint64_t value = 0;  // exact orbit count, or a verified lower bound
  uint64_t seed = 0;
  uint64_t nodes = 0;
};

// Number of orbits on m-tuples of cosets whose pointwise stabilizer is the
// kernel core. exact: memoised stabilizer-chain recursion (never materialises
// the tuple space; throws budget_exceeded past the node budget). lower_bound:
// seeded random tuples followed by a deterministic sweep, counting distinct
// orbits by canonical (lexicographically least translate) representatives,
// stopping at `goal`.
RegResult reg_count(const ElementTable& t, const Subgroup& h, uint32_t m, RegMethod method,
                    uint64_t seed = 0, uint64_t node_budget = 50'000'000, uint64_t goal = 5);

// Working Hall subgroup for a (group, pi) instance: the Hall subgroup of the
// full group when it exists and is in budget, else a Hall subgroup of the
// best structural candidate, else a Sylow fallback.
struct WorkingSubgroup {
  std::shared_ptr<ElementTable> ambient;  // null when over the element cap
  std::shared_ptr<ElementTable> host;     // table the subgroup indexes into
  std::optional<Subgroup> subgroup;
  bool hall_found = false;      // a Hall subgroup of the full group
  bool hall_in_ambient = false;
  std::string container;
  EpiVerdict verdict;
  std::vector<std::string> notes;

  bool host_is_ambient() const { return ambient && host.get() == ambient.get(); }
};

WorkingSubgroup acquire_working_subgroup(const GroupSpec& spec,
                                         const std::vector<uint64_t>& pi, uint64_t cap,
                                         uint64_t node_budget);

// Witness-certificate stage: explicit conjugators first (the symplectic
// triple, the odd-dimension cycle with the abelian two-step), then the greedy
// search. Table-level when the subgroup lives in the enumerated full group.
std::optional<WitnessCertificate> table_witness_stage(const ElementTable& t, const Subgroup& hw,
                                                      const GroupSpec& spec,
                                                      uint64_t node_budget,
                                                      std::vector<std::string>& notes,
                                                      uint32_t k_max = 4);
// Matrix-level variant for subgroups enumerated inside a candidate table.
std::optional<WitnessCertificate> matrix_witness_stage(const ElementTable& host,
                                                       const Subgroup& hw, const GroupSpec& spec,
                                                       std::vector<std::string>& notes);

// Full pipeline report for one (group, pi) instance.
struct TheoremReport {
  GroupSpec spec;
  std::vector<uint64_t> pi;
  bool out_of_scope = false;  // solvable ambient group
  EpiVerdict verdict;
  bool hall_found = false;
  bool hall_in_ambient = false;
  uint64_t hall_order = 0;
  bool hall_solvable = false;
  std::vector<Matrix> hall_generators;  // of the working subgroup
  std::string container;  // provenance of the working subgroup
  bool ambient_enumerated = false;
  std::optional<BaseResult> base;
  std::optional<RegResult> reg5;
  std::optional<WitnessCertificate> certificate;
  std::vector<std::string> notes;
};

// Existence verdict + working Hall subgroup + witness certificate + base and
// regular-orbit numbers, with every sub-budget surfaced in the notes instead
// of thrown.
TheoremReport theorem_check(const GroupSpec& spec, const std::vector<uint64_t>& pi,
                            uint64_t cap = 2'000'000, uint64_t seed = 0,
                            uint64_t node_budget = 50'000'000);

}  // namespace hallbase
