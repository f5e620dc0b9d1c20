#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "matrix.hpp"

namespace hallbase {

enum class Family { GL, SL, GU, SU, GSp, Sp, GO, SO, User };

const char* family_name(Family f);

// A classical group descriptor. n is the matrix dimension, q the defining
// field size (entries of unitary groups live in F_{q^2}), eps the orthogonal
// type. Orthogonal families require odd q.
struct GroupSpec {
  Family family = Family::User;
  FormEps eps = FormEps::none;
  uint32_t n = 0;
  uint64_t q = 0;

  uint32_t p() const;
  uint32_t f() const;
  // 2 for unitary families, 1 otherwise.
  uint32_t u() const;
};

GroupSpec make_spec(Family family, uint32_t n, uint64_t q, FormEps eps = FormEps::none);
// Field the matrix entries live in (degree u * f over the prime field).
FieldPtr matrix_field(const GroupSpec& spec);
Form group_form(const GroupSpec& spec);

// Group order kept as a factor list so pi-parts and prime supports can be
// read off without forming the (possibly huge) product.
struct FactoredOrder {
  std::vector<uint64_t> factors;

  bool fits_u64() const;
  uint64_t value() const;  // throws budget_exceeded on overflow
  std::vector<std::pair<uint64_t, int>> factorization() const;
  std::vector<uint64_t> primes() const;
  uint64_t pi_part_value(const std::vector<uint64_t>& pi) const;  // throws on overflow
};

FactoredOrder order_formula(const GroupSpec& spec);

// Deterministic generating sets: transvections for linear/symplectic types,
// pseudo-reflections plus coordinate transpositions for unitary types,
// reflections for orthogonal types, with explicit similitude representatives
// for the extended families.
std::vector<Matrix> standard_generators(const GroupSpec& spec);

// Exhaustively enumerated group: a packed arena of matrices plus a hash index.
// Element 0 is the identity; the order of elements is the breadth-first
// discovery order over the generator list (right multiplication), which makes
// every downstream index deterministic.
class ElementTable {
 public:
  static ElementTable closure(FieldPtr field, uint32_t n, const std::vector<Matrix>& gens,
                              uint64_t cap);
  static ElementTable from_members(FieldPtr field, uint32_t n,
                                   const std::vector<Matrix>& members,
                                   const std::vector<Matrix>& gens);
  // Build from a family descriptor and verify the enumerated order against
  // the order formula.
  static ElementTable for_spec(const GroupSpec& spec, uint64_t cap);

  uint64_t size() const { return count_; }
  uint32_t dim() const { return n_; }
  const FieldPtr& field() const { return field_; }
  Matrix matrix(uint32_t idx) const;
  std::optional<uint32_t> find(const Matrix& m) const;
  uint32_t index_of(const Matrix& m) const;  // throws not_found
  uint32_t mul(uint32_t x, uint32_t y) const;
  uint32_t inverse(uint32_t x) const;
  uint32_t conjugate(uint32_t g, uint32_t x) const;  // x^-1 g x
  uint32_t element_order(uint32_t x) const;
  const std::vector<uint32_t>& generator_ids() const { return gen_ids_; }
  std::vector<Matrix> generator_matrices() const;

  const std::optional<GroupSpec>& spec() const { return spec_; }
  const std::optional<Form>& form() const { return form_; }
  void set_spec(const GroupSpec& s) { spec_ = s; }
  void set_form(const Form& f) { form_ = f; }

 private:
  ElementTable() = default;
  void init(FieldPtr field, uint32_t n);
  uint32_t insert(const uint8_t* codes);  // returns index, existing or new
  std::optional<uint32_t> lookup(const uint8_t* codes) const;
  void rehash();
  void mul_raw(const uint8_t* x, const uint8_t* y, uint8_t* out) const;

  FieldPtr field_;
  uint32_t n_ = 0;
  uint32_t entry_ = 0;  // bytes per element
  uint64_t count_ = 0;
  std::vector<uint8_t> arena_;
  std::vector<uint32_t> slots_;
  uint64_t mask_ = 0;
  std::vector<uint32_t> gen_ids_;
  mutable std::vector<uint32_t> inv_cache_;
  mutable std::vector<uint32_t> order_cache_;
  std::optional<GroupSpec> spec_;
  std::optional<Form> form_;
};

// A subgroup is a sorted member-index list over a parent table.
struct Subgroup {
  const ElementTable* parent = nullptr;
  std::vector<uint32_t> members;

  uint64_t order() const { return members.size(); }
  bool contains(uint32_t idx) const;
};

Subgroup whole_group(const ElementTable& t);
Subgroup trivial_subgroup(const ElementTable& t);
Subgroup subgroup_closure(const ElementTable& t, const std::vector<uint32_t>& gens);
Subgroup subgroup_from_members(const ElementTable& t, std::vector<uint32_t> members);
Subgroup center(const ElementTable& t);
Subgroup conjugate_subgroup(const Subgroup& h, uint32_t g);
Subgroup intersect(const Subgroup& a, const Subgroup& b);
bool is_central_subset(const ElementTable& t, const std::vector<uint32_t>& members);
// Largest normal subgroup of the parent contained in H (the kernel of the
// coset action), computed by intersecting conjugates until stable.
Subgroup kernel_core(const Subgroup& h);
std::vector<uint32_t> small_generating_set(const Subgroup& h);
bool is_abelian(const Subgroup& h);
bool is_solvable(const Subgroup& h);

bool is_pi_subgroup(const Subgroup& h, const std::vector<uint64_t>& pi);
bool is_hall_subgroup(const Subgroup& h, const std::vector<uint64_t>& pi);

enum class HallStrategy { automatic, structural, exhaustive };

struct HallResult {
  bool found = false;
  bool complete = true;  // false when a budget stopped the search
  Subgroup subgroup;
  std::string provenance;
  uint64_t nodes = 0;
};

// Sylow r-subgroup of scope by normalizer-growth: repeatedly adjoin the least
// r-power-order element normalizing the current r-subgroup.
Subgroup find_sylow(const Subgroup& scope, uint64_t r);

// Complete backtracking over pi-subgroups of scope, extension by pi-elements
// ordered by (element order, index), memoized on closed member sets. target
// is the required subgroup order (the pi-part of the ambient group).
HallResult find_hall_exhaustive(const Subgroup& scope, const std::vector<uint64_t>& pi,
                                uint64_t target, uint64_t node_budget);

// Validates pi (nonempty, primes, coprime to the characteristic when the
// table has a spec) and searches scope for a Hall pi-subgroup of the parent.
HallResult find_hall_pi(const ElementTable& t, const std::vector<uint64_t>& pi,
                        HallStrategy strategy, uint64_t node_budget = 50'000'000);

void validate_pi(const std::vector<uint64_t>& pi, std::optional<uint64_t> characteristic);

}  // namespace hallbase
