#pragma once

#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "constructions.hpp"

namespace hallbase {

// The three symplectic conjugators for subgroups stabilising an orthogonal
// pair of non-degenerate planes (standard basis e1, f1, e2, f2). Entries are
// 0, 1 and -1 reduced into the field; each matrix preserves the standard
// symplectic form with multiplier 1 and has determinant 1. Odd characteristic.
std::vector<Matrix> sp4_witnesses(const FieldPtr& field);

// Scalar matrices lying in the classical group: the centre at the dimensions
// treated here.
std::vector<Matrix> central_scalars(const GroupSpec& spec);

// Hash set of same-shape matrices; membership by entry codes.
class MatrixSet {
 public:
  MatrixSet() = default;
  explicit MatrixSet(const std::vector<Matrix>& items);
  void insert(const Matrix& m);
  bool contains(const Matrix& m) const;
  size_t size() const { return keys_.size(); }

 private:
  static std::string key(const Matrix& m);
  std::unordered_set<std::string> keys_;
};

// h conjugated elementwise: x^-1 * h * x.
std::vector<Matrix> conjugate_all(const std::vector<Matrix>& h, const Matrix& x);

enum class WitnessVerdict { central_containment, kernel_equals_core, failed };

const char* witness_verdict_name(WitnessVerdict v);

// Replayable record of an intersection-of-conjugates check. `witnesses` are
// the conjugating elements x_1, ..., x_k; the verified statement is about
// H intersected with H^{x_1}, ..., H^{x_k}.
struct WitnessCertificate {
  GroupSpec group;
  std::vector<uint64_t> pi;
  uint64_t hall_order = 0;
  std::vector<Matrix> witnesses;
  uint64_t intersection_order = 0;
  WitnessVerdict verdict = WitnessVerdict::failed;
  bool equals_kernel_core = false;
  uint64_t kernel_core_order = 0;  // 0 when the ambient core is not computed
  std::string method;
  uint64_t seed = 0;
  uint64_t budget = 0;
  uint64_t evaluated = 0;
  std::optional<Matrix> adapted_basis;  // change of basis behind the witness
};

// Named deterministic conjugating elements.
//   linear_odd_n: the full-cycle permutation matrix, n odd >= 3 (GL/GU kinds).
//   orth_odd:     signed cycle over every other basis vector plus the last,
//                 n odd, built in an adapted orthogonal basis.
//   orth_even:    signed cycle over the odd-position basis vectors, n even.
//   orth_11_12:   the two-cycle permutation (1,3,5,9)(7,10), n in {11, 12}.
//   circulant:    identity plus superdiagonal plus lower-left corner.
enum class WitnessKind { linear_odd_n, orth_odd, orth_even, orth_11_12, circulant };

struct LemmaWitness {
  Matrix x;      // in the coordinates of the standard form
  Matrix basis;  // rows are the adapted basis vectors (identity when unused)
  std::vector<uint32_t> sigma;  // permutation behind x (empty for circulant)
  uint32_t prescribed_value = 0;  // common Q-value on the designated vectors
};

// eps selects the standard quadratic form for the even-dimensional orthogonal
// kinds (ignored elsewhere; odd dimensions use the odd-type form).
LemmaWitness lemma_witness_full(WitnessKind kind, uint32_t n, const FieldPtr& field,
                                FormEps eps = FormEps::plus, uint64_t seed = 0);
Matrix lemma_witness(WitnessKind kind, uint32_t n, const FieldPtr& field,
                     FormEps eps = FormEps::plus);

// Intersects h with its conjugates under ws inside the enumerated group and
// classifies the result: central_containment when it lies in the centre of
// the table, else kernel_equals_core when it equals the largest normal
// subgroup of the table inside h, else failed. Every w must be in the table.
WitnessCertificate verify_witnesses(const ElementTable& t, const Subgroup& h,
                                    const std::vector<Matrix>& ws);

// Same check with h given by explicit matrices and no enumerated ambient
// group: containment is tested against the scalar centre of the spec, and the
// kernel-core comparison is unavailable. Every w must satisfy the spec's
// membership test.
WitnessCertificate verify_witnesses_matrices(const GroupSpec& spec,
                                             const std::vector<Matrix>& h,
                                             const std::vector<Matrix>& ws);

// Requires a := h intersect h^x to be abelian, then scans the table in index
// order for y with a intersect a^y inside the centre. The certificate records
// x, y and x*y, so replaying it through verify_witnesses reproduces the
// verdict. budget caps the number of y candidates scanned.
WitnessCertificate two_step_abelian_finish(const ElementTable& t, const Subgroup& h,
                                           const Matrix& x, uint64_t budget);

// Deterministic greedy search: repeatedly adjoin the conjugator that
// minimises the running intersection order (least table index on ties) until
// the intersection equals the kernel core or k_max conjugators are used.
// Returns nullopt when k_max steps do not reach the core; throws
// budget_exceeded when the per-step scan is cut short.
std::optional<WitnessCertificate> search_witnesses(const ElementTable& t, const Subgroup& h,
                                                   uint32_t k_max, uint64_t budget);

}  // namespace hallbase
