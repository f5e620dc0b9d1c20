#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "group.hpp"

namespace hallbase {

// A direct-sum (orthogonal, when a form is present) decomposition of row
// space. Members of each class may be permuted among themselves; fixed parts
// must be stabilised individually.
struct Decomposition {
  std::vector<std::vector<Subspace>> classes;
  std::vector<Subspace> fixed;
};

// Consecutive coordinate blocks of the given size; the remainder, if any,
// becomes a single fixed part.
Decomposition block_decomposition(FieldPtr field, uint32_t n, uint32_t block);

// Checks that the parts are nonzero, pairwise independent, jointly spanning,
// equidimensional within each class, and (when a non-linear form is given)
// pairwise orthogonal and nondegenerate. Throws invalid_decomposition.
void validate_decomposition(const Decomposition& d, const std::optional<Form>& form);

// All table members that permute each class and fix each fixed part.
Subgroup decomposition_stabilizer(const ElementTable& t, const Decomposition& d);

// Monomial matrices of the table (exactly one nonzero entry per row and
// column).
Subgroup monomial_subgroup(const ElementTable& t);

// Standalone generators of the full monomial subgroup: a torus generator on
// the first coordinate, an adjacent transposition and an n-cycle. Supported
// for GL, SL, GU, SU.
std::vector<Matrix> monomial_generators(const GroupSpec& spec);

// Generators of the stabilizer of the coordinate block decomposition: the
// small group of the same family on the first block, block swaps, the full
// tail group on the remainder, and the ambient similitude generator for the
// extended families. Blocks must respect the standard form (even size for
// symplectic/hyperbolic coordinates).
std::vector<Matrix> block_wreath_generators(const GroupSpec& spec, uint32_t block);

// Generators of the monomial subgroup of GL_m(q^ext) inside GL_n(q) where
// m = [n / ext], via the regular representation of the extension field on
// coordinate blocks. Adds the Frobenius block when asked (the Galois part of
// the torus normalizer) and the full GL on the leftover coordinates. GL/SL
// only.
std::vector<Matrix> blowup_generators(const GroupSpec& spec, uint32_t ext, bool with_frobenius);

// Fully orthogonal basis for a quadratic form with prescribed values at the
// positions where `values` is set. Rows of the result are the basis vectors.
// Deterministic given the seed; throws not_found when the retry budget is
// exhausted.
Matrix adapted_orthogonal_basis(const Form& form,
                                const std::vector<std::optional<uint32_t>>& values,
                                uint64_t seed = 0);

// Determinant and form membership of a single matrix in the classical group;
// needs no enumerated table.
bool spec_membership(const GroupSpec& spec, const Matrix& m);

// Rewrites a matrix given in the coordinates of `basis` (rows are the basis
// vectors) into standard coordinates: basis^-1 * m * basis.
Matrix change_basis(const Matrix& m, const Matrix& basis);

enum class HallExistence { yes, no, unknown };

// Outcome of the arithmetic existence conditions. `clause` names the decision
// path (e.g. "GL:B", "even-pi:none", "sylow"). Warnings flag readings of the
// condition tables that are suspect as printed; notes carry the auxiliary
// quantities.
struct EpiVerdict {
  HallExistence exists = HallExistence::unknown;
  std::string clause;
  std::vector<std::string> warnings;
  std::vector<std::string> notes;

  uint64_t r = 0;             // least odd condition prime, when relevant
  std::vector<uint64_t> tau;  // remaining condition primes
  uint32_t a = 0;             // e_value(r, q)
  uint32_t b = 0;             // common e_value of tau (0 when inhomogeneous)
};

// Evaluates the existence conditions for a Hall pi-subgroup of the extended
// classical group. Requires pi coprime to the characteristic.
EpiVerdict epi_condition(const GroupSpec& spec, const std::vector<uint64_t>& pi);

// A structural container candidate: generators in the ambient matrix group.
struct HallCandidate {
  std::string name;
  std::vector<Matrix> gens;
};

// Candidate containers suggested by the verdict, most specific first. The
// list is advisory: callers must check pi-fullness after closure.
std::vector<HallCandidate> hall_candidates(const GroupSpec& spec, const std::vector<uint64_t>& pi,
                                           const EpiVerdict& verdict);

// Spec-level search that builds the ambient table when it fits the element
// cap and otherwise works inside structural candidate closures.
struct HallSearch {
  GroupSpec spec;
  std::vector<uint64_t> pi;
  EpiVerdict verdict;
  std::shared_ptr<ElementTable> ambient;    // null when over the cap
  std::shared_ptr<ElementTable> container;  // table the result indexes into
  std::string container_name;               // "ambient" or the candidate name
  HallResult result;
  // Order of the result matches the pi-part of the ambient order formula.
  bool hall_in_ambient = false;
};

HallSearch hall_find_for_spec(const GroupSpec& spec, const std::vector<uint64_t>& pi,
                              HallStrategy strategy, uint64_t cap,
                              uint64_t node_budget = 50'000'000);

}  // namespace hallbase
