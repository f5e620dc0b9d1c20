#pragma once

#include <stdexcept>
#include <string>

namespace hallbase {

// Error codes shared between the C++ core and the C API surface.
enum class Errc : int {
  ok = 0,
  not_prime,
  degree_zero,
  division_by_zero,
  field_mismatch,
  not_coprime,
  even_base_for_r_two,
  singular,
  dimension_mismatch,
  inconsistent_type_parameters,
  even_characteristic_orthogonal,
  unsupported_family,
  budget_exceeded,
  non_invertible_generator,
  order_formula_mismatch,
  index_out_of_range,
  parent_mismatch,
  pi_contains_p,
  empty_pi,
  invalid_decomposition,
  dimension_too_small,
  no_candidate_clause,
  witness_not_in_group,
  intermediate_not_abelian,
  kind_dimension_mismatch,
  not_found,
  parse_error,
  usage,
  internal,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace hallbase
