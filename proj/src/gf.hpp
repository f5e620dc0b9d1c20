#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "errors.hpp"

namespace hallbase {

class Field;
using FieldPtr = std::shared_ptr<const Field>;

// F_{p^f} with table-driven arithmetic. Elements are codes 0..q-1 where the
// code of sum c_i x^i is sum c_i p^i (c_0 the constant term). The modulus is
// the lexicographically least monic irreducible of degree f, compared on
// coefficient tuples most-significant first. For f = 1 the modulus is x.
// Instances are canonical: make(p, f) returns a process-wide shared object,
// so pointer equality decides field identity.
class Field {
 public:
  static FieldPtr make(uint64_t p, uint32_t f);

  uint32_t p() const { return p_; }
  uint32_t f() const { return f_; }
  uint32_t q() const { return q_; }
  // Constant-term-first, length f+1, monic.
  const std::vector<uint32_t>& modulus() const { return modulus_; }

  uint32_t add(uint32_t a, uint32_t b) const { return add_[a * q_ + b]; }
  uint32_t mul(uint32_t a, uint32_t b) const { return mul_[a * q_ + b]; }
  uint32_t neg(uint32_t a) const { return neg_[a]; }
  uint32_t sub(uint32_t a, uint32_t b) const { return add(a, neg_[b]); }
  uint32_t inv(uint32_t a) const;
  uint32_t div(uint32_t a, uint32_t b) const { return mul(a, inv(b)); }
  // a^(p) (absolute Frobenius)
  uint32_t frob_p(uint32_t a) const { return frob_[a]; }
  // a^(p^subdegree)
  uint32_t frobenius(uint32_t a, uint32_t subdegree) const;
  uint32_t pow(uint32_t a, uint64_t e) const;

  // Least code of multiplicative order q-1.
  uint32_t generator() const { return gen_; }
  uint32_t element_order(uint32_t a) const;
  bool is_square(uint32_t a) const;
  // Least non-square code (requires odd q).
  uint32_t least_nonsquare() const;

  std::vector<uint32_t> coeffs(uint32_t code) const;
  uint32_t from_coeffs(const std::vector<uint32_t>& c) const;

  bool same(const FieldPtr& other) const { return other.get() == this; }

 private:
  Field() = default;
  uint32_t p_ = 0, f_ = 0, q_ = 0;
  uint32_t gen_ = 0;
  std::vector<uint32_t> modulus_;
  std::vector<uint16_t> add_, mul_;
  std::vector<uint16_t> neg_, frob_, inv_;
};

// Embedding of F_q = small into F_{q^a} = big (same characteristic), with
// coordinates relative to the small-field basis {1, Y, ..., Y^(a-1)}, Y the
// canonical generator element (code p) of the big field. Rows/columns follow
// the row-vector convention used by the matrix layer: mul_row(w, j) is the
// coordinate row of Y^j * w, so stacking rows j = 0..a-1 gives the matrix of
// right multiplication by w.
class SubfieldMap {
 public:
  static SubfieldMap make(FieldPtr small, FieldPtr big);

  const FieldPtr& small() const { return small_; }
  const FieldPtr& big() const { return big_; }
  uint32_t degree() const { return a_; }
  uint32_t embed(uint32_t small_code) const { return embed_[small_code]; }
  // Length-a vector of small codes for a big element.
  std::vector<uint32_t> coords(uint32_t big_code) const;
  // a x a small-code matrix of right multiplication by w (row-major).
  std::vector<uint32_t> mul_matrix(uint32_t w) const;

 private:
  FieldPtr small_, big_;
  uint32_t a_ = 0;
  std::vector<uint32_t> embed_;
  std::vector<std::vector<uint32_t>> coords_;
};

// --- integer utilities ---

bool is_prime(uint64_t n);
// (prime, exponent) pairs, ascending primes.
std::vector<std::pair<uint64_t, int>> factorize(uint64_t n);
std::vector<uint64_t> prime_support(uint64_t n);
// Largest divisor of n supported on pi.
uint64_t pi_part(uint64_t n, const std::vector<uint64_t>& pi);
bool is_pi_number(uint64_t n, const std::vector<uint64_t>& pi);
uint64_t pow_u64(uint64_t base, uint32_t e);  // throws on overflow
uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m);
uint64_t powmod_u64(uint64_t base, uint64_t e, uint64_t m);
// Largest power r^k dividing q^e - 1, computed without forming q^e.
uint64_t r_part_of_pow_minus_one(uint64_t q, uint64_t e, uint64_t r);

// Multiplicative-order value used throughout the Hall-condition tables:
// for odd prime r, the order of n modulo r; for r = 2 it is 1 when
// n = 1 (mod 4) and 2 when n = 3 (mod 4).
uint32_t e_value(uint64_t r, uint64_t n);

}  // namespace hallbase
