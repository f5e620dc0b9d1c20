#include "gf.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace hallbase {

namespace {

constexpr uint32_t kMaxQ = 1024;  // table-driven arithmetic bound

// Dense polynomials over Z_p, constant term first, no trailing zeros.
using Poly = std::vector<uint32_t>;

Poly poly_trim(Poly a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
  return a;
}

Poly poly_mul(const Poly& a, const Poly& b, uint32_t p) {
  if (a.empty() || b.empty()) return {};
  Poly c(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j)
      c[i + j] = (c[i + j] + a[i] * b[j]) % p;
  return poly_trim(std::move(c));
}

// a mod m, m monic
Poly poly_mod(Poly a, const Poly& m, uint32_t p) {
  a = poly_trim(std::move(a));
  while (a.size() >= m.size()) {
    uint32_t lead = a.back();
    size_t shift = a.size() - m.size();
    for (size_t i = 0; i < m.size(); ++i) {
      uint32_t t = (lead * m[i]) % p;
      uint32_t idx = shift + i;
      a[idx] = (a[idx] + p - t) % p;
    }
    a = poly_trim(std::move(a));
  }
  return a;
}

uint32_t poly_to_code(const Poly& a, uint32_t p) {
  uint64_t code = 0, mult = 1;
  for (uint32_t c : a) {
    code += c * mult;
    mult *= p;
  }
  return static_cast<uint32_t>(code);
}

Poly code_to_poly(uint32_t code, uint32_t p) {
  Poly a;
  while (code) {
    a.push_back(code % p);
    code /= p;
  }
  return a;
}

bool poly_divides(const Poly& d, const Poly& a, uint32_t p) {
  return poly_mod(a, d, p).empty();
}

// Least (most-significant-first lexicographic) monic irreducible of degree f.
Poly least_irreducible(uint32_t p, uint32_t f) {
  if (f == 1) return {0, 1};  // x
  // Enumerate monic candidates in ascending MSB-first coefficient order.
  uint64_t total = 1;
  for (uint32_t i = 0; i < f; ++i) total *= p;
  for (uint64_t t = 0; t < total; ++t) {
    Poly cand(f + 1, 0);
    cand[f] = 1;
    uint64_t rem = t;
    for (uint32_t i = 0; i < f; ++i) {  // digit for x^(f-1) is most significant
      uint32_t digit_pos = f - 1 - i;
      uint64_t weight = 1;
      for (uint32_t j = 0; j < digit_pos; ++j) weight *= p;
      cand[digit_pos] = static_cast<uint32_t>(rem / weight);
      rem %= weight;
    }
    // Trial-divide by every monic polynomial of degree 1..f/2.
    bool irreducible = true;
    for (uint32_t d = 1; irreducible && 2 * d <= f; ++d) {
      uint64_t nd = 1;
      for (uint32_t i = 0; i < d; ++i) nd *= p;
      for (uint64_t s = 0; s < nd && irreducible; ++s) {
        Poly div = code_to_poly(static_cast<uint32_t>(s), p);
        div.resize(d + 1, 0);
        div[d] = 1;
        if (poly_divides(div, cand, p)) irreducible = false;
      }
    }
    if (irreducible) return cand;
  }
  fail(Errc::internal, "no irreducible polynomial found");
}

}  // namespace

FieldPtr Field::make(uint64_t p, uint32_t f) {
  if (f == 0) fail(Errc::degree_zero, "field degree must be positive");
  if (p < 2 || !is_prime(p)) fail(Errc::not_prime, "characteristic must be prime");
  uint64_t q64 = 1;
  for (uint32_t i = 0; i < f; ++i) {
    q64 *= p;
    if (q64 > kMaxQ)
      fail(Errc::budget_exceeded, "field size exceeds table budget");
  }

  static std::mutex cache_mutex;
  static std::map<std::pair<uint64_t, uint32_t>, FieldPtr> cache;
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto it = cache.find({p, f});
  if (it != cache.end()) return it->second;

  auto fl = std::shared_ptr<Field>(new Field());
  fl->p_ = static_cast<uint32_t>(p);
  fl->f_ = f;
  fl->q_ = static_cast<uint32_t>(q64);
  uint32_t q = fl->q_;
  Poly mod = least_irreducible(fl->p_, f);
  fl->modulus_.assign(mod.begin(), mod.end());

  fl->add_.resize(static_cast<size_t>(q) * q);
  fl->mul_.resize(static_cast<size_t>(q) * q);
  fl->neg_.resize(q);
  fl->inv_.resize(q);
  fl->frob_.resize(q);

  uint32_t pp = fl->p_;
  for (uint32_t a = 0; a < q; ++a) {
    for (uint32_t b = 0; b < q; ++b) {
      // digitwise add mod p
      uint32_t x = a, y = b, mult = 1, s = 0;
      while (x || y) {
        s += ((x % pp) + (y % pp)) % pp * mult;
        x /= pp;
        y /= pp;
        mult *= pp;
      }
      fl->add_[static_cast<size_t>(a) * q + b] = static_cast<uint16_t>(s);
      Poly prod = poly_mod(poly_mul(code_to_poly(a, pp), code_to_poly(b, pp), pp), mod, pp);
      fl->mul_[static_cast<size_t>(a) * q + b] =
          static_cast<uint16_t>(poly_to_code(prod, pp));
    }
  }
  for (uint32_t a = 0; a < q; ++a) {
    uint32_t x = a, mult = 1, s = 0;
    while (x) {
      s += (pp - x % pp) % pp * mult;
      x /= pp;
      mult *= pp;
    }
    fl->neg_[a] = static_cast<uint16_t>(s);
  }
  fl->inv_[0] = 0;
  for (uint32_t a = 1; a < q; ++a) {
    for (uint32_t b = 1; b < q; ++b) {
      if (fl->mul_[static_cast<size_t>(a) * q + b] == 1) {
        fl->inv_[a] = static_cast<uint16_t>(b);
        break;
      }
    }
  }
  for (uint32_t a = 0; a < q; ++a) {
    uint32_t r = 1;
    for (uint32_t i = 0; i < pp; ++i) r = fl->mul_[static_cast<size_t>(r) * q + a];
    fl->frob_[a] = static_cast<uint16_t>(r);
  }
  fl->gen_ = 0;
  for (uint32_t a = 2; a < q; ++a) {
    if (fl->element_order(a) == q - 1) {
      fl->gen_ = a;
      break;
    }
  }
  if (q == 2) fl->gen_ = 1;

  FieldPtr ptr = fl;
  cache.emplace(std::make_pair(p, f), ptr);
  return ptr;
}

uint32_t Field::inv(uint32_t a) const {
  if (a == 0) fail(Errc::division_by_zero, "inverse of zero");
  return inv_[a];
}

uint32_t Field::frobenius(uint32_t a, uint32_t subdegree) const {
  uint32_t r = a;
  for (uint32_t i = 0; i < subdegree; ++i) r = frob_[r];
  return r;
}

uint32_t Field::pow(uint32_t a, uint64_t e) const {
  uint32_t r = 1, b = a;
  while (e) {
    if (e & 1) r = mul(r, b);
    b = mul(b, b);
    e >>= 1;
  }
  return r;
}

uint32_t Field::element_order(uint32_t a) const {
  if (a == 0) fail(Errc::division_by_zero, "order of zero");
  uint32_t r = a, k = 1;
  while (r != 1) {
    r = mul(r, a);
    ++k;
  }
  return k;
}

bool Field::is_square(uint32_t a) const {
  if (a == 0) return true;
  if (p_ == 2) return true;
  return pow(a, (q_ - 1) / 2) == 1;
}

uint32_t Field::least_nonsquare() const {
  if (p_ == 2) fail(Errc::inconsistent_type_parameters, "no non-square in even characteristic");
  for (uint32_t a = 1; a < q_; ++a)
    if (!is_square(a)) return a;
  fail(Errc::internal, "no non-square found");
}

std::vector<uint32_t> Field::coeffs(uint32_t code) const {
  std::vector<uint32_t> c(f_, 0);
  for (uint32_t i = 0; i < f_; ++i) {
    c[i] = code % p_;
    code /= p_;
  }
  return c;
}

uint32_t Field::from_coeffs(const std::vector<uint32_t>& c) const {
  if (c.size() > f_) fail(Errc::dimension_mismatch, "too many coefficients");
  uint32_t code = 0, mult = 1;
  for (uint32_t v : c) {
    if (v >= p_) fail(Errc::index_out_of_range, "coefficient not reduced mod p");
    code += v * mult;
    mult *= p_;
  }
  return code;
}

// --- SubfieldMap ---

namespace {

// Invert an m x m matrix over Z_p given as row-major uint32, Gauss-Jordan.
std::vector<uint32_t> zp_invert(std::vector<uint32_t> a, uint32_t m, uint32_t p) {
  auto inv_mod = [p](uint32_t x) {
    for (uint32_t y = 1; y < p; ++y)
      if (x * y % p == 1) return y;
    fail(Errc::singular, "non-invertible pivot");
  };
  std::vector<uint32_t> inv(static_cast<size_t>(m) * m, 0);
  for (uint32_t i = 0; i < m; ++i) inv[i * m + i] = 1;
  for (uint32_t col = 0; col < m; ++col) {
    uint32_t piv = col;
    while (piv < m && a[piv * m + col] == 0) ++piv;
    if (piv == m) fail(Errc::singular, "singular matrix over Z_p");
    if (piv != col) {
      for (uint32_t j = 0; j < m; ++j) {
        std::swap(a[piv * m + j], a[col * m + j]);
        std::swap(inv[piv * m + j], inv[col * m + j]);
      }
    }
    uint32_t s = inv_mod(a[col * m + col]);
    for (uint32_t j = 0; j < m; ++j) {
      a[col * m + j] = a[col * m + j] * s % p;
      inv[col * m + j] = inv[col * m + j] * s % p;
    }
    for (uint32_t r = 0; r < m; ++r) {
      if (r == col) continue;
      uint32_t fct = a[r * m + col];
      if (!fct) continue;
      for (uint32_t j = 0; j < m; ++j) {
        a[r * m + j] = (a[r * m + j] + (p - fct) * a[col * m + j]) % p;
        inv[r * m + j] = (inv[r * m + j] + (p - fct) * inv[col * m + j]) % p;
      }
    }
  }
  return inv;
}

}  // namespace

SubfieldMap SubfieldMap::make(FieldPtr small, FieldPtr big) {
  if (small->p() != big->p())
    fail(Errc::field_mismatch, "subfield embedding needs equal characteristic");
  if (big->f() % small->f() != 0)
    fail(Errc::field_mismatch, "degree of big field not a multiple of small degree");
  SubfieldMap map;
  map.small_ = small;
  map.big_ = big;
  map.a_ = big->f() / small->f();
  uint32_t p = small->p();

  // Least root of the small modulus inside the big field.
  uint32_t root = 0;
  bool found = false;
  for (uint32_t cand = 0; cand < big->q() && !found; ++cand) {
    uint32_t acc = 0, power = 1;
    for (uint32_t i = 0; i < small->modulus().size(); ++i) {
      uint32_t coef = small->modulus()[i] % p;  // prime-field code
      acc = big->add(acc, big->mul(coef, power));
      power = big->mul(power, cand);
    }
    if (acc == 0) {
      root = cand;
      found = true;
    }
  }
  if (!found) fail(Errc::internal, "small modulus has no root in big field");

  map.embed_.resize(small->q());
  for (uint32_t c = 0; c < small->q(); ++c) {
    uint32_t acc = 0, power = 1;
    for (uint32_t coef : small->coeffs(c)) {
      acc = big->add(acc, big->mul(coef, power));
      power = big->mul(power, root);
    }
    map.embed_[c] = acc;
  }

  // F_p-basis of big indexed (i, k) -> Y^i * embed(x_small^k); solve for
  // coordinates by inverting the basis matrix over Z_p.
  uint32_t fs = small->f(), m = big->f();
  uint32_t a = map.a_;
  uint32_t Y = (big->f() == 1) ? 1 : big->p();  // code of x in the big field
  std::vector<uint32_t> basis(static_cast<size_t>(m) * m, 0);
  for (uint32_t i = 0; i < a; ++i) {
    for (uint32_t k = 0; k < fs; ++k) {
      std::vector<uint32_t> cc(fs, 0);
      cc[k] = 1;
      uint32_t elem = big->mul(big->pow(Y, i), map.embed_[small->from_coeffs(cc)]);
      auto digits = big->coeffs(elem);
      for (uint32_t rgt = 0; rgt < m; ++rgt)
        basis[static_cast<size_t>(rgt) * m + (i * fs + k)] = digits[rgt];
    }
  }
  auto basis_inv = zp_invert(basis, m, p);

  map.coords_.resize(big->q());
  for (uint32_t c = 0; c < big->q(); ++c) {
    auto digits = big->coeffs(c);
    std::vector<uint32_t> sol(m, 0);
    for (uint32_t r = 0; r < m; ++r)
      for (uint32_t j = 0; j < m; ++j)
        sol[r] = (sol[r] + basis_inv[static_cast<size_t>(r) * m + j] * digits[j]) % p;
    std::vector<uint32_t> smalls(a, 0);
    for (uint32_t i = 0; i < a; ++i) {
      std::vector<uint32_t> cc(fs, 0);
      for (uint32_t k = 0; k < fs; ++k) cc[k] = sol[i * fs + k];
      smalls[i] = small->from_coeffs(cc);
    }
    map.coords_[c] = std::move(smalls);
  }
  return map;
}

std::vector<uint32_t> SubfieldMap::coords(uint32_t big_code) const {
  return coords_[big_code];
}

std::vector<uint32_t> SubfieldMap::mul_matrix(uint32_t w) const {
  std::vector<uint32_t> m(static_cast<size_t>(a_) * a_, 0);
  uint32_t Y = big_->f() == 1 ? 1 : big_->p();
  for (uint32_t j = 0; j < a_; ++j) {
    uint32_t elem = big_->mul(big_->pow(Y, j), w);
    auto row = coords_[elem];
    for (uint32_t i = 0; i < a_; ++i) m[static_cast<size_t>(j) * a_ + i] = row[i];
  }
  return m;
}

// --- integer utilities ---

bool is_prime(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t d : {2ull, 3ull, 5ull, 7ull}) {
    if (n == d) return true;
    if (n % d == 0) return false;
  }
  for (uint64_t d = 11; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

std::vector<std::pair<uint64_t, int>> factorize(uint64_t n) {
  std::vector<std::pair<uint64_t, int>> out;
  for (uint64_t d = 2; d * d <= n; d += (d == 2 ? 1 : 2)) {
    if (n % d) continue;
    int e = 0;
    while (n % d == 0) {
      n /= d;
      ++e;
    }
    out.emplace_back(d, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

std::vector<uint64_t> prime_support(uint64_t n) {
  std::vector<uint64_t> out;
  for (auto& [pr, e] : factorize(n)) out.push_back(pr);
  return out;
}

uint64_t pi_part(uint64_t n, const std::vector<uint64_t>& pi) {
  uint64_t part = 1;
  for (uint64_t r : pi) {
    while (n % r == 0) {
      n /= r;
      part *= r;
    }
  }
  return part;
}

bool is_pi_number(uint64_t n, const std::vector<uint64_t>& pi) {
  for (uint64_t r : pi)
    while (n % r == 0) n /= r;
  return n == 1;
}

uint64_t pow_u64(uint64_t base, uint32_t e) {
  uint64_t r = 1;
  for (uint32_t i = 0; i < e; ++i) {
    if (base != 0 && r > UINT64_MAX / base)
      fail(Errc::budget_exceeded, "integer overflow in power");
    r *= base;
  }
  return r;
}

uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
  return static_cast<uint64_t>((static_cast<__uint128_t>(a) * b) % m);
}

uint64_t powmod_u64(uint64_t base, uint64_t e, uint64_t m) {
  uint64_t r = 1 % m;
  base %= m;
  while (e) {
    if (e & 1) r = mulmod_u64(r, base, m);
    base = mulmod_u64(base, base, m);
    e >>= 1;
  }
  return r;
}

uint64_t r_part_of_pow_minus_one(uint64_t q, uint64_t e, uint64_t r) {
  uint64_t part = 1, mod = r;
  while (powmod_u64(q, e, mod) == 1) {
    part = mod;
    if (mod > UINT64_MAX / r) break;
    mod *= r;
  }
  return part;
}

uint32_t e_value(uint64_t r, uint64_t n) {
  if (!is_prime(r)) fail(Errc::not_prime, "e_value needs a prime modulus");
  if (n == 0) fail(Errc::not_coprime, "base must be nonzero");
  if (r == 2) {
    if (n % 2 == 0) fail(Errc::even_base_for_r_two, "e_value(2, n) needs odd n");
    return (n % 4 == 1) ? 1 : 2;
  }
  if (n % r == 0) fail(Errc::not_coprime, "base shares a factor with the modulus");
  uint64_t cur = n % r;
  uint32_t k = 1;
  while (cur != 1) {
    cur = cur * (n % r) % r;
    ++k;
  }
  return k;
}

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::ok: return "ok";
    case Errc::not_prime: return "not_prime";
    case Errc::degree_zero: return "degree_zero";
    case Errc::division_by_zero: return "division_by_zero";
    case Errc::field_mismatch: return "field_mismatch";
    case Errc::not_coprime: return "not_coprime";
    case Errc::even_base_for_r_two: return "even_base_for_r_two";
    case Errc::singular: return "singular";
    case Errc::dimension_mismatch: return "dimension_mismatch";
    case Errc::inconsistent_type_parameters: return "inconsistent_type_parameters";
    case Errc::even_characteristic_orthogonal: return "even_characteristic_orthogonal";
    case Errc::unsupported_family: return "unsupported_family";
    case Errc::budget_exceeded: return "budget_exceeded";
    case Errc::non_invertible_generator: return "non_invertible_generator";
    case Errc::order_formula_mismatch: return "order_formula_mismatch";
    case Errc::index_out_of_range: return "index_out_of_range";
    case Errc::parent_mismatch: return "parent_mismatch";
    case Errc::pi_contains_p: return "pi_contains_p";
    case Errc::empty_pi: return "empty_pi";
    case Errc::invalid_decomposition: return "invalid_decomposition";
    case Errc::dimension_too_small: return "dimension_too_small";
    case Errc::no_candidate_clause: return "no_candidate_clause";
    case Errc::witness_not_in_group: return "witness_not_in_group";
    case Errc::intermediate_not_abelian: return "intermediate_not_abelian";
    case Errc::kind_dimension_mismatch: return "kind_dimension_mismatch";
    case Errc::not_found: return "not_found";
    case Errc::parse_error: return "parse_error";
    case Errc::usage: return "usage";
    case Errc::internal: return "internal";
  }
  return "unknown";
}

}  // namespace hallbase
