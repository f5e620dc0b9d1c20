#pragma once

// Independent reference implementations the tests check the library against.
// Everything here is written the slow, obvious way on purpose: polynomial
// arithmetic done longhand, determinants by cofactor expansion, group actions
// materialized point by point.

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "constructions.hpp"
#include "group.hpp"

namespace oracle {

using hallbase::ElementTable;
using hallbase::FieldPtr;
using hallbase::Matrix;

// --- polynomial arithmetic over Z_p, coefficient lists constant term first ---

inline std::vector<uint32_t> poly_trim(std::vector<uint32_t> a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
  return a;
}

inline std::vector<uint32_t> poly_mul(const std::vector<uint32_t>& a,
                                      const std::vector<uint32_t>& b, uint32_t p) {
  if (a.empty() || b.empty()) return {};
  std::vector<uint32_t> out(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j)
      out[i + j] = (out[i + j] + a[i] * b[j]) % p;
  return poly_trim(out);
}

inline std::vector<uint32_t> poly_add(std::vector<uint32_t> a, const std::vector<uint32_t>& b,
                                      uint32_t p) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + b[i]) % p;
  return poly_trim(a);
}

// a mod m, m monic
inline std::vector<uint32_t> poly_mod(std::vector<uint32_t> a, const std::vector<uint32_t>& m,
                                      uint32_t p) {
  a = poly_trim(a);
  while (a.size() >= m.size()) {
    uint32_t lead = a.back();
    size_t shift = a.size() - m.size();
    for (size_t i = 0; i < m.size(); ++i) {
      uint32_t sub = (lead * m[i]) % p;
      a[shift + i] = (a[shift + i] + p - sub) % p;
    }
    a = poly_trim(a);
  }
  return a;
}

inline uint32_t poly_eval(const std::vector<uint32_t>& a, uint32_t x, uint32_t p) {
  uint32_t v = 0;
  for (size_t i = a.size(); i-- > 0;) v = (v * x + a[i]) % p;
  return v;
}

// Irreducibility over Z_p by exhaustive factor search, degree of m at most 4.
inline bool poly_irreducible(const std::vector<uint32_t>& m, uint32_t p) {
  size_t deg = m.size() - 1;
  if (deg <= 1) return deg == 1;
  // Any factorization has a factor of degree <= deg/2; enumerate monic ones.
  for (size_t d = 1; d <= deg / 2; ++d) {
    uint64_t count = 1;
    for (size_t i = 0; i < d; ++i) count *= p;
    for (uint64_t code = 0; code < count; ++code) {
      std::vector<uint32_t> f(d + 1, 0);
      uint64_t c = code;
      for (size_t i = 0; i < d; ++i) {
        f[i] = static_cast<uint32_t>(c % p);
        c /= p;
      }
      f[d] = 1;
      // Trial division: does f divide m?
      std::vector<uint32_t> rem = poly_mod(m, f, p);
      if (rem.empty()) return false;
    }
  }
  return true;
}

// --- matrices ---

inline Matrix minor_of(const Matrix& m, uint32_t row, uint32_t col) {
  Matrix out(m.field, m.rows - 1, m.cols - 1);
  for (uint32_t r = 0, rr = 0; r < m.rows; ++r) {
    if (r == row) continue;
    for (uint32_t c = 0, cc = 0; c < m.cols; ++c) {
      if (c == col) continue;
      out.at(rr, cc) = m.at(r, c);
      ++cc;
    }
    ++rr;
  }
  return out;
}

inline uint32_t det_cofactor(const Matrix& m) {
  const FieldPtr& k = m.field;
  if (m.rows == 1) return m.at(0, 0);
  uint32_t acc = 0;
  for (uint32_t c = 0; c < m.cols; ++c) {
    uint32_t term = k->mul(m.at(0, c), det_cofactor(minor_of(m, 0, c)));
    if (c % 2 == 1) term = k->neg(term);
    acc = k->add(acc, term);
  }
  return acc;
}

inline uint64_t matrix_order_brute(const Matrix& m) {
  Matrix id = Matrix::identity(m.field, m.rows);
  Matrix acc = m;
  uint64_t n = 1;
  while (!(acc == id)) {
    acc = hallbase::matmul(acc, m);
    ++n;
  }
  return n;
}

// All invertible n x n matrices over the field, in code-enumeration order.
// Only sensible when q^(n*n) is small.
inline std::vector<Matrix> all_invertible(const FieldPtr& k, uint32_t n) {
  std::vector<Matrix> out;
  uint64_t total = 1;
  for (uint32_t i = 0; i < n * n; ++i) total *= k->q();
  for (uint64_t code = 0; code < total; ++code) {
    Matrix m(k, n, n);
    uint64_t c = code;
    for (uint32_t i = 0; i < n * n; ++i) {
      m.a[i] = static_cast<uint32_t>(c % k->q());
      c /= k->q();
    }
    if (det_cofactor(m) != 0) out.push_back(m);
  }
  return out;
}

// --- multiplicative orders ---

inline uint32_t e_brute(uint64_t r, uint64_t q) {
  if (r == 2) return q % 4 == 1 ? 1 : 2;
  uint64_t v = q % r;
  uint32_t e = 1;
  while (v != 1) {
    v = (v * (q % r)) % r;
    ++e;
  }
  return e;
}

// --- coset actions, materialized ---

struct BruteCosets {
  const ElementTable* t = nullptr;
  std::vector<uint32_t> labels;          // canonical label (least member) per point
  std::vector<uint32_t> label_of;        // group index -> its coset's label
  std::vector<uint32_t> core;            // elements fixing every point
  uint64_t group_order = 0;
};

inline BruteCosets brute_cosets(const ElementTable& t, const std::vector<uint32_t>& h) {
  BruteCosets bc;
  bc.t = &t;
  bc.group_order = t.size();
  bc.label_of.assign(t.size(), 0);
  std::set<uint32_t> labels;
  for (uint32_t g = 0; g < t.size(); ++g) {
    uint32_t least = UINT32_MAX;
    for (uint32_t m : h) least = std::min(least, t.mul(m, g));
    bc.label_of[g] = least;
    labels.insert(least);
  }
  bc.labels.assign(labels.begin(), labels.end());
  for (uint32_t g = 0; g < t.size(); ++g) {
    bool fixes_all = true;
    for (uint32_t L : bc.labels)
      if (bc.label_of[t.mul(L, g)] != L) {
        fixes_all = false;
        break;
      }
    if (fixes_all) bc.core.push_back(g);
  }
  return bc;
}

inline uint32_t brute_act(const BruteCosets& bc, uint32_t label, uint32_t g) {
  return bc.label_of[bc.t->mul(label, g)];
}

// Number of regular orbits on m-tuples of points: tuples whose pointwise
// stabilizer is exactly the action kernel, divided by the orbit size.
inline uint64_t brute_reg(const BruteCosets& bc, uint32_t m) {
  size_t omega = bc.labels.size();
  std::vector<uint32_t> idx(m, 0);
  uint64_t regular_tuples = 0;
  while (true) {
    uint64_t stab = 0;
    for (uint32_t g = 0; g < bc.group_order; ++g) {
      bool fixes = true;
      for (uint32_t i = 0; i < m && fixes; ++i) {
        uint32_t L = bc.labels[idx[i]];
        fixes = brute_act(bc, L, g) == L;
      }
      if (fixes) ++stab;
    }
    if (stab == bc.core.size()) ++regular_tuples;
    uint32_t d = m;
    while (d > 0 && idx[d - 1] + 1 == omega) --d;
    if (d == 0) break;
    ++idx[d - 1];
    for (uint32_t i = d; i < m; ++i) idx[i] = 0;
  }
  // Every regular orbit has size |G| / |kernel|, so the tuple count divides
  // evenly; anything else would be a bookkeeping bug in this oracle.
  uint64_t orbit_size = bc.group_order / bc.core.size();
  if (regular_tuples % orbit_size != 0) return UINT64_MAX;
  return regular_tuples / orbit_size;
}

// Least m (up to m_max) admitting a regular tuple; 0 when none exists.
inline uint32_t brute_base(const BruteCosets& bc, uint32_t m_max) {
  for (uint32_t m = 1; m <= m_max; ++m)
    if (brute_reg(bc, m) > 0) return m;
  return 0;
}

}  // namespace oracle
