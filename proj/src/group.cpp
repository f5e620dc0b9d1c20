#include "group.hpp"

#include <algorithm>
#include <cstring>
#include <unordered_set>

namespace hallbase {

const char* family_name(Family f) {
  switch (f) {
    case Family::GL: return "GL";
    case Family::SL: return "SL";
    case Family::GU: return "GU";
    case Family::SU: return "SU";
    case Family::GSp: return "GSp";
    case Family::Sp: return "Sp";
    case Family::GO: return "GO";
    case Family::SO: return "SO";
    case Family::User: return "user";
  }
  return "?";
}

uint32_t GroupSpec::p() const {
  auto fs = factorize(q);
  return static_cast<uint32_t>(fs[0].first);
}

uint32_t GroupSpec::f() const {
  auto fs = factorize(q);
  return static_cast<uint32_t>(fs[0].second);
}

uint32_t GroupSpec::u() const {
  return (family == Family::GU || family == Family::SU) ? 2 : 1;
}

GroupSpec make_spec(Family family, uint32_t n, uint64_t q, FormEps eps) {
  if (n == 0) fail(Errc::dimension_too_small, "dimension must be positive");
  if (q < 2 || factorize(q).size() != 1)
    fail(Errc::not_prime, "field size must be a prime power");
  GroupSpec spec;
  spec.family = family;
  spec.n = n;
  spec.q = q;
  spec.eps = FormEps::none;
  switch (family) {
    case Family::GO:
    case Family::SO:
      if (q % 2 == 0)
        fail(Errc::even_characteristic_orthogonal,
             "orthogonal families are supported in odd characteristic only");
      if (eps == FormEps::circ && n % 2 == 0)
        fail(Errc::inconsistent_type_parameters, "circ type needs odd dimension");
      if ((eps == FormEps::plus || eps == FormEps::minus) && n % 2)
        fail(Errc::inconsistent_type_parameters, "plus/minus types need even dimension");
      if (eps == FormEps::none)
        fail(Errc::inconsistent_type_parameters, "orthogonal families need a type epsilon");
      spec.eps = eps;
      break;
    case Family::GSp:
    case Family::Sp:
      if (n % 2) fail(Errc::inconsistent_type_parameters, "symplectic dimension must be even");
      break;
    default:
      break;
  }
  return spec;
}

FieldPtr matrix_field(const GroupSpec& spec) {
  return Field::make(spec.p(), spec.f() * spec.u());
}

Form group_form(const GroupSpec& spec) {
  FieldPtr K = matrix_field(spec);
  switch (spec.family) {
    case Family::GL:
    case Family::SL:
    case Family::User:
      return standard_form(FormKind::linear, FormEps::none, spec.n, K);
    case Family::GU:
    case Family::SU:
      return standard_form(FormKind::hermitian, FormEps::none, spec.n, K);
    case Family::GSp:
    case Family::Sp:
      return standard_form(FormKind::symplectic, FormEps::none, spec.n, K);
    case Family::GO:
    case Family::SO:
      return standard_form(FormKind::quadratic, spec.eps, spec.n, K);
  }
  fail(Errc::internal, "unhandled family");
}

bool FactoredOrder::fits_u64() const {
  uint64_t v = 1;
  for (uint64_t fct : factors) {
    if (fct != 0 && v > UINT64_MAX / fct) return false;
    v *= fct;
  }
  return true;
}

uint64_t FactoredOrder::value() const {
  uint64_t v = 1;
  for (uint64_t fct : factors) {
    if (fct != 0 && v > UINT64_MAX / fct)
      fail(Errc::budget_exceeded, "group order exceeds 64 bits");
    v *= fct;
  }
  return v;
}

std::vector<std::pair<uint64_t, int>> FactoredOrder::factorization() const {
  std::vector<std::pair<uint64_t, int>> acc;
  for (uint64_t fct : factors) {
    for (auto& [pr, e] : factorize(fct)) {
      auto it = std::find_if(acc.begin(), acc.end(),
                             [&](auto& pe) { return pe.first == pr; });
      if (it == acc.end())
        acc.emplace_back(pr, e);
      else
        it->second += e;
    }
  }
  std::sort(acc.begin(), acc.end());
  return acc;
}

std::vector<uint64_t> FactoredOrder::primes() const {
  std::vector<uint64_t> out;
  for (auto& [pr, e] : factorization()) out.push_back(pr);
  return out;
}

uint64_t FactoredOrder::pi_part_value(const std::vector<uint64_t>& pi) const {
  uint64_t v = 1;
  for (uint64_t fct : factors) {
    uint64_t part = pi_part(fct, pi);
    if (part != 0 && v > UINT64_MAX / part)
      fail(Errc::budget_exceeded, "pi-part exceeds 64 bits");
    v *= part;
  }
  return v;
}

FactoredOrder order_formula(const GroupSpec& spec) {
  uint32_t n = spec.n;
  uint64_t q = spec.q;
  FactoredOrder fo;
  auto push_q_power = [&](uint64_t e) {
    for (uint64_t i = 0; i < e; ++i) fo.factors.push_back(q);
  };
  switch (spec.family) {
    case Family::GL:
    case Family::SL: {
      push_q_power(static_cast<uint64_t>(n) * (n - 1) / 2);
      for (uint32_t i = (spec.family == Family::SL ? 2 : 1); i <= n; ++i)
        fo.factors.push_back(pow_u64(q, i) - 1);
      break;
    }
    case Family::GU:
    case Family::SU: {
      push_q_power(static_cast<uint64_t>(n) * (n - 1) / 2);
      for (uint32_t i = (spec.family == Family::SU ? 2 : 1); i <= n; ++i)
        fo.factors.push_back(pow_u64(q, i) + ((i % 2) ? 1 : -1));
      break;
    }
    case Family::Sp:
    case Family::GSp: {
      uint32_t m = n / 2;
      push_q_power(static_cast<uint64_t>(m) * m);
      for (uint32_t i = 1; i <= m; ++i) fo.factors.push_back(pow_u64(q, 2 * i) - 1);
      if (spec.family == Family::GSp) fo.factors.push_back(q - 1);
      break;
    }
    case Family::GO:
    case Family::SO: {
      bool full_o_halved = (spec.family == Family::SO);
      if (n % 2) {
        uint32_t m = (n - 1) / 2;
        if (!full_o_halved) fo.factors.push_back(2);
        push_q_power(static_cast<uint64_t>(m) * m);
        for (uint32_t i = 1; i <= m; ++i) fo.factors.push_back(pow_u64(q, 2 * i) - 1);
        if (spec.family == Family::GO) fo.factors.push_back((q - 1) / 2);
      } else {
        uint32_t m = n / 2;
        if (!full_o_halved) fo.factors.push_back(2);
        push_q_power(static_cast<uint64_t>(m) * (m - 1));
        uint64_t qm = pow_u64(q, m);
        fo.factors.push_back(spec.eps == FormEps::plus ? qm - 1 : qm + 1);
        for (uint32_t i = 1; i < m; ++i) fo.factors.push_back(pow_u64(q, 2 * i) - 1);
        if (spec.family == Family::GO) fo.factors.push_back(q - 1);
      }
      break;
    }
    case Family::User:
      fail(Errc::unsupported_family, "no order formula for user groups");
  }
  std::erase(fo.factors, 1);
  if (fo.factors.empty()) fo.factors.push_back(1);
  return fo;
}

// --- generators ---

namespace {

// All vectors with first nonzero coordinate 1, ascending code order.
std::vector<std::vector<uint32_t>> projective_reps(const FieldPtr& K, uint32_t n) {
  std::vector<std::vector<uint32_t>> out;
  std::vector<uint32_t> v(n, 0);
  while (true) {
    uint32_t i = 0;
    while (i < n && v[i] == 0) ++i;
    if (i < n && v[i] == 1) out.push_back(v);
    // odometer with the last coordinate fastest
    int pos = static_cast<int>(n) - 1;
    while (pos >= 0) {
      if (++v[pos] < K->q()) break;
      v[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  return out;
}

// x -> x + lam * B(x, u) * u
Matrix transvection_like(const Form& fm, const std::vector<uint32_t>& u, uint32_t lam) {
  const Field& fl = *fm.field;
  uint32_t n = fm.n;
  Matrix t = Matrix::identity(fm.field, n);
  for (uint32_t i = 0; i < n; ++i) {
    std::vector<uint32_t> e(n, 0);
    e[i] = 1;
    uint32_t b = fm.bilin(e, u);
    if (!b) continue;
    uint32_t c = fl.mul(lam, b);
    for (uint32_t j = 0; j < n; ++j) t.at(i, j) = fl.add(t.at(i, j), fl.mul(c, u[j]));
  }
  return t;
}

std::vector<Matrix> linear_generators(const GroupSpec& spec) {
  FieldPtr K = matrix_field(spec);
  uint32_t n = spec.n;
  std::vector<Matrix> gens;
  uint32_t xi = K->generator();
  if (n >= 2) {
    for (uint32_t i = 0; i + 1 < n; ++i) {
      for (uint32_t k = 0; k < K->f(); ++k) {
        uint32_t lam = K->pow(xi, k);
        Matrix e1 = Matrix::identity(K, n);
        e1.at(i, i + 1) = lam;
        gens.push_back(e1);
        Matrix e2 = Matrix::identity(K, n);
        e2.at(i + 1, i) = lam;
        gens.push_back(e2);
      }
    }
  }
  if (spec.family == Family::GL) {
    std::vector<uint32_t> d(n, 1);
    d[0] = xi;
    gens.push_back(Matrix::diagonal(K, d));
  }
  return gens;
}

std::vector<Matrix> symplectic_generators(const GroupSpec& spec) {
  FieldPtr K = matrix_field(spec);
  Form fm = group_form(spec);
  uint32_t xi = K->generator();
  std::vector<Matrix> gens;
  for (auto& u : projective_reps(K, spec.n))
    for (uint32_t k = 0; k < K->f(); ++k)
      gens.push_back(transvection_like(fm, u, K->pow(xi, k)));
  if (spec.family == Family::GSp) {
    std::vector<uint32_t> d(spec.n, 1);
    for (uint32_t b = 0; b < spec.n / 2; ++b) d[2 * b] = xi;
    gens.push_back(Matrix::diagonal(K, d));
  }
  return gens;
}

std::vector<Matrix> unitary_generators(const GroupSpec& spec) {
  FieldPtr K = matrix_field(spec);
  Form fm = group_form(spec);
  const Field& fl = *K;
  uint32_t n = spec.n;
  uint32_t sub = fm.conj_subdegree;
  std::vector<Matrix> gens;
  if (spec.family == Family::GU) {
    // Pseudo-reflections r_{v,c}: x -> x + (c-1) h(x,v)/h(v,v) v for
    // anisotropic v, c a generator of the norm-one subgroup, plus coordinate
    // transpositions (the reflections alone can fall short, e.g. GU_2(2)).
    uint32_t c0 = fl.pow(fl.generator(), spec.q - 1);
    for (auto& v : projective_reps(K, n)) {
      uint32_t hvv = fm.bilin(v, v);
      if (!hvv) continue;
      Matrix t = Matrix::identity(K, n);
      uint32_t scale = fl.div(fl.sub(c0, 1), hvv);
      for (uint32_t i = 0; i < n; ++i) {
        std::vector<uint32_t> e(n, 0);
        e[i] = 1;
        uint32_t h = fm.bilin(e, v);
        if (!h) continue;
        uint32_t c = fl.mul(scale, h);
        for (uint32_t j = 0; j < n; ++j) t.at(i, j) = fl.add(t.at(i, j), fl.mul(c, v[j]));
      }
      gens.push_back(t);
    }
    for (uint32_t i = 0; i + 1 < n; ++i) {
      std::vector<uint32_t> sigma(n);
      for (uint32_t j = 0; j < n; ++j) sigma[j] = j;
      std::swap(sigma[i], sigma[i + 1]);
      gens.push_back(perm_matrix(K, sigma));
    }
  } else {
    // Unitary transvections T_{u,lam}: x -> x + lam h(x,u) u, u isotropic,
    // lam of trace zero; an F_p-basis of the trace-zero line suffices.
    std::vector<uint32_t> trace_zero_basis;
    {
      std::vector<uint32_t> span = {0};
      for (uint32_t cand = 1; cand < fl.q(); ++cand) {
        if (fl.add(cand, fl.frobenius(cand, sub)) != 0) continue;
        if (std::find(span.begin(), span.end(), cand) != span.end()) continue;
        trace_zero_basis.push_back(cand);
        std::vector<uint32_t> bigger;
        for (uint32_t s : span)
          for (uint32_t m = 0; m < fl.p(); ++m)
            bigger.push_back(fl.add(s, fl.mul(m, cand)));
        std::sort(bigger.begin(), bigger.end());
        bigger.erase(std::unique(bigger.begin(), bigger.end()), bigger.end());
        span = std::move(bigger);
      }
    }
    for (auto& u : projective_reps(K, n)) {
      if (fm.bilin(u, u) != 0) continue;
      for (uint32_t lam : trace_zero_basis) {
        Matrix t = Matrix::identity(K, n);
        for (uint32_t i = 0; i < n; ++i) {
          std::vector<uint32_t> e(n, 0);
          e[i] = 1;
          uint32_t h = fm.bilin(e, u);
          if (!h) continue;
          uint32_t c = fl.mul(lam, h);
          for (uint32_t j = 0; j < n; ++j)
            t.at(i, j) = fl.add(t.at(i, j), fl.mul(c, u[j]));
        }
        gens.push_back(t);
      }
    }
  }
  return gens;
}

std::vector<Matrix> orthogonal_generators(const GroupSpec& spec) {
  FieldPtr K = matrix_field(spec);
  Form fm = group_form(spec);
  const Field& fl = *K;
  uint32_t n = spec.n;
  auto reflection = [&](const std::vector<uint32_t>& v) {
    uint32_t qv = fm.quad(v);
    Matrix r = Matrix::identity(K, n);
    for (uint32_t i = 0; i < n; ++i) {
      std::vector<uint32_t> e(n, 0);
      e[i] = 1;
      uint32_t b = fm.bilin(e, v);
      if (!b) continue;
      uint32_t c = fl.div(b, qv);
      for (uint32_t j = 0; j < n; ++j) r.at(i, j) = fl.sub(r.at(i, j), fl.mul(c, v[j]));
    }
    return r;
  };
  std::vector<std::vector<uint32_t>> aniso;
  for (auto& v : projective_reps(K, n))
    if (fm.quad(v) != 0) aniso.push_back(v);
  if (aniso.empty()) fail(Errc::internal, "no anisotropic vector");

  std::vector<Matrix> gens;
  if (spec.family == Family::SO) {
    Matrix r0 = reflection(aniso[0]);
    for (size_t i = 1; i < aniso.size(); ++i) gens.push_back(matmul(r0, reflection(aniso[i])));
    if (gens.empty()) gens.push_back(Matrix::identity(K, n));
  } else {
    for (auto& v : aniso) gens.push_back(reflection(v));
    if (spec.family == Family::GO) {
      uint32_t xi = fl.generator();
      if (n % 2) {
        gens.push_back(Matrix::scalar(K, n, xi));
      } else {
        uint32_t m = n / 2;
        uint32_t hyperbolic = (spec.eps == FormEps::plus) ? m : m - 1;
        std::vector<uint32_t> d(n, 1);
        for (uint32_t b = 0; b < hyperbolic; ++b) d[2 * b] = xi;
        Matrix sim = Matrix::diagonal(K, d);
        if (spec.eps == FormEps::minus) {
          // brute-force a 2x2 block with multiplier xi on the anisotropic part
          uint32_t base = n - 2;
          bool found = false;
          for (uint32_t a = 0; a < fl.q() && !found; ++a)
            for (uint32_t b = 0; b < fl.q() && !found; ++b)
              for (uint32_t c = 0; c < fl.q() && !found; ++c)
                for (uint32_t dd = 0; dd < fl.q() && !found; ++dd) {
                  auto q2 = [&](uint32_t x, uint32_t y) {
                    uint32_t xx = fl.mul(x, x);
                    uint32_t yy = fl.mul(y, y);
                    return fl.add(fl.mul(fm.upperq.at(base, base), xx),
                                  fl.mul(fm.upperq.at(base + 1, base + 1), yy));
                  };
                  auto img_ok = [&](uint32_t x, uint32_t y) {
                    uint32_t ix = fl.add(fl.mul(x, a), fl.mul(y, c));
                    uint32_t iy = fl.add(fl.mul(x, b), fl.mul(y, dd));
                    return q2(ix, iy) == fl.mul(xi, q2(x, y));
                  };
                  if (img_ok(1, 0) && img_ok(0, 1) && img_ok(1, 1)) {
                    sim.at(base, base) = a;
                    sim.at(base, base + 1) = b;
                    sim.at(base + 1, base) = c;
                    sim.at(base + 1, base + 1) = dd;
                    found = true;
                  }
                }
          if (!found) fail(Errc::internal, "no similitude block found");
        }
        gens.push_back(sim);
      }
    }
  }
  return gens;
}

}  // namespace

std::vector<Matrix> standard_generators(const GroupSpec& spec) {
  switch (spec.family) {
    case Family::GL:
    case Family::SL:
      return linear_generators(spec);
    case Family::Sp:
    case Family::GSp:
      return symplectic_generators(spec);
    case Family::GU:
    case Family::SU:
      return unitary_generators(spec);
    case Family::GO:
    case Family::SO:
      return orthogonal_generators(spec);
    case Family::User:
      fail(Errc::unsupported_family, "user groups supply their own generators");
  }
  fail(Errc::internal, "unhandled family");
}

// --- ElementTable ---

namespace {

uint64_t hash_bytes(const uint8_t* p, size_t len) {
  uint64_t h = 1469598103934665603ull;
  for (size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  h ^= h >> 33;
  h *= 0xff51afd7ed558ccdull;
  h ^= h >> 33;
  return h;
}

}  // namespace

void ElementTable::init(FieldPtr field, uint32_t n) {
  if (field->q() > 255) fail(Errc::budget_exceeded, "entry codes exceed one byte");
  if (n == 0) fail(Errc::dimension_too_small, "dimension must be positive");
  field_ = std::move(field);
  n_ = n;
  entry_ = n * n;
  slots_.assign(2048, 0);
  mask_ = slots_.size() - 1;
}

void ElementTable::rehash() {
  std::vector<uint32_t> fresh(slots_.size() * 2, 0);
  uint64_t mask = fresh.size() - 1;
  for (uint64_t i = 0; i < count_; ++i) {
    const uint8_t* p = arena_.data() + i * entry_;
    uint64_t h = hash_bytes(p, entry_) & mask;
    while (fresh[h]) h = (h + 1) & mask;
    fresh[h] = static_cast<uint32_t>(i + 1);
  }
  slots_ = std::move(fresh);
  mask_ = mask;
}

std::optional<uint32_t> ElementTable::lookup(const uint8_t* codes) const {
  uint64_t h = hash_bytes(codes, entry_) & mask_;
  while (slots_[h]) {
    uint32_t idx = slots_[h] - 1;
    if (std::memcmp(arena_.data() + static_cast<size_t>(idx) * entry_, codes, entry_) == 0)
      return idx;
    h = (h + 1) & mask_;
  }
  return std::nullopt;
}

uint32_t ElementTable::insert(const uint8_t* codes) {
  uint64_t h = hash_bytes(codes, entry_) & mask_;
  while (slots_[h]) {
    uint32_t idx = slots_[h] - 1;
    if (std::memcmp(arena_.data() + static_cast<size_t>(idx) * entry_, codes, entry_) == 0)
      return idx;
    h = (h + 1) & mask_;
  }
  arena_.insert(arena_.end(), codes, codes + entry_);
  slots_[h] = static_cast<uint32_t>(++count_);
  if (count_ * 2 > slots_.size()) rehash();
  return static_cast<uint32_t>(count_ - 1);
}

void ElementTable::mul_raw(const uint8_t* x, const uint8_t* y, uint8_t* out) const {
  const Field& fl = *field_;
  uint32_t n = n_;
  for (uint32_t i = 0; i < n; ++i) {
    for (uint32_t j = 0; j < n; ++j) out[i * n + j] = 0;
    for (uint32_t k = 0; k < n; ++k) {
      uint32_t v = x[i * n + k];
      if (!v) continue;
      const uint8_t* yrow = y + static_cast<size_t>(k) * n;
      uint8_t* orow = out + static_cast<size_t>(i) * n;
      for (uint32_t j = 0; j < n; ++j)
        orow[j] = static_cast<uint8_t>(fl.add(orow[j], fl.mul(v, yrow[j])));
    }
  }
}

ElementTable ElementTable::closure(FieldPtr field, uint32_t n, const std::vector<Matrix>& gens,
                                   uint64_t cap) {
  ElementTable t;
  t.init(field, n);
  std::vector<std::vector<uint8_t>> gbytes;
  for (auto& g : gens) {
    if (g.field.get() != t.field_.get()) fail(Errc::field_mismatch, "generator field mismatch");
    if (!g.is_square() || g.rows != n) fail(Errc::dimension_mismatch, "generator dimension mismatch");
    if (det(g) == 0) fail(Errc::non_invertible_generator, "generator is singular");
    std::vector<uint8_t> b(t.entry_);
    for (uint32_t i = 0; i < t.entry_; ++i) b[i] = static_cast<uint8_t>(g.a[i]);
    gbytes.push_back(std::move(b));
  }
  std::vector<uint8_t> ident(t.entry_, 0);
  for (uint32_t i = 0; i < n; ++i) ident[i * n + i] = 1;
  t.insert(ident.data());

  std::vector<uint8_t> scratch(t.entry_);
  std::vector<uint8_t> row(t.entry_);
  for (uint64_t head = 0; head < t.count_; ++head) {
    // the arena grows during iteration: work from a copy of the current row
    std::memcpy(row.data(), t.arena_.data() + head * t.entry_, t.entry_);
    for (auto& gb : gbytes) {
      t.mul_raw(row.data(), gb.data(), scratch.data());
      uint64_t before = t.count_;
      t.insert(scratch.data());
      if (t.count_ > before && t.count_ > cap)
        fail(Errc::budget_exceeded,
             "closure exceeded element budget (reached " + std::to_string(t.count_) + ")");
    }
  }
  for (auto& gb : gbytes) {
    auto idx = t.lookup(gb.data());
    t.gen_ids_.push_back(*idx);
  }
  return t;
}

ElementTable ElementTable::from_members(FieldPtr field, uint32_t n,
                                        const std::vector<Matrix>& members,
                                        const std::vector<Matrix>& gens) {
  ElementTable t;
  t.init(field, n);
  std::vector<uint8_t> b(t.entry_);
  for (auto& m : members) {
    for (uint32_t i = 0; i < t.entry_; ++i) b[i] = static_cast<uint8_t>(m.a[i]);
    t.insert(b.data());
  }
  if (t.count_ == 0 || t.matrix(0) != Matrix::identity(field, n))
    fail(Errc::internal, "member list must start with the identity");
  for (auto& g : gens) {
    auto idx = t.find(g);
    if (!idx) fail(Errc::witness_not_in_group, "generator missing from member list");
    t.gen_ids_.push_back(*idx);
  }
  if (t.gen_ids_.empty() && t.count_ > 1) {
    // centre/core computations need generators; pick a small set greedily
    Subgroup all = whole_group(t);
    t.gen_ids_ = small_generating_set(all);
  }
  return t;
}

ElementTable ElementTable::for_spec(const GroupSpec& spec, uint64_t cap) {
  FactoredOrder fo = order_formula(spec);
  if (!fo.fits_u64() || fo.value() > cap)
    fail(Errc::budget_exceeded,
         "group order exceeds enumeration budget (" + std::to_string(cap) + ")");
  FieldPtr K = matrix_field(spec);
  auto gens = standard_generators(spec);
  ElementTable t = closure(K, spec.n, gens, cap);
  if (t.size() != fo.value()) {
    if (spec.family == Family::SU) {
      // fall back to filtering the full unitary group; covers the
      // non-transvection-generated corner (SU_3(2))
      GroupSpec parent = spec;
      parent.family = Family::GU;
      ElementTable gu = for_spec(parent, cap);
      std::vector<Matrix> members;
      for (uint32_t i = 0; i < gu.size(); ++i) {
        Matrix m = gu.matrix(i);
        if (det(m) == 1) members.push_back(std::move(m));
      }
      ElementTable su = from_members(K, spec.n, members, {});
      if (su.size() != fo.value())
        fail(Errc::order_formula_mismatch, "special unitary fallback order mismatch");
      su.spec_ = spec;
      su.form_ = group_form(spec);
      return su;
    }
    fail(Errc::order_formula_mismatch,
         "enumerated order " + std::to_string(t.size()) + " does not match formula " +
             std::to_string(fo.value()));
  }
  t.spec_ = spec;
  t.form_ = group_form(spec);
  return t;
}

Matrix ElementTable::matrix(uint32_t idx) const {
  if (idx >= count_) fail(Errc::index_out_of_range, "element index out of range");
  Matrix m(field_, n_, n_);
  const uint8_t* p = arena_.data() + static_cast<size_t>(idx) * entry_;
  for (uint32_t i = 0; i < entry_; ++i) m.a[i] = p[i];
  return m;
}

std::optional<uint32_t> ElementTable::find(const Matrix& m) const {
  if (m.field.get() != field_.get() || m.rows != n_ || m.cols != n_) return std::nullopt;
  std::vector<uint8_t> b(entry_);
  for (uint32_t i = 0; i < entry_; ++i) {
    if (m.a[i] > 255) return std::nullopt;
    b[i] = static_cast<uint8_t>(m.a[i]);
  }
  return lookup(b.data());
}

uint32_t ElementTable::index_of(const Matrix& m) const {
  auto idx = find(m);
  if (!idx) fail(Errc::not_found, "matrix not in enumerated group");
  return *idx;
}

uint32_t ElementTable::mul(uint32_t x, uint32_t y) const {
  if (x >= count_ || y >= count_) fail(Errc::index_out_of_range, "element index out of range");
  std::vector<uint8_t> scratch(entry_);
  mul_raw(arena_.data() + static_cast<size_t>(x) * entry_,
          arena_.data() + static_cast<size_t>(y) * entry_, scratch.data());
  auto idx = lookup(scratch.data());
  if (!idx) fail(Errc::internal, "product escaped the closed table");
  return *idx;
}

uint32_t ElementTable::inverse(uint32_t x) const {
  if (x >= count_) fail(Errc::index_out_of_range, "element index out of range");
  if (inv_cache_.size() != count_) inv_cache_.assign(count_, UINT32_MAX);
  if (inv_cache_[x] != UINT32_MAX) return inv_cache_[x];
  Matrix inv = matinv(matrix(x));
  uint32_t idx = index_of(inv);
  inv_cache_[x] = idx;
  inv_cache_[idx] = x;
  return idx;
}

uint32_t ElementTable::conjugate(uint32_t g, uint32_t x) const {
  return mul(mul(inverse(x), g), x);
}

uint32_t ElementTable::element_order(uint32_t x) const {
  if (x >= count_) fail(Errc::index_out_of_range, "element index out of range");
  if (order_cache_.size() != count_) order_cache_.assign(count_, 0);
  if (order_cache_[x]) return order_cache_[x];
  uint32_t cur = x, k = 1;
  while (cur != 0) {
    cur = mul(cur, x);
    ++k;
  }
  order_cache_[x] = k;
  return k;
}

std::vector<Matrix> ElementTable::generator_matrices() const {
  std::vector<Matrix> out;
  for (uint32_t id : gen_ids_) out.push_back(matrix(id));
  return out;
}

// --- subgroups ---

bool Subgroup::contains(uint32_t idx) const {
  return std::binary_search(members.begin(), members.end(), idx);
}

Subgroup whole_group(const ElementTable& t) {
  Subgroup s;
  s.parent = &t;
  s.members.resize(t.size());
  for (uint32_t i = 0; i < t.size(); ++i) s.members[i] = i;
  return s;
}

Subgroup trivial_subgroup(const ElementTable& t) {
  Subgroup s;
  s.parent = &t;
  s.members = {0};
  return s;
}

Subgroup subgroup_from_members(const ElementTable& t, std::vector<uint32_t> members) {
  Subgroup s;
  s.parent = &t;
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  s.members = std::move(members);
  return s;
}

Subgroup subgroup_closure(const ElementTable& t, const std::vector<uint32_t>& gens) {
  std::vector<uint32_t> queue = {0};
  std::unordered_set<uint32_t> seen = {0};
  for (size_t head = 0; head < queue.size(); ++head) {
    for (uint32_t g : gens) {
      uint32_t prod = t.mul(queue[head], g);
      if (seen.insert(prod).second) queue.push_back(prod);
    }
  }
  return subgroup_from_members(t, std::move(queue));
}

Subgroup center(const ElementTable& t) {
  const auto& gens = t.generator_ids();
  std::vector<uint32_t> cur;
  bool first = true;
  for (uint32_t g : gens) {
    std::vector<uint32_t> next;
    if (first) {
      for (uint32_t x = 0; x < t.size(); ++x)
        if (t.mul(x, g) == t.mul(g, x)) next.push_back(x);
      first = false;
    } else {
      for (uint32_t x : cur)
        if (t.mul(x, g) == t.mul(g, x)) next.push_back(x);
    }
    cur = std::move(next);
  }
  if (first) {
    // no generators: the whole table must be a single identity
    return whole_group(t);
  }
  return subgroup_from_members(t, std::move(cur));
}

Subgroup conjugate_subgroup(const Subgroup& h, uint32_t g) {
  const ElementTable& t = *h.parent;
  uint32_t gi = t.inverse(g);
  std::vector<uint32_t> out;
  out.reserve(h.members.size());
  for (uint32_t m : h.members) out.push_back(t.mul(t.mul(gi, m), g));
  return subgroup_from_members(t, std::move(out));
}

Subgroup intersect(const Subgroup& a, const Subgroup& b) {
  if (a.parent != b.parent) fail(Errc::parent_mismatch, "intersection across different tables");
  Subgroup s;
  s.parent = a.parent;
  std::set_intersection(a.members.begin(), a.members.end(), b.members.begin(), b.members.end(),
                        std::back_inserter(s.members));
  return s;
}

bool is_central_subset(const ElementTable& t, const std::vector<uint32_t>& members) {
  for (uint32_t m : members)
    for (uint32_t g : t.generator_ids())
      if (t.mul(m, g) != t.mul(g, m)) return false;
  return true;
}

Subgroup kernel_core(const Subgroup& h) {
  const ElementTable& t = *h.parent;
  Subgroup k = h;
  bool changed = true;
  while (changed) {
    changed = false;
    for (uint32_t g : t.generator_ids()) {
      Subgroup kg = conjugate_subgroup(k, g);
      Subgroup next = intersect(k, kg);
      if (next.members.size() < k.members.size()) {
        k = std::move(next);
        changed = true;
      }
    }
  }
  return k;
}

std::vector<uint32_t> small_generating_set(const Subgroup& h) {
  const ElementTable& t = *h.parent;
  std::vector<uint32_t> gens;
  Subgroup cur = trivial_subgroup(t);
  for (uint32_t m : h.members) {
    if (cur.contains(m)) continue;
    gens.push_back(m);
    cur = subgroup_closure(t, gens);
    if (cur.members.size() == h.members.size()) break;
  }
  return gens;
}

bool is_abelian(const Subgroup& h) {
  const ElementTable& t = *h.parent;
  auto gens = small_generating_set(h);
  for (uint32_t a : gens)
    for (uint32_t b : gens)
      if (t.mul(a, b) != t.mul(b, a)) return false;
  return true;
}

bool is_solvable(const Subgroup& h) {
  const ElementTable& t = *h.parent;
  Subgroup cur = h;
  while (cur.members.size() > 1) {
    auto gens = small_generating_set(cur);
    std::vector<uint32_t> dgens;
    auto push_unique = [&](uint32_t x) {
      if (x != 0 && std::find(dgens.begin(), dgens.end(), x) == dgens.end()) dgens.push_back(x);
    };
    for (uint32_t a : gens)
      for (uint32_t b : gens) {
        uint32_t comm = t.mul(t.mul(t.inverse(a), t.inverse(b)), t.mul(a, b));
        push_unique(comm);
      }
    Subgroup derived = subgroup_closure(t, dgens);
    // normal closure inside cur
    bool added = true;
    while (added) {
      added = false;
      std::vector<uint32_t> fresh;
      for (uint32_t g : gens)
        for (uint32_t d : dgens) {
          uint32_t cd = t.conjugate(d, g);
          if (!derived.contains(cd)) fresh.push_back(cd);
        }
      if (!fresh.empty()) {
        for (uint32_t x : fresh) push_unique(x);
        derived = subgroup_closure(t, dgens);
        added = true;
      }
    }
    if (derived.members.size() == cur.members.size()) return false;
    cur = derived;
  }
  return true;
}

bool is_pi_subgroup(const Subgroup& h, const std::vector<uint64_t>& pi) {
  return is_pi_number(h.order(), pi);
}

bool is_hall_subgroup(const Subgroup& h, const std::vector<uint64_t>& pi) {
  if (!is_pi_subgroup(h, pi)) return false;
  return h.order() == pi_part(h.parent->size(), pi);
}

void validate_pi(const std::vector<uint64_t>& pi, std::optional<uint64_t> characteristic) {
  if (pi.empty()) fail(Errc::empty_pi, "pi must be nonempty");
  for (uint64_t r : pi) {
    if (!is_prime(r)) fail(Errc::not_prime, "pi must consist of primes");
    if (characteristic && r == *characteristic)
      fail(Errc::pi_contains_p, "pi must avoid the defining characteristic");
  }
}

Subgroup find_sylow(const Subgroup& scope, uint64_t r) {
  const ElementTable& t = *scope.parent;
  uint64_t target = pi_part(scope.order(), {r});
  std::vector<uint32_t> sgens;
  Subgroup s = trivial_subgroup(t);
  while (s.order() < target) {
    bool grew = false;
    for (uint32_t cand : scope.members) {
      if (s.contains(cand)) continue;
      uint64_t ord = t.element_order(cand);
      if (!is_pi_number(ord, {r})) continue;
      // normalizing test: it suffices that the conjugates of the current
      // generators stay inside s
      bool normalizes = true;
      for (uint32_t g : sgens) {
        if (!s.contains(t.conjugate(g, cand))) {
          normalizes = false;
          break;
        }
      }
      if (!normalizes) continue;
      sgens.push_back(cand);
      s = subgroup_closure(t, sgens);
      grew = true;
      break;
    }
    if (!grew) fail(Errc::internal, "sylow growth stalled");
  }
  return s;
}

namespace {

struct VecHash {
  size_t operator()(const std::vector<uint32_t>& v) const {
    uint64_t h = 1469598103934665603ull;
    for (uint32_t x : v) {
      h ^= x;
      h *= 1099511628211ull;
    }
    return static_cast<size_t>(h);
  }
};

// closure limited to cap members; nullopt when it overflows
std::optional<std::vector<uint32_t>> closure_capped(const ElementTable& t,
                                                    const std::vector<uint32_t>& gens,
                                                    uint64_t cap) {
  std::vector<uint32_t> queue = {0};
  std::unordered_set<uint32_t> seen = {0};
  for (size_t head = 0; head < queue.size(); ++head) {
    for (uint32_t g : gens) {
      uint32_t prod = t.mul(queue[head], g);
      if (seen.insert(prod).second) {
        queue.push_back(prod);
        if (queue.size() > cap) return std::nullopt;
      }
    }
  }
  std::sort(queue.begin(), queue.end());
  return queue;
}

struct HallSearchState {
  const ElementTable* t;
  const Subgroup* scope;
  uint64_t target;
  uint64_t node_budget;
  uint64_t nodes = 0;
  bool budget_hit = false;
  std::vector<uint32_t> pi_elements;  // sorted by (order, index)
  std::unordered_set<std::vector<uint32_t>, VecHash> visited;

  std::optional<std::vector<uint32_t>> rec(const std::vector<uint32_t>& members,
                                           std::vector<uint32_t>& gens) {
    if (members.size() == target) return members;
    for (uint32_t cand : pi_elements) {
      if (std::binary_search(members.begin(), members.end(), cand)) continue;
      if (++nodes > node_budget) {
        budget_hit = true;
        return std::nullopt;
      }
      gens.push_back(cand);
      auto closed = closure_capped(*t, gens, target);
      bool usable = closed && target % closed->size() == 0;
      if (usable && !visited.insert(*closed).second) usable = false;
      if (usable) {
        // stay inside the requested scope
        for (uint32_t m : *closed) {
          if (!scope->contains(m)) {
            usable = false;
            break;
          }
        }
      }
      if (usable) {
        auto found = rec(*closed, gens);
        if (found || budget_hit) {
          gens.pop_back();
          return found;
        }
      }
      gens.pop_back();
    }
    return std::nullopt;
  }
};

}  // namespace

HallResult find_hall_exhaustive(const Subgroup& scope, const std::vector<uint64_t>& pi,
                                uint64_t target, uint64_t node_budget) {
  const ElementTable& t = *scope.parent;
  HallResult res;
  res.provenance = "exhaustive";
  if (target == 1) {
    res.found = true;
    res.subgroup = trivial_subgroup(t);
    return res;
  }
  if (scope.order() % target != 0) return res;  // no room by Lagrange

  // Root the search at a Sylow subgroup: a subgroup of order `target` holds a
  // full Sylow r-subgroup for each prime r of target, and Sylow subgroups of
  // the scope are conjugate, so searching above one fixed Sylow subgroup is
  // enough. Valid whenever the scope has the same r-part as the target; pick
  // the prime with the largest share.
  uint64_t root_prime = 0, root_part = 1;
  for (uint64_t r : pi) {
    uint64_t tp = pi_part(target, {r});
    if (tp > root_part && tp == pi_part(scope.order(), {r})) {
      root_part = tp;
      root_prime = r;
    }
  }
  std::vector<uint32_t> root = {0};
  std::vector<uint32_t> gens;
  if (root_prime != 0) {
    Subgroup p0 = find_sylow(scope, root_prime);
    root = p0.members;
    gens = small_generating_set(p0);
    if (root.size() == target) {
      res.found = true;
      res.subgroup = std::move(p0);
      return res;
    }
  }

  HallSearchState st;
  st.t = &t;
  st.scope = &scope;
  st.target = target;
  st.node_budget = node_budget;
  for (uint32_t m : scope.members) {
    if (m == 0) continue;
    uint64_t ord = t.element_order(m);
    // Prime-power orders suffice: a group is generated by its elements of
    // prime-power order.
    if (is_pi_number(ord, pi) && target % ord == 0 && factorize(ord).size() == 1)
      st.pi_elements.push_back(m);
  }
  std::stable_sort(st.pi_elements.begin(), st.pi_elements.end(),
                   [&](uint32_t a, uint32_t b) {
                     uint32_t oa = t.element_order(a), ob = t.element_order(b);
                     return oa != ob ? oa < ob : a < b;
                   });
  st.visited.insert(root);
  auto found = st.rec(root, gens);
  res.nodes = st.nodes;
  res.complete = !st.budget_hit;
  if (found) {
    res.found = true;
    res.subgroup = subgroup_from_members(t, *found);
  }
  return res;
}

}  // namespace hallbase
