#include "constructions.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <sstream>

namespace hallbase {

namespace {

std::vector<std::vector<uint32_t>> unit_rows(uint32_t n, uint32_t lo, uint32_t len) {
  std::vector<std::vector<uint32_t>> rows(len, std::vector<uint32_t>(n, 0));
  for (uint32_t i = 0; i < len; ++i) rows[i][lo + i] = 1;
  return rows;
}

Subspace coord_span(const FieldPtr& field, uint32_t n, uint32_t lo, uint32_t len) {
  return make_subspace(field, n, unit_rows(n, lo, len));
}

std::vector<uint32_t> subspace_key(const Subspace& s) {
  std::vector<uint32_t> key;
  key.reserve(2 + s.basis.a.size());
  key.push_back(s.n);
  key.push_back(s.dim());
  key.insert(key.end(), s.basis.a.begin(), s.basis.a.end());
  return key;
}

using PartIndex = std::map<std::vector<uint32_t>, std::pair<size_t, size_t>>;

PartIndex index_parts(const Decomposition& d) {
  PartIndex idx;
  for (size_t c = 0; c < d.classes.size(); ++c)
    for (size_t p = 0; p < d.classes[c].size(); ++p) {
      auto ins = idx.emplace(subspace_key(d.classes[c][p]), std::make_pair(c, p));
      if (!ins.second) fail(Errc::invalid_decomposition, "repeated part in decomposition");
    }
  return idx;
}

bool matrix_stabilizes(const Matrix& g, const Decomposition& d, const PartIndex& idx) {
  for (size_t c = 0; c < d.classes.size(); ++c)
    for (const Subspace& part : d.classes[c]) {
      auto it = idx.find(subspace_key(subspace_image(part, g)));
      if (it == idx.end() || it->second.first != c) return false;
    }
  for (const Subspace& part : d.fixed)
    if (!(subspace_image(part, g) == part)) return false;
  return true;
}

Matrix slice(const Matrix& m, uint32_t lo, uint32_t len) {
  Matrix out(m.field, len, len);
  for (uint32_t i = 0; i < len; ++i)
    for (uint32_t j = 0; j < len; ++j) out.at(i, j) = m.at(lo + i, lo + j);
  return out;
}

Form slice_form(const Form& f, uint32_t lo, uint32_t len) {
  Form out;
  out.kind = f.kind;
  out.n = len;
  out.field = f.field;
  out.conj_subdegree = f.conj_subdegree;
  out.gram = slice(f.gram, lo, len);
  if (det(out.gram) == 0)
    fail(Errc::invalid_decomposition, "degenerate coordinate block for this form");
  if (f.kind == FormKind::quadratic) {
    out.upperq = slice(f.upperq, lo, len);
    out.eps = quadratic_type(out);
  } else {
    out.eps = FormEps::none;
  }
  return out;
}

std::vector<std::vector<uint32_t>> projective_reps(const FieldPtr& k, uint32_t n,
                                                   uint64_t limit) {
  uint64_t total = 1;
  for (uint32_t i = 0; i < n; ++i) {
    if (total > limit) fail(Errc::budget_exceeded, "projective enumeration too large");
    total *= k->q();
  }
  std::vector<std::vector<uint32_t>> reps;
  std::vector<uint32_t> v(n, 0);
  // Odometer over vectors whose first nonzero coordinate is 1.
  for (uint32_t lead = 0; lead < n; ++lead) {
    std::fill(v.begin(), v.end(), 0);
    v[lead] = 1;
    uint32_t free = n - lead - 1;
    uint64_t count = 1;
    for (uint32_t i = 0; i < free; ++i) count *= k->q();
    for (uint64_t it = 0; it < count; ++it) {
      uint64_t x = it;
      for (uint32_t i = lead + 1; i < n; ++i) {
        v[i] = static_cast<uint32_t>(x % k->q());
        x /= k->q();
      }
      reps.push_back(v);
      if (reps.size() > limit) fail(Errc::budget_exceeded, "projective enumeration too large");
    }
  }
  return reps;
}

// Reflection in an anisotropic vector: x -> x - (B(x,v)/Q(v)) v.
Matrix reflection(const Form& f, const std::vector<uint32_t>& v) {
  const FieldPtr& k = f.field;
  uint32_t qv = f.quad(v);
  Matrix r = Matrix::identity(k, f.n);
  std::vector<uint32_t> e(f.n, 0);
  for (uint32_t i = 0; i < f.n; ++i) {
    e[i] = 1;
    uint32_t c = k->div(f.bilin(e, v), qv);
    for (uint32_t j = 0; j < f.n; ++j)
      r.at(i, j) = k->sub(r.at(i, j), k->mul(c, v[j]));
    e[i] = 0;
  }
  return r;
}

// Full isometry group of a small quadratic form: brute force for dim <= 2,
// the complete reflection set otherwise.
std::vector<Matrix> o_form_generators(const Form& f) {
  const FieldPtr& k = f.field;
  uint32_t n = f.n;
  std::vector<Matrix> out;
  if (n <= 2) {
    uint64_t total = 1;
    for (uint32_t i = 0; i < n * n; ++i) {
      total *= k->q();
      if (total > 2'000'000) fail(Errc::budget_exceeded, "orthogonal block enumeration too large");
    }
    Matrix m(k, n, n);
    for (uint64_t it = 0; it < total; ++it) {
      uint64_t x = it;
      for (uint32_t i = 0; i < n * n; ++i) {
        m.a[i] = static_cast<uint32_t>(x % k->q());
        x /= k->q();
      }
      if (det(m) == 0) continue;
      MultiplierResult mr = form_multiplier(m, f);
      if (mr.preserved && mr.lambda == 1) out.push_back(m);
    }
    return out;
  }
  for (const auto& v : projective_reps(k, n, 200000))
    if (f.quad(v) != 0) out.push_back(reflection(f, v));
  return out;
}

Matrix block_swap_perm(const FieldPtr& k, uint32_t n, uint32_t blk, uint32_t b1, uint32_t b2) {
  std::vector<uint32_t> sigma(n);
  for (uint32_t i = 0; i < n; ++i) sigma[i] = i;
  for (uint32_t t = 0; t < blk; ++t) {
    sigma[b1 * blk + t] = b2 * blk + t;
    sigma[b2 * blk + t] = b1 * blk + t;
  }
  return perm_matrix(k, sigma);
}

Matrix block_cycle_perm(const FieldPtr& k, uint32_t n, uint32_t blk, uint32_t m) {
  std::vector<uint32_t> sigma(n);
  for (uint32_t i = 0; i < n; ++i) sigma[i] = i;
  for (uint32_t j = 0; j < m; ++j)
    for (uint32_t t = 0; t < blk; ++t) sigma[j * blk + t] = ((j + 1) % m) * blk + t;
  return perm_matrix(k, sigma);
}

void push_unique_matrix(std::vector<Matrix>& v, const Matrix& m) {
  for (const auto& x : v)
    if (x == m) return;
  v.push_back(m);
}

bool contains_u64(const std::vector<uint64_t>& v, uint64_t x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

bool subset_u64(const std::vector<uint64_t>& a, const std::vector<uint64_t>& b) {
  for (uint64_t x : a)
    if (!contains_u64(b, x)) return false;
  return true;
}

std::string join_u64(const std::vector<uint64_t>& v) {
  std::ostringstream os;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) os << ",";
    os << v[i];
  }
  return os.str();
}

// Groups the condition tables treat as degenerate because the whole group is
// solvable.
bool ambient_solvable(const GroupSpec& s) {
  switch (s.family) {
    case Family::GL:
    case Family::SL:
      return s.n == 1 || (s.n == 2 && s.q <= 3);
    case Family::GU:
    case Family::SU:
      return s.n == 1 || (s.n == 2 && s.q <= 3) || (s.n == 3 && s.q == 2);
    case Family::GSp:
    case Family::Sp:
      return s.n == 2 && s.q <= 3;
    case Family::GO:
    case Family::SO:
      return s.n <= 2 || (s.n == 3 && s.q == 3) ||
             (s.n == 4 && s.eps == FormEps::plus && s.q == 3);
    default:
      return false;
  }
}

Family derived_family(Family f) {
  switch (f) {
    case Family::GL: return Family::SL;
    case Family::GU: return Family::SU;
    case Family::GSp: return Family::Sp;
    case Family::GO: return Family::SO;
    default: return f;
  }
}

}  // namespace

Decomposition block_decomposition(FieldPtr field, uint32_t n, uint32_t block) {
  if (block == 0 || block > n) fail(Errc::dimension_mismatch, "bad block size");
  uint32_t m = n / block, d = n - m * block;
  Decomposition out;
  out.classes.emplace_back();
  for (uint32_t j = 0; j < m; ++j)
    out.classes[0].push_back(coord_span(field, n, j * block, block));
  if (d > 0) out.fixed.push_back(coord_span(field, n, m * block, d));
  return out;
}

void validate_decomposition(const Decomposition& d, const std::optional<Form>& form) {
  std::vector<const Subspace*> parts;
  for (const auto& cls : d.classes) {
    if (cls.empty()) fail(Errc::invalid_decomposition, "empty class");
    for (size_t i = 1; i < cls.size(); ++i)
      if (cls[i].dim() != cls[0].dim())
        fail(Errc::invalid_decomposition, "class parts of unequal dimension");
    for (const auto& p : cls) parts.push_back(&p);
  }
  for (const auto& p : d.fixed) parts.push_back(&p);
  if (parts.empty()) fail(Errc::invalid_decomposition, "no parts");
  uint32_t n = parts[0]->n;
  const FieldPtr& k = parts[0]->field;
  uint64_t total = 0;
  std::vector<std::vector<uint32_t>> all_rows;
  for (const Subspace* p : parts) {
    if (p->n != n || p->field.get() != k.get())
      fail(Errc::invalid_decomposition, "parts live in different spaces");
    if (p->dim() == 0) fail(Errc::invalid_decomposition, "zero part");
    total += p->dim();
    for (uint32_t rix = 0; rix < p->dim(); ++rix) {
      std::vector<uint32_t> row(p->basis.a.begin() + static_cast<size_t>(rix) * n,
                                p->basis.a.begin() + static_cast<size_t>(rix + 1) * n);
      all_rows.push_back(row);
    }
  }
  if (total != n) fail(Errc::invalid_decomposition, "part dimensions do not sum to the space");
  Matrix stacked = Matrix::from_rows(k, all_rows);
  if (rref(stacked).rows != n)
    fail(Errc::invalid_decomposition, "parts are not independent");
  if (form && form->kind != FormKind::linear) {
    if (form->n != n || form->field.get() != k.get())
      fail(Errc::invalid_decomposition, "form does not match the space");
    for (size_t i = 0; i < parts.size(); ++i)
      for (size_t j = i + 1; j < parts.size(); ++j)
        for (uint32_t ri = 0; ri < parts[i]->dim(); ++ri)
          for (uint32_t rj = 0; rj < parts[j]->dim(); ++rj) {
            std::vector<uint32_t> u(parts[i]->basis.a.begin() + static_cast<size_t>(ri) * n,
                                    parts[i]->basis.a.begin() + static_cast<size_t>(ri + 1) * n);
            std::vector<uint32_t> v(parts[j]->basis.a.begin() + static_cast<size_t>(rj) * n,
                                    parts[j]->basis.a.begin() + static_cast<size_t>(rj + 1) * n);
            if (form->bilin(u, v) != 0)
              fail(Errc::invalid_decomposition, "parts are not orthogonal");
          }
    for (const Subspace* p : parts) {
      uint32_t dim = p->dim();
      Matrix g(k, dim, dim);
      for (uint32_t ri = 0; ri < dim; ++ri)
        for (uint32_t rj = 0; rj < dim; ++rj) {
          std::vector<uint32_t> u(p->basis.a.begin() + static_cast<size_t>(ri) * n,
                                  p->basis.a.begin() + static_cast<size_t>(ri + 1) * n);
          std::vector<uint32_t> v(p->basis.a.begin() + static_cast<size_t>(rj) * n,
                                  p->basis.a.begin() + static_cast<size_t>(rj + 1) * n);
          g.at(ri, rj) = form->bilin(u, v);
        }
      if (det(g) == 0) fail(Errc::invalid_decomposition, "degenerate part");
    }
  }
}

Subgroup decomposition_stabilizer(const ElementTable& t, const Decomposition& d) {
  validate_decomposition(d, t.form());
  PartIndex idx = index_parts(d);
  std::vector<uint32_t> members;
  for (uint64_t i = 0; i < t.size(); ++i)
    if (matrix_stabilizes(t.matrix(static_cast<uint32_t>(i)), d, idx))
      members.push_back(static_cast<uint32_t>(i));
  return subgroup_from_members(t, std::move(members));
}

Subgroup monomial_subgroup(const ElementTable& t) {
  uint32_t n = t.dim();
  std::vector<uint32_t> members;
  for (uint64_t i = 0; i < t.size(); ++i) {
    Matrix m = t.matrix(static_cast<uint32_t>(i));
    bool ok = true;
    std::vector<uint32_t> colhits(n, 0);
    for (uint32_t r = 0; r < n && ok; ++r) {
      uint32_t nz = 0;
      for (uint32_t c = 0; c < n; ++c)
        if (m.at(r, c) != 0) {
          ++nz;
          ++colhits[c];
        }
      ok = (nz == 1);
    }
    if (ok)
      for (uint32_t c = 0; c < n; ++c)
        if (colhits[c] != 1) ok = false;
    if (ok) members.push_back(static_cast<uint32_t>(i));
  }
  return subgroup_from_members(t, std::move(members));
}

std::vector<Matrix> monomial_generators(const GroupSpec& spec) {
  FieldPtr k = matrix_field(spec);
  uint32_t n = spec.n;
  std::vector<Matrix> out;
  auto transposition = [&]() {
    std::vector<uint32_t> sigma(n);
    for (uint32_t i = 0; i < n; ++i) sigma[i] = i;
    sigma[0] = 1;
    sigma[1] = 0;
    return sigma;
  };
  auto full_cycle = [&]() {
    std::vector<uint32_t> sigma(n);
    for (uint32_t i = 0; i < n; ++i) sigma[i] = (i + 1) % n;
    return sigma;
  };
  switch (spec.family) {
    case Family::GL: {
      std::vector<uint32_t> diag(n, 1);
      diag[0] = k->generator();
      out.push_back(Matrix::diagonal(k, diag));
      if (n >= 2) out.push_back(perm_matrix(k, transposition()));
      if (n >= 3) out.push_back(perm_matrix(k, full_cycle()));
      break;
    }
    case Family::SL: {
      if (n >= 2) {
        std::vector<uint32_t> diag(n, 1);
        diag[0] = k->generator();
        diag[1] = k->inv(k->generator());
        out.push_back(Matrix::diagonal(k, diag));
        Matrix s = Matrix::identity(k, n);
        s.at(0, 0) = 0;
        s.at(1, 1) = 0;
        s.at(0, 1) = k->neg(1);
        s.at(1, 0) = 1;
        out.push_back(s);
      }
      if (n >= 3) {
        Matrix c = perm_matrix(k, full_cycle());
        if (permutation_sign(full_cycle()) < 0)
          for (uint32_t j = 0; j < n; ++j)
            c.at(0, j) = k->neg(c.at(0, j));
        out.push_back(c);
      }
      break;
    }
    case Family::GU:
    case Family::SU: {
      uint32_t c0 = k->pow(k->generator(), spec.q - 1);  // norm-one torus generator
      if (spec.family == Family::GU) {
        std::vector<uint32_t> diag(n, 1);
        diag[0] = c0;
        out.push_back(Matrix::diagonal(k, diag));
        if (n >= 2) out.push_back(perm_matrix(k, transposition()));
        if (n >= 3) out.push_back(perm_matrix(k, full_cycle()));
      } else {
        if (n >= 2) {
          std::vector<uint32_t> diag(n, 1);
          diag[0] = c0;
          diag[1] = k->inv(c0);
          out.push_back(Matrix::diagonal(k, diag));
          Matrix s = Matrix::identity(k, n);
          s.at(0, 0) = 0;
          s.at(1, 1) = 0;
          s.at(0, 1) = k->neg(1);
          s.at(1, 0) = 1;
          out.push_back(s);
        }
        if (n >= 3) {
          Matrix c = perm_matrix(k, full_cycle());
          if (permutation_sign(full_cycle()) < 0)
            for (uint32_t j = 0; j < n; ++j)
              c.at(0, j) = k->neg(c.at(0, j));
          out.push_back(c);
        }
      }
      break;
    }
    default:
      fail(Errc::unsupported_family, "monomial generators cover GL/SL/GU/SU");
  }
  return out;
}

std::vector<Matrix> block_wreath_generators(const GroupSpec& spec, uint32_t block) {
  FieldPtr k = matrix_field(spec);
  uint32_t n = spec.n;
  if (block == 0 || block > n) fail(Errc::dimension_mismatch, "bad block size");
  Family fam = spec.family;
  if (fam == Family::SL || fam == Family::SU || fam == Family::User)
    fail(Errc::unsupported_family, "block stabilizer generators need the extended families");
  if ((fam == Family::GSp || fam == Family::Sp) && block % 2 != 0)
    fail(Errc::inconsistent_type_parameters, "symplectic blocks must be even-dimensional");
  bool orthogonal = (fam == Family::GO || fam == Family::SO);
  Form form = group_form(spec);
  if (orthogonal && spec.eps != FormEps::circ && block % 2 != 0)
    fail(Errc::inconsistent_type_parameters, "hyperbolic coordinates need even blocks");

  uint32_t m = n / block;
  if (orthogonal && spec.eps == FormEps::minus) {
    // Keep the anisotropic tail out of the permuted blocks.
    while (m > 0 && m * block > n - 2) --m;
  }
  if (m == 0) fail(Errc::dimension_too_small, "no full block fits");
  uint32_t d = n - m * block;

  std::vector<Matrix> gens;
  auto add_embedded = [&](const std::vector<Matrix>& small, uint32_t offset) {
    for (const auto& g : small) push_unique_matrix(gens, embed_block(g, n, offset));
  };

  switch (fam) {
    case Family::GL:
      add_embedded(standard_generators(make_spec(Family::GL, block, spec.q)), 0);
      if (d > 0) add_embedded(standard_generators(make_spec(Family::GL, d, spec.q)), m * block);
      break;
    case Family::GU:
      add_embedded(standard_generators(make_spec(Family::GU, block, spec.q)), 0);
      if (d > 0) add_embedded(standard_generators(make_spec(Family::GU, d, spec.q)), m * block);
      break;
    case Family::GSp:
    case Family::Sp:
      add_embedded(standard_generators(make_spec(Family::Sp, block, spec.q)), 0);
      if (d > 0) add_embedded(standard_generators(make_spec(Family::Sp, d, spec.q)), m * block);
      break;
    case Family::GO:
    case Family::SO:
      add_embedded(o_form_generators(slice_form(form, 0, block)), 0);
      if (d > 0) add_embedded(o_form_generators(slice_form(form, m * block, d)), m * block);
      break;
    default:
      break;
  }
  if (m >= 2) push_unique_matrix(gens, block_swap_perm(k, n, block, 0, 1));
  if (m >= 3) push_unique_matrix(gens, block_cycle_perm(k, n, block, m));

  Decomposition dec;
  dec.classes.emplace_back();
  for (uint32_t j = 0; j < m; ++j)
    dec.classes[0].push_back(coord_span(k, n, j * block, block));
  if (d > 0) dec.fixed.push_back(coord_span(k, n, m * block, d));
  PartIndex idx = index_parts(dec);
  for (const Matrix& g : standard_generators(spec))
    if (matrix_stabilizes(g, dec, idx)) push_unique_matrix(gens, g);
  return gens;
}

std::vector<Matrix> blowup_generators(const GroupSpec& spec, uint32_t ext, bool with_frobenius) {
  if (spec.family != Family::GL)
    fail(Errc::unsupported_family, "field blowups are built for GL only");
  if (ext < 2) fail(Errc::dimension_mismatch, "extension degree must be at least 2");
  FieldPtr k = matrix_field(spec);
  uint32_t n = spec.n;
  uint32_t m = n / ext;
  if (m == 0) fail(Errc::dimension_too_small, "extension degree exceeds the dimension");
  uint32_t d = n - m * ext;
  FieldPtr big = Field::make(k->p(), k->f() * ext);
  SubfieldMap sm = SubfieldMap::make(k, big);

  auto as_block = [&](uint32_t w) {
    std::vector<uint32_t> flat = sm.mul_matrix(w);
    Matrix b(k, ext, ext);
    b.a = std::move(flat);
    return b;
  };

  std::vector<Matrix> gens;
  push_unique_matrix(gens, embed_block(as_block(big->generator()), n, 0));
  if (m >= 2) push_unique_matrix(gens, block_swap_perm(k, n, ext, 0, 1));
  if (m >= 3) push_unique_matrix(gens, block_cycle_perm(k, n, ext, m));
  if (with_frobenius) {
    uint32_t yq = big->pow(big->p(), k->q());  // image of the basis element Y
    Matrix phi(k, ext, ext);
    for (uint32_t i = 0; i < ext; ++i) {
      std::vector<uint32_t> row = sm.coords(big->pow(yq, i));
      for (uint32_t j = 0; j < ext; ++j) phi.at(i, j) = row[j];
    }
    Matrix full = Matrix::identity(k, n);
    for (uint32_t j = 0; j < m; ++j)
      for (uint32_t a = 0; a < ext; ++a)
        for (uint32_t b = 0; b < ext; ++b) full.at(j * ext + a, j * ext + b) = phi.at(a, b);
    push_unique_matrix(gens, full);
  }
  if (d > 0)
    for (const auto& g : standard_generators(make_spec(Family::GL, d, spec.q)))
      push_unique_matrix(gens, embed_block(g, n, m * ext));
  return gens;
}

Matrix adapted_orthogonal_basis(const Form& form,
                                const std::vector<std::optional<uint32_t>>& values,
                                uint64_t seed) {
  if (form.kind != FormKind::quadratic)
    fail(Errc::inconsistent_type_parameters, "adapted bases are built for quadratic forms");
  const FieldPtr& k = form.field;
  uint32_t n = form.n;
  if (values.size() != n) fail(Errc::dimension_mismatch, "one value slot per basis vector");
  for (const auto& v : values)
    if (v && *v == 0) fail(Errc::invalid_decomposition, "prescribed values must be nonzero");

  // Process prescribed positions first so free slots absorb the leftover
  // square class at the end.
  std::vector<uint32_t> order;
  for (uint32_t i = 0; i < n; ++i)
    if (values[i]) order.push_back(i);
  for (uint32_t i = 0; i < n; ++i)
    if (!values[i]) order.push_back(i);

  auto find_sqrt = [&](uint32_t a) -> std::optional<uint32_t> {
    for (uint32_t s = 1; s < k->q(); ++s)
      if (k->mul(s, s) == a) return s;
    return std::nullopt;
  };

  for (uint32_t attempt = 0; attempt < 64; ++attempt) {
    std::mt19937_64 rng(seed + attempt);
    // Complement basis, initially the whole space.
    std::vector<std::vector<uint32_t>> comp;
    for (uint32_t i = 0; i < n; ++i) {
      std::vector<uint32_t> e(n, 0);
      e[i] = 1;
      comp.push_back(e);
    }
    std::vector<std::vector<uint32_t>> chosen(n);
    bool ok = true;
    for (uint32_t step = 0; step < n && ok; ++step) {
      uint32_t pos = order[step];
      uint32_t dim = static_cast<uint32_t>(comp.size());
      auto eval = [&](const std::vector<uint32_t>& coef) {
        std::vector<uint32_t> v(n, 0);
        for (uint32_t j = 0; j < dim; ++j)
          if (coef[j])
            for (uint32_t c = 0; c < n; ++c)
              v[c] = k->add(v[c], k->mul(coef[j], comp[j][c]));
        return v;
      };
      std::vector<uint32_t> picked;
      auto admit = [&](const std::vector<uint32_t>& v) {
        uint32_t qv = form.quad(v);
        if (qv == 0) return false;
        if (!values[pos]) {
          picked = v;
          return true;
        }
        uint32_t ratio = k->div(qv, *values[pos]);
        auto s = find_sqrt(ratio);
        if (!s) return false;
        picked = v;
        uint32_t si = k->inv(*s);
        for (auto& c : picked) c = k->mul(c, si);
        return true;
      };
      bool found = false;
      uint64_t span_size = 1;
      bool small = true;
      for (uint32_t j = 0; j < dim && small; ++j) {
        span_size *= k->q();
        if (span_size > 100000) small = false;
      }
      if (small) {
        std::vector<uint32_t> coef(dim, 0);
        for (uint64_t it = 1; it < span_size && !found; ++it) {
          uint64_t x = it;
          for (uint32_t j = 0; j < dim; ++j) {
            coef[j] = static_cast<uint32_t>(x % k->q());
            x /= k->q();
          }
          found = admit(eval(coef));
        }
      } else {
        std::vector<uint32_t> coef(dim, 0);
        for (uint32_t tries = 0; tries < 20000 && !found; ++tries) {
          bool nonzero = false;
          for (uint32_t j = 0; j < dim; ++j) {
            coef[j] = static_cast<uint32_t>(rng() % k->q());
            nonzero = nonzero || coef[j];
          }
          if (!nonzero) continue;
          found = admit(eval(coef));
        }
      }
      if (!found) {
        ok = false;
        break;
      }
      chosen[pos] = picked;
      // Shrink the complement to the orthogonal of the picked vector.
      std::vector<uint32_t> pair(dim);
      uint32_t pivot = dim;
      for (uint32_t j = 0; j < dim; ++j) {
        pair[j] = form.bilin(comp[j], picked);
        if (pair[j] != 0 && pivot == dim) pivot = j;
      }
      if (pivot == dim) {
        ok = false;  // picked vector orthogonal to everything: degenerate path
        break;
      }
      std::vector<std::vector<uint32_t>> next;
      for (uint32_t j = 0; j < dim; ++j) {
        if (j == pivot) continue;
        std::vector<uint32_t> w = comp[j];
        uint32_t c = k->div(pair[j], pair[pivot]);
        if (c)
          for (uint32_t t = 0; t < n; ++t)
            w[t] = k->sub(w[t], k->mul(c, comp[pivot][t]));
        next.push_back(std::move(w));
      }
      comp = std::move(next);
    }
    if (!ok) continue;
    Matrix basis = Matrix::from_rows(k, chosen);
    // Verify exactly before returning.
    for (uint32_t i = 0; i < n; ++i) {
      if (values[i] && form.quad(chosen[i]) != *values[i])
        fail(Errc::internal, "adapted basis missed a prescribed value");
      for (uint32_t j = i + 1; j < n; ++j)
        if (form.bilin(chosen[i], chosen[j]) != 0)
          fail(Errc::internal, "adapted basis is not orthogonal");
    }
    if (det(basis) == 0) continue;
    return basis;
  }
  fail(Errc::not_found, "no adapted orthogonal basis found within the retry budget");
}

bool spec_membership(const GroupSpec& spec, const Matrix& m) {
  FieldPtr k = matrix_field(spec);
  if (m.field.get() != k.get() || m.rows != spec.n || m.cols != spec.n) return false;
  uint32_t dt = det(m);
  if (dt == 0) return false;
  switch (spec.family) {
    case Family::GL:
      return true;
    case Family::SL:
      return dt == 1;
    case Family::GU:
    case Family::SU: {
      MultiplierResult mr = form_multiplier(m, group_form(spec));
      if (!mr.preserved || mr.lambda != 1) return false;
      return spec.family == Family::GU || dt == 1;
    }
    case Family::Sp:
    case Family::GSp: {
      MultiplierResult mr = form_multiplier(m, group_form(spec));
      if (!mr.preserved) return false;
      return spec.family == Family::GSp || mr.lambda == 1;
    }
    case Family::GO:
    case Family::SO: {
      MultiplierResult mr = form_multiplier(m, group_form(spec));
      if (!mr.preserved) return false;
      if (spec.family == Family::GO) return true;
      return mr.lambda == 1 && dt == 1;
    }
    default:
      return dt != 0;
  }
}

Matrix change_basis(const Matrix& m, const Matrix& basis) {
  return matmul(matmul(matinv(basis), m), basis);
}

EpiVerdict epi_condition(const GroupSpec& spec, const std::vector<uint64_t>& pi) {
  validate_pi(pi, spec.p());
  EpiVerdict v;
  std::vector<uint64_t> sorted_pi = pi;
  std::sort(sorted_pi.begin(), sorted_pi.end());
  sorted_pi.erase(std::unique(sorted_pi.begin(), sorted_pi.end()), sorted_pi.end());

  FactoredOrder fo = order_formula(spec);
  std::vector<uint64_t> gprimes = fo.primes();
  std::vector<uint64_t> piG;
  for (uint64_t s : sorted_pi)
    if (contains_u64(gprimes, s)) piG.push_back(s);

  if (piG.empty()) {
    v.exists = HallExistence::yes;
    v.clause = "trivial";
    return v;
  }
  if (piG.size() == 1) {
    v.exists = HallExistence::yes;
    v.clause = "sylow";
    v.r = piG[0];
    v.a = e_value(piG[0], spec.q);
    return v;
  }

  Family fam = spec.family;
  if (fam != Family::GL && fam != Family::GU && fam != Family::GSp && fam != Family::GO) {
    v.exists = HallExistence::unknown;
    v.clause = "untabulated-family";
    v.notes.push_back("conditions are stated for the extended families; searching directly");
    return v;
  }
  if (ambient_solvable(spec)) {
    v.exists = HallExistence::unknown;
    v.clause = "ambient-solvable";
    v.notes.push_back("whole group is solvable, Hall subgroups exist for every pi; searching");
    return v;
  }

  uint64_t q = spec.q;
  uint32_t n = spec.n;
  bool has2 = contains_u64(piG, 2);
  bool has3 = contains_u64(piG, 3);

  if (has2 && has3) {
    v.exists = HallExistence::unknown;
    v.clause = "two-three-in-pi";
    v.r = 2;
    v.warnings.push_back("no condition table covers {2,3} inside pi; existence left to search");
    return v;
  }
  if (has2) {
    v.r = 2;
    for (uint64_t s : piG)
      if (s != 2) v.tau.push_back(s);
    v.a = e_value(2, q);
    GroupSpec d0 = spec;
    d0.family = derived_family(spec.family);
    std::vector<uint64_t> g0primes = order_formula(d0).primes();
    std::vector<uint64_t> piG0;
    for (uint64_t s : sorted_pi)
      if (contains_u64(g0primes, s)) piG0.push_back(s);
    bool ok1 = (v.a == 1) && subset_u64(piG0, prime_support(q - 1));
    bool ok2 = (v.a == 2) && subset_u64(piG0, prime_support(q + 1));
    if (!ok1 && !ok2) {
      v.exists = HallExistence::no;
      v.clause = "even-pi:none";
      v.notes.push_back("solvable even-order Hall subgroups need pi inside pi(q-1) or pi(q+1) "
                        "matching e(2,q); here pi(" + join_u64(piG0) + ") escapes both");
      return v;
    }
    v.exists = HallExistence::unknown;
    v.clause = ok1 ? "even-pi:q-1" : "even-pi:q+1";
    v.notes.push_back("containment in a torus normalizer is necessary; existence left to search");
    return v;
  }

  // Odd-order table.
  v.r = piG[0];
  for (size_t i = 1; i < piG.size(); ++i) v.tau.push_back(piG[i]);
  uint64_t r = v.r;
  v.a = e_value(r, q);
  std::vector<uint32_t> evs;
  for (uint64_t s : v.tau) evs.push_back(e_value(s, q));
  bool homog = std::all_of(evs.begin(), evs.end(), [&](uint32_t e) { return e == evs[0]; });
  if (!homog) {
    if (fam == Family::GO) {
      v.exists = HallExistence::unknown;
      v.clause = "tau-inhomogeneous";
      v.warnings.push_back("mixed tau orders only allow cyclic Hall subgroups in orthogonal "
                           "groups; existence left to search");
    } else {
      v.exists = HallExistence::no;
      v.clause = "tau-inhomogeneous";
      v.notes.push_back("tau primes have different orders modulo q, so no abelian normal Hall "
                        "tau-subgroup can exist");
    }
    return v;
  }
  v.b = evs[0];
  uint32_t a = v.a, b = v.b;

  uint32_t min_dim = fam == Family::GL ? 2 : fam == Family::GU ? 3 : fam == Family::GSp ? 4 : 7;
  if (n < min_dim) {
    v.exists = HallExistence::unknown;
    v.clause = "below-dimension-table";
    v.notes.push_back("condition table starts above this dimension; searching directly");
    return v;
  }

  auto all_tau = [&](auto&& pred) {
    for (uint64_t s : v.tau)
      if (!pred(s)) return false;
    return true;
  };
  auto flr = [](uint64_t x, uint64_t y) { return x / y; };

  if (fam == Family::GL) {
    if (!all_tau([&](uint64_t s) { return n < static_cast<uint64_t>(b) * s; })) {
      v.exists = HallExistence::no;
      v.clause = "GL:bound";
      return v;
    }
    uint64_t rp = r_part_of_pow_minus_one(q, r - 1, r);
    if (a == b) {
      v.exists = HallExistence::yes;
      v.clause = "GL:A";
      return v;
    }
    if (a == r - 1 && b == r && rp == r && flr(n, r - 1) == flr(n, r)) {
      v.exists = HallExistence::yes;
      v.clause = "GL:B";
      return v;
    }
    if (a == r - 1 && contains_u64(v.tau, b) &&
        r_part_of_pow_minus_one(q, b - 1, r) == r && flr(n, r - 1) == flr(n, r) + 1 &&
        n % r == (spec.f() - 1) % r) {
      v.exists = HallExistence::yes;
      v.clause = "GL:C";
      v.warnings.push_back("case C matches the printed conditions read literally (the common "
                           "order b equals a tau prime and n is compared with the field degree "
                           "minus one mod r); both readings are unusual");
      return v;
    }
    if (a == r - 1 && b == 1 && rp == r && flr(n, r - 1) == flr(n, r)) {
      v.exists = HallExistence::yes;
      v.clause = "GL:D";
      return v;
    }
    v.exists = HallExistence::no;
    v.clause = "GL:none";
    return v;
  }

  if (fam == Family::GU) {
    if (!all_tau([&](uint64_t s) { return n < static_cast<uint64_t>(b) * s; })) {
      v.exists = HallExistence::no;
      v.clause = "GU:bound";
      return v;
    }
    uint64_t rp_n = r_part_of_pow_minus_one(q, n, r);
    uint64_t rp_alt = r_part_of_pow_minus_one(q, r - 1, r);
    std::ostringstream alt;
    alt << "r-part of q^n-1 is " << rp_n << "; of q^(r-1)-1 is " << rp_alt;
    auto lit = [&]() {
      v.warnings.push_back("the r-part condition uses q^n-1 as printed");
      v.notes.push_back(alt.str());
    };
    bool floors_eq = flr(n, r - 1) == flr(n, r);
    bool floors_p1 = flr(n, r - 1) == flr(n, r) + 1;
    if (a == b && a % 4 == 0) {
      v.exists = HallExistence::yes;
      v.clause = "GU:A";
      return v;
    }
    if (a == b && a % 4 == 2 &&
        all_tau([&](uint64_t s) { return 2ull * n < static_cast<uint64_t>(b) * s; })) {
      v.exists = HallExistence::yes;
      v.clause = "GU:B";
      return v;
    }
    if (a == b && a % 2 == 1) {
      v.exists = HallExistence::yes;
      v.clause = "GU:C";
      return v;
    }
    if (r % 4 == 1 && a == r - 1 && b == 2 * r && rp_n == r && floors_eq) {
      v.exists = HallExistence::yes;
      v.clause = "GU:D";
      lit();
      return v;
    }
    if (r % 4 == 3 && 2ull * a == r - 1 && b == 2 * r && rp_n == r && floors_eq) {
      v.exists = HallExistence::yes;
      v.clause = "GU:E";
      lit();
      return v;
    }
    if (r % 4 == 1 && a == r - 1 && b == 2 * r && rp_n == r && floors_p1 && n % r == r - 1) {
      v.exists = HallExistence::yes;
      v.clause = "GU:F";
      lit();
      return v;
    }
    if (r % 4 == 3 && 2ull * a == r - 1 && b == 2 * r && rp_n == r && floors_p1 &&
        n % r == r - 1) {
      v.exists = HallExistence::yes;
      v.clause = "GU:G";
      lit();
      return v;
    }
    if (r % 4 == 1 && a == r - 1 && b == 2 && rp_n == r &&
        all_tau([&](uint64_t s) { return n < 2 * s; }) && floors_eq) {
      v.exists = HallExistence::yes;
      v.clause = "GU:H";
      lit();
      return v;
    }
    if (r % 4 == 3 && 2ull * a == r - 1 && b == 2 && rp_n == r &&
        all_tau([&](uint64_t s) { return n < 2 * s; }) && floors_eq) {
      v.exists = HallExistence::yes;
      v.clause = "GU:I";
      lit();
      return v;
    }
    v.exists = HallExistence::no;
    v.clause = "GU:none";
    return v;
  }

  if (fam == Family::GO) {
    if (spec.eps == FormEps::circ) {
      v.exists = HallExistence::unknown;
      v.clause = "GO:odd-dim-untabulated";
      v.warnings.push_back("the condition table only lists plus and minus types; searching");
      return v;
    }
    if (!all_tau([&](uint64_t s) { return n < static_cast<uint64_t>(b) * s; })) {
      v.exists = HallExistence::no;
      v.clause = "GO:bound";
      return v;
    }
    bool plus = spec.eps == FormEps::plus;
    if (plus && a == b && a % 2 == 0) {
      v.exists = HallExistence::yes;
      v.clause = "GO:A";
      return v;
    }
    if (plus && a == b && a % 2 == 1 &&
        all_tau([&](uint64_t s) { return n < 2ull * b * s; })) {
      v.exists = HallExistence::yes;
      v.clause = "GO:B";
      v.warnings.push_back("the printed bound n<2bs is weaker than the blanket bound n<bs");
      return v;
    }
    if (!plus && a == b && a % 2 == 0) {
      v.exists = HallExistence::yes;
      v.clause = "GO:C";
      return v;
    }
    if (!plus && a == b && a % 2 == 1) {
      v.exists = HallExistence::yes;
      v.clause = "GO:D";
      return v;
    }
    if (!plus && a % 2 == 1 && b == 2 * a && n == 4ull * a) {
      v.exists = HallExistence::yes;
      v.clause = "GO:E";
      return v;
    }
    if (!plus && b % 2 == 1 && a == 2 * b && n == 4ull * b) {
      v.exists = HallExistence::yes;
      v.clause = "GO:F";
      return v;
    }
    v.exists = HallExistence::no;
    v.clause = "GO:none";
    return v;
  }

  // GSp: the table indexes by half the matrix dimension.
  uint64_t np = n / 2;
  if (a == b && a % 2 == 0 &&
      all_tau([&](uint64_t s) { return 2 * np < static_cast<uint64_t>(b) * s; })) {
    v.exists = HallExistence::yes;
    v.clause = "GSp:A";
    return v;
  }
  if (a == b && a % 2 == 1 &&
      all_tau([&](uint64_t s) { return np < static_cast<uint64_t>(b) * s; })) {
    v.exists = HallExistence::yes;
    v.clause = "GSp:B";
    return v;
  }
  v.exists = HallExistence::no;
  v.clause = "GSp:none";
  return v;
}

std::vector<HallCandidate> hall_candidates(const GroupSpec& spec, const std::vector<uint64_t>& pi,
                                           const EpiVerdict& verdict) {
  std::vector<HallCandidate> out;
  std::set<std::string> seen;
  auto add = [&](const std::string& name, auto&& build) {
    if (seen.count(name)) return;
    try {
      std::vector<Matrix> gens = build();
      std::vector<Matrix> kept;
      for (const auto& g : gens)
        if (spec_membership(spec, g)) push_unique_matrix(kept, g);
      if (kept.empty()) return;
      seen.insert(name);
      out.push_back({name, std::move(kept)});
    } catch (const Error&) {
      // A container that cannot be built for these parameters is simply not
      // offered.
    }
  };

  Family fam = spec.family;
  uint32_t n = spec.n;
  bool has2 = contains_u64(pi, 2);
  bool linearish = (fam == Family::GL || fam == Family::SL);
  bool unitaryish = (fam == Family::GU || fam == Family::SU);

  auto add_monomial = [&]() {
    if (linearish || unitaryish) add("monomial", [&] { return monomial_generators(spec); });
  };
  auto add_pairs = [&]() {
    add("pair-stabilizer", [&] { return block_wreath_generators(spec, 2); });
  };
  auto add_blowup = [&](uint32_t ext, bool frob) {
    if (!linearish || ext < 2 || ext > n) return;
    std::ostringstream name;
    name << (frob ? "blowup-frobenius(" : "blowup(") << ext << ")";
    add(name.str(), [&] { return blowup_generators(spec, ext, frob); });
  };
  auto add_wreath = [&](uint32_t blk) {
    if (blk == 0 || blk > n) return;
    std::ostringstream name;
    name << "block-stabilizer(" << blk << ")";
    add(name.str(), [&] { return block_wreath_generators(spec, blk); });
  };

  if (verdict.clause == "sylow" || has2 || verdict.r == 0) {
    uint64_t r = verdict.r ? verdict.r : 2;
    uint32_t e = verdict.a ? verdict.a : 1;
    if (r == 2 || has2) {
      add_monomial();
      if (linearish && n == 2) add("singer-normalizer", [&] { return blowup_generators(spec, 2, true); });
      add_pairs();
      if (n % 2 == 1) add_wreath(1);
    } else {
      if (e == 1) add_monomial();
      add_blowup(e, true);
      add_wreath(e % 2 == 0 ? e : 2 * e);
      add_wreath(e);
      add_monomial();
      add_pairs();
    }
    return out;
  }

  uint32_t a = verdict.a, b = verdict.b;
  const std::string& cl = verdict.clause;
  if (cl == "GL:A") {
    if (a == 1) {
      add_monomial();
    } else {
      add_blowup(a, false);
      add_blowup(a, true);
    }
  } else if (cl == "GL:B" || cl == "GL:C") {
    add_wreath(b);
    add_blowup(b, true);
  } else if (cl == "GL:D") {
    add_monomial();
  } else if (cl == "GU:A" || cl == "GU:B") {
    add_wreath(a);
  } else if (cl == "GU:C") {
    add_wreath(2 * a);
  } else if (cl == "GU:H" || cl == "GU:I") {
    add_monomial();
  } else if (cl.rfind("GU:", 0) == 0) {
    add_wreath(a);
    add_wreath(2 * a);
    add_monomial();
  } else if (cl.rfind("GSp:", 0) == 0) {
    add_wreath(a % 2 == 0 ? a : 2 * a);
    add_pairs();
  } else if (cl.rfind("GO:", 0) == 0) {
    add_wreath(a % 2 == 0 ? a : 2 * a);
    add_pairs();
  }
  // Generic fallbacks, tried after the clause-specific containers.
  add_monomial();
  if (a >= 1) {
    add_blowup(a, true);
    add_wreath(a % 2 == 0 ? a : 2 * a);
  }
  if (b >= 1) {
    add_blowup(b, true);
    add_wreath(b % 2 == 0 ? b : 2 * b);
  }
  add_pairs();
  return out;
}

HallResult find_hall_pi(const ElementTable& t, const std::vector<uint64_t>& pi,
                        HallStrategy strategy, uint64_t node_budget) {
  validate_pi(pi, t.spec() ? std::optional<uint64_t>(t.spec()->p()) : std::nullopt);
  uint64_t target = pi_part(t.size(), pi);
  HallResult res;
  if (target == 1) {
    res.found = true;
    res.subgroup = trivial_subgroup(t);
    res.provenance = "trivial";
    return res;
  }
  if (target == t.size()) {
    res.found = true;
    res.subgroup = whole_group(t);
    res.provenance = "whole-group";
    return res;
  }
  std::vector<uint64_t> effective;
  for (uint64_t s : pi)
    if (t.size() % s == 0) effective.push_back(s);
  if (effective.size() == 1) {
    res.found = true;
    res.subgroup = find_sylow(whole_group(t), effective[0]);
    res.provenance = "sylow";
    return res;
  }

  uint64_t nodes = 0;
  bool any_budget_hit = false;
  if (strategy != HallStrategy::exhaustive && t.spec()) {
    const GroupSpec& sp = *t.spec();
    EpiVerdict v = epi_condition(sp, pi);
    FactoredOrder fo = order_formula(sp);
    bool ambient = fo.fits_u64() && fo.value() == t.size();
    if (ambient && v.exists == HallExistence::no) {
      res.found = false;
      res.complete = true;
      res.subgroup = trivial_subgroup(t);
      res.provenance = "absent:" + v.clause;
      return res;
    }
    if (ambient) {
      for (const HallCandidate& cand : hall_candidates(sp, pi, v)) {
        std::vector<uint32_t> ids;
        bool inside = true;
        for (const Matrix& g : cand.gens) {
          auto idx = t.find(g);
          if (!idx) {
            inside = false;
            break;
          }
          ids.push_back(*idx);
        }
        if (!inside) continue;
        Subgroup c = subgroup_closure(t, ids);
        if (pi_part(c.order(), pi) != target) continue;
        HallResult inner = find_hall_exhaustive(c, pi, target, node_budget);
        nodes += inner.nodes;
        if (inner.found) {
          inner.provenance = "structural:" + cand.name;
          inner.nodes = nodes;
          return inner;
        }
        if (!inner.complete) any_budget_hit = true;
      }
      if (strategy == HallStrategy::structural) {
        res.found = false;
        res.complete = false;
        res.subgroup = trivial_subgroup(t);
        res.provenance = any_budget_hit ? "structural:budget" : "structural:exhausted";
        res.nodes = nodes;
        return res;
      }
    }
  }
  HallResult full = find_hall_exhaustive(whole_group(t), pi, target, node_budget);
  full.nodes += nodes;
  if (full.provenance.empty()) full.provenance = "exhaustive";
  return full;
}

HallSearch hall_find_for_spec(const GroupSpec& spec, const std::vector<uint64_t>& pi,
                              HallStrategy strategy, uint64_t cap, uint64_t node_budget) {
  HallSearch out;
  out.spec = spec;
  out.pi = pi;
  std::sort(out.pi.begin(), out.pi.end());
  out.pi.erase(std::unique(out.pi.begin(), out.pi.end()), out.pi.end());
  out.verdict = epi_condition(spec, out.pi);

  FactoredOrder fo = order_formula(spec);
  if (fo.fits_u64() && fo.value() <= cap) {
    out.ambient = std::make_shared<ElementTable>(ElementTable::for_spec(spec, cap));
    out.container = out.ambient;
    out.container_name = "ambient";
    out.result = find_hall_pi(*out.ambient, out.pi, strategy, node_budget);
    out.hall_in_ambient = out.result.found;
    return out;
  }

  uint64_t target = fo.pi_part_value(out.pi);
  if (out.verdict.exists == HallExistence::no) {
    out.result.found = false;
    out.result.complete = true;
    out.result.provenance = "absent:" + out.verdict.clause;
    out.container_name = "none";
    return out;
  }
  for (const HallCandidate& cand : hall_candidates(spec, out.pi, out.verdict)) {
    std::shared_ptr<ElementTable> tbl;
    try {
      tbl = std::make_shared<ElementTable>(
          ElementTable::closure(matrix_field(spec), spec.n, cand.gens, cap));
    } catch (const Error& e) {
      if (e.code() == Errc::budget_exceeded) continue;
      throw;
    }
    tbl->set_form(group_form(spec));
    if (pi_part(tbl->size(), out.pi) != target) continue;
    HallResult r = find_hall_pi(*tbl, out.pi, HallStrategy::automatic, node_budget);
    if (r.found) {
      r.provenance = "candidate:" + cand.name + ":" + r.provenance;
      out.container = tbl;
      out.container_name = cand.name;
      out.result = r;
      out.hall_in_ambient = true;
      return out;
    }
  }
  out.result.found = false;
  out.result.complete = false;
  out.result.provenance = "candidate-level:exhausted";
  out.container_name = "none";
  return out;
}

}  // namespace hallbase
