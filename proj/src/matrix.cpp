#include "matrix.hpp"

#include <algorithm>

namespace hallbase {

namespace {

void check_same_field(const Matrix& x, const Matrix& y) {
  if (x.field.get() != y.field.get())
    fail(Errc::field_mismatch, "matrices over different fields");
}

}  // namespace

Matrix Matrix::identity(FieldPtr fl, uint32_t n) {
  Matrix m(std::move(fl), n, n);
  for (uint32_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

Matrix Matrix::scalar(FieldPtr fl, uint32_t n, uint32_t c) {
  Matrix m(std::move(fl), n, n);
  for (uint32_t i = 0; i < n; ++i) m.at(i, i) = c;
  return m;
}

Matrix Matrix::diagonal(FieldPtr fl, const std::vector<uint32_t>& d) {
  Matrix m(std::move(fl), static_cast<uint32_t>(d.size()), static_cast<uint32_t>(d.size()));
  for (uint32_t i = 0; i < d.size(); ++i) m.at(i, i) = d[i];
  return m;
}

Matrix Matrix::from_rows(FieldPtr fl, const std::vector<std::vector<uint32_t>>& rows) {
  if (rows.empty()) return Matrix(std::move(fl), 0, 0);
  Matrix m(std::move(fl), static_cast<uint32_t>(rows.size()),
           static_cast<uint32_t>(rows[0].size()));
  for (uint32_t i = 0; i < m.rows; ++i) {
    if (rows[i].size() != m.cols) fail(Errc::dimension_mismatch, "ragged rows");
    for (uint32_t j = 0; j < m.cols; ++j) m.at(i, j) = rows[i][j];
  }
  return m;
}

Matrix matmul(const Matrix& x, const Matrix& y) {
  check_same_field(x, y);
  if (x.cols != y.rows) fail(Errc::dimension_mismatch, "matmul shape mismatch");
  const Field& fl = *x.field;
  Matrix out(x.field, x.rows, y.cols);
  for (uint32_t i = 0; i < x.rows; ++i) {
    for (uint32_t k = 0; k < x.cols; ++k) {
      uint32_t v = x.at(i, k);
      if (!v) continue;
      for (uint32_t j = 0; j < y.cols; ++j) {
        uint32_t t = fl.mul(v, y.at(k, j));
        out.at(i, j) = fl.add(out.at(i, j), t);
      }
    }
  }
  return out;
}

Matrix matadd(const Matrix& x, const Matrix& y) {
  check_same_field(x, y);
  if (x.rows != y.rows || x.cols != y.cols)
    fail(Errc::dimension_mismatch, "matadd shape mismatch");
  Matrix out = x;
  for (size_t i = 0; i < out.a.size(); ++i) out.a[i] = x.field->add(x.a[i], y.a[i]);
  return out;
}

uint32_t det(const Matrix& m) {
  if (!m.is_square()) fail(Errc::dimension_mismatch, "determinant of non-square matrix");
  const Field& fl = *m.field;
  Matrix w = m;
  uint32_t n = m.rows;
  uint32_t d = 1;
  for (uint32_t col = 0; col < n; ++col) {
    uint32_t piv = col;
    while (piv < n && w.at(piv, col) == 0) ++piv;
    if (piv == n) return 0;
    if (piv != col) {
      for (uint32_t j = 0; j < n; ++j) std::swap(w.at(piv, j), w.at(col, j));
      d = fl.neg(d);
    }
    d = fl.mul(d, w.at(col, col));
    uint32_t s = fl.inv(w.at(col, col));
    for (uint32_t r = col + 1; r < n; ++r) {
      uint32_t fct = fl.mul(w.at(r, col), s);
      if (!fct) continue;
      for (uint32_t j = col; j < n; ++j)
        w.at(r, j) = fl.sub(w.at(r, j), fl.mul(fct, w.at(col, j)));
    }
  }
  return d;
}

Matrix matinv(const Matrix& m) {
  if (!m.is_square()) fail(Errc::dimension_mismatch, "inverse of non-square matrix");
  const Field& fl = *m.field;
  uint32_t n = m.rows;
  Matrix w = m;
  Matrix inv = Matrix::identity(m.field, n);
  for (uint32_t col = 0; col < n; ++col) {
    uint32_t piv = col;
    while (piv < n && w.at(piv, col) == 0) ++piv;
    if (piv == n) fail(Errc::singular, "matrix not invertible");
    if (piv != col) {
      for (uint32_t j = 0; j < n; ++j) {
        std::swap(w.at(piv, j), w.at(col, j));
        std::swap(inv.at(piv, j), inv.at(col, j));
      }
    }
    uint32_t s = fl.inv(w.at(col, col));
    for (uint32_t j = 0; j < n; ++j) {
      w.at(col, j) = fl.mul(w.at(col, j), s);
      inv.at(col, j) = fl.mul(inv.at(col, j), s);
    }
    for (uint32_t r = 0; r < n; ++r) {
      if (r == col) continue;
      uint32_t fct = w.at(r, col);
      if (!fct) continue;
      for (uint32_t j = 0; j < n; ++j) {
        w.at(r, j) = fl.sub(w.at(r, j), fl.mul(fct, w.at(col, j)));
        inv.at(r, j) = fl.sub(inv.at(r, j), fl.mul(fct, inv.at(col, j)));
      }
    }
  }
  return inv;
}

Matrix transpose(const Matrix& m) {
  Matrix out(m.field, m.cols, m.rows);
  for (uint32_t i = 0; i < m.rows; ++i)
    for (uint32_t j = 0; j < m.cols; ++j) out.at(j, i) = m.at(i, j);
  return out;
}

Matrix entrywise_frobenius(const Matrix& m, uint32_t subdegree) {
  Matrix out = m;
  for (auto& v : out.a) v = m.field->frobenius(v, subdegree);
  return out;
}

Matrix conj_transpose(const Matrix& m, uint32_t subdegree) {
  return transpose(entrywise_frobenius(m, subdegree));
}

Matrix matpow(const Matrix& m, uint64_t e) {
  Matrix r = Matrix::identity(m.field, m.rows);
  Matrix b = m;
  while (e) {
    if (e & 1) r = matmul(r, b);
    b = matmul(b, b);
    e >>= 1;
  }
  return r;
}

std::vector<uint32_t> vec_mat(const std::vector<uint32_t>& v, const Matrix& m) {
  if (v.size() != m.rows) fail(Errc::dimension_mismatch, "vector/matrix shape mismatch");
  const Field& fl = *m.field;
  std::vector<uint32_t> out(m.cols, 0);
  for (uint32_t i = 0; i < m.rows; ++i) {
    if (!v[i]) continue;
    for (uint32_t j = 0; j < m.cols; ++j)
      out[j] = fl.add(out[j], fl.mul(v[i], m.at(i, j)));
  }
  return out;
}

Matrix block_diag(const std::vector<Matrix>& blocks) {
  if (blocks.empty()) fail(Errc::dimension_mismatch, "no blocks");
  uint32_t n = 0;
  for (auto& b : blocks) {
    if (!b.is_square()) fail(Errc::dimension_mismatch, "non-square block");
    n += b.rows;
  }
  Matrix out(blocks[0].field, n, n);
  uint32_t off = 0;
  for (auto& b : blocks) {
    for (uint32_t i = 0; i < b.rows; ++i)
      for (uint32_t j = 0; j < b.cols; ++j) out.at(off + i, off + j) = b.at(i, j);
    off += b.rows;
  }
  return out;
}

Matrix embed_block(const Matrix& block, uint32_t n, uint32_t offset) {
  if (offset + block.rows > n) fail(Errc::dimension_mismatch, "block exceeds dimension");
  Matrix out = Matrix::identity(block.field, n);
  for (uint32_t i = 0; i < block.rows; ++i)
    for (uint32_t j = 0; j < block.cols; ++j) out.at(offset + i, offset + j) = block.at(i, j);
  return out;
}

Matrix rref(const Matrix& m) {
  const Field& fl = *m.field;
  Matrix w = m;
  uint32_t lead = 0;
  for (uint32_t col = 0; col < w.cols && lead < w.rows; ++col) {
    uint32_t piv = lead;
    while (piv < w.rows && w.at(piv, col) == 0) ++piv;
    if (piv == w.rows) continue;
    if (piv != lead)
      for (uint32_t j = 0; j < w.cols; ++j) std::swap(w.at(piv, j), w.at(lead, j));
    uint32_t s = fl.inv(w.at(lead, col));
    for (uint32_t j = 0; j < w.cols; ++j) w.at(lead, j) = fl.mul(w.at(lead, j), s);
    for (uint32_t r = 0; r < w.rows; ++r) {
      if (r == lead) continue;
      uint32_t fct = w.at(r, col);
      if (!fct) continue;
      for (uint32_t j = 0; j < w.cols; ++j)
        w.at(r, j) = fl.sub(w.at(r, j), fl.mul(fct, w.at(lead, j)));
    }
    ++lead;
  }
  // drop zero rows
  std::vector<std::vector<uint32_t>> keep;
  for (uint32_t i = 0; i < w.rows; ++i) {
    bool nz = false;
    for (uint32_t j = 0; j < w.cols; ++j)
      if (w.at(i, j)) nz = true;
    if (nz) {
      std::vector<uint32_t> row(w.cols);
      for (uint32_t j = 0; j < w.cols; ++j) row[j] = w.at(i, j);
      keep.push_back(std::move(row));
    }
  }
  if (keep.empty()) return Matrix(m.field, 0, m.cols);
  return Matrix::from_rows(m.field, keep);
}

Subspace make_subspace(FieldPtr field, uint32_t n,
                       const std::vector<std::vector<uint32_t>>& spanning_rows) {
  Subspace s;
  s.field = field;
  s.n = n;
  if (spanning_rows.empty()) {
    s.basis = Matrix(field, 0, n);
    return s;
  }
  for (auto& r : spanning_rows)
    if (r.size() != n) fail(Errc::dimension_mismatch, "spanning row of wrong length");
  s.basis = rref(Matrix::from_rows(field, spanning_rows));
  return s;
}

Subspace subspace_image(const Subspace& s, const Matrix& g) {
  Subspace out;
  out.field = s.field;
  out.n = s.n;
  out.basis = s.dim() == 0 ? Matrix(s.field, 0, s.n) : rref(matmul(s.basis, g));
  return out;
}

bool subspace_contains(const Subspace& s, const std::vector<uint32_t>& v) {
  // Reduce v against the RREF basis.
  const Field& fl = *s.field;
  std::vector<uint32_t> w = v;
  for (uint32_t i = 0; i < s.dim(); ++i) {
    uint32_t lead = 0;
    while (lead < s.n && s.basis.at(i, lead) == 0) ++lead;
    if (lead == s.n) continue;
    uint32_t fct = w[lead];
    if (!fct) continue;
    for (uint32_t j = 0; j < s.n; ++j) w[j] = fl.sub(w[j], fl.mul(fct, s.basis.at(i, j)));
  }
  for (uint32_t x : w)
    if (x) return false;
  return true;
}

// --- forms ---

uint32_t Form::bilin(const std::vector<uint32_t>& u, const std::vector<uint32_t>& v) const {
  const Field& fl = *field;
  std::vector<uint32_t> gv(n, 0);
  for (uint32_t j = 0; j < n; ++j) {
    uint32_t vc = conj_subdegree ? fl.frobenius(v[j], conj_subdegree) : v[j];
    gv[j] = vc;
  }
  uint32_t acc = 0;
  for (uint32_t i = 0; i < n; ++i) {
    if (!u[i]) continue;
    uint32_t row = 0;
    for (uint32_t j = 0; j < n; ++j) row = fl.add(row, fl.mul(gram.at(i, j), gv[j]));
    acc = fl.add(acc, fl.mul(u[i], row));
  }
  return acc;
}

uint32_t Form::quad(const std::vector<uint32_t>& v) const {
  if (kind != FormKind::quadratic) fail(Errc::inconsistent_type_parameters, "not a quadratic form");
  const Field& fl = *field;
  uint32_t acc = 0;
  for (uint32_t i = 0; i < n; ++i) {
    if (!v[i]) continue;
    for (uint32_t j = 0; j < n; ++j) {
      if (!v[j]) continue;
      acc = fl.add(acc, fl.mul(fl.mul(v[i], v[j]), upperq.at(i, j)));
    }
  }
  return acc;
}

Form standard_form(FormKind kind, FormEps eps, uint32_t n, FieldPtr field) {
  Form fm;
  fm.kind = kind;
  fm.eps = eps;
  fm.n = n;
  fm.field = field;
  switch (kind) {
    case FormKind::linear:
      fm.gram = Matrix::identity(field, n);
      return fm;
    case FormKind::symplectic: {
      if (n == 0 || n % 2) fail(Errc::inconsistent_type_parameters, "symplectic dimension must be even");
      fm.gram = Matrix(field, n, n);
      for (uint32_t b = 0; b < n / 2; ++b) {
        fm.gram.at(2 * b, 2 * b + 1) = 1;
        fm.gram.at(2 * b + 1, 2 * b) = field->neg(1);
      }
      return fm;
    }
    case FormKind::hermitian: {
      if (field->f() % 2) fail(Errc::inconsistent_type_parameters, "hermitian form needs a quadratic extension field");
      fm.conj_subdegree = field->f() / 2;
      fm.gram = Matrix::identity(field, n);
      return fm;
    }
    case FormKind::quadratic: {
      if (field->p() == 2)
        fail(Errc::even_characteristic_orthogonal, "orthogonal types are supported in odd characteristic only");
      if (eps == FormEps::circ) {
        if (n % 2 == 0) fail(Errc::inconsistent_type_parameters, "circ type needs odd dimension");
        fm.upperq = Matrix::identity(field, n);
      } else if (eps == FormEps::plus || eps == FormEps::minus) {
        if (n == 0 || n % 2) fail(Errc::inconsistent_type_parameters, "plus/minus types need even dimension");
        fm.upperq = Matrix(field, n, n);
        uint32_t m = n / 2;
        uint32_t hyperbolic = (eps == FormEps::plus) ? m : m - 1;
        for (uint32_t b = 0; b < hyperbolic; ++b) fm.upperq.at(2 * b, 2 * b + 1) = 1;
        if (eps == FormEps::minus) {
          uint32_t d = field->least_nonsquare();
          fm.upperq.at(n - 2, n - 2) = 1;
          fm.upperq.at(n - 1, n - 1) = field->neg(d);
        }
      } else {
        fail(Errc::inconsistent_type_parameters, "quadratic form needs a type epsilon");
      }
      fm.gram = matadd(fm.upperq, transpose(fm.upperq));
      return fm;
    }
  }
  fail(Errc::internal, "unhandled form kind");
}

Form diagonal_quadratic_form(const std::vector<uint32_t>& diag, FieldPtr field) {
  if (field->p() == 2)
    fail(Errc::even_characteristic_orthogonal, "orthogonal types are supported in odd characteristic only");
  Form fm;
  fm.kind = FormKind::quadratic;
  fm.n = static_cast<uint32_t>(diag.size());
  fm.field = field;
  fm.upperq = Matrix::diagonal(field, diag);
  fm.gram = matadd(fm.upperq, transpose(fm.upperq));
  for (uint32_t d : diag)
    if (!d) fail(Errc::invalid_decomposition, "degenerate diagonal form");
  fm.eps = (fm.n % 2) ? FormEps::circ : quadratic_type(fm);
  return fm;
}

FormEps quadratic_type(const Form& form) {
  if (form.kind != FormKind::quadratic)
    fail(Errc::inconsistent_type_parameters, "type of non-quadratic form");
  if (form.n % 2) return FormEps::circ;
  const Field& fl = *form.field;
  // plus iff the discriminant of the bilinear gram agrees with (-1)^(n/2)
  // modulo squares.
  uint32_t disc = det(form.gram);
  if (!disc) fail(Errc::invalid_decomposition, "degenerate form");
  uint32_t target = fl.pow(fl.neg(1), form.n / 2);
  return fl.is_square(fl.div(disc, target)) ? FormEps::plus : FormEps::minus;
}

MultiplierResult form_multiplier(const Matrix& g, const Form& form) {
  if (!g.is_square() || g.rows != form.n)
    fail(Errc::dimension_mismatch, "matrix does not match form dimension");
  if (g.field.get() != form.field.get()) fail(Errc::field_mismatch, "matrix field differs from form field");
  const Field& fl = *form.field;
  if (form.kind == FormKind::linear) return {true, 1};

  Matrix transported = matmul(matmul(g, form.gram), conj_transpose(g, form.conj_subdegree));
  uint32_t lambda = 0;
  for (uint32_t i = 0; i < form.n && !lambda; ++i)
    for (uint32_t j = 0; j < form.n && !lambda; ++j)
      if (form.gram.at(i, j)) lambda = fl.div(transported.at(i, j), form.gram.at(i, j));
  if (!lambda) return {false, 0};
  for (uint32_t i = 0; i < form.n; ++i)
    for (uint32_t j = 0; j < form.n; ++j)
      if (transported.at(i, j) != fl.mul(lambda, form.gram.at(i, j))) return {false, 0};

  if (form.kind == FormKind::hermitian &&
      fl.frobenius(lambda, form.conj_subdegree) != lambda)
    return {false, 0};

  if (form.kind == FormKind::quadratic) {
    // Q(v g) = lambda Q(v) on basis vectors and pairwise sums.
    auto check = [&](std::vector<uint32_t> v) {
      uint32_t expect = fl.mul(lambda, form.quad(v));
      return form.quad(vec_mat(v, g)) == expect;
    };
    for (uint32_t i = 0; i < form.n; ++i) {
      std::vector<uint32_t> v(form.n, 0);
      v[i] = 1;
      if (!check(v)) return {false, 0};
      for (uint32_t j = i + 1; j < form.n; ++j) {
        std::vector<uint32_t> w(form.n, 0);
        w[i] = 1;
        w[j] = 1;
        if (!check(w)) return {false, 0};
      }
    }
  }
  return {true, lambda};
}

// --- permutation helpers ---

Matrix perm_matrix(FieldPtr field, const std::vector<uint32_t>& sigma) {
  uint32_t n = static_cast<uint32_t>(sigma.size());
  Matrix m(field, n, n);
  std::vector<bool> seen(n, false);
  for (uint32_t i = 0; i < n; ++i) {
    if (sigma[i] >= n || seen[sigma[i]]) fail(Errc::index_out_of_range, "not a permutation");
    seen[sigma[i]] = true;
    m.at(i, sigma[i]) = 1;
  }
  return m;
}

int permutation_sign(const std::vector<uint32_t>& sigma) {
  uint32_t n = static_cast<uint32_t>(sigma.size());
  std::vector<bool> seen(n, false);
  int sign = 1;
  for (uint32_t i = 0; i < n; ++i) {
    if (seen[i]) continue;
    uint32_t len = 0, j = i;
    while (!seen[j]) {
      seen[j] = true;
      j = sigma[j];
      ++len;
    }
    if (len % 2 == 0) sign = -sign;
  }
  return sign;
}

std::vector<uint32_t> perm_from_cycles(uint32_t n,
                                       const std::vector<std::vector<uint32_t>>& cycles) {
  std::vector<uint32_t> sigma(n);
  for (uint32_t i = 0; i < n; ++i) sigma[i] = i;
  for (auto& cyc : cycles) {
    for (size_t k = 0; k < cyc.size(); ++k) {
      uint32_t from = cyc[k], to = cyc[(k + 1) % cyc.size()];
      if (from < 1 || from > n || to < 1 || to > n)
        fail(Errc::index_out_of_range, "cycle entry out of range");
      sigma[from - 1] = to - 1;
    }
  }
  return sigma;
}

Matrix signed_perm_witness(FieldPtr field, const std::vector<uint32_t>& sigma) {
  Matrix pm = perm_matrix(field, sigma);
  std::vector<uint32_t> d(sigma.size(), 1);
  if (!d.empty() && permutation_sign(sigma) < 0) d[0] = field->neg(1);
  return matmul(pm, Matrix::diagonal(field, d));
}

Matrix circulant_witness(FieldPtr field, uint32_t n) {
  if (n < 2) fail(Errc::dimension_too_small, "circulant witness needs n >= 2");
  Matrix m = Matrix::identity(field, n);
  for (uint32_t i = 0; i + 1 < n; ++i) m.at(i, i + 1) = 1;
  m.at(n - 1, 0) = 1;
  return m;
}

}  // namespace hallbase
