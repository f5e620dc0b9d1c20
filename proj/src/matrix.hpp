#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gf.hpp"

namespace hallbase {

// Row-major matrix over a table-driven field. Vectors are rows and act on the
// right: v -> v * M. Entries are field codes.
struct Matrix {
  FieldPtr field;
  uint32_t rows = 0, cols = 0;
  std::vector<uint32_t> a;

  Matrix() = default;
  Matrix(FieldPtr fl, uint32_t r, uint32_t c)
      : field(std::move(fl)), rows(r), cols(c), a(static_cast<size_t>(r) * c, 0) {}

  uint32_t& at(uint32_t r, uint32_t c) { return a[static_cast<size_t>(r) * cols + c]; }
  uint32_t at(uint32_t r, uint32_t c) const { return a[static_cast<size_t>(r) * cols + c]; }

  static Matrix identity(FieldPtr fl, uint32_t n);
  static Matrix zero(FieldPtr fl, uint32_t r, uint32_t c) { return Matrix(std::move(fl), r, c); }
  static Matrix scalar(FieldPtr fl, uint32_t n, uint32_t c);
  static Matrix diagonal(FieldPtr fl, const std::vector<uint32_t>& d);
  static Matrix from_rows(FieldPtr fl, const std::vector<std::vector<uint32_t>>& rows);

  bool is_square() const { return rows == cols; }
  bool operator==(const Matrix& o) const {
    return field.get() == o.field.get() && rows == o.rows && cols == o.cols && a == o.a;
  }
};

Matrix matmul(const Matrix& x, const Matrix& y);
Matrix matadd(const Matrix& x, const Matrix& y);
uint32_t det(const Matrix& m);
Matrix matinv(const Matrix& m);  // throws singular
Matrix transpose(const Matrix& m);
Matrix entrywise_frobenius(const Matrix& m, uint32_t subdegree);
Matrix conj_transpose(const Matrix& m, uint32_t subdegree);
Matrix matpow(const Matrix& m, uint64_t e);
std::vector<uint32_t> vec_mat(const std::vector<uint32_t>& v, const Matrix& m);
Matrix block_diag(const std::vector<Matrix>& blocks);
// Copy block into an identity matrix of dimension n at diagonal offset.
Matrix embed_block(const Matrix& block, uint32_t n, uint32_t offset);

// Reduced row echelon form; zero rows dropped.
Matrix rref(const Matrix& m);

// Canonical subspace of row vectors: RREF basis makes equality structural.
struct Subspace {
  FieldPtr field;
  uint32_t n = 0;
  Matrix basis;  // dim x n, RREF

  uint32_t dim() const { return basis.rows; }
  bool operator==(const Subspace& o) const { return n == o.n && basis == o.basis; }
};

Subspace make_subspace(FieldPtr field, uint32_t n,
                       const std::vector<std::vector<uint32_t>>& spanning_rows);
Subspace subspace_image(const Subspace& s, const Matrix& g);
bool subspace_contains(const Subspace& s, const std::vector<uint32_t>& v);

// --- forms ---

enum class FormKind { linear, symplectic, hermitian, quadratic };
enum class FormEps { none, plus, minus, circ };

// A sesquilinear/quadratic structure on row space, with the convention
// B(u, v) = u * gram * sigma(v)^T, sigma the conj_subdegree Frobenius (identity
// unless hermitian). Quadratic forms carry an upper-triangular matrix U with
// Q(v) = v * U * v^T; gram is then the polarization U + U^T.
struct Form {
  FormKind kind = FormKind::linear;
  FormEps eps = FormEps::none;
  uint32_t n = 0;
  FieldPtr field;
  uint32_t conj_subdegree = 0;
  Matrix gram;
  Matrix upperq;

  uint32_t bilin(const std::vector<uint32_t>& u, const std::vector<uint32_t>& v) const;
  uint32_t quad(const std::vector<uint32_t>& v) const;
};

// Standard forms: symplectic pairs (e1, f1, e2, f2, ...) with blocks
// [[0,1],[-1,0]]; hermitian identity gram; quadratic circ = sum of squares
// (odd n); quadratic plus = hyperbolic pairs Q(x,y) = xy; quadratic minus =
// hyperbolic pairs plus one anisotropic block x^2 - d y^2, d a non-square.
// Quadratic forms require odd characteristic.
Form standard_form(FormKind kind, FormEps eps, uint32_t n, FieldPtr field);

// Build a quadratic form from an explicit diagonal; used for the adapted
// bases some witnesses are stated in.
Form diagonal_quadratic_form(const std::vector<uint32_t>& diag, FieldPtr field);
// plus/minus/circ of a quadratic form, decided by dimension and discriminant.
FormEps quadratic_type(const Form& form);

struct MultiplierResult {
  bool preserved = false;
  uint32_t lambda = 0;
};

// Similitude test: whether g carries the form to lambda * form, and the
// multiplier. Quadratic forms are tested on all basis vectors and pairwise
// sums as well as via the polarization gram.
MultiplierResult form_multiplier(const Matrix& g, const Form& form);

// --- permutation helpers ---

// sigma maps i -> sigma[i], 0-based; matrix has 1 at (i, sigma[i]).
Matrix perm_matrix(FieldPtr field, const std::vector<uint32_t>& sigma);
int permutation_sign(const std::vector<uint32_t>& sigma);
// Cycles given 1-based, e.g. {{1,3,5,9},{7,10}}; fixed points implied.
std::vector<uint32_t> perm_from_cycles(uint32_t n,
                                       const std::vector<std::vector<uint32_t>>& cycles);
// perm_matrix(sigma) * diag(sign(sigma), 1, ..., 1): always determinant 1.
Matrix signed_perm_witness(FieldPtr field, const std::vector<uint32_t>& sigma);
// Ones on the diagonal, the superdiagonal and in the (n, 1) corner.
Matrix circulant_witness(FieldPtr field, uint32_t n);

}  // namespace hallbase
