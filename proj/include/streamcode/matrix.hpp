#ifndef STREAMCODE_MATRIX_HPP
#define STREAMCODE_MATRIX_HPP

// Dense linear algebra over a FieldSpec plus the structured matrices used by
// the code constructions (Cauchy-like, systematic MDS, zero-band generators).

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "streamcode/field.hpp"

namespace streamcode {

using Column = std::vector<Symbol>;

/// Sorted, duplicate-free set of coordinates inside [0 : n-1].
class CoordinateSet {
 public:
  CoordinateSet() = default;
  CoordinateSet(std::vector<int> indices, int n) : indices_(std::move(indices)) {
    std::sort(indices_.begin(), indices_.end());
    if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end())
      throw std::invalid_argument("duplicate coordinate");
    if (!indices_.empty() && (indices_.front() < 0 || indices_.back() >= n))
      throw std::out_of_range("coordinate outside [0, n-1]");
  }

  static CoordinateSet range(int first, int last, int n) {
    std::vector<int> v;
    for (int i = first; i <= last; ++i) v.push_back(i);
    return {std::move(v), n};
  }

  const std::vector<int>& indices() const { return indices_; }
  std::size_t size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }
  bool contains(int i) const { return std::binary_search(indices_.begin(), indices_.end(), i); }
  auto begin() const { return indices_.begin(); }
  auto end() const { return indices_.end(); }

 private:
  std::vector<int> indices_;
};

class Matrix {
 public:
  Matrix() = default;
  Matrix(FieldPtr field, std::size_t rows, std::size_t cols)
      : field_(std::move(field)), rows_(rows), cols_(cols), data_(rows * cols, 0) {
    if (!field_) throw std::invalid_argument("matrix needs a field");
  }

  static Matrix identity(const FieldPtr& field, std::size_t n) {
    Matrix m(field, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  /// Builds a matrix from rows of raw symbols; all rows must have equal length.
  static Matrix from_rows(const FieldPtr& field, const std::vector<std::vector<Symbol>>& rows) {
    const std::size_t c = rows.empty() ? 0 : rows.front().size();
    Matrix m(field, rows.size(), c);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != c) throw std::invalid_argument("ragged rows");
      for (std::size_t j = 0; j < c; ++j) {
        if (!field->contains(rows[i][j])) throw std::invalid_argument("entry outside field");
        m(i, j) = rows[i][j];
      }
    }
    return m;
  }

  const FieldPtr& field() const { return field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Symbol& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  Symbol operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  FieldElement element(std::size_t i, std::size_t j) const { return {field_, (*this)(i, j)}; }

  std::span<const Symbol> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::span<Symbol> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }

  Column column(std::size_t j) const {
    Column c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  Matrix select(const std::vector<int>& row_idx, const std::vector<int>& col_idx) const {
    Matrix m(field_, row_idx.size(), col_idx.size());
    for (std::size_t i = 0; i < row_idx.size(); ++i)
      for (std::size_t j = 0; j < col_idx.size(); ++j)
        m(i, j) = (*this)(static_cast<std::size_t>(row_idx[i]), static_cast<std::size_t>(col_idx[j]));
    return m;
  }

  Matrix select_columns(const std::vector<int>& col_idx) const {
    std::vector<int> all(rows_);
    std::iota(all.begin(), all.end(), 0);
    return select(all, col_idx);
  }

  /// Inclusive block [r0:r1] x [c0:c1].
  Matrix block(int r0, int r1, int c0, int c1) const {
    std::vector<int> r, c;
    for (int i = r0; i <= r1; ++i) r.push_back(i);
    for (int j = c0; j <= c1; ++j) c.push_back(j);
    return select(r, c);
  }

  void set_block(int r0, int c0, const Matrix& src) {
    for (std::size_t i = 0; i < src.rows(); ++i)
      for (std::size_t j = 0; j < src.cols(); ++j) (*this)(r0 + i, c0 + j) = src(i, j);
  }

  const std::vector<Symbol>& data() const { return data_; }

  bool operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && same_field(field_, o.field_) && data_ == o.data_;
  }

 private:
  FieldPtr field_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Symbol> data_;
};

inline Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("dimension mismatch in multiply");
  if (!same_field(a.field(), b.field())) throw std::invalid_argument("field mismatch");
  const FieldSpec& f = *a.field();
  Matrix c(a.field(), a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t l = 0; l < a.cols(); ++l) {
      const Symbol s = a(i, l);
      if (s == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) ^= f.mul(s, b(l, j));
    }
  return c;
}

inline Matrix transpose(const Matrix& a) {
  Matrix t(a.field(), a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

inline Matrix hconcat(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("row mismatch in hconcat");
  Matrix c(a.field(), a.rows(), a.cols() + b.cols());
  c.set_block(0, 0, a);
  c.set_block(0, static_cast<int>(a.cols()), b);
  return c;
}

/// Reduces `m` in place to reduced row-echelon form; returns pivot columns.
/// Only the first `ncols` columns are eligible as pivots (default: all).
inline std::vector<int> row_reduce(Matrix& m, std::optional<std::size_t> ncols = std::nullopt) {
  const FieldSpec& f = *m.field();
  const std::size_t limit = ncols.value_or(m.cols());
  std::vector<int> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < limit && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && m(p, c) == 0) ++p;
    if (p == m.rows()) continue;
    if (p != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
    const Symbol s = f.inv(m(r, c));
    for (std::size_t j = c; j < m.cols(); ++j) m(r, j) = f.mul(m(r, j), s);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c) == 0) continue;
      const Symbol g = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j) m(i, j) ^= f.mul(g, m(r, j));
    }
    pivots.push_back(static_cast<int>(c));
    ++r;
  }
  return pivots;
}

inline std::size_t rank(Matrix m) { return row_reduce(m).size(); }

inline FieldElement det(Matrix m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant of a non-square matrix");
  const FieldSpec& f = *m.field();
  Symbol d = 1;
  const std::size_t n = m.rows();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m(p, c) == 0) ++p;
    if (p == n) return FieldElement::zero(m.field());
    if (p != c)
      for (std::size_t j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));  // sign is irrelevant in char 2
    d = f.mul(d, m(c, c));
    const Symbol s = f.inv(m(c, c));
    for (std::size_t i = c + 1; i < n; ++i) {
      if (m(i, c) == 0) continue;
      const Symbol g = f.mul(m(i, c), s);
      for (std::size_t j = c; j < n; ++j) m(i, j) ^= f.mul(g, m(c, j));
    }
  }
  return {m.field(), d};
}

struct SolveResult {
  bool consistent = false;
  /// One solution (free variables set to zero); empty when inconsistent.
  std::vector<Symbol> solution;
  /// determined[j] is true when x_j takes the same value in every solution.
  std::vector<bool> determined;

  bool unique() const {
    return consistent && std::all_of(determined.begin(), determined.end(), [](bool b) { return b; });
  }
};

/// Solves A x = y, reporting per-coordinate uniqueness.
inline SolveResult solve(const Matrix& a, std::span<const Symbol> y) {
  if (a.rows() != y.size()) throw std::invalid_argument("dimension mismatch in solve");
  Matrix aug(a.field(), a.rows(), a.cols() + 1);
  aug.set_block(0, 0, a);
  for (std::size_t i = 0; i < a.rows(); ++i) aug(i, a.cols()) = y[i];
  const auto pivots = row_reduce(aug, a.cols());
  SolveResult res;
  for (std::size_t i = pivots.size(); i < aug.rows(); ++i)
    if (aug(i, a.cols()) != 0) return res;
  res.consistent = true;
  res.solution.assign(a.cols(), 0);
  res.determined.assign(a.cols(), false);
  std::vector<bool> is_pivot(a.cols(), false);
  for (int p : pivots) is_pivot[static_cast<std::size_t>(p)] = true;
  for (std::size_t r = 0; r < pivots.size(); ++r) {
    const auto c = static_cast<std::size_t>(pivots[r]);
    res.solution[c] = aug(r, a.cols());
    bool free_dependency = false;
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (!is_pivot[j] && aug(r, j) != 0) free_dependency = true;
    res.determined[c] = !free_dependency;
  }
  return res;
}

inline Matrix columns_to_matrix(const FieldPtr& field, std::size_t len, const std::vector<Column>& cols) {
  Matrix m(field, len, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (cols[j].size() != len) throw std::invalid_argument("column length mismatch");
    for (std::size_t i = 0; i < len; ++i) m(i, j) = cols[j][i];
  }
  return m;
}

/// True iff target lies in the span of `others` (the empty span is {0}).
inline bool in_span(const FieldPtr& field, const Column& target, const std::vector<Column>& others) {
  Matrix m = columns_to_matrix(field, target.size(), others);
  const std::size_t r = rank(m);
  std::vector<Column> all = others;
  all.push_back(target);
  return rank(columns_to_matrix(field, target.size(), all)) == r;
}

/// Basis (as rows) of { y : y * A = 0 }.
inline Matrix left_nullspace(const Matrix& a) {
  // Reduce [A | I]; rows whose A-part vanished give the left kernel.
  Matrix aug(a.field(), a.rows(), a.cols() + a.rows());
  aug.set_block(0, 0, a);
  for (std::size_t i = 0; i < a.rows(); ++i) aug(i, a.cols() + i) = 1;
  const auto pivots = row_reduce(aug, a.cols());
  const std::size_t r = pivots.size();
  Matrix k(a.field(), a.rows() - r, a.rows());
  for (std::size_t i = r; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.rows(); ++j) k(i - r, j) = aug(i, a.cols() + j);
  return k;
}

/// Basis (as rows) of { x : A x = 0 }.
inline Matrix nullspace(const Matrix& a) { return left_nullspace(transpose(a)); }

/// r x c Cauchy matrix 1/(x_i + y_j) with x_i = element i and y_j = element r+j,
/// optionally with column j scaled by col_scales[j] (nonzero).
inline Matrix cauchy_like(std::size_t r, std::size_t c, const FieldPtr& field,
                          const std::vector<Symbol>& col_scales = {}) {
  if (r + c > field->order()) throw std::invalid_argument("field too small for Cauchy matrix");
  if (!col_scales.empty() && col_scales.size() != c) throw std::invalid_argument("scale vector length mismatch");
  Matrix m(field, r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) {
      Symbol v = field->inv(static_cast<Symbol>(i) ^ static_cast<Symbol>(r + j));
      if (!col_scales.empty()) {
        if (col_scales[j] == 0) throw std::invalid_argument("zero column scale");
        v = field->mul(v, col_scales[j]);
      }
      m(i, j) = v;
    }
  return m;
}

/// k x n MDS generator; systematic form is [I_k | Cauchy].
inline Matrix mds_generator(std::size_t n, std::size_t k, const FieldPtr& field, bool systematic = true) {
  if (k == 0 || k > n) throw std::invalid_argument("need 1 <= k <= n");
  if (n > field->order()) throw std::invalid_argument("field too small for MDS code");
  Matrix g(field, k, n);
  g.set_block(0, 0, Matrix::identity(field, k));
  if (n > k) g.set_block(0, static_cast<int>(k), cauchy_like(k, n - k, field));
  if (!systematic) {
    // Cauchy columns first, identity last: same code up to coordinate order.
    Matrix h(field, k, n);
    if (n > k) h.set_block(0, 0, cauchy_like(k, n - k, field));
    h.set_block(0, static_cast<int>(n - k), Matrix::identity(field, k));
    return h;
  }
  return g;
}

/// The unique (up to scale) codeword of the code generated by `g` that
/// vanishes on `zeros`, normalized so its first nonzero coordinate is 1.
/// Throws when the constraints do not cut out a one-dimensional space.
inline std::vector<Symbol> codeword_with_zeros(const Matrix& g, const std::vector<int>& zeros) {
  const FieldSpec& f = *g.field();
  Matrix constraints = transpose(g.select_columns(zeros));  // |zeros| x k
  Matrix kernel = nullspace(constraints);
  if (kernel.rows() != 1) throw std::runtime_error("zero constraints do not fix a codeword up to scale");
  std::vector<Symbol> word(g.cols(), 0);
  for (std::size_t j = 0; j < g.cols(); ++j)
    for (std::size_t i = 0; i < g.rows(); ++i) word[j] ^= f.mul(kernel(0, i), g(i, j));
  auto lead = std::find_if(word.begin(), word.end(), [](Symbol s) { return s != 0; });
  if (lead == word.end()) throw std::runtime_error("codeword with prescribed zeros is zero");
  const Symbol s = f.inv(*lead);
  for (auto& w : word) w = f.mul(w, s);
  return word;
}

/// Zero-band generator of an [n, k] MDS code: row i vanishes exactly on
/// [i+1 : i+k-1] (mod n) and is nonzero elsewhere.
inline Matrix zb_generator(std::size_t n, std::size_t k, const FieldPtr& field) {
  if (k == 0 || k > n) throw std::invalid_argument("need 1 <= k <= n");
  const Matrix sys = mds_generator(n, k, field, true);
  Matrix z(field, k, n);
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<int> zeros;
    for (std::size_t j = i + 1; j <= i + k - 1; ++j) zeros.push_back(static_cast<int>(j % n));
    std::vector<Symbol> word(n, 0);
    if (zeros.empty()) {
      word = std::vector<Symbol>(sys.row(0).begin(), sys.row(0).end());
      if (k == 1) {
        const Symbol s = field->inv(word[0]);
        for (auto& w : word) w = field->mul(w, s);
      }
    } else {
      word = codeword_with_zeros(sys, zeros);
    }
    std::size_t weight = 0;
    for (std::size_t j = 0; j < n; ++j) {
      z(i, j) = word[j];
      if (word[j] != 0) ++weight;
    }
    if (weight != n - k + 1) throw std::logic_error("zero-band row has wrong weight; base code is not MDS");
  }
  return z;
}

/// Parity-check basis of the code punctured to [0 : keep_upto]: the
/// subspace of rowspace(h) vanishing on [keep_upto+1 : n-1], restricted to
/// the first keep_upto+1 coordinates. May have zero rows.
inline Matrix shortened_pc(const Matrix& h, int keep_upto) {
  const int n = static_cast<int>(h.cols());
  if (keep_upto < 0 || keep_upto > n - 1) throw std::invalid_argument("keep_upto outside [0, n-1]");
  if (keep_upto == n - 1) {
    Matrix r = h;
    const auto piv = row_reduce(r);
    return r.block(0, static_cast<int>(piv.size()) - 1, 0, n - 1);
  }
  std::vector<int> tail;
  for (int j = keep_upto + 1; j < n; ++j) tail.push_back(j);
  const Matrix y = left_nullspace(h.select_columns(tail));  // combinations killing the tail
  Matrix basis = multiply(y, h);
  // Row-reduce to drop any dependent combinations (h need not have full rank).
  const auto piv = row_reduce(basis);
  Matrix out(h.field(), piv.size(), static_cast<std::size_t>(keep_upto + 1));
  for (std::size_t i = 0; i < piv.size(); ++i)
    for (int j = 0; j <= keep_upto; ++j) out(i, static_cast<std::size_t>(j)) = basis(i, static_cast<std::size_t>(j));
  return out;
}

}  // namespace streamcode

#endif  // STREAMCODE_MATRIX_HPP
