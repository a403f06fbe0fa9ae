#ifndef VOA_MATRIX_HPP
#define VOA_MATRIX_HPP

#include <initializer_list>
#include <optional>
#include <vector>

#include "voa/rational.hpp"

namespace voa {

// Dense matrix over exact rationals. Weight-space dimensions stay small at
// desk truncations, so dense storage is the right trade-off.
class RatMatrix {
 public:
  RatMatrix() = default;
  RatMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {}

  static RatMatrix identity(int n);
  static RatMatrix from_rows(std::initializer_list<std::initializer_list<Scalar>> rows);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Scalar& at(int r, int c) { return a_[static_cast<size_t>(r) * cols_ + c]; }
  const Scalar& at(int r, int c) const { return a_[static_cast<size_t>(r) * cols_ + c]; }

  bool is_zero() const;
  bool is_symmetric() const;

  RatMatrix transposed() const;

  RatMatrix& operator+=(const RatMatrix& o);
  RatMatrix& operator-=(const RatMatrix& o);
  RatMatrix& operator*=(const Scalar& s);

  friend RatMatrix operator+(RatMatrix a, const RatMatrix& b) { return a += b; }
  friend RatMatrix operator-(RatMatrix a, const RatMatrix& b) { return a -= b; }
  friend RatMatrix operator*(const Scalar& s, RatMatrix a) { return a *= s; }
  friend RatMatrix operator*(const RatMatrix& a, const RatMatrix& b);
  friend bool operator==(const RatMatrix& a, const RatMatrix& b);

  std::vector<Scalar> apply(const std::vector<Scalar>& x) const;  // this * x

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Scalar> a_;
};

struct LdltResult {
  bool positive_definite = false;
  // Index of the first non-positive pivot when not positive definite.
  int failed_index = -1;
  Scalar failed_pivot;
};

// Exact LDL^T of a symmetric matrix. Positive definiteness is decided by the
// signs of the pivots (Sylvester); a zero pivot already refutes it.
LdltResult ldlt_positivity(const RatMatrix& sym);

// Exact determinant by fraction-free-friendly rational elimination with row
// pivoting.
Scalar determinant(RatMatrix m);

// Rank via rational Gaussian elimination.
int rank(RatMatrix m);

// Incremental exact row-echelon basis used for span-stabilization checks.
// Rows are reduced against the pivots accumulated so far.
class RowSpan {
 public:
  explicit RowSpan(int width) : width_(width) {}

  // Returns true (and absorbs the row) if `row` was independent of the span.
  bool insert(std::vector<Scalar> row);

  // Reduces `row` against the span; returns the residual.
  std::vector<Scalar> reduce(std::vector<Scalar> row) const;

  bool contains(const std::vector<Scalar>& row) const;
  int dim() const { return static_cast<int>(rows_.size()); }
  int width() const { return width_; }

 private:
  int width_;
  std::vector<std::vector<Scalar>> rows_;  // echelon rows
  std::vector<int> pivots_;                // pivot column per row
};

}  // namespace voa

#endif  // VOA_MATRIX_HPP
