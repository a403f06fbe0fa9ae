#include "voa/matrix.hpp"

#include <stdexcept>
#include <utility>

namespace voa {

Scalar parse_rational(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  mpq_class q;
  if (q.set_str(text, 10) != 0)
    throw std::invalid_argument("bad rational literal: " + text);
  if (q.get_den() == 0)
    throw std::invalid_argument("zero denominator in rational literal: " + text);
  q.canonicalize();
  return q;
}

Scalar binomial(long n, long k) {
  if (k < 0) return 0;
  Scalar result = 1;
  for (long j = 0; j < k; ++j) {
    result *= Scalar(n - j);
    result /= Scalar(j + 1);
  }
  return result;
}

Scalar factorial(long k) {
  Scalar result = 1;
  for (long j = 2; j <= k; ++j) result *= Scalar(j);
  return result;
}

RatMatrix RatMatrix::identity(int n) {
  RatMatrix m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

RatMatrix RatMatrix::from_rows(std::initializer_list<std::initializer_list<Scalar>> rows) {
  const int r = static_cast<int>(rows.size());
  const int c = r > 0 ? static_cast<int>(rows.begin()->size()) : 0;
  RatMatrix m(r, c);
  int i = 0;
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != c)
      throw std::invalid_argument("ragged initializer in RatMatrix::from_rows");
    int j = 0;
    for (const auto& v : row) m.at(i, j++) = v;
    ++i;
  }
  return m;
}

bool RatMatrix::is_zero() const {
  for (const auto& v : a_)
    if (v != 0) return false;
  return true;
}

bool RatMatrix::is_symmetric() const {
  if (rows_ != cols_) return false;
  for (int i = 0; i < rows_; ++i)
    for (int j = i + 1; j < cols_; ++j)
      if (at(i, j) != at(j, i)) return false;
  return true;
}

RatMatrix RatMatrix::transposed() const {
  RatMatrix t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
  return t;
}

RatMatrix& RatMatrix::operator+=(const RatMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_)
    throw std::invalid_argument("matrix shape mismatch in +=");
  for (size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
  return *this;
}

RatMatrix& RatMatrix::operator-=(const RatMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_)
    throw std::invalid_argument("matrix shape mismatch in -=");
  for (size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
  return *this;
}

RatMatrix& RatMatrix::operator*=(const Scalar& s) {
  for (auto& v : a_) v *= s;
  return *this;
}

RatMatrix operator*(const RatMatrix& a, const RatMatrix& b) {
  if (a.cols_ != b.rows_) throw std::invalid_argument("matrix shape mismatch in *");
  RatMatrix c(a.rows_, b.cols_);
  for (int i = 0; i < a.rows_; ++i)
    for (int k = 0; k < a.cols_; ++k) {
      const Scalar& aik = a.at(i, k);
      if (aik == 0) continue;
      for (int j = 0; j < b.cols_; ++j) {
        if (b.at(k, j) == 0) continue;
        c.at(i, j) += aik * b.at(k, j);
      }
    }
  return c;
}

bool operator==(const RatMatrix& a, const RatMatrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
}

std::vector<Scalar> RatMatrix::apply(const std::vector<Scalar>& x) const {
  if (static_cast<int>(x.size()) != cols_)
    throw std::invalid_argument("vector length mismatch in apply");
  std::vector<Scalar> y(rows_);
  for (int j = 0; j < cols_; ++j) {
    if (x[j] == 0) continue;
    for (int i = 0; i < rows_; ++i) {
      if (at(i, j) == 0) continue;
      y[i] += at(i, j) * x[j];
    }
  }
  return y;
}

LdltResult ldlt_positivity(const RatMatrix& sym) {
  LdltResult res;
  const int n = sym.rows();
  RatMatrix a = sym;
  for (int k = 0; k < n; ++k) {
    const Scalar& pivot = a.at(k, k);
    if (pivot <= 0) {
      res.positive_definite = false;
      res.failed_index = k;
      res.failed_pivot = pivot;
      return res;
    }
    for (int i = k + 1; i < n; ++i) {
      if (a.at(i, k) == 0) continue;
      Scalar f = a.at(i, k) / pivot;
      for (int j = k; j < n; ++j) a.at(i, j) -= f * a.at(k, j);
    }
  }
  res.positive_definite = true;
  return res;
}

Scalar determinant(RatMatrix m) {
  const int n = m.rows();
  if (n != m.cols()) throw std::invalid_argument("determinant of non-square matrix");
  Scalar det = 1;
  for (int k = 0; k < n; ++k) {
    int pivot_row = -1;
    for (int i = k; i < n; ++i)
      if (m.at(i, k) != 0) {
        pivot_row = i;
        break;
      }
    if (pivot_row < 0) return 0;
    if (pivot_row != k) {
      for (int j = k; j < n; ++j) std::swap(m.at(k, j), m.at(pivot_row, j));
      det = -det;
    }
    det *= m.at(k, k);
    for (int i = k + 1; i < n; ++i) {
      if (m.at(i, k) == 0) continue;
      Scalar f = m.at(i, k) / m.at(k, k);
      for (int j = k; j < n; ++j) m.at(i, j) -= f * m.at(k, j);
    }
  }
  return det;
}

int rank(RatMatrix m) {
  const int rows = m.rows(), cols = m.cols();
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int pivot_row = -1;
    for (int i = r; i < rows; ++i)
      if (m.at(i, c) != 0) {
        pivot_row = i;
        break;
      }
    if (pivot_row < 0) continue;
    if (pivot_row != r)
      for (int j = c; j < cols; ++j) std::swap(m.at(r, j), m.at(pivot_row, j));
    for (int i = r + 1; i < rows; ++i) {
      if (m.at(i, c) == 0) continue;
      Scalar f = m.at(i, c) / m.at(r, c);
      for (int j = c; j < cols; ++j) m.at(i, j) -= f * m.at(r, j);
    }
    ++r;
  }
  return r;
}

std::vector<Scalar> RowSpan::reduce(std::vector<Scalar> row) const {
  for (size_t k = 0; k < rows_.size(); ++k) {
    const int p = pivots_[k];
    if (row[p] == 0) continue;
    Scalar f = row[p] / rows_[k][p];
    for (int j = 0; j < width_; ++j)
      if (rows_[k][j] != 0) row[j] -= f * rows_[k][j];
  }
  return row;
}

bool RowSpan::insert(std::vector<Scalar> row) {
  row = reduce(std::move(row));
  int pivot = -1;
  for (int j = 0; j < width_; ++j)
    if (row[j] != 0) {
      pivot = j;
      break;
    }
  if (pivot < 0) return false;
  rows_.push_back(std::move(row));
  pivots_.push_back(pivot);
  return true;
}

bool RowSpan::contains(const std::vector<Scalar>& row) const {
  auto residual = reduce(row);
  for (const auto& v : residual)
    if (v != 0) return false;
  return true;
}

}  // namespace voa
