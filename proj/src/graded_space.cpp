#include "voa/graded_space.hpp"

#include <sstream>

#include "voa/errors.hpp"

namespace voa {

bool Vec::is_zero() const {
  for (const auto& c : comp)
    for (const auto& v : c)
      if (v != 0) return false;
  return true;
}

int Vec::min_degree() const {
  for (size_t n = 0; n < comp.size(); ++n)
    for (const auto& v : comp[n])
      if (v != 0) return static_cast<int>(n);
  return -1;
}

int Vec::max_degree() const {
  for (size_t n = comp.size(); n-- > 0;)
    for (const auto& v : comp[n])
      if (v != 0) return static_cast<int>(n);
  return -1;
}

bool Vec::is_homogeneous(int* degree_out) const {
  int lo = min_degree();
  if (lo < 0) return false;
  if (lo != max_degree()) return false;
  if (degree_out) *degree_out = lo;
  return true;
}

Vec& Vec::operator+=(const Vec& o) {
  truncated = truncated || o.truncated;
  for (size_t n = 0; n < comp.size(); ++n)
    for (size_t i = 0; i < comp[n].size(); ++i) comp[n][i] += o.comp[n][i];
  return *this;
}

Vec& Vec::operator-=(const Vec& o) {
  truncated = truncated || o.truncated;
  for (size_t n = 0; n < comp.size(); ++n)
    for (size_t i = 0; i < comp[n].size(); ++i) comp[n][i] -= o.comp[n][i];
  return *this;
}

Vec& Vec::operator*=(const Scalar& s) {
  for (auto& c : comp)
    for (auto& v : c) v *= s;
  return *this;
}

int GradedSpace::dim(int degree) const {
  if (degree < 0 || degree > depth()) return 0;
  return dims_[degree];
}

const RatMatrix* GradedSpace::lower(int degree) const {
  if (degree < 0 || degree >= depth()) return nullptr;
  return &lower_[degree];
}

const RatMatrix* GradedSpace::raise(int degree) const {
  if (degree <= 0 || degree > depth()) return nullptr;
  return &raise_[degree - 1];
}

Vec GradedSpace::zero_vector() const {
  Vec v;
  v.space = shared_from_this();
  v.comp.resize(dims_.size());
  for (size_t n = 0; n < dims_.size(); ++n) v.comp[n].assign(dims_[n], Scalar(0));
  return v;
}

Vec GradedSpace::basis_vector(int degree, int index) const {
  Vec v = zero_vector();
  v.comp[degree][index] = 1;
  return v;
}

SpacePtr make_space(GradedSpace::Data data, GradedSpace::Checks checks) {
  const int count = static_cast<int>(data.dims.size());
  if (count == 0)
    throw InvariantViolation("structure", "dims must cover at least degree 0");
  const int depth = count - 1;

  if (checks.structure) {
    if (data.dims[0] != 1)
      throw InvariantViolation("vacuum", "dim V(0) must be 1");
    if (static_cast<int>(data.labels.size()) != count ||
        static_cast<int>(data.gram.size()) != count)
      throw InvariantViolation("structure", "labels/gram must have one entry per degree");
    if (static_cast<int>(data.lower.size()) != depth ||
        static_cast<int>(data.raise.size()) != depth)
      throw InvariantViolation("structure", "lower/raise must have D blocks");
    for (int n = 0; n <= depth; ++n) {
      if (data.dims[n] < 0)
        throw InvariantViolation("structure", "negative dimension");
      if (static_cast<int>(data.labels[n].size()) != data.dims[n])
        throw InvariantViolation("structure", "label count mismatch at degree " + std::to_string(n));
      if (data.gram[n].rows() != data.dims[n] || data.gram[n].cols() != data.dims[n])
        throw InvariantViolation("structure", "gram shape mismatch at degree " + std::to_string(n));
      if (!data.gram[n].is_symmetric())
        throw InvariantViolation("gram_symmetry", "gram not symmetric at degree " + std::to_string(n));
    }
    for (int n = 0; n < depth; ++n) {
      if (data.lower[n].rows() != data.dims[n + 1] || data.lower[n].cols() != data.dims[n])
        throw InvariantViolation("structure", "L_-1 shape mismatch out of degree " + std::to_string(n));
      if (data.raise[n].rows() != data.dims[n] || data.raise[n].cols() != data.dims[n + 1])
        throw InvariantViolation("structure", "L_1 shape mismatch out of degree " + std::to_string(n + 1));
    }
  }

  if (checks.sl2) {
    // [L_1, L_-1] = 2 L_0 on V(n) for n <= D-1; degree D cannot be checked
    // because L_-1 V(D) lies outside the truncation.
    for (int n = 0; n < depth; ++n) {
      RatMatrix bracket = data.raise[n] * data.lower[n];  // L_1 L_-1 on V(n)
      if (n >= 1) bracket -= data.lower[n - 1] * data.raise[n - 1];
      RatMatrix expected = RatMatrix::identity(data.dims[n]);
      expected *= Scalar(2 * n);
      if (!(bracket == expected))
        throw InvariantViolation("sl2_bracket",
                                 "[L_1, L_-1] != 2 L_0 on degree " + std::to_string(n));
    }
    // <L_-1 u, w> = <u, L_1 w>: L_-1(n)^T G_{n+1} = G_n L_1(n+1).
    for (int n = 0; n < depth; ++n) {
      RatMatrix lhs = data.lower[n].transposed() * data.gram[n + 1];
      RatMatrix rhs = data.gram[n] * data.raise[n];
      if (!(lhs == rhs))
        throw InvariantViolation("sl2_adjoint",
                                 "L_-1 is not adjoint to L_1 between degrees " +
                                     std::to_string(n) + " and " + std::to_string(n + 1));
    }
    // Moebius invariance of the vacuum: L_-1 Omega = 0 and L_1 V(1) -> V(0)
    // is forced by shapes; L_-1 Omega = 0 must be explicit.
    if (depth >= 1) {
      bool zero = true;
      for (int i = 0; i < data.dims[1]; ++i)
        if (data.lower[0].at(i, 0) != 0) zero = false;
      if (!zero) throw InvariantViolation("vacuum", "L_-1 Omega != 0");
    }
  }

  if (checks.positivity) {
    for (int n = 0; n <= depth; ++n) {
      auto res = ldlt_positivity(data.gram[n]);
      if (!res.positive_definite)
        throw InvariantViolation("positivity",
                                 "gram not positive definite at degree " + std::to_string(n) +
                                     " (pivot " + std::to_string(res.failed_index) + " = " +
                                     to_string(res.failed_pivot) + ")");
    }
  }

  auto space = std::shared_ptr<GradedSpace>(new GradedSpace());
  space->dims_ = std::move(data.dims);
  space->labels_ = std::move(data.labels);
  space->gram_ = std::move(data.gram);
  space->lower_ = std::move(data.lower);
  space->raise_ = std::move(data.raise);
  space->total_dim_ = 0;
  for (int d : space->dims_) space->total_dim_ += d;
  return space;
}

Vec apply_sl2(int k, const Vec& v) {
  const GradedSpace& sp = *v.space;
  Vec out = sp.zero_vector();
  out.truncated = v.truncated;
  const int depth = sp.depth();
  for (int n = 0; n <= depth; ++n) {
    bool nonzero = false;
    for (const auto& x : v.comp[n])
      if (x != 0) {
        nonzero = true;
        break;
      }
    if (!nonzero) continue;
    switch (k) {
      case 0: {
        for (int i = 0; i < sp.dim(n); ++i) out.comp[n][i] += Scalar(n) * v.comp[n][i];
        break;
      }
      case -1: {
        if (n == depth) {
          out.truncated = true;  // L_-1 V(D) falls outside the window
          break;
        }
        auto y = sp.lower(n)->apply(v.comp[n]);
        for (int i = 0; i < sp.dim(n + 1); ++i) out.comp[n + 1][i] += y[i];
        break;
      }
      case 1: {
        if (n == 0) break;  // L_1 V(0) = 0
        auto y = sp.raise(n)->apply(v.comp[n]);
        for (int i = 0; i < sp.dim(n - 1); ++i) out.comp[n - 1][i] += y[i];
        break;
      }
      default:
        throw InvariantViolation("sl2_index", "apply_sl2 expects k in {-1, 0, 1}");
    }
  }
  return out;
}

Scalar inner(const Vec& u, const Vec& v) {
  if (u.space.get() != v.space.get())
    throw InvariantViolation("space_mismatch", "inner product across different spaces");
  const GradedSpace& sp = *u.space;
  Scalar acc = 0;
  for (int n = 0; n <= sp.depth(); ++n) {
    const auto& g = sp.gram(n);
    for (int i = 0; i < sp.dim(n); ++i) {
      if (u.comp[n][i] == 0) continue;
      for (int j = 0; j < sp.dim(n); ++j) {
        if (v.comp[n][j] == 0 || g.at(i, j) == 0) continue;
        acc += u.comp[n][i] * g.at(i, j) * v.comp[n][j];
      }
    }
  }
  return acc;
}

Scalar norm_squared(const Vec& v) { return inner(v, v); }

std::string format_vec(const Vec& v) {
  std::ostringstream os;
  bool first = true;
  const GradedSpace& sp = *v.space;
  for (int n = 0; n <= sp.depth(); ++n)
    for (int i = 0; i < sp.dim(n); ++i) {
      const Scalar& c = v.comp[n][i];
      if (c == 0) continue;
      if (!first) os << " + ";
      os << "(" << to_string(c) << ")*" << sp.label(n, i);
      first = false;
    }
  if (first) os << "0";
  if (v.truncated) os << " [truncated]";
  return os.str();
}

}  // namespace voa
