#ifndef VOA_ERRORS_HPP
#define VOA_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace voa {

// Base class for all structural errors raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A constructed object violates one of its invariants. `kind` names the
// failed check (e.g. "sl2_bracket", "gram_symmetry", "gram_positivity").
class InvariantViolation : public Error {
 public:
  InvariantViolation(std::string kind, const std::string& msg)
      : Error(kind + ": " + msg), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

// An exact result was requested but the truncation window cannot hold the
// intermediate degrees needed to compute it.
class HeadroomExceeded : public Error {
 public:
  explicit HeadroomExceeded(const std::string& msg) : Error(msg) {}
};

// Shifted-mode operation on a field without a well-defined weight.
class UndefinedWeight : public Error {
 public:
  explicit UndefinedWeight(const std::string& msg) : Error(msg) {}
};

// A(z)Omega has a pole at the origin: some A_(n) Omega != 0 with n >= 0.
class SingularAtOrigin : public Error {
 public:
  SingularAtOrigin(int n, const std::string& msg)
      : Error(msg), mode_index_(n) {}
  int mode_index() const { return mode_index_; }

 private:
  int mode_index_;
};

// Closure iteration ran out of budget before the state span stabilized.
class BudgetExhausted : public Error {
 public:
  BudgetExhausted(std::vector<int> span_dims, const std::string& msg)
      : Error(msg), span_dims_(std::move(span_dims)) {}
  const std::vector<int>& span_dims() const { return span_dims_; }

 private:
  std::vector<int> span_dims_;
};

// Closure stabilized on a proper subspace: the generators do not generate.
class NotGenerating : public Error {
 public:
  NotGenerating(std::vector<int> span_dims, const std::string& msg)
      : Error(msg), span_dims_(std::move(span_dims)) {}
  const std::vector<int>& span_dims() const { return span_dims_; }

 private:
  std::vector<int> span_dims_;
};

// Two distinct closure fields share a state. At exact arithmetic this means
// either a bug or a truncation too shallow to separate them.
class InjectivityFailure : public Error {
 public:
  explicit InjectivityFailure(const std::string& msg) : Error(msg) {}
};

// The bilinear form of a model is singular at some level.
class GramDegenerate : public Error {
 public:
  GramDegenerate(int level, const std::string& msg)
      : Error(msg), level_(level) {}
  int level() const { return level_; }

 private:
  int level_;
};

// Test functions that were required to have disjoint supports overlap.
class SupportOverlap : public Error {
 public:
  explicit SupportOverlap(const std::string& msg) : Error(msg) {}
};

// X_gamma came out non-positive on the sample grid; gamma is not a valid
// orientation-preserving Moebius transformation (or numerics broke down).
class NonPositiveXGamma : public Error {
 public:
  explicit NonPositiveXGamma(const std::string& msg) : Error(msg) {}
};

// Bad run configuration (CLI / JSON parsing).
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

}  // namespace voa

#endif  // VOA_ERRORS_HPP
