#ifndef VOA_GRADED_SPACE_HPP
#define VOA_GRADED_SPACE_HPP

#include <memory>
#include <string>
#include <vector>

#include "voa/matrix.hpp"

namespace voa {

class GradedSpace;
using SpacePtr = std::shared_ptr<const GradedSpace>;

// A vector of the truncated graded space, stored as one exact coefficient
// list per degree. `truncated` records that some component of the true
// result fell outside the degree window [0, D] and was dropped; exact
// assertions are only made on untruncated values.
struct Vec {
  SpacePtr space;
  std::vector<std::vector<Scalar>> comp;  // index = degree, 0..D
  bool truncated = false;

  bool is_zero() const;
  int min_degree() const;  // -1 if zero
  int max_degree() const;  // -1 if zero
  bool is_homogeneous(int* degree_out = nullptr) const;

  Vec& operator+=(const Vec& o);
  Vec& operator-=(const Vec& o);
  Vec& operator*=(const Scalar& s);
  friend Vec operator+(Vec a, const Vec& b) { return a += b; }
  friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
  friend Vec operator*(const Scalar& s, Vec a) { return a *= s; }
  friend bool operator==(const Vec& a, const Vec& b) { return a.comp == b.comp; }
};

// Truncated N-graded inner-product space carrying the sl2 = {L_-1, L_0, L_1}
// action. L_0 acts as n * Id on degree n by construction, so only the
// raising/lowering matrices are stored. Immutable after construction.
class GradedSpace : public std::enable_shared_from_this<GradedSpace> {
 public:
  struct Data {
    std::vector<int> dims;                            // dim V(n), n = 0..D
    std::vector<std::vector<std::string>> labels;     // per degree
    std::vector<RatMatrix> gram;                      // per degree, symmetric
    std::vector<RatMatrix> lower;                     // L_-1 : V(n) -> V(n+1), n = 0..D-1
    std::vector<RatMatrix> raise;                     // L_+1 : V(n) -> V(n-1), n = 1..D (index n-1)
  };

  // Which invariants make_space enforces. Positivity of the Gram form is the
  // unitarity prerequisite; models with a parameter (Virasoro c) construct
  // the space first and surface positivity through the unitarity suite.
  struct Checks {
    bool structure = true;   // shapes, dims[0] = 1, gram symmetry
    bool sl2 = true;         // [L_1, L_-1] = 2 L_0, adjointness of L_{+-1}
    bool positivity = true;  // exact LDL^T per degree
    static Checks all() { return {}; }
    static Checks no_positivity() { return {true, true, false}; }
  };

  int depth() const { return static_cast<int>(dims_.size()) - 1; }
  int dim(int degree) const;
  const std::vector<int>& dims() const { return dims_; }
  int total_dim() const { return total_dim_; }

  const std::string& label(int degree, int index) const { return labels_[degree][index]; }
  const RatMatrix& gram(int degree) const { return gram_[degree]; }
  // L_-1 block out of degree n; empty matrix when n = D (outside truncation).
  const RatMatrix* lower(int degree) const;
  // L_+1 block out of degree n; empty when n = 0.
  const RatMatrix* raise(int degree) const;

  Vec zero_vector() const;
  Vec basis_vector(int degree, int index) const;
  Vec vacuum() const { return basis_vector(0, 0); }

  friend SpacePtr make_space(Data data, Checks checks);

 private:
  GradedSpace() = default;
  std::vector<int> dims_;
  std::vector<std::vector<std::string>> labels_;
  std::vector<RatMatrix> gram_;
  std::vector<RatMatrix> lower_;
  std::vector<RatMatrix> raise_;
  int total_dim_ = 0;
};

// Validates the data and returns an immutable space.
// Throws InvariantViolation naming the failed check.
SpacePtr make_space(GradedSpace::Data data, GradedSpace::Checks checks = GradedSpace::Checks::all());

// L_k v for k in {-1, 0, 1}. Components pushed above the depth are dropped
// and the result is flagged truncated.
Vec apply_sl2(int k, const Vec& v);

// Degree-wise Gram pairing; distinct degrees are orthogonal automatically.
Scalar inner(const Vec& u, const Vec& v);

Scalar norm_squared(const Vec& v);

std::string format_vec(const Vec& v);  // human-readable, canonical labels

}  // namespace voa

#endif  // VOA_GRADED_SPACE_HPP
