#ifndef VOA_FIELD_HPP
#define VOA_FIELD_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "voa/graded_space.hpp"

namespace voa {

// Key of a stored mode block: unshifted mode index n and source degree.
struct BlockKey {
  int n;
  int src;
  friend bool operator<(const BlockKey& a, const BlockKey& b) {
    return a.n != b.n ? a.n < b.n : a.src < b.src;
  }
  friend bool operator==(const BlockKey& a, const BlockKey& b) {
    return a.n == b.n && a.src == b.src;
  }
};

enum class BlockStatus {
  zero,     // exactly zero (target degree negative, i.e. annihilation)
  exact,    // exactly known inside the window (absent matrix means zero)
  unknown,  // target degree beyond the truncation, or an explicit hole
};

// A formal distribution A(z) = sum A_(n) z^{-n-1} stored as mode blocks per
// (mode index, source degree). A field is a sum of homogeneous graded
// components; generator fields and everything produced by derivatives and
// (n)-products stay single-component. The weight is defined only for
// single-component fields; linear extension across weights lives in
// VAStructure, not here.
class FieldTable {
 public:
  struct Component {
    int weight = 0;
    std::map<BlockKey, RatMatrix> blocks;  // only nonzero matrices stored
    std::set<BlockKey> holes;              // in-window entries lost to headroom

    // Target degree of A_(n) out of V(src).
    int target(int n, int src) const { return src + weight - n - 1; }
    BlockStatus status(int n, int src, int depth) const;
  };

  FieldTable() = default;
  static FieldTable zero(SpacePtr space);
  static FieldTable identity(SpacePtr space);

  const SpacePtr& space() const { return space_; }
  const std::vector<Component>& components() const { return comps_; }
  bool is_zero_table() const;  // no stored blocks at all

  // Conformal weight; nullopt when the field is not homogeneous.
  std::optional<int> weight() const;

  // Status of the unshifted mode block A_(n) restricted to V(src), combined
  // over components (unknown dominates).
  BlockStatus status(int n, int src) const;

  // Window of unshifted mode indices that can carry a nonzero stored block.
  int min_mode() const;
  int max_mode() const;

  std::string name;  // optional tag used in reports ("J", "T", "dJ", ...)

  friend class FieldBuilder;
  friend FieldTable combine(const std::vector<std::pair<Scalar, const FieldTable*>>& terms);

 private:
  SpacePtr space_;
  std::vector<Component> comps_;  // sorted by weight, no duplicates
};

// Incremental constructor for a homogeneous field. Every in-window block not
// set and not marked as a hole is exactly zero.
class FieldBuilder {
 public:
  FieldBuilder(SpacePtr space, int weight);
  void set_block(int n, int src_degree, RatMatrix block);
  void mark_hole(int n, int src_degree);
  FieldTable build(std::string name = {});

 private:
  SpacePtr space_;
  FieldTable::Component comp_;
};

// Linear combination; components merge by weight, validity windows intersect.
FieldTable combine(const std::vector<std::pair<Scalar, const FieldTable*>>& terms);

// A_(n) v. Sets the truncated flag when an unknown block meets a nonzero
// source component.
Vec mode_apply(const FieldTable& A, int n_unshifted, const Vec& v);

// Degree-shifted mode v_n = v_(n+d-1); lowers degree by exactly n.
// Throws UndefinedWeight on non-homogeneous fields.
Vec shifted_mode_apply(const FieldTable& A, int n_shifted, const Vec& v);

// Shifted mode extended linearly over graded components (each component uses
// its own weight shift). This is the extension used by the invariant-form
// machinery; plain shifted_mode_apply deliberately rejects mixed weights.
Vec shifted_mode_apply_linear(const FieldTable& A, int n_shifted, const Vec& v);

// d/dz A(z): (dA)_(n) = -n A_(n-1); weight d+1.
FieldTable derivative(const FieldTable& A);

// Borcherds (n)-product A_(n)B via the residue expansion
//   (A_(n)B)_(m) = sum_j (-1)^j C(n,j) (A_(n-j) B_(m+j) - (-1)^n B_(n+m-j) A_(j)).
// Entries whose intermediate degrees leave the window become holes. With
// require_exact, any hole raises HeadroomExceeded instead.
FieldTable n_product(const FieldTable& A, const FieldTable& B, int n,
                     bool require_exact = false);

// Precomputed commutator data: [A_m, B_n] = sum_s C(m+dA-1, s) (A_(s)B)_{m+n}
// in shifted modes. Exact for arbitrarily large |m|, |n|: the finitely many
// product fields are computed once at the truncation.
struct BorcherdsCommutator {
  int weight_a = 0;
  int weight_b = 0;
  std::vector<FieldTable> products;  // s = 0 .. dA+dB-1

  Vec apply(int m_shifted, int n_shifted, const Vec& v) const;
};

BorcherdsCommutator make_borcherds_commutator(const FieldTable& A, const FieldTable& B);

// [A_m, B_n] v by direct composition in the truncated space; flags truncation.
Vec commutator_direct(const FieldTable& A, const FieldTable& B, int m_shifted,
                      int n_shifted, const Vec& v);

struct LocalityWitness {
  int order_tried;  // N that failed
  int p, q;         // shifted indices
  int degree, index;  // basis vector
};

struct LocalityResult {
  std::optional<int> order;  // minimal N, if found
  int n_max_checked = 0;
  long instances_checked = 0;
  long instances_skipped = 0;  // truncation made the residual unknowable
  std::vector<LocalityWitness> last_failures;  // witnesses at order-1

  bool local() const { return order.has_value(); }
};

// Minimal N <= n_max with sum_k (-1)^k C(N,k) [A_(p+N-k), B_(q+k)] v = 0 on
// every untruncated instance; ascending search from 0.
LocalityResult locality_order(const FieldTable& A, const FieldTable& B, int n_max);

struct CovarianceViolation {
  int k;       // sl2 index
  int m;       // shifted mode
  int degree;  // basis vector degree
  int index;
  std::string detail;
};

struct CovarianceReport {
  bool passed = true;
  long instances_checked = 0;
  long instances_skipped = 0;
  std::vector<CovarianceViolation> violations;
};

// Checks the quasi-primary mode relations [L_k, A_m] = (k(d-1) - m) A_{m+k}
// for k in {-1, 0, 1} on all untruncated instances.
CovarianceReport covariance_check(const FieldTable& A, int d);

struct FieldMismatch {
  int weight;
  BlockKey key;
  std::string detail;
};

// Entrywise comparison on the intersection of exact windows.
std::vector<FieldMismatch> field_mismatches(const FieldTable& A, const FieldTable& B,
                                            std::size_t max_reported = 8);
bool fields_equal_on_common_window(const FieldTable& A, const FieldTable& B);

}  // namespace voa

#endif  // VOA_FIELD_HPP
