#ifndef VOA_RECONSTRUCT_HPP
#define VOA_RECONSTRUCT_HPP

#include <vector>

#include "voa/field.hpp"
#include "voa/parallel.hpp"
#include "voa/report.hpp"

namespace voa {

// State-field correspondence on the truncation: one field per basis state,
// extended to arbitrary states by linearity.
struct VAStructure {
  SpacePtr space;
  std::vector<std::vector<FieldTable>> Y;  // [degree][basis index]
  std::vector<FieldTable> generators;

  const FieldTable& field_for_basis(int degree, int index) const {
    return Y[degree][index];
  }
  // Linear extension; the result may be non-homogeneous.
  FieldTable field_of(const Vec& v) const;
};

// A(z)Omega at z = 0, i.e. A_(-1) Omega. Requires A_(n) Omega = 0 for all
// n >= 0 on the stored window; throws SingularAtOrigin(n) otherwise.
Vec state_of_field(const FieldTable& A);

struct ClosureBudget {
  int max_fields = 128;
  int max_rounds = 16;
};

// Closes {Id} + generators under derivatives and Borcherds (n)-products
// until the states span every degree <= D. Candidates are scanned
// breadth-first in creation order with n descending, and a candidate is kept
// exactly when its state enlarges the span, so the output is deterministic.
// Preconditions (pairwise locality, covariance of each generator against its
// weight) are verified first.
// Throws NotGenerating or BudgetExhausted, both carrying the span reached.
std::vector<FieldTable> dong_closure(const std::vector<FieldTable>& generators,
                                     ClosureBudget budget = {});

// Builds Y from the Dong closure by exact per-degree elimination on states.
// Throws InjectivityFailure if a nonzero combination of closure fields has
// zero state (two closure fields share a state).
VAStructure build_Y(SpacePtr space, const std::vector<FieldTable>& generators,
                    ClosureBudget budget = {});

// Full axiom verification on untruncated entries: vacuum axioms, regularity
// of Y(v,z)Omega, translation covariance, the binomial sl2 commutation
// relations for k = -1, 0, 1, and pairwise locality of the generators.
SuiteReport axiom_suite(const VAStructure& va, ExecMode mode = ExecMode::serial);

struct L1ClosureReport {
  bool passed = true;
  long checked = 0;
  long skipped_truncated = 0;
  std::vector<std::string> witnesses;
};

// Verifies that A, B and A_(n)B each satisfy the L1 commutation relation
// [L_1, X_(m)] = (2 d_X - m - 2) X_(m+1) + Y(L_1 x)_(m), the product with
// weight d_A + d_B - n - 1. The VAStructure supplies Y(L_1 x).
L1ClosureReport l1_closure_check(const FieldTable& A, const FieldTable& B, int n,
                                 const VAStructure& va);

}  // namespace voa

#endif  // VOA_RECONSTRUCT_HPP
