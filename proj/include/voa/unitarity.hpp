#ifndef VOA_UNITARITY_HPP
#define VOA_UNITARITY_HPP

#include "voa/models.hpp"
#include "voa/parallel.hpp"
#include "voa/reconstruct.hpp"
#include "voa/report.hpp"

namespace voa {

// Structural checks on Theta: involution, vacuum fixed, commutes with sl2.
SuiteReport theta_check(const ThetaMap& theta);

// The conjugate state e^{L_1} (-1)^{L_0} Theta v; the exponential terminates
// because L_1 lowers degree.
Vec conjugate_state(const ThetaMap& theta, const Vec& v);

// Mode-level invariant-form identity <v_n u, u'> = <u, (conj v)_{-n} u'> for
// all basis u, u', homogeneous basis v and shifted n within validity.
SuiteReport invariant_form_check(const VAStructure& va, const ThetaMap& theta,
                                 ExecMode mode = ExecMode::serial);

struct HermitianReport {
  bool applicable = true;  // false when the field is not quasi-primary
  bool hermitian = true;
  long checked = 0;
  long skipped_truncated = 0;
  std::vector<std::string> witnesses;
};

// <A_n u, u'> = <u, A_{-n} u'> for a quasi-primary field of the given weight.
HermitianReport hermitian_check(const FieldTable& A, int weight);

// Hypotheses of the unitarity criterion: dim V(0) = 1, positive definite
// Gram form, unitary sl2 action, and a generating family of Hermitian
// quasi-primary fields with Theta v = (-1)^d v.
SuiteReport hermitian_generating_criterion(const VAStructure& va, const ThetaMap& theta);

}  // namespace voa

#endif  // VOA_UNITARITY_HPP
