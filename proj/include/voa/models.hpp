#ifndef VOA_MODELS_HPP
#define VOA_MODELS_HPP

#include <string>
#include <vector>

#include "voa/field.hpp"
#include "voa/graded_space.hpp"

namespace voa {

// Antilinear involution Theta, stored as one real matrix per degree. Over
// rational scalars antilinearity is pure bookkeeping; the conjugation marker
// is consumed by the numeric smearing layer.
struct ThetaMap {
  SpacePtr space;
  std::vector<RatMatrix> per_degree;
  bool conjugates_scalars = true;

  Vec apply(const Vec& v) const;
};

struct Model {
  SpacePtr space;
  std::vector<FieldTable> generators;  // one generator per built-in model
  ThetaMap theta;
  std::string kind;
};

struct ModelDescriptor {
  std::string kind;  // "heisenberg" | "virasoro"
  int depth = 4;
  Scalar central_charge = Scalar(1, 2);  // virasoro only

  Model build() const;
};

// Free boson (rank-one Heisenberg) vacuum module truncated at depth D.
// Basis: partition monomials a(-l1)...a(-lk)|0>; [a_m, a_n] = m delta_{m+n,0};
// J = Y(a(-1)|0>, z) of weight 1; Theta: a(-l) -> -a(-l).
Model heisenberg(int depth);

// Virasoro vacuum module at central charge c truncated at depth D.
// Basis: L(-l1)...L(-lk)|0> with parts >= 2 (the quotient by L(-1)|0>);
// T = Y(L(-2)|0>, z) of weight 2; Theta = Id on the monomial basis.
// Throws GramDegenerate(level) if the form is singular at some level <= D.
Model virasoro(const Scalar& c, int depth);

// Partitions of n with parts >= min_part, descending parts, deterministic
// (descending lexicographic) order. The same enumeration fixes basis order.
std::vector<std::vector<int>> partitions(int n, int min_part = 1);

}  // namespace voa

#endif  // VOA_MODELS_HPP
