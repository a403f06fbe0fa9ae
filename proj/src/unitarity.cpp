#include "voa/unitarity.hpp"

#include <sstream>

#include "voa/errors.hpp"

namespace voa {

SuiteReport theta_check(const ThetaMap& theta) {
  const GradedSpace& sp = *theta.space;
  const int depth = sp.depth();
  SuiteReport rep;
  rep.suite = "theta";

  CheckResult invol;
  invol.name = "involution";
  invol.anchor = "theta.involution";
  for (int n = 0; n <= depth; ++n) {
    ++invol.checked;
    RatMatrix sq = theta.per_degree[n] * theta.per_degree[n];
    if (!(sq == RatMatrix::identity(sp.dim(n))))
      invol.fail("Theta^2 != Id at degree " + std::to_string(n));
  }
  rep.checks.push_back(std::move(invol));

  CheckResult vac;
  vac.name = "vacuum-fixed";
  vac.anchor = "theta.fixes-vacuum";
  ++vac.checked;
  if (!(theta.per_degree[0] == RatMatrix::identity(1))) vac.fail("Theta Omega != Omega");
  rep.checks.push_back(std::move(vac));

  CheckResult comm;
  comm.name = "sl2-commutes";
  comm.anchor = "theta.commutes-with-sl2";
  for (int n = 0; n < depth; ++n) {
    ++comm.checked;
    RatMatrix lhs = theta.per_degree[n + 1] * (*sp.lower(n));
    RatMatrix rhs = (*sp.lower(n)) * theta.per_degree[n];
    if (!(lhs == rhs)) comm.fail("[Theta, L_-1] != 0 out of degree " + std::to_string(n));
    ++comm.checked;
    RatMatrix lhs2 = theta.per_degree[n] * (*sp.raise(n + 1));
    RatMatrix rhs2 = (*sp.raise(n + 1)) * theta.per_degree[n + 1];
    if (!(lhs2 == rhs2)) comm.fail("[Theta, L_1] != 0 out of degree " + std::to_string(n + 1));
  }
  rep.checks.push_back(std::move(comm));
  return rep;
}

Vec conjugate_state(const ThetaMap& theta, const Vec& v) {
  const GradedSpace& sp = *theta.space;
  Vec w = theta.apply(v);
  for (int n = 0; n <= sp.depth(); ++n)
    if (n % 2 == 1)
      for (auto& x : w.comp[n]) x = -x;
  // e^{L_1} w: the series terminates after at most depth steps.
  Vec acc = w;
  Vec term = w;
  for (long k = 1; k <= sp.depth(); ++k) {
    term = apply_sl2(1, term);
    term *= Scalar(1) / Scalar(k);
    if (term.is_zero()) break;
    acc += term;
  }
  return acc;
}

SuiteReport invariant_form_check(const VAStructure& va, const ThetaMap& theta,
                                 ExecMode mode) {
  const GradedSpace& sp = *va.space;
  const int depth = sp.depth();
  SuiteReport rep;
  rep.suite = "invariant-form";

  struct Task {
    int deg, idx;
  };
  std::vector<Task> tasks;
  for (int deg = 0; deg <= depth; ++deg)
    for (int i = 0; i < sp.dim(deg); ++i) tasks.push_back({deg, i});

  std::vector<CheckResult> partial(tasks.size());
  for_each_task(tasks.size(), mode, [&](std::size_t t) {
    const auto [deg, idx] = tasks[t];
    CheckResult& out = partial[t];
    const FieldTable& F = va.field_for_basis(deg, idx);
    Vec v = sp.basis_vector(deg, idx);
    Vec vtilde = conjugate_state(theta, v);
    FieldTable G = va.field_of(vtilde);
    for (int n = -depth; n <= depth; ++n) {
      for (int udeg = 0; udeg <= depth; ++udeg) {
        for (int ui = 0; ui < sp.dim(udeg); ++ui) {
          Vec u = sp.basis_vector(udeg, ui);
          Vec lhs_vec = shifted_mode_apply(F, n, u);
          if (lhs_vec.truncated) {
            ++out.skipped_truncated;
            continue;
          }
          for (int wdeg = 0; wdeg <= depth; ++wdeg) {
            for (int wi = 0; wi < sp.dim(wdeg); ++wi) {
              Vec uprime = sp.basis_vector(wdeg, wi);
              Vec rhs_vec = shifted_mode_apply_linear(G, -n, uprime);
              if (rhs_vec.truncated) {
                ++out.skipped_truncated;
                continue;
              }
              ++out.checked;
              Scalar lhs = inner(lhs_vec, uprime);
              Scalar rhs = inner(u, rhs_vec);
              if (lhs != rhs) {
                std::ostringstream os;
                os << "adjoint identity fails: v=" << sp.label(deg, idx) << " n=" << n
                   << " u=" << sp.label(udeg, ui) << " u'=" << sp.label(wdeg, wi)
                   << " lhs=" << to_string(lhs) << " rhs=" << to_string(rhs);
                out.fail(os.str());
              }
            }
          }
        }
      }
    }
  });

  CheckResult c;
  c.name = "adjoint-identity";
  c.anchor = "unitarity.invariant-form.mode-adjoint";
  for (auto& p : partial) {
    c.checked += p.checked;
    c.skipped_truncated += p.skipped_truncated;
    if (!p.passed) {
      c.passed = false;
      for (auto& w : p.witnesses)
        if (c.witnesses.size() < 16) c.witnesses.push_back(std::move(w));
    }
  }
  rep.checks.push_back(std::move(c));
  return rep;
}

HermitianReport hermitian_check(const FieldTable& A, int weight) {
  const GradedSpace& sp = *A.space();
  const int depth = sp.depth();
  HermitianReport rep;
  Vec state = state_of_field(A);
  Vec l1 = apply_sl2(1, state);
  if (!l1.is_zero()) {
    rep.applicable = false;
    rep.hermitian = false;
    rep.witnesses.push_back("field is not quasi-primary (L_1 state != 0)");
    return rep;
  }
  for (int n = -depth; n <= depth; ++n) {
    for (int udeg = 0; udeg <= depth; ++udeg) {
      for (int ui = 0; ui < sp.dim(udeg); ++ui) {
        Vec u = sp.basis_vector(udeg, ui);
        Vec anu = mode_apply(A, n + weight - 1, u);
        if (anu.truncated) {
          ++rep.skipped_truncated;
          continue;
        }
        for (int wdeg = 0; wdeg <= depth; ++wdeg) {
          for (int wi = 0; wi < sp.dim(wdeg); ++wi) {
            Vec uprime = sp.basis_vector(wdeg, wi);
            Vec amu = mode_apply(A, -n + weight - 1, uprime);
            if (amu.truncated) {
              ++rep.skipped_truncated;
              continue;
            }
            ++rep.checked;
            Scalar lhs = inner(anu, uprime);
            Scalar rhs = inner(u, amu);
            if (lhs != rhs) {
              rep.hermitian = false;
              if (rep.witnesses.size() < 8) {
                std::ostringstream os;
                os << "<A_n u, u'> != <u, A_-n u'> at n=" << n << " u=" << sp.label(udeg, ui)
                   << " u'=" << sp.label(wdeg, wi);
                rep.witnesses.push_back(os.str());
              }
            }
          }
        }
      }
    }
  }
  return rep;
}

SuiteReport hermitian_generating_criterion(const VAStructure& va, const ThetaMap& theta) {
  const GradedSpace& sp = *va.space;
  const int depth = sp.depth();
  SuiteReport rep;
  rep.suite = "unitarity-criterion";

  {
    CheckResult c;
    c.name = "vacuum-line";
    c.anchor = "unitarity.dim-v0-is-one";
    ++c.checked;
    if (sp.dim(0) != 1) c.fail("dim V(0) = " + std::to_string(sp.dim(0)));
    rep.checks.push_back(std::move(c));
  }

  {
    CheckResult c;
    c.name = "gram-positive";
    c.anchor = "unitarity.gram-positive-definite";
    for (int n = 0; n <= depth; ++n) {
      if (sp.dim(n) == 0) continue;
      ++c.checked;
      auto res = ldlt_positivity(sp.gram(n));
      if (!res.positive_definite) {
        std::ostringstream os;
        os << "level " << n << " not positive definite; pivot " << res.failed_index
           << " = " << to_string(res.failed_pivot) << " (witness <"
           << sp.label(n, res.failed_index) << ", ...>)";
        c.fail(os.str());
      }
    }
    rep.checks.push_back(std::move(c));
  }

  {
    CheckResult c;
    c.name = "sl2-unitary";
    c.anchor = "unitarity.sl2-adjoint-pairs";
    for (int n = 0; n < depth; ++n) {
      ++c.checked;
      RatMatrix lhs = sp.lower(n)->transposed() * sp.gram(n + 1);
      RatMatrix rhs = sp.gram(n) * (*sp.raise(n + 1));
      if (!(lhs == rhs)) c.fail("<L_-1 u, w> != <u, L_1 w> between degrees " +
                                std::to_string(n) + "," + std::to_string(n + 1));
    }
    rep.checks.push_back(std::move(c));
  }

  {
    CheckResult c;
    c.name = "theta-structure";
    c.anchor = "unitarity.theta-involution";
    auto trep = theta_check(theta);
    for (const auto& sub : trep.checks) {
      c.checked += sub.checked;
      if (!sub.passed) {
        c.passed = false;
        for (const auto& w : sub.witnesses)
          if (c.witnesses.size() < 16) c.witnesses.push_back(w);
      }
    }
    rep.checks.push_back(std::move(c));
  }

  {
    CheckResult c;
    c.name = "generators-hermitian-quasi-primary";
    c.anchor = "unitarity.hermitian-generating-family";
    for (const auto& g : va.generators) {
      auto w = g.weight();
      if (!w) {
        c.fail("generator " + g.name + " is not homogeneous");
        continue;
      }
      Vec state = state_of_field(g);
      Vec l1 = apply_sl2(1, state);
      ++c.checked;
      if (!l1.is_zero()) c.fail("generator " + g.name + " is not quasi-primary");

      // Theta v = (-1)^d v, the sign form of Hermiticity.
      Vec tv = theta.apply(state);
      Vec expected = state;
      if (*w % 2 == 1) expected *= Scalar(-1);
      ++c.checked;
      if (!(tv == expected))
        c.fail("Theta v != (-1)^d v for generator " + g.name);

      auto hrep = hermitian_check(g, *w);
      ++c.checked;
      c.skipped_truncated += hrep.skipped_truncated;
      if (!hrep.hermitian) {
        for (const auto& w2 : hrep.witnesses) c.fail("generator " + g.name + ": " + w2);
        if (hrep.witnesses.empty()) c.fail("generator " + g.name + " is not Hermitian");
      }
    }
    rep.checks.push_back(std::move(c));
  }

  {
    CheckResult c;
    c.name = "generating";
    c.anchor = "unitarity.generators-span";
    ++c.checked;
    try {
      dong_closure(va.generators);
    } catch (const NotGenerating& e) {
      c.fail(std::string("generators do not generate: ") + e.what());
    } catch (const BudgetExhausted& e) {
      c.fail(std::string("span not reached within budget: ") + e.what());
    }
    rep.checks.push_back(std::move(c));
  }

  return rep;
}

}  // namespace voa
