#include "voa/reconstruct.hpp"

#include <algorithm>
#include <sstream>

#include "voa/errors.hpp"

namespace voa {

namespace {

std::vector<Scalar> flatten(const Vec& v) {
  std::vector<Scalar> out;
  for (const auto& c : v.comp) out.insert(out.end(), c.begin(), c.end());
  return out;
}

std::vector<int> span_dims(const GradedSpace& sp, const std::vector<Vec>& states) {
  std::vector<int> dims(sp.depth() + 1, 0);
  for (int n = 0; n <= sp.depth(); ++n) {
    if (sp.dim(n) == 0) continue;
    RatMatrix m(static_cast<int>(states.size()), sp.dim(n));
    int r = 0;
    for (const auto& s : states) {
      for (int j = 0; j < sp.dim(n); ++j) m.at(r, j) = s.comp[n][j];
      ++r;
    }
    dims[n] = rank(m);
  }
  return dims;
}

}  // namespace

FieldTable VAStructure::field_of(const Vec& v) const {
  std::vector<std::pair<Scalar, const FieldTable*>> terms;
  for (int n = 0; n <= space->depth(); ++n)
    for (int i = 0; i < space->dim(n); ++i)
      if (v.comp[n][i] != 0) terms.push_back({v.comp[n][i], &Y[n][i]});
  if (terms.empty()) return FieldTable::zero(space);
  return combine(terms);
}

Vec state_of_field(const FieldTable& A) {
  const GradedSpace& sp = *A.space();
  Vec vac = sp.vacuum();
  // Regularity at the origin: no exact block A_(n), n >= 0, may hit Omega.
  for (const auto& comp : A.components()) {
    for (const auto& [key, blk] : comp.blocks) {
      if (key.src != 0 || key.n < 0) continue;
      bool hits = false;
      for (int i = 0; i < blk.rows(); ++i)
        if (blk.at(i, 0) != 0) hits = true;
      if (hits)
        throw SingularAtOrigin(key.n, "field " + (A.name.empty() ? "A" : A.name) +
                                          " has A_(" + std::to_string(key.n) +
                                          ") Omega != 0");
    }
  }
  return mode_apply(A, -1, vac);
}

std::vector<FieldTable> dong_closure(const std::vector<FieldTable>& generators,
                                     ClosureBudget budget) {
  if (generators.empty())
    throw InvariantViolation("generators", "dong_closure needs at least one generator");
  SpacePtr space = generators.front().space();
  const GradedSpace& sp = *space;
  const int depth = sp.depth();

  // Preconditions: each generator homogeneous, covariant against its weight,
  // pairwise local.
  for (const auto& g : generators) {
    auto w = g.weight();
    if (!w) throw UndefinedWeight("dong_closure expects homogeneous generators");
    auto cov = covariance_check(g, *w);
    if (!cov.passed)
      throw InvariantViolation("covariance",
                               "generator " + g.name + " fails quasi-primary covariance");
  }
  for (size_t i = 0; i < generators.size(); ++i)
    for (size_t j = i; j < generators.size(); ++j) {
      const int bound = *generators[i].weight() + *generators[j].weight() + 2;
      auto loc = locality_order(generators[i], generators[j], bound);
      if (!loc.local())
        throw InvariantViolation("locality", "generators " + generators[i].name + ", " +
                                                 generators[j].name +
                                                 " are not mutually local up to order " +
                                                 std::to_string(bound));
    }

  std::vector<FieldTable> fields;
  std::vector<Vec> states;
  RowSpan span(sp.total_dim());

  auto try_add = [&](FieldTable f) -> bool {
    Vec s = state_of_field(f);
    if (s.truncated || s.is_zero()) return false;
    if (!span.insert(flatten(s))) return false;
    fields.push_back(std::move(f));
    states.push_back(std::move(s));
    return true;
  };

  try_add(FieldTable::identity(space));
  for (const auto& g : generators)
    if (!try_add(g)) {
      // A generator whose state is already in the span is still part of the
      // closure's generating data; keep it for products.
      fields.push_back(g);
      states.push_back(state_of_field(g));
    }

  int produced = static_cast<int>(fields.size());
  for (int round = 0; round < budget.max_rounds; ++round) {
    if (span.dim() == sp.total_dim()) return fields;
    const size_t snapshot = fields.size();
    bool grew = false;
    for (size_t i = 0; i < snapshot && produced < budget.max_fields; ++i) {
      const auto wi = fields[i].weight();
      if (wi && *wi + 1 <= depth) {
        FieldTable der = derivative(fields[i]);
        if (try_add(std::move(der))) {
          grew = true;
          ++produced;
        }
      }
      for (size_t j = 0; j < snapshot && produced < budget.max_fields; ++j) {
        const auto wa = fields[i].weight(), wb = fields[j].weight();
        if (!wa || !wb) continue;
        const int n_hi = *wa + *wb - 1;      // product weight 0
        const int n_lo = *wa + *wb - 1 - depth;  // product weight D
        for (int n = n_hi; n >= n_lo && produced < budget.max_fields; --n) {
          FieldTable prod = n_product(fields[i], fields[j], n);
          if (try_add(std::move(prod))) {
            grew = true;
            ++produced;
          }
        }
      }
    }
    if (span.dim() == sp.total_dim()) return fields;
    if (!grew) {
      auto dims = span_dims(sp, states);
      throw NotGenerating(dims, "closure stabilized on a proper subspace");
    }
    if (produced >= budget.max_fields) break;
  }
  if (span.dim() == sp.total_dim()) return fields;
  throw BudgetExhausted(span_dims(sp, states), "closure budget exhausted before spanning");
}

VAStructure build_Y(SpacePtr space, const std::vector<FieldTable>& generators,
                    ClosureBudget budget) {
  const GradedSpace& sp = *space;
  std::vector<FieldTable> closure = dong_closure(generators, budget);

  VAStructure va;
  va.space = space;
  va.generators = generators;
  va.Y.resize(sp.depth() + 1);

  for (int deg = 0; deg <= sp.depth(); ++deg) {
    const int dim = sp.dim(deg);
    va.Y[deg].resize(dim, FieldTable::zero(space));
    if (dim == 0) continue;

    // Rows: states of closure fields at this degree, with the fields mirrored
    // through the same row operations.
    std::vector<std::vector<Scalar>> rows;
    std::vector<FieldTable> row_fields;
    for (const auto& f : closure) {
      Vec s = state_of_field(f);
      if (s.is_zero()) continue;
      int sdeg;
      if (!s.is_homogeneous(&sdeg))
        throw InjectivityFailure("closure produced a non-homogeneous state");
      if (sdeg != deg) continue;
      rows.push_back(s.comp[deg]);
      row_fields.push_back(f);
    }

    // Exact Gauss elimination to echelon form.
    std::vector<int> pivot_cols;
    size_t r = 0;
    for (int col = 0; col < dim && r < rows.size(); ++col) {
      size_t pr = r;
      while (pr < rows.size() && rows[pr][col] == 0) ++pr;
      if (pr == rows.size()) continue;
      std::swap(rows[r], rows[pr]);
      std::swap(row_fields[r], row_fields[pr]);
      for (size_t i = 0; i < rows.size(); ++i) {
        if (i == r || rows[i][col] == 0) continue;
        Scalar factor = rows[i][col] / rows[r][col];
        for (int j = 0; j < dim; ++j) rows[i][j] -= factor * rows[r][j];
        FieldTable updated =
            combine({{Scalar(1), &row_fields[i]}, {-factor, &row_fields[r]}});
        row_fields[i] = std::move(updated);
      }
      pivot_cols.push_back(col);
      ++r;
    }

    // Rows that collapsed to the zero state must carry the zero field; a
    // nonzero survivor means two closure fields share a state.
    for (size_t i = r; i < rows.size(); ++i) {
      bool zero_state = true;
      for (const auto& x : rows[i])
        if (x != 0) zero_state = false;
      if (!zero_state) continue;
      if (!row_fields[i].is_zero_table()) {
        throw InjectivityFailure(
            "distinct closure fields share the state at degree " + std::to_string(deg) +
            " (a nonzero field combination has zero state)");
      }
    }

    if (static_cast<int>(r) < dim)
      throw NotGenerating(std::vector<int>{},
                          "elimination lost rank at degree " + std::to_string(deg));

    // Solve Y(e_i) for each basis vector by back-substitution on the echelon.
    for (int i = 0; i < dim; ++i) {
      std::vector<Scalar> target(dim, Scalar(0));
      target[i] = 1;
      std::vector<Scalar> coef(r, Scalar(0));
      // pivot rows are in echelon (not reduced) form; eliminate top-down then
      // back-substitute bottom-up.
      std::vector<Scalar> rhs = target;
      for (size_t k = r; k-- > 0;) {
        const int pc = pivot_cols[k];
        Scalar c = rhs[pc] / rows[k][pc];
        coef[k] = c;
        if (c != 0)
          for (int j = 0; j < dim; ++j) rhs[j] -= c * rows[k][j];
      }
      for (const auto& x : rhs)
        if (x != 0)
          throw NotGenerating(std::vector<int>{},
                              "basis state outside the closure span at degree " +
                                  std::to_string(deg));
      std::vector<std::pair<Scalar, const FieldTable*>> terms;
      for (size_t k = 0; k < r; ++k)
        if (coef[k] != 0) terms.push_back({coef[k], &row_fields[k]});
      FieldTable yfield = terms.empty() ? FieldTable::zero(space) : combine(terms);
      yfield.name = "Y(" + sp.label(deg, i) + ")";
      va.Y[deg][i] = std::move(yfield);
    }
  }
  return va;
}

namespace {

// The sl2 commutation check for one basis state v and one k:
// [L_k, Y(v)_(n)] u = sum_{j=0}^{k+1} C(k+1,j) Y(L_{j-1} v)_(n+k+1-j) u.
struct Va4Task {
  int deg, idx, k;
};

void run_va4_task(const VAStructure& va, const Va4Task& task, CheckResult& out) {
  const GradedSpace& sp = *va.space;
  const int depth = sp.depth();
  const FieldTable& F = va.field_for_basis(task.deg, task.idx);
  Vec v = sp.basis_vector(task.deg, task.idx);

  // Fields for L_{j-1} v, j = 0 .. k+1.
  std::vector<FieldTable> rhs_fields;
  bool rhs_known = true;
  for (int j = 0; j <= task.k + 1; ++j) {
    Vec lv = apply_sl2(j - 1, v);
    if (lv.truncated) {
      rhs_known = false;  // L_-1 v left the window; nothing to assert
      break;
    }
    rhs_fields.push_back(va.field_of(lv));
  }
  if (!rhs_known) {
    ++out.skipped_truncated;
    return;
  }

  const int w = task.deg;  // conformal weight of v
  const int n_lo = w - 1 - depth - 2, n_hi = w - 1 + depth + 2;
  for (int n = n_lo; n <= n_hi; ++n) {
    for (int udeg = 0; udeg <= depth; ++udeg) {
      for (int ui = 0; ui < sp.dim(udeg); ++ui) {
        Vec u = sp.basis_vector(udeg, ui);
        Vec fnu = mode_apply(F, n, u);
        Vec lk_fnu = apply_sl2(task.k, fnu);
        Vec lku = apply_sl2(task.k, u);
        Vec fn_lku = mode_apply(F, n, lku);
        Vec rhs = sp.zero_vector();
        bool truncated = fnu.truncated || lk_fnu.truncated || lku.truncated ||
                         fn_lku.truncated;
        for (int j = 0; j <= task.k + 1 && !truncated; ++j) {
          Vec term = mode_apply(rhs_fields[j], n + task.k + 1 - j, u);
          if (term.truncated) truncated = true;
          term *= binomial(task.k + 1, j);
          rhs += term;
        }
        if (truncated) {
          ++out.skipped_truncated;
          continue;
        }
        ++out.checked;
        Vec diff = lk_fnu - fn_lku;
        diff -= rhs;
        if (!diff.is_zero()) {
          std::ostringstream os;
          os << "sl2 commutation fails: v=" << sp.label(task.deg, task.idx)
             << " k=" << task.k << " n=" << n << " u=" << sp.label(udeg, ui);
          out.fail(os.str());
        }
      }
    }
  }
}

}  // namespace

SuiteReport axiom_suite(const VAStructure& va, ExecMode mode) {
  const GradedSpace& sp = *va.space;
  const int depth = sp.depth();
  SuiteReport rep;
  rep.suite = "axioms";

  // VA1: grading structure.
  {
    CheckResult c;
    c.name = "grading";
    c.anchor = "axioms.grading.finite-dimensional-weights";
    ++c.checked;
    if (sp.dim(0) != 1) c.fail("dim V(0) = " + std::to_string(sp.dim(0)));
    rep.checks.push_back(std::move(c));
  }

  // VA2: vacuum invariance and Y(Omega) = Id.
  {
    CheckResult c;
    c.name = "vacuum";
    c.anchor = "axioms.vacuum.invariance-and-identity-field";
    Vec vac = sp.vacuum();
    for (int k = -1; k <= 1; ++k) {
      Vec lv = apply_sl2(k, vac);
      ++c.checked;
      if (!lv.is_zero()) c.fail("L_" + std::to_string(k) + " Omega != 0");
    }
    FieldTable id = FieldTable::identity(va.space);
    ++c.checked;
    for (const auto& mm : field_mismatches(va.field_for_basis(0, 0), id))
      c.fail("Y(Omega) != Id: " + mm.detail);
    rep.checks.push_back(std::move(c));
  }

  // VA3: regularity at the origin and state-field round trip.
  {
    CheckResult c;
    c.name = "state-field";
    c.anchor = "axioms.state-field.regular-at-origin";
    for (int deg = 0; deg <= depth; ++deg) {
      for (int i = 0; i < sp.dim(deg); ++i) {
        ++c.checked;
        try {
          Vec s = state_of_field(va.field_for_basis(deg, i));
          Vec e = sp.basis_vector(deg, i);
          if (!(s == e)) c.fail("state_of_field(Y(v)) != v for v = " + sp.label(deg, i));
        } catch (const SingularAtOrigin& err) {
          c.fail(std::string("Y(v) singular at origin: ") + err.what());
        }
      }
    }
    rep.checks.push_back(std::move(c));
  }

  // VA4 (translation part): Y(L_-1 v, z) = d/dz Y(v, z) as mode tables.
  {
    CheckResult c;
    c.name = "translation";
    c.anchor = "axioms.translation.derivative-field";
    for (int deg = 0; deg <= depth; ++deg) {
      for (int i = 0; i < sp.dim(deg); ++i) {
        Vec lv = apply_sl2(-1, sp.basis_vector(deg, i));
        if (lv.truncated) {
          ++c.skipped_truncated;
          continue;
        }
        ++c.checked;
        FieldTable lhs = va.field_of(lv);
        FieldTable rhs = derivative(va.field_for_basis(deg, i));
        for (const auto& mm : field_mismatches(lhs, rhs))
          c.fail("Y(L_-1 v) != dY(v) for v = " + sp.label(deg, i) + ": " + mm.detail);
      }
    }
    rep.checks.push_back(std::move(c));
  }

  // VA4 (sl2 commutation relations, binomial form) for k = -1, 0, 1.
  {
    std::vector<Va4Task> tasks;
    for (int k = -1; k <= 1; ++k)
      for (int deg = 0; deg <= depth; ++deg)
        for (int i = 0; i < sp.dim(deg); ++i) tasks.push_back({deg, i, k});
    std::vector<CheckResult> partial(tasks.size());
    for_each_task(tasks.size(), mode,
                  [&](std::size_t t) { run_va4_task(va, tasks[t], partial[t]); });
    CheckResult c;
    c.name = "sl2-commutation";
    c.anchor = "axioms.covariance.binomial-commutator";
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
  }

  // VA5: pairwise locality of the generators.
  {
    CheckResult c;
    c.name = "locality";
    c.anchor = "axioms.locality.pairwise-finite-order";
    for (size_t i = 0; i < va.generators.size(); ++i) {
      for (size_t j = i; j < va.generators.size(); ++j) {
        const auto& A = va.generators[i];
        const auto& B = va.generators[j];
        const int bound = *A.weight() + *B.weight() + 2;
        auto loc = locality_order(A, B, bound);
        ++c.checked;
        c.skipped_truncated += loc.instances_skipped > 0 ? 1 : 0;
        if (!loc.local())
          c.fail("no locality order <= " + std::to_string(bound) + " for (" + A.name +
                 ", " + B.name + ")");
      }
    }
    rep.checks.push_back(std::move(c));
  }

  return rep;
}

namespace {

// Defect of the L1 relation for a homogeneous field X with Y(L_1 x) supplied
// by the structure.
void check_l1_relation(const FieldTable& X, const VAStructure& va, L1ClosureReport& rep,
                       const std::string& tag) {
  const GradedSpace& sp = *va.space;
  const int depth = sp.depth();
  if (X.is_zero_table()) return;  // relation holds vacuously
  auto w = X.weight();
  if (!w) throw UndefinedWeight("l1_closure_check expects homogeneous fields");
  if (*w < 0) {
    // Negative-weight product of honest fields must vanish; a nonzero table
    // would already be a failure worth reporting.
    rep.passed = false;
    rep.witnesses.push_back(tag + ": nonzero field of negative weight " +
                            std::to_string(*w));
    return;
  }
  if (*w > depth) {
    // The state lies beyond the truncation, so Y(L_1 x) is not available.
    ++rep.skipped_truncated;
    return;
  }
  Vec x = state_of_field(X);
  Vec l1x = apply_sl2(1, x);
  FieldTable yl1x = va.field_of(l1x);

  const int n_lo = *w - 1 - depth - 1, n_hi = *w - 1 + depth + 1;
  for (int n = n_lo; n <= n_hi; ++n) {
    for (int udeg = 0; udeg <= depth; ++udeg) {
      for (int ui = 0; ui < sp.dim(udeg); ++ui) {
        Vec u = sp.basis_vector(udeg, ui);
        Vec xnu = mode_apply(X, n, u);
        Vec l1_xnu = apply_sl2(1, xnu);
        Vec l1u = apply_sl2(1, u);
        Vec xn_l1u = mode_apply(X, n, l1u);
        Vec shift = mode_apply(X, n + 1, u);
        shift *= Scalar(2 * *w - n - 2);
        Vec corr = mode_apply(yl1x, n, u);
        if (xnu.truncated || l1_xnu.truncated || l1u.truncated || xn_l1u.truncated ||
            shift.truncated || corr.truncated) {
          ++rep.skipped_truncated;
          continue;
        }
        ++rep.checked;
        Vec diff = l1_xnu - xn_l1u;
        diff -= shift;
        diff -= corr;
        if (!diff.is_zero()) {
          rep.passed = false;
          if (rep.witnesses.size() < 8) {
            std::ostringstream os;
            os << tag << ": L1 relation fails at mode " << n << " on "
               << sp.label(udeg, ui);
            rep.witnesses.push_back(os.str());
          }
        }
      }
    }
  }
}

}  // namespace

L1ClosureReport l1_closure_check(const FieldTable& A, const FieldTable& B, int n,
                                 const VAStructure& va) {
  L1ClosureReport rep;
  check_l1_relation(A, va, rep, "A");
  check_l1_relation(B, va, rep, "B");
  if (!rep.passed) return rep;  // precondition failed; no point in the product
  FieldTable prod = n_product(A, B, n);
  check_l1_relation(prod, va, rep, "A_(" + std::to_string(n) + ")B");
  return rep;
}

}  // namespace voa
