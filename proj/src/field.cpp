#include "voa/field.hpp"

#include <algorithm>
#include <sstream>

#include "voa/errors.hpp"

namespace voa {

namespace {

bool degree_nonzero(const Vec& v, int degree) {
  if (degree < 0 || degree >= static_cast<int>(v.comp.size())) return false;
  for (const auto& x : v.comp[degree])
    if (x != 0) return true;
  return false;
}

}  // namespace

BlockStatus FieldTable::Component::status(int n, int src, int depth) const {
  const int t = target(n, src);
  if (t < 0) return BlockStatus::zero;
  if (t > depth) return BlockStatus::unknown;
  if (holes.count({n, src})) return BlockStatus::unknown;
  return BlockStatus::exact;
}

FieldTable FieldTable::zero(SpacePtr space) {
  FieldTable f;
  f.space_ = std::move(space);
  return f;
}

FieldTable FieldTable::identity(SpacePtr space) {
  FieldBuilder b(space, 0);
  for (int m = 0; m <= space->depth(); ++m) {
    if (space->dim(m) == 0) continue;
    b.set_block(-1, m, RatMatrix::identity(space->dim(m)));
  }
  return b.build("Id");
}

bool FieldTable::is_zero_table() const {
  for (const auto& c : comps_)
    if (!c.blocks.empty()) return false;
  return true;
}

std::optional<int> FieldTable::weight() const {
  if (comps_.size() == 1) return comps_[0].weight;
  return std::nullopt;
}

BlockStatus FieldTable::status(int n, int src) const {
  const int depth = space_->depth();
  BlockStatus agg = BlockStatus::zero;
  for (const auto& c : comps_) {
    switch (c.status(n, src, depth)) {
      case BlockStatus::unknown:
        return BlockStatus::unknown;
      case BlockStatus::exact:
        agg = BlockStatus::exact;
        break;
      case BlockStatus::zero:
        break;
    }
  }
  return agg;
}

int FieldTable::min_mode() const {
  // A_(n) maps V(src) to V(src + w - n - 1); nonzero needs both in [0, D].
  int lo = 0;
  for (const auto& c : comps_) lo = std::min(lo, c.weight - 1 - space_->depth());
  return lo;
}

int FieldTable::max_mode() const {
  int hi = 0;
  for (const auto& c : comps_) hi = std::max(hi, space_->depth() + c.weight - 1);
  return hi;
}

FieldBuilder::FieldBuilder(SpacePtr space, int weight) : space_(std::move(space)) {
  comp_.weight = weight;
}

void FieldBuilder::set_block(int n, int src_degree, RatMatrix block) {
  const int t = comp_.target(n, src_degree);
  if (t < 0 || t > space_->depth())
    throw InvariantViolation("block_window",
                             "mode block target outside the truncation window");
  if (block.rows() != space_->dim(t) || block.cols() != space_->dim(src_degree))
    throw InvariantViolation("block_shape", "mode block shape violates the grading shift");
  if (block.is_zero()) return;
  comp_.blocks[{n, src_degree}] = std::move(block);
}

void FieldBuilder::mark_hole(int n, int src_degree) {
  comp_.holes.insert({n, src_degree});
}

FieldTable FieldBuilder::build(std::string name) {
  FieldTable f;
  f.space_ = space_;
  if (!comp_.blocks.empty() || !comp_.holes.empty() || true)
    f.comps_.push_back(comp_);
  f.name = std::move(name);
  return f;
}

FieldTable combine(const std::vector<std::pair<Scalar, const FieldTable*>>& terms) {
  FieldTable out;
  std::map<int, FieldTable::Component> by_weight;
  for (const auto& [coef, field] : terms) {
    if (!out.space_) out.space_ = field->space_;
    if (out.space_.get() != field->space_.get())
      throw InvariantViolation("space_mismatch", "combining fields over different spaces");
    if (coef == 0) continue;  // 0 * A is exactly zero, holes and all
    for (const auto& c : field->comps_) {
      auto& acc = by_weight.try_emplace(c.weight).first->second;
      acc.weight = c.weight;
      for (const auto& h : c.holes) acc.holes.insert(h);
      for (const auto& [key, blk] : c.blocks) {
        auto it = acc.blocks.find(key);
        if (it == acc.blocks.end()) {
          RatMatrix m = blk;
          m *= coef;
          acc.blocks.emplace(key, std::move(m));
        } else {
          RatMatrix m = blk;
          m *= coef;
          it->second += m;
        }
      }
    }
  }
  for (auto& [w, comp] : by_weight) {
    // Drop blocks that cancelled exactly.
    for (auto it = comp.blocks.begin(); it != comp.blocks.end();) {
      if (it->second.is_zero())
        it = comp.blocks.erase(it);
      else
        ++it;
    }
    if (!comp.blocks.empty() || !comp.holes.empty()) out.comps_.push_back(std::move(comp));
  }
  return out;
}

Vec mode_apply(const FieldTable& A, int n_unshifted, const Vec& v) {
  const GradedSpace& sp = *A.space();
  if (v.space.get() != &sp)
    throw InvariantViolation("space_mismatch", "mode_apply across different spaces");
  Vec out = sp.zero_vector();
  out.truncated = v.truncated;
  const int depth = sp.depth();
  for (const auto& comp : A.components()) {
    for (int src = 0; src <= depth; ++src) {
      if (!degree_nonzero(v, src)) continue;
      switch (comp.status(n_unshifted, src, depth)) {
        case BlockStatus::zero:
          break;
        case BlockStatus::unknown:
          out.truncated = true;
          break;
        case BlockStatus::exact: {
          auto it = comp.blocks.find({n_unshifted, src});
          if (it == comp.blocks.end()) break;  // exact zero
          const int t = comp.target(n_unshifted, src);
          auto y = it->second.apply(v.comp[src]);
          for (int i = 0; i < sp.dim(t); ++i) out.comp[t][i] += y[i];
          break;
        }
      }
    }
  }
  return out;
}

Vec shifted_mode_apply(const FieldTable& A, int n_shifted, const Vec& v) {
  if (A.components().empty()) {
    Vec out = A.space()->zero_vector();
    out.truncated = v.truncated;
    return out;
  }
  auto w = A.weight();
  if (!w)
    throw UndefinedWeight("shifted mode of a non-homogeneous field (" + A.name + ")");
  return mode_apply(A, n_shifted + *w - 1, v);
}

Vec shifted_mode_apply_linear(const FieldTable& A, int n_shifted, const Vec& v) {
  Vec out = A.space()->zero_vector();
  out.truncated = v.truncated;
  for (const auto& comp : A.components()) {
    const GradedSpace& sp = *A.space();
    const int n_unshifted = n_shifted + comp.weight - 1;
    for (int src = 0; src <= sp.depth(); ++src) {
      if (!degree_nonzero(v, src)) continue;
      switch (comp.status(n_unshifted, src, sp.depth())) {
        case BlockStatus::zero:
          break;
        case BlockStatus::unknown:
          out.truncated = true;
          break;
        case BlockStatus::exact: {
          auto it = comp.blocks.find({n_unshifted, src});
          if (it == comp.blocks.end()) break;
          const int t = comp.target(n_unshifted, src);
          auto y = it->second.apply(v.comp[src]);
          for (int i = 0; i < sp.dim(t); ++i) out.comp[t][i] += y[i];
          break;
        }
      }
    }
  }
  return out;
}

FieldTable derivative(const FieldTable& A) {
  FieldTable out = FieldTable::zero(A.space());
  for (const auto& comp : A.components()) {
    FieldBuilder b(A.space(), comp.weight + 1);
    for (const auto& [key, blk] : comp.blocks) {
      const int m = key.n + 1;  // (dA)_(m) = -m A_(m-1)
      if (m == 0) continue;
      RatMatrix scaled = blk;
      scaled *= Scalar(-m);
      b.set_block(m, key.src, std::move(scaled));
    }
    for (const auto& h : comp.holes) {
      const int m = h.n + 1;
      if (m == 0) continue;  // factor -m = 0 makes the entry exactly zero
      b.mark_hole(m, h.src);
    }
    FieldTable piece = b.build();
    out = combine({{Scalar(1), &out}, {Scalar(1), &piece}});
  }
  out.name = A.name.empty() ? std::string() : "d(" + A.name + ")";
  return out;
}

namespace {

// One homogeneous-by-homogeneous (n)-product component.
void n_product_component(const GradedSpace& sp, const FieldTable::Component& ca,
                         const FieldTable::Component& cb, int n, FieldBuilder& out,
                         std::vector<std::string>* hole_notes) {
  const int depth = sp.depth();
  const int da = ca.weight, db = cb.weight;
  const int d = da + db - n - 1;
  for (int p = 0; p <= depth; ++p) {
    if (sp.dim(p) == 0) continue;
    const int m_lo = p + d - 1 - depth;
    const int m_hi = p + d - 1;
    for (int m = m_lo; m <= m_hi; ++m) {
      const int t = p + d - m - 1;
      if (sp.dim(t) == 0) continue;
      bool hole = false;
      RatMatrix acc(sp.dim(t), sp.dim(p));
      // First series: sum_j (-1)^j C(n,j) A_(n-j) B_(m+j).
      for (int j = 0;; ++j) {
        if (n >= 0 && j > n) break;
        const int t1 = cb.target(m + j, p);
        if (t1 < 0) break;  // B annihilates from here on
        Scalar c = binomial(n, j);
        if ((j & 1) != 0) c = -c;
        if (c == 0) continue;
        const auto sb = cb.status(m + j, p, depth);
        if (sb == BlockStatus::unknown) {
          hole = true;
          break;
        }
        auto itb = cb.blocks.find({m + j, p});
        if (itb == cb.blocks.end()) continue;  // exact zero
        const auto sa = ca.status(n - j, t1, depth);
        if (sa == BlockStatus::unknown) {
          hole = true;
          break;
        }
        if (sa == BlockStatus::zero) continue;
        auto ita = ca.blocks.find({n - j, t1});
        if (ita == ca.blocks.end()) continue;
        RatMatrix term = ita->second * itb->second;
        term *= c;
        acc += term;
      }
      // Second series: -(-1)^n sum_j (-1)^j C(n,j) B_(n+m-j) A_(j).
      if (!hole) {
        for (int j = 0;; ++j) {
          if (n >= 0 && j > n) break;
          const int t2 = ca.target(j, p);
          if (t2 < 0) break;  // A annihilates from here on
          Scalar c = binomial(n, j);
          if (((j + n) & 1) != 0) c = -c;  // (-1)^j * (-1)^n, sign applied below
          if (c == 0) continue;
          const auto sa = ca.status(j, p, depth);
          if (sa == BlockStatus::unknown) {
            hole = true;
            break;
          }
          auto ita = ca.blocks.find({j, p});
          if (ita == ca.blocks.end()) continue;
          const auto sb = cb.status(n + m - j, t2, depth);
          if (sb == BlockStatus::unknown) {
            hole = true;
            break;
          }
          if (sb == BlockStatus::zero) continue;
          auto itb = cb.blocks.find({n + m - j, t2});
          if (itb == cb.blocks.end()) continue;
          RatMatrix term = itb->second * ita->second;
          term *= -c;
          acc += term;
        }
      }
      if (hole) {
        out.mark_hole(m, p);
        if (hole_notes && hole_notes->size() < 8) {
          std::ostringstream os;
          os << "entry (m=" << m << ", src=" << p << ") needs degrees beyond the window";
          hole_notes->push_back(os.str());
        }
      } else if (!acc.is_zero()) {
        out.set_block(m, p, std::move(acc));
      }
    }
  }
}

}  // namespace

FieldTable n_product(const FieldTable& A, const FieldTable& B, int n, bool require_exact) {
  if (A.space().get() != B.space().get())
    throw InvariantViolation("space_mismatch", "(n)-product across different spaces");
  const GradedSpace& sp = *A.space();
  std::vector<std::string> hole_notes;
  FieldTable out = FieldTable::zero(A.space());
  // Bilinear over graded components; same product weight accumulates.
  std::map<int, std::vector<std::pair<const FieldTable::Component*, const FieldTable::Component*>>>
      grouped;
  for (const auto& ca : A.components())
    for (const auto& cb : B.components())
      grouped[ca.weight + cb.weight - n - 1].push_back({&ca, &cb});
  std::vector<FieldTable> pieces;
  for (const auto& [w, pairs] : grouped) {
    FieldBuilder b(A.space(), w);
    for (const auto& [ca, cb] : pairs)
      n_product_component(sp, *ca, *cb, n, b, &hole_notes);
    pieces.push_back(b.build());
  }
  std::vector<std::pair<Scalar, const FieldTable*>> terms;
  for (const auto& piece : pieces) terms.push_back({Scalar(1), &piece});
  if (!terms.empty()) out = combine(terms);
  if (require_exact && !hole_notes.empty()) {
    std::ostringstream os;
    os << "(n)-product with n=" << n << " is not exact at this depth:";
    for (const auto& note : hole_notes) os << " " << note << ";";
    throw HeadroomExceeded(os.str());
  }
  std::ostringstream nm;
  nm << "(" << (A.name.empty() ? "A" : A.name) << "_(" << n << ")"
     << (B.name.empty() ? "B" : B.name) << ")";
  out.name = nm.str();
  return out;
}

BorcherdsCommutator make_borcherds_commutator(const FieldTable& A, const FieldTable& B) {
  auto wa = A.weight(), wb = B.weight();
  if (!wa || !wb)
    throw UndefinedWeight("Borcherds commutator needs homogeneous fields");
  BorcherdsCommutator bc;
  bc.weight_a = *wa;
  bc.weight_b = *wb;
  const int smax = *wa + *wb - 1;
  for (int s = 0; s <= smax; ++s) bc.products.push_back(n_product(A, B, s));
  return bc;
}

Vec BorcherdsCommutator::apply(int m_shifted, int n_shifted, const Vec& v) const {
  Vec out = v.space->zero_vector();
  out.truncated = v.truncated;
  for (int s = 0; s < static_cast<int>(products.size()); ++s) {
    Scalar c = binomial(m_shifted + weight_a - 1, s);
    if (c == 0) continue;
    Vec term = shifted_mode_apply_linear(products[s], m_shifted + n_shifted, v);
    term *= c;
    out += term;
  }
  return out;
}

Vec commutator_direct(const FieldTable& A, const FieldTable& B, int m_shifted,
                      int n_shifted, const Vec& v) {
  Vec bn = shifted_mode_apply(B, n_shifted, v);
  Vec ab = shifted_mode_apply(A, m_shifted, bn);
  Vec am = shifted_mode_apply(A, m_shifted, v);
  Vec ba = shifted_mode_apply(B, n_shifted, am);
  return ab - ba;
}

LocalityResult locality_order(const FieldTable& A, const FieldTable& B, int n_max) {
  const GradedSpace& sp = *A.space();
  const int depth = sp.depth();
  LocalityResult res;
  res.n_max_checked = n_max;

  std::vector<LocalityWitness> failures;
  for (int N = 0; N <= n_max; ++N) {
    bool all_zero = true;
    failures.clear();
    const int lo = -depth - N, hi = depth;
    for (int deg = 0; deg <= depth; ++deg) {
      for (int idx = 0; idx < sp.dim(deg); ++idx) {
        Vec v = sp.basis_vector(deg, idx);
        for (int p = lo; p <= hi; ++p) {
          for (int q = lo; q <= hi; ++q) {
            Vec residual = sp.zero_vector();
            bool valid = true;
            for (int k = 0; k <= N && valid; ++k) {
              Vec term = commutator_direct(A, B, p + N - k, q + k, v);
              if (term.truncated) {
                valid = false;
                break;
              }
              Scalar c = binomial(N, k);
              if ((k & 1) != 0) c = -c;
              term *= c;
              residual += term;
            }
            if (!valid) {
              ++res.instances_skipped;
              continue;
            }
            ++res.instances_checked;
            if (!residual.is_zero()) {
              all_zero = false;
              if (failures.size() < 8) failures.push_back({N, p, q, deg, idx});
            }
          }
        }
      }
    }
    if (all_zero) {
      res.order = N;
      return res;
    }
    res.last_failures = failures;
  }
  return res;  // NotLocalUpTo(n_max): order remains nullopt
}

CovarianceReport covariance_check(const FieldTable& A, int d) {
  const GradedSpace& sp = *A.space();
  const int depth = sp.depth();
  CovarianceReport rep;
  for (int k = -1; k <= 1; ++k) {
    for (int m = -depth - 1; m <= depth + 1; ++m) {
      for (int deg = 0; deg <= depth; ++deg) {
        for (int i = 0; i < sp.dim(deg); ++i) {
          Vec v = sp.basis_vector(deg, i);
          // [L_k, A_m] v computed by composition.
          Vec amv = mode_apply(A, m + d - 1, v);
          Vec lk_amv = apply_sl2(k, amv);
          Vec lkv = apply_sl2(k, v);
          Vec am_lkv = mode_apply(A, m + d - 1, lkv);
          Vec rhs = mode_apply(A, m + k + d - 1, v);
          rhs *= Scalar(k * (d - 1) - m);
          if (amv.truncated || lk_amv.truncated || lkv.truncated || am_lkv.truncated ||
              rhs.truncated) {
            ++rep.instances_skipped;
            continue;
          }
          ++rep.instances_checked;
          Vec diff = lk_amv - am_lkv;
          diff -= rhs;
          if (!diff.is_zero()) {
            rep.passed = false;
            if (rep.violations.size() < 16) {
              CovarianceViolation viol;
              viol.k = k;
              viol.m = m;
              viol.degree = deg;
              viol.index = i;
              viol.detail = "[L_k, A_m]v != (k(d-1)-m) A_{m+k} v for " + sp.label(deg, i);
              rep.violations.push_back(viol);
            }
          }
        }
      }
    }
  }
  return rep;
}

std::vector<FieldMismatch> field_mismatches(const FieldTable& A, const FieldTable& B,
                                            std::size_t max_reported) {
  std::vector<FieldMismatch> out;
  const GradedSpace& sp = *A.space();
  const int depth = sp.depth();
  // Collect the union of component weights.
  std::set<int> weights;
  for (const auto& c : A.components()) weights.insert(c.weight);
  for (const auto& c : B.components()) weights.insert(c.weight);
  for (int w : weights) {
    const FieldTable::Component* ca = nullptr;
    const FieldTable::Component* cb = nullptr;
    for (const auto& c : A.components())
      if (c.weight == w) ca = &c;
    for (const auto& c : B.components())
      if (c.weight == w) cb = &c;
    FieldTable::Component empty;
    empty.weight = w;
    if (!ca) ca = &empty;
    if (!cb) cb = &empty;
    for (int src = 0; src <= depth; ++src) {
      if (sp.dim(src) == 0) continue;
      const int n_lo = src + w - 1 - depth, n_hi = src + w - 1;
      for (int n = n_lo; n <= n_hi; ++n) {
        if (sp.dim(ca->target(n, src)) == 0) continue;
        const auto sa = ca->status(n, src, depth);
        const auto sb = cb->status(n, src, depth);
        if (sa != BlockStatus::exact || sb != BlockStatus::exact) continue;
        auto ita = ca->blocks.find({n, src});
        auto itb = cb->blocks.find({n, src});
        const bool za = (ita == ca->blocks.end());
        const bool zb = (itb == cb->blocks.end());
        bool equal;
        if (za && zb)
          equal = true;
        else if (za)
          equal = itb->second.is_zero();
        else if (zb)
          equal = ita->second.is_zero();
        else
          equal = (ita->second == itb->second);
        if (!equal) {
          if (out.size() >= max_reported) return out;
          std::ostringstream os;
          os << "blocks differ at weight " << w << ", mode " << n << ", source degree " << src;
          out.push_back({w, {n, src}, os.str()});
        }
      }
    }
  }
  return out;
}

bool fields_equal_on_common_window(const FieldTable& A, const FieldTable& B) {
  return field_mismatches(A, B, 1).empty();
}

}  // namespace voa
