#include "voa/models.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "voa/errors.hpp"

namespace voa {

namespace {

using Partition = std::vector<int>;           // parts, descending
using Combo = std::map<Partition, Scalar>;    // exact linear combination

void add_to(Combo& c, const Partition& p, const Scalar& s) {
  if (s == 0) return;
  auto [it, inserted] = c.emplace(p, s);
  if (!inserted) {
    it->second += s;
    if (it->second == 0) c.erase(it);
  }
}

Partition insert_part(Partition p, int part) {
  auto it = std::upper_bound(p.begin(), p.end(), part, std::greater<int>());
  p.insert(it, part);
  return p;
}

int degree_of(const Partition& p) {
  int d = 0;
  for (int x : p) d += x;
  return d;
}

std::string monomial_label(const Partition& p, const char* symbol) {
  if (p.empty()) return "|0>";
  std::ostringstream os;
  for (size_t i = 0; i < p.size();) {
    size_t j = i;
    while (j < p.size() && p[j] == p[i]) ++j;
    os << symbol << "(-" << p[i] << ")";
    if (j - i > 1) os << "^" << (j - i);
    i = j;
  }
  os << "|0>";
  return os.str();
}

void enumerate_partitions(int n, int max_part, int min_part, Partition& acc,
                          std::vector<Partition>& out) {
  if (n == 0) {
    out.push_back(acc);
    return;
  }
  for (int part = std::min(n, max_part); part >= min_part; --part) {
    acc.push_back(part);
    enumerate_partitions(n - part, part, min_part, acc, out);
    acc.pop_back();
  }
}

// ----- Heisenberg --------------------------------------------------------

// a_k on a partition monomial: creation inserts a part, annihilation
// contracts against an equal part with coefficient k * multiplicity.
Combo alpha_apply(int k, const Partition& p) {
  Combo out;
  if (k == 0) return out;
  if (k < 0) {
    add_to(out, insert_part(p, -k), Scalar(1));
    return out;
  }
  int mult = static_cast<int>(std::count(p.begin(), p.end(), k));
  if (mult == 0) return out;
  Partition q = p;
  q.erase(std::find(q.begin(), q.end(), k));
  add_to(out, q, Scalar(static_cast<long>(k) * mult));
  return out;
}

// <lambda, mu> from the commutators: strip the largest part of lambda and
// contract it through mu.
Scalar heis_gram(const Partition& lambda, const Partition& mu,
                 std::map<std::pair<Partition, Partition>, Scalar>& memo) {
  if (lambda.empty()) return mu.empty() ? Scalar(1) : Scalar(0);
  auto key = std::make_pair(lambda, mu);
  auto it = memo.find(key);
  if (it != memo.end()) return it->second;
  const int p = lambda.front();
  Partition rest(lambda.begin() + 1, lambda.end());
  Scalar acc = 0;
  Combo contracted = alpha_apply(p, mu);
  for (const auto& [q, coef] : contracted) acc += coef * heis_gram(rest, q, memo);
  memo.emplace(std::move(key), acc);
  return acc;
}

// Sugawara sl2 action on the Fock basis.
// L_-1 = sum_{j>=1} a_{-j-1} a_j ; L_1 = sum_{j>=2} a_{-(j-1)} a_j.
Combo heis_sl2(int k, const Partition& p) {
  Combo out;
  std::map<int, int> mult;
  for (int part : p) ++mult[part];
  for (const auto& [part, count] : mult) {
    if (k == -1) {
      Partition q = p;
      q.erase(std::find(q.begin(), q.end(), part));
      add_to(out, insert_part(q, part + 1), Scalar(static_cast<long>(part) * count));
    } else if (k == 1 && part >= 2) {
      Partition q = p;
      q.erase(std::find(q.begin(), q.end(), part));
      add_to(out, insert_part(q, part - 1), Scalar(static_cast<long>(part) * count));
    }
  }
  return out;
}

// ----- Virasoro ----------------------------------------------------------

struct VirasoroCalc {
  Scalar c;
  std::map<std::pair<int, Partition>, Combo> memo;

  // L_m applied to a normal-ordered monomial with parts >= 2; the result is
  // again a combination of such monomials (L_-1 |0> = 0 in the quotient).
  const Combo& apply(int m, const Partition& mono) {
    auto key = std::make_pair(m, mono);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    Combo out;
    if (mono.empty()) {
      if (m <= -2) add_to(out, Partition{-m}, Scalar(1));
      // L_m |0> = 0 for m >= -1 (Moebius invariance plus the quotient).
    } else {
      const int head = mono.front();
      Partition rest(mono.begin() + 1, mono.end());
      if (m <= -2 && -m >= head) {
        add_to(out, insert_part(mono, -m), Scalar(1));
      } else {
        // L_m L_{-head} = L_{-head} L_m + (m + head) L_{m-head}
        //                 + delta_{m,head} (c/12)(m^3 - m).
        for (const auto& [mu, coef] : apply(m, rest)) {
          for (const auto& [nu, coef2] : apply(-head, mu)) add_to(out, nu, coef * coef2);
        }
        for (const auto& [mu, coef] : apply(m - head, rest))
          add_to(out, mu, Scalar(m + head) * coef);
        if (m == head) {
          Scalar central = c / 12 * Scalar(static_cast<long>(m) * m * m - m);
          add_to(out, rest, central);
        }
      }
    }
    auto [stored, _] = memo.emplace(std::make_pair(m, mono), std::move(out));
    return stored->second;
  }

  Scalar gram(const Partition& lambda, const Partition& mu) {
    if (lambda.empty()) return mu.empty() ? Scalar(1) : Scalar(0);
    const int p = lambda.front();
    Partition rest(lambda.begin() + 1, lambda.end());
    Scalar acc = 0;
    for (const auto& [q, coef] : apply(p, mu)) acc += coef * gram(rest, q);
    return acc;
  }
};

// ----- shared assembly ---------------------------------------------------

struct BasisIndex {
  std::vector<std::vector<Partition>> by_degree;
  std::vector<std::map<Partition, int>> index;

  int dim(int n) const { return static_cast<int>(by_degree[n].size()); }
};

BasisIndex enumerate_basis(int depth, int min_part) {
  BasisIndex b;
  b.by_degree.resize(depth + 1);
  b.index.resize(depth + 1);
  for (int n = 0; n <= depth; ++n) {
    Partition acc;
    enumerate_partitions(n, n, min_part, acc, b.by_degree[n]);
    for (int i = 0; i < static_cast<int>(b.by_degree[n].size()); ++i)
      b.index[n][b.by_degree[n][i]] = i;
  }
  return b;
}

// Builds the matrix of a degree-shifting operator from its action on basis
// monomials. Components outside the target degree are a bug, not truncation,
// so they are asserted away.
template <class Action>
RatMatrix operator_matrix(const BasisIndex& basis, int src_degree, int dst_degree,
                          Action&& action) {
  RatMatrix m(basis.dim(dst_degree), basis.dim(src_degree));
  for (int j = 0; j < basis.dim(src_degree); ++j) {
    Combo image = action(basis.by_degree[src_degree][j]);
    for (const auto& [part, coef] : image) {
      if (degree_of(part) != dst_degree)
        throw InvariantViolation("grading", "operator image escaped its target degree");
      m.at(basis.index[dst_degree].at(part), j) = coef;
    }
  }
  return m;
}

}  // namespace

Vec ThetaMap::apply(const Vec& v) const {
  Vec out = space->zero_vector();
  out.truncated = v.truncated;
  for (int n = 0; n <= space->depth(); ++n) {
    auto y = per_degree[n].apply(v.comp[n]);
    out.comp[n] = std::move(y);
  }
  return out;
}

std::vector<std::vector<int>> partitions(int n, int min_part) {
  std::vector<Partition> out;
  Partition acc;
  enumerate_partitions(n, n, min_part, acc, out);
  return out;
}

Model heisenberg(int depth) {
  if (depth < 0) throw InvariantViolation("depth", "depth must be >= 0");
  BasisIndex basis = enumerate_basis(depth, 1);

  GradedSpace::Data data;
  data.dims.resize(depth + 1);
  data.labels.resize(depth + 1);
  data.gram.resize(depth + 1);
  std::map<std::pair<Partition, Partition>, Scalar> gram_memo;
  for (int n = 0; n <= depth; ++n) {
    data.dims[n] = basis.dim(n);
    for (const auto& p : basis.by_degree[n]) data.labels[n].push_back(monomial_label(p, "a"));
    RatMatrix g(basis.dim(n), basis.dim(n));
    for (int i = 0; i < basis.dim(n); ++i)
      for (int j = i; j < basis.dim(n); ++j) {
        Scalar v = heis_gram(basis.by_degree[n][i], basis.by_degree[n][j], gram_memo);
        g.at(i, j) = v;
        g.at(j, i) = v;
      }
    data.gram[n] = std::move(g);
  }
  for (int n = 0; n < depth; ++n) {
    data.lower.push_back(operator_matrix(basis, n, n + 1,
                                         [](const Partition& p) { return heis_sl2(-1, p); }));
    data.raise.push_back(operator_matrix(basis, n + 1, n,
                                         [](const Partition& p) { return heis_sl2(1, p); }));
  }

  Model model;
  model.kind = "heisenberg";
  model.space = make_space(std::move(data));

  FieldBuilder jb(model.space, 1);
  for (int src = 0; src <= depth; ++src) {
    for (int n = src - depth; n <= src; ++n) {  // target = src - n in [0, D]
      jb.set_block(n, src,
                   operator_matrix(basis, src, src - n,
                                   [n](const Partition& p) { return alpha_apply(n, p); }));
    }
  }
  model.generators.push_back(jb.build("J"));

  model.theta.space = model.space;
  model.theta.per_degree.resize(depth + 1);
  for (int n = 0; n <= depth; ++n) {
    RatMatrix t(basis.dim(n), basis.dim(n));
    for (int i = 0; i < basis.dim(n); ++i) {
      const auto& p = basis.by_degree[n][i];
      t.at(i, i) = (p.size() % 2 == 0) ? Scalar(1) : Scalar(-1);
    }
    model.theta.per_degree[n] = std::move(t);
  }
  return model;
}

Model virasoro(const Scalar& c, int depth) {
  if (depth < 0) throw InvariantViolation("depth", "depth must be >= 0");
  BasisIndex basis = enumerate_basis(depth, 2);
  VirasoroCalc calc{c, {}};

  GradedSpace::Data data;
  data.dims.resize(depth + 1);
  data.labels.resize(depth + 1);
  data.gram.resize(depth + 1);
  for (int n = 0; n <= depth; ++n) {
    data.dims[n] = basis.dim(n);
    for (const auto& p : basis.by_degree[n]) data.labels[n].push_back(monomial_label(p, "L"));
    RatMatrix g(basis.dim(n), basis.dim(n));
    for (int i = 0; i < basis.dim(n); ++i)
      for (int j = i; j < basis.dim(n); ++j) {
        Scalar v = calc.gram(basis.by_degree[n][i], basis.by_degree[n][j]);
        g.at(i, j) = v;
        g.at(j, i) = v;
      }
    // Degeneracy is surfaced, never silently quotiented.
    if (basis.dim(n) > 0 && determinant(g) == 0)
      throw GramDegenerate(n, "Virasoro Gram form singular at level " + std::to_string(n) +
                                  " for c = " + to_string(c));
    data.gram[n] = std::move(g);
  }
  for (int n = 0; n < depth; ++n) {
    data.lower.push_back(operator_matrix(
        basis, n, n + 1, [&calc](const Partition& p) { return calc.apply(-1, p); }));
    data.raise.push_back(operator_matrix(
        basis, n + 1, n, [&calc](const Partition& p) { return calc.apply(1, p); }));
  }

  Model model;
  model.kind = "virasoro";
  // Positivity is a unitarity question that depends on c; the verification
  // suites decide it, so the space itself is built without that gate.
  model.space = make_space(std::move(data), GradedSpace::Checks::no_positivity());

  FieldBuilder tb(model.space, 2);
  for (int src = 0; src <= depth; ++src) {
    for (int n = src + 1 - depth; n <= src + 1; ++n) {  // target = src + 1 - n
      tb.set_block(n, src,
                   operator_matrix(basis, src, src + 1 - n, [&calc, n](const Partition& p) {
                     return calc.apply(n - 1, p);
                   }));
    }
  }
  model.generators.push_back(tb.build("T"));

  model.theta.space = model.space;
  model.theta.per_degree.resize(depth + 1);
  for (int n = 0; n <= depth; ++n)
    model.theta.per_degree[n] = RatMatrix::identity(basis.dim(n));
  return model;
}

Model ModelDescriptor::build() const {
  if (kind == "heisenberg") return heisenberg(depth);
  if (kind == "virasoro") return virasoro(central_charge, depth);
  throw ConfigError("unknown model kind: " + kind);
}

}  // namespace voa
