#include "voa/smear.hpp"

#include <algorithm>
#include <cmath>

#include "voa/errors.hpp"

namespace voa {

namespace {

constexpr double kPi = 3.14159265358979323846;

double wrap_angle(double theta) {
  // into (-pi, pi]
  double t = std::fmod(theta + kPi, 2.0 * kPi);
  if (t <= 0.0) t += 2.0 * kPi;
  return t - kPi;
}

Complex block_entry(const RatMatrix& m, int i, int j) {
  return Complex(m.at(i, j).get_d(), 0.0);
}

}  // namespace

Complex TrigPoly::eval(double theta) const {
  Complex acc(0.0);
  for (int n = -cutoff; n <= cutoff; ++n)
    acc += coeff(n) * std::polar(1.0, n * theta);
  return acc;
}

TrigPoly TrigPoly::truncated_to(int m) const {
  TrigPoly out(m);
  for (int n = -m; n <= m; ++n) out.set(n, coeff(n));
  return out;
}

TrigPoly TrigPoly::conjugated() const {
  TrigPoly out(cutoff);
  for (int n = -cutoff; n <= cutoff; ++n) out.set(n, std::conj(coeff(-n)));
  return out;
}

TrigPoly TrigPoly::rotated(double theta0) const {
  TrigPoly out(cutoff);
  for (int n = -cutoff; n <= cutoff; ++n)
    out.set(n, coeff(n) * std::polar(1.0, -n * theta0));
  return out;
}

TrigPoly TrigPoly::monomial(int n, Complex c) {
  TrigPoly out(std::abs(n));
  out.set(n, c);
  return out;
}

TrigPoly operator+(const TrigPoly& a, const TrigPoly& b) {
  TrigPoly out(std::max(a.cutoff, b.cutoff));
  for (int n = -out.cutoff; n <= out.cutoff; ++n) out.set(n, a.coeff(n) + b.coeff(n));
  return out;
}

TrigPoly operator*(Complex s, TrigPoly a) {
  for (auto& c : a.coef) c *= s;
  return a;
}

double sobolev_norm(const TrigPoly& f, double N) {
  double acc = 0.0;
  for (int n = -f.cutoff; n <= f.cutoff; ++n) {
    double mag = std::norm(f.coeff(n));
    if (mag == 0.0) continue;
    acc += mag * std::pow(1.0 + static_cast<double>(n) * n, N);
  }
  return std::sqrt(acc);
}

CVec& CVec::operator+=(const CVec& o) {
  truncated = truncated || o.truncated;
  for (size_t n = 0; n < comp.size(); ++n)
    for (size_t i = 0; i < comp[n].size(); ++i) comp[n][i] += o.comp[n][i];
  return *this;
}

CVec& CVec::operator-=(const CVec& o) {
  truncated = truncated || o.truncated;
  for (size_t n = 0; n < comp.size(); ++n)
    for (size_t i = 0; i < comp[n].size(); ++i) comp[n][i] -= o.comp[n][i];
  return *this;
}

CVec& CVec::operator*=(Complex s) {
  for (auto& c : comp)
    for (auto& x : c) x *= s;
  return *this;
}

CVec zero_cvec(const SpacePtr& space) {
  CVec v;
  v.space = space;
  v.comp.resize(space->depth() + 1);
  for (int n = 0; n <= space->depth(); ++n)
    v.comp[n].assign(space->dim(n), Complex(0.0));
  return v;
}

CVec to_cvec(const Vec& v) {
  CVec out = zero_cvec(v.space);
  out.truncated = v.truncated;
  for (size_t n = 0; n < v.comp.size(); ++n)
    for (size_t i = 0; i < v.comp[n].size(); ++i)
      out.comp[n][i] = Complex(v.comp[n][i].get_d(), 0.0);
  return out;
}

Complex cinner(const CVec& u, const CVec& v) {
  const GradedSpace& sp = *u.space;
  Complex acc(0.0);
  for (int n = 0; n <= sp.depth(); ++n) {
    const auto& g = sp.gram(n);
    for (int i = 0; i < sp.dim(n); ++i) {
      if (u.comp[n][i] == Complex(0.0)) continue;
      for (int j = 0; j < sp.dim(n); ++j) {
        if (g.at(i, j) == 0) continue;
        acc += u.comp[n][i] * g.at(i, j).get_d() * std::conj(v.comp[n][j]);
      }
    }
  }
  return acc;
}

double cnorm(const CVec& v) { return std::sqrt(std::abs(cinner(v, v).real())); }

CVec apply_sl2_c(int k, const CVec& v) {
  const GradedSpace& sp = *v.space;
  CVec out = zero_cvec(v.space);
  out.truncated = v.truncated;
  for (int n = 0; n <= sp.depth(); ++n) {
    bool nonzero = false;
    for (const auto& x : v.comp[n])
      if (x != Complex(0.0)) nonzero = true;
    if (!nonzero) continue;
    if (k == 0) {
      for (int i = 0; i < sp.dim(n); ++i)
        out.comp[n][i] += static_cast<double>(n) * v.comp[n][i];
    } else if (k == -1) {
      if (n == sp.depth()) {
        out.truncated = true;
        continue;
      }
      const RatMatrix& m = *sp.lower(n);
      for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
          if (m.at(i, j) != 0) out.comp[n + 1][i] += block_entry(m, i, j) * v.comp[n][j];
    } else if (k == 1) {
      if (n == 0) continue;
      const RatMatrix& m = *sp.raise(n);
      for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
          if (m.at(i, j) != 0) out.comp[n - 1][i] += block_entry(m, i, j) * v.comp[n][j];
    } else {
      throw InvariantViolation("sl2_index", "apply_sl2_c expects k in {-1, 0, 1}");
    }
  }
  return out;
}

CVec rotate_states(const CVec& v, double theta) {
  CVec out = v;
  for (int n = 0; n < static_cast<int>(out.comp.size()); ++n) {
    Complex phase = std::polar(1.0, n * theta);
    for (auto& x : out.comp[n]) x *= phase;
  }
  return out;
}

CVec smear_apply(const FieldTable& A, const TrigPoly& f, const CVec& u) {
  const GradedSpace& sp = *A.space();
  CVec out = zero_cvec(u.space);
  out.truncated = u.truncated;
  const int depth = sp.depth();
  for (const auto& comp : A.components()) {
    for (int n = -f.cutoff; n <= f.cutoff; ++n) {
      Complex c = f.coeff(n);
      if (c == Complex(0.0)) continue;
      const int n_unshifted = n + comp.weight - 1;
      for (int src = 0; src <= depth; ++src) {
        bool nonzero = false;
        for (const auto& x : u.comp[src])
          if (x != Complex(0.0)) nonzero = true;
        if (!nonzero) continue;
        switch (comp.status(n_unshifted, src, depth)) {
          case BlockStatus::zero:
            break;
          case BlockStatus::unknown:
            out.truncated = true;
            break;
          case BlockStatus::exact: {
            auto it = comp.blocks.find({n_unshifted, src});
            if (it == comp.blocks.end()) break;
            const int t = comp.target(n_unshifted, src);
            const RatMatrix& m = it->second;
            for (int i = 0; i < m.rows(); ++i)
              for (int j = 0; j < m.cols(); ++j)
                if (m.at(i, j) != 0)
                  out.comp[t][i] += c * block_entry(m, i, j) * u.comp[src][j];
            break;
          }
        }
      }
    }
  }
  return out;
}

CVec smear_apply(const FieldTable& A, const TrigPoly& f, const Vec& u) {
  return smear_apply(A, f, to_cvec(u));
}

// ----- bumps ----------------------------------------------------------------

double bump_eval(const BumpSpec& spec, double theta) {
  double t = wrap_angle(theta - spec.center) / spec.half_width;
  if (t <= -1.0 || t >= 1.0) return 0.0;
  return spec.amplitude * std::exp(-1.0 / (1.0 - t * t));
}

namespace {

struct Integrand {
  const BumpSpec& spec;
  int n;
  Complex operator()(double theta) const {
    return bump_eval(spec, theta) * std::polar(1.0, -n * theta);
  }
};

Complex simpson(const Integrand& f, double a, double b, Complex fa, Complex fm, Complex fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

Complex adaptive_simpson(const Integrand& f, double a, double b, Complex fa, Complex fm,
                         Complex fb, Complex whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  Complex flm = f(lm), frm = f(rm);
  Complex left = simpson(f, a, m, fa, flm, fm);
  Complex right = simpson(f, m, b, fm, frm, fb);
  Complex delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, tol * 0.5, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, tol * 0.5, depth - 1);
}

}  // namespace

TrigPoly bump_fourier(const BumpSpec& spec, int cutoff, double rel_tol) {
  TrigPoly out(cutoff);
  const double a = spec.center - spec.half_width;
  const double b = spec.center + spec.half_width;
  // Scale for the relative tolerance: the bump integral itself.
  const double scale = std::abs(spec.amplitude) * spec.half_width * 0.444 + 1e-300;
  for (int n = -cutoff; n <= cutoff; ++n) {
    Integrand f{spec, n};
    Complex fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    Complex whole = simpson(f, a, b, fa, fm, fb);
    Complex integral = adaptive_simpson(f, a, b, fa, fm, fb, whole, rel_tol * scale, 48);
    out.set(n, integral / (2.0 * kPi));
  }
  return out;
}

void require_disjoint_supports(const BumpSpec& f, const BumpSpec& g, int grid) {
  // The bumps vanish identically outside their arcs, so any nonzero
  // pointwise product on the grid witnesses an overlap.
  for (int j = 0; j < grid; ++j) {
    double theta = 2.0 * kPi * j / grid;
    if (std::abs(bump_eval(f, theta)) * std::abs(bump_eval(g, theta)) > 0.0)
      throw SupportOverlap("test-function supports overlap on the sample grid");
  }
}

// ----- Moebius --------------------------------------------------------------

MoebiusElement MoebiusElement::rotation(double theta) {
  return {std::polar(1.0, 0.5 * theta), Complex(0.0)};
}

MoebiusElement MoebiusElement::make(Complex a, Complex b) {
  double det = std::norm(a) - std::norm(b);
  if (det <= 0.0)
    throw InvariantViolation("moebius", "|a|^2 - |b|^2 must be positive");
  double s = 1.0 / std::sqrt(det);
  return {a * s, b * s};
}

MoebiusElement MoebiusElement::compose(const MoebiusElement& o) const {
  return {a * o.a + b * std::conj(o.b), a * o.b + b * std::conj(o.a)};
}

Complex MoebiusElement::apply(Complex z) const {
  return (a * z + b) / (std::conj(b) * z + std::conj(a));
}

double MoebiusElement::x_gamma(double theta) const {
  // X(e^{i t}) = z gamma'(z) / gamma(z) with gamma'(z) = 1/(conj(b) z + conj(a))^2.
  Complex z = std::polar(1.0, theta);
  Complex denom = std::conj(b) * z + std::conj(a);
  Complex x = z / ((a * z + b) * denom);
  return x.real();
}

TrigPoly beta_action(const MoebiusElement& gamma, int d, const TrigPoly& f, int out_cutoff) {
  if (out_cutoff < f.cutoff)
    throw InvariantViolation("beta_action", "out_cutoff must be >= input cutoff");
  const int grid = std::max(8, 4 * out_cutoff);
  MoebiusElement inv = gamma.inverse();
  std::vector<Complex> samples(grid);
  for (int j = 0; j < grid; ++j) {
    double theta = 2.0 * kPi * j / grid;
    Complex w = inv.apply(std::polar(1.0, theta));
    double phi = std::arg(w);
    double x = gamma.x_gamma(phi);
    if (!(x > 0.0))
      throw NonPositiveXGamma("X_gamma <= 0 at sample angle " + std::to_string(phi));
    samples[j] = std::pow(x, d - 1) * f.eval(phi);
  }
  TrigPoly out(out_cutoff);
  for (int n = -out_cutoff; n <= out_cutoff; ++n) {
    Complex acc(0.0);
    for (int j = 0; j < grid; ++j) {
      double theta = 2.0 * kPi * j / grid;
      acc += samples[j] * std::polar(1.0, -n * theta);
    }
    out.set(n, acc / static_cast<double>(grid));
  }
  return out;
}

// ----- probes ----------------------------------------------------------------

namespace {

struct Element {
  std::vector<int> m;
  double value;     // |<...>|
  double weight;    // prod (1+|m_i|)
  int shell;        // max |m_i|
};

}  // namespace

GrowthProbe mode_growth_probe(const std::vector<const FieldTable*>& chain, const Vec& u,
                              const Vec& uprime, int window, int g_max) {
  if (chain.empty() || chain.size() > 2)
    throw InvariantViolation("probe", "mode_growth_probe supports chains of length 1 or 2");
  GrowthProbe probe;
  std::vector<Element> elems;

  auto record = [&](std::vector<int> idx, const Vec& image) {
    if (image.truncated) return;
    Scalar val = inner(image, uprime);
    double value = std::abs(val.get_d());
    double weight = 1.0;
    int shell = 0;
    for (int m : idx) {
      weight *= 1.0 + std::abs(m);
      shell = std::max(shell, std::abs(m));
    }
    elems.push_back({std::move(idx), value, weight, shell});
  };

  if (chain.size() == 1) {
    for (int m = -window; m <= window; ++m)
      record({m}, shifted_mode_apply(*chain[0], m, u));
  } else {
    for (int m2 = -window; m2 <= window; ++m2) {
      Vec inner_image = shifted_mode_apply(*chain[1], m2, u);
      if (inner_image.truncated) continue;
      for (int m1 = -window; m1 <= window; ++m1)
        record({m1, m2}, shifted_mode_apply(*chain[0], m1, inner_image));
    }
  }

  probe.points = static_cast<long>(elems.size());
  double max_value = 0.0;
  for (const auto& e : elems) max_value = std::max(max_value, e.value);
  if (max_value == 0.0) {
    probe.vacuous = true;
    probe.fitted_degree = 0;
    return probe;
  }
  probe.vacuous = false;

  const int half = window / 2;
  for (const auto& e : elems)
    if (e.shell > half && e.value > 1e-14 * max_value) probe.boundary_nonzero = true;

  // Least-squares slope over nonzero elements.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  long npts = 0;
  for (const auto& e : elems) {
    if (e.value <= 0.0) continue;
    double x = std::log(e.weight), y = std::log(e.value);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++npts;
  }
  if (npts >= 2 && sxx * npts - sx * sx > 1e-12)
    probe.lsq_slope = (npts * sxy - sx * sy) / (npts * sxx - sx * sx);

  // Fitted degree: least g for which the normalized elements do not grow
  // toward the window boundary.
  probe.bounded = false;
  for (int g = 0; g <= g_max; ++g) {
    double inner_max = 0.0, outer_max = 0.0;
    for (const auto& e : elems) {
      double r = e.value / std::pow(e.weight, g);
      if (e.shell <= half)
        inner_max = std::max(inner_max, r);
      else
        outer_max = std::max(outer_max, r);
    }
    if (outer_max <= inner_max * (1.0 + 1e-9)) {
      probe.fitted_degree = g;
      probe.bounded = true;
      probe.max_ratio = std::max(inner_max, outer_max);
      break;
    }
  }
  if (!probe.bounded) probe.fitted_degree = g_max;
  return probe;
}

OrderEstimate order_estimate(const FieldTable& A, const Vec& u, int window, int n_max) {
  OrderEstimate est;
  est.window = window;
  est.mode_norms.assign(2 * static_cast<size_t>(window) + 1, 0.0);
  for (int n = -window; n <= window; ++n) {
    Vec img = shifted_mode_apply(A, n, u);
    if (img.truncated) continue;  // outside validity; contributes nothing
    est.mode_norms[static_cast<size_t>(n + window)] =
        std::sqrt(std::abs(norm_squared(img).get_d()));
  }
  auto shell_sum = [&](int lo, int hi, int N) {
    double acc = 0.0;
    for (int n = -window; n <= window; ++n) {
      int mag = std::abs(n);
      if (mag <= lo || mag > hi) continue;
      double s = est.mode_norms[static_cast<size_t>(n + window)];
      acc += s * s * std::pow(1.0 + static_cast<double>(n) * n, -N);
    }
    return acc;
  };
  const int q = window / 4, h = window / 2;
  est.converged = false;
  for (int N = 0; N <= n_max; ++N) {
    double inner_inc = shell_sum(q, h, N);
    double outer_inc = shell_sum(h, window, N);
    est.tail_ratios.push_back(inner_inc > 0.0 ? outer_inc / inner_inc : 0.0);
    bool ok;
    if (inner_inc == 0.0)
      ok = outer_inc == 0.0;  // finitely supported mode norms
    else
      ok = outer_inc <= 0.75 * inner_inc;
    if (ok) {
      est.empirical_order = N;
      est.converged = true;
      break;
    }
  }
  if (!est.converged) est.empirical_order = n_max;
  return est;
}

DecayTable commutator_decay(const FieldTable& A, const FieldTable& B, const TrigPoly& f,
                            const TrigPoly& g, const Vec& u, const std::vector<int>& cutoffs) {
  DecayTable table;
  table.cutoffs = cutoffs;
  BorcherdsCommutator bc = make_borcherds_commutator(A, B);
  const int da = bc.weight_a;

  // Precompute (A_(s)B)_t u for every total shift t that can land inside the
  // window. Shifts outside this range only populate degrees beyond the
  // truncation, so the residual reported here is the norm of the commutator
  // projected onto the window.
  const GradedSpace& sp = *A.space();
  const int depth = sp.depth();
  const int udeg_min = u.min_degree() < 0 ? 0 : u.min_degree();
  const int udeg_max = u.max_degree() < 0 ? 0 : u.max_degree();
  const int t_lo = udeg_min - depth, t_hi = udeg_max;  // target degree in [0, D]
  std::vector<std::vector<CVec>> images(bc.products.size());
  for (size_t s = 0; s < bc.products.size(); ++s) {
    images[s].reserve(t_hi - t_lo + 1);
    for (int t = t_lo; t <= t_hi; ++t) {
      Vec img = shifted_mode_apply_linear(bc.products[s], t, u);
      if (img.truncated) table.truncated = true;
      images[s].push_back(to_cvec(img));
    }
  }

  for (int M : cutoffs) {
    CVec acc = zero_cvec(u.space);
    for (size_t s = 0; s < bc.products.size(); ++s) {
      for (int t = t_lo; t <= t_hi; ++t) {
        // coefficient sum over m + n = t, |m|, |n| <= M
        Complex coef(0.0);
        const int m_lo = std::max(-M, t - M), m_hi = std::min(M, t + M);
        for (int m = m_lo; m <= m_hi; ++m) {
          Complex fm = f.coeff(m);
          Complex gn = g.coeff(t - m);
          if (fm == Complex(0.0) || gn == Complex(0.0)) continue;
          coef += fm * gn * binomial(m + da - 1, static_cast<long>(s)).get_d();
        }
        if (coef == Complex(0.0)) continue;
        CVec term = images[s][static_cast<size_t>(t - t_lo)];
        term *= coef;
        acc += term;
      }
    }
    table.residuals.push_back(cnorm(acc));
  }
  return table;
}

DecayTable disjoint_commutator_decay(const FieldTable& A, const FieldTable& B,
                                     const BumpSpec& f, const BumpSpec& g, const Vec& u,
                                     const std::vector<int>& cutoffs, double quad_tol) {
  require_disjoint_supports(f, g);
  int max_cutoff = 0;
  for (int m : cutoffs) max_cutoff = std::max(max_cutoff, m);
  TrigPoly fc = bump_fourier(f, max_cutoff, quad_tol);
  TrigPoly gc = bump_fourier(g, max_cutoff, quad_tol);
  return commutator_decay(A, B, fc, gc, u, cutoffs);
}

CovarianceResidual infinitesimal_covariance_check(const FieldTable& A, int d, int k,
                                                  const TrigPoly& f, const Vec& u) {
  CVec uc = to_cvec(u);
  CVec smeared = smear_apply(A, f, uc);
  CVec lhs1 = apply_sl2_c(k, smeared);
  CVec lku = apply_sl2_c(k, uc);
  CVec lhs2 = smear_apply(A, f, lku);

  // (d-1) g' f - g f' with g = -i e^{ik theta}: coefficients shift by k with
  // factor ((d-1)k - n).
  TrigPoly h(f.cutoff + std::abs(k));
  for (int n = -f.cutoff; n <= f.cutoff; ++n) {
    Complex c = f.coeff(n);
    if (c == Complex(0.0)) continue;
    h.set(n + k, h.coeff(n + k) + static_cast<double>((d - 1) * k - n) * c);
  }
  CVec rhs = smear_apply(A, h, uc);

  CVec residual = lhs1;
  residual -= lhs2;
  residual -= rhs;

  CovarianceResidual out;
  out.truncated = residual.truncated || lhs1.truncated || lhs2.truncated || rhs.truncated;
  out.residual = cnorm(residual);
  out.scale = std::max({cnorm(lhs1), cnorm(lhs2), cnorm(rhs), 1.0});
  return out;
}

SummabilityDiagnostic sobolev_summability_diagnostic(int N, int cutoff) {
  SummabilityDiagnostic diag;
  diag.order = N;
  diag.cutoff = cutoff;

  auto p_poly = [N](double x2) {
    double acc = 1.0, pow = 1.0;
    for (int j = 1; j <= N; ++j) {
      pow *= x2;
      acc += pow;
    }
    return acc;
  };
  auto q_poly = [N](double m2, double n2) {
    double acc = 0.0;
    for (int k = 0; k <= 2 * N + 2; ++k) {
      for (int l = 0; l <= k; ++l)
        acc += std::pow(m2, k - l) * std::pow(n2, l);
    }
    return acc;
  };
  auto summand = [&](int m, int n) {
    double m2 = static_cast<double>(m) * m, n2 = static_cast<double>(n) * n;
    return p_poly(n2) * p_poly(m2) / q_poly(m2, n2);
  };

  diag.summand_origin = summand(0, 0);

  auto partial = [&](int M) {
    // Fixed summation order (m asc, n asc) for reproducibility.
    double acc = 0.0;
    for (int m = -M; m <= M; ++m)
      for (int n = -M; n <= M; ++n) acc += summand(m, n);
    return acc;
  };
  diag.partial_half = partial(cutoff / 2);
  diag.partial_full = partial(cutoff);
  diag.partial_double = partial(2 * cutoff);
  diag.monotone =
      diag.partial_half <= diag.partial_full && diag.partial_full <= diag.partial_double;

  double worst = 0.0;
  for (int m = -cutoff; m <= cutoff; ++m) {
    for (int n = -cutoff; n <= cutoff; ++n) {
      if (m == 0 || n == 0) continue;
      double v = summand(m, n) * (static_cast<double>(m) * m) * (static_cast<double>(n) * n);
      worst = std::max(worst, v);
    }
  }
  diag.max_summand_times_m2n2 = worst;
  return diag;
}

}  // namespace voa
