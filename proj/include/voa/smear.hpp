#ifndef VOA_SMEAR_HPP
#define VOA_SMEAR_HPP

#include <complex>
#include <vector>

#include "voa/field.hpp"
#include "voa/graded_space.hpp"

namespace voa {

using Complex = std::complex<double>;

// Trigonometric polynomial f(e^{i theta}) = sum_{|n| <= M} fhat(n) e^{i n theta},
// the numeric test function.
struct TrigPoly {
  int cutoff = 0;
  std::vector<Complex> coef;  // index n + cutoff, size 2*cutoff + 1

  TrigPoly() : coef(1, Complex(0.0)) {}
  explicit TrigPoly(int m) : cutoff(m), coef(2 * static_cast<size_t>(m) + 1, Complex(0.0)) {}

  Complex coeff(int n) const {
    if (n < -cutoff || n > cutoff) return Complex(0.0);
    return coef[static_cast<size_t>(n + cutoff)];
  }
  void set(int n, Complex c) { coef[static_cast<size_t>(n + cutoff)] = c; }

  Complex eval(double theta) const;
  TrigPoly truncated_to(int m) const;
  TrigPoly conjugated() const;  // coefficients of conj(f)
  TrigPoly rotated(double theta0) const;  // f(R_{-theta0} z): fhat(n) -> e^{-in theta0} fhat(n)

  static TrigPoly monomial(int n, Complex c = Complex(1.0));
};

TrigPoly operator+(const TrigPoly& a, const TrigPoly& b);
TrigPoly operator*(Complex s, TrigPoly a);

// (sum |fhat(n)|^2 (1+n^2)^N)^{1/2}.
double sobolev_norm(const TrigPoly& f, double N);

// Complex-coefficient counterpart of Vec.
struct CVec {
  SpacePtr space;
  std::vector<std::vector<Complex>> comp;
  bool truncated = false;

  CVec& operator+=(const CVec& o);
  CVec& operator-=(const CVec& o);
  CVec& operator*=(Complex s);
  friend CVec operator+(CVec a, const CVec& b) { return a += b; }
  friend CVec operator-(CVec a, const CVec& b) { return a -= b; }
};

CVec to_cvec(const Vec& v);
CVec zero_cvec(const SpacePtr& space);

// Gram pairing promoted to complex scalars; linear in the first argument,
// antilinear in the second.
Complex cinner(const CVec& u, const CVec& v);
double cnorm(const CVec& v);

// L_k on complex vectors (k = -1, 0, 1), via the space matrices.
CVec apply_sl2_c(int k, const CVec& v);

// e^{i theta L_0}: multiplies degree n by e^{i n theta}.
CVec rotate_states(const CVec& v, double theta);

// Y^0(A, f) u = sum_n fhat(n) A_n u (shifted modes). Truncation of any
// needed mode with a nonzero coefficient sets the flag.
CVec smear_apply(const FieldTable& A, const TrigPoly& f, const Vec& u);
CVec smear_apply(const FieldTable& A, const TrigPoly& f, const CVec& u);

// ----- test functions ------------------------------------------------------

// Smooth compactly supported bump exp(-1/(1-t^2)) mapped onto the arc
// [center - half_width, center + half_width].
struct BumpSpec {
  double center = 0.0;
  double half_width = 0.5;
  double amplitude = 1.0;
};

double bump_eval(const BumpSpec& spec, double theta);

// Fourier coefficients by adaptive quadrature (relative tolerance on each
// coefficient).
TrigPoly bump_fourier(const BumpSpec& spec, int cutoff, double rel_tol = 1e-12);

// Throws SupportOverlap if the two bumps overlap on a sample grid.
void require_disjoint_supports(const BumpSpec& f, const BumpSpec& g, int grid = 4096);

// ----- Moebius action on test functions ------------------------------------

// gamma = (a, b) with |a|^2 - |b|^2 = 1 acting by z -> (az + b)/(conj(b) z + conj(a)).
struct MoebiusElement {
  Complex a{1.0, 0.0};
  Complex b{0.0, 0.0};

  static MoebiusElement rotation(double theta);
  static MoebiusElement make(Complex a, Complex b);  // normalizes |a|^2-|b|^2 to 1
  MoebiusElement inverse() const { return {std::conj(a), -b}; }
  MoebiusElement compose(const MoebiusElement& o) const;
  Complex apply(Complex z) const;
  // X_gamma(e^{i theta}) = -i d/dtheta log gamma(e^{i theta}); positive real.
  double x_gamma(double theta) const;
};

// beta_d(gamma) f sampled on a uniform grid of 4 * out_cutoff points and
// re-expanded by discrete Fourier transform. Throws NonPositiveXGamma if the
// sampled X_gamma is not strictly positive.
TrigPoly beta_action(const MoebiusElement& gamma, int d, const TrigPoly& f, int out_cutoff);

// ----- probes ---------------------------------------------------------------

struct GrowthProbe {
  int fitted_degree = 0;   // least g with boundedness of e / prod (1+|m_i|)^g
  bool bounded = true;     // false if no g <= g_max worked
  bool vacuous = true;     // no nonzero element in the window
  bool boundary_nonzero = false;  // nonzero elements survive on the outer shell
  double lsq_slope = 0.0;  // least-squares slope of log e against log prod(1+|m_i|)
  long points = 0;
  double max_ratio = 0.0;  // max e / prod(1+|m_i|)^fitted_degree
};

// Matrix elements |<A^1_{m_1} ... A^k_{m_k} u, u'>| over the index window
// |m_i| <= window, fitted against prod (1+|m_i|)^g. Supports k = 1 or 2.
GrowthProbe mode_growth_probe(const std::vector<const FieldTable*>& chain, const Vec& u,
                              const Vec& uprime, int window, int g_max = 8);

struct OrderEstimate {
  int empirical_order = 0;  // least N passing the dyadic tail test
  bool converged = true;    // false if no N <= n_max passed
  int window = 0;
  std::vector<double> mode_norms;  // s_n = |A_n u| for n = -window .. window
  std::vector<double> tail_ratios;  // indexed by candidate N
};

// Empirical Sobolev order of f -> Y^0(A, f) u: least N for which the dyadic
// increments of sum s_n^2 (1+n^2)^{-N} decay geometrically over the window.
OrderEstimate order_estimate(const FieldTable& A, const Vec& u, int window, int n_max = 8);

struct DecayTable {
  std::vector<int> cutoffs;
  std::vector<double> residuals;
  bool truncated = false;
};

// | [Y^0(A, f<=M), Y^0(B, g<=M)] u | per cutoff M, evaluated through the
// Borcherds commutator expansion so the result is exact in the mode algebra
// (the only approximation is the Fourier truncation of f and g).
DecayTable commutator_decay(const FieldTable& A, const FieldTable& B, const TrigPoly& f,
                            const TrigPoly& g, const Vec& u, const std::vector<int>& cutoffs);

// Same, from bump specifications; enforces disjoint supports.
DecayTable disjoint_commutator_decay(const FieldTable& A, const FieldTable& B,
                                     const BumpSpec& f, const BumpSpec& g, const Vec& u,
                                     const std::vector<int>& cutoffs, double quad_tol = 1e-12);

struct CovarianceResidual {
  double residual = 0.0;
  double scale = 1.0;
  bool truncated = false;

  double relative() const { return residual / scale; }
};

// | [L_k, Y^0(A,f)] u - Y^0(A, (d-1) g' f - g f') u | with g the generator
// function of L_k. Exact identity up to floating-point roundoff when nothing
// is truncated.
CovarianceResidual infinitesimal_covariance_check(const FieldTable& A, int d, int k,
                                                  const TrigPoly& f, const Vec& u);

struct SummabilityDiagnostic {
  int order = 0;  // N
  int cutoff = 0;
  double partial_half = 0.0;    // S(cutoff/2)
  double partial_full = 0.0;    // S(cutoff)
  double partial_double = 0.0;  // S(2*cutoff)
  double max_summand_times_m2n2 = 0.0;  // over nm != 0
  double summand_origin = 0.0;          // must be 1
  bool monotone = true;
  double tail_bound() const { return 4.0 / cutoff; }
  bool cauchy_within_tail_bound() const {
    return partial_double - partial_full < tail_bound();
  }
};

// Partial sums of the Sobolev summability ratio
//   P_N(n) P_N(m) / sum_{k<=2N+2} sum_{l<=k} m^{2(k-l)} n^{2l},
// with P_N(x) = 1 + x^2 + ... + x^{2N}.
SummabilityDiagnostic sobolev_summability_diagnostic(int N, int cutoff);

}  // namespace voa

#endif  // VOA_SMEAR_HPP
