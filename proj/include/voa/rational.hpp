#ifndef VOA_RATIONAL_HPP
#define VOA_RATIONAL_HPP

#include <gmpxx.h>

#include <string>

namespace voa {

// Exact rational scalar. All structure constants in the algebraic core are
// rational, so every identity asserted there is checked without roundoff.
using Scalar = mpq_class;

inline Scalar rat(long num, long den = 1) {
  Scalar q(num, den);
  q.canonicalize();
  return q;
}

// Parses "p/q" or "p". Throws std::invalid_argument on garbage or q = 0.
Scalar parse_rational(const std::string& text);

inline std::string to_string(const Scalar& q) { return q.get_str(); }

// Generalized binomial C(n, k) for integer n (possibly negative) and k >= 0:
// n (n-1) ... (n-k+1) / k!.
Scalar binomial(long n, long k);

// k! as an exact rational (used by terminating exponentials like e^{L_1}).
Scalar factorial(long k);

}  // namespace voa

#endif  // VOA_RATIONAL_HPP
