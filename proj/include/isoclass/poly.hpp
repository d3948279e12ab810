#pragma once

#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "isoclass/rational.hpp"

namespace isoclass {

/// Univariate polynomial over the rationals, coefficients lowest degree first.
/// The coefficient vector never carries trailing zeros, so the zero
/// polynomial is the empty vector and degree() == size() - 1.
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<Rational> coeffs);
  Poly(std::initializer_list<Rational> coeffs);

  static Poly constant(const Rational& c);
  static Poly monomial(const Rational& c, int degree);
  /// x - root
  static Poly linear(const Rational& root);

  bool is_zero() const { return c_.empty(); }
  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<Rational>& coeffs() const { return c_; }
  /// Coefficient of x^i, zero beyond the degree.
  Rational coeff(int i) const;
  const Rational& leading() const { return c_.back(); }
  bool is_monic() const { return !c_.empty() && c_.back() == 1; }

  Rational operator()(const Rational& x) const;
  Poly monic() const;
  Poly derivative() const;

  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Poly& o);
  Poly& operator*=(const Rational& s);

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator+(Poly a, const Rational& s) { return a += Poly::constant(s); }
  friend Poly operator-(Poly a, const Rational& s) { return a -= Poly::constant(s); }
  friend Poly operator*(Poly a, const Rational& s) { return a *= s; }
  friend Poly operator*(const Rational& s, Poly a) { return a *= s; }
  Poly operator-() const;

  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  /// Lexicographic by coefficient vector, lowest degree first.
  friend bool lex_less(const Poly& a, const Poly& b);

  std::string to_string(char var = 'x') const;

 private:
  void trim();
  std::vector<Rational> c_;
};

/// Euclidean division a = b*quotient + remainder with deg(remainder) < deg(b).
/// Throws InvalidInput when b is zero.
std::pair<Poly, Poly> poly_divmod(const Poly& a, const Poly& b);

/// Monic gcd. Throws InvalidInput when both arguments are zero.
Poly poly_gcd(const Poly& a, const Poly& b);

/// True when b divides a exactly.
bool divides(const Poly& b, const Poly& a);

Poly pow(const Poly& p, int e);

/// q*(x) = q(0)^{-1} x^{deg q} q(1/x), the monic polynomial whose roots are
/// the inverses of the roots of q. Throws InvalidInput when q(0) == 0.
Poly reciprocal_adjoint(const Poly& q);

bool is_self_reciprocal(const Poly& q);

/// Largest e with b^e | a (b non-constant, a nonzero).
int multiplicity(const Poly& b, const Poly& a);

/// Square-free decomposition of a monic polynomial (Yun):
/// returns (s_i, i) with a = prod s_i^i, each s_i square-free and monic,
/// pairwise coprime, non-constant.
std::vector<std::pair<Poly, int>> squarefree_decomposition(const Poly& a);

/// Square-free part of a nonzero polynomial, monic.
Poly squarefree_part(const Poly& a);

/// Writes p(x) = x^d H(x + 1/x) for a palindromic p of even degree 2d and
/// returns H. Throws InvalidInput when p is not palindromic of even degree.
Poly palindromic_to_trace_poly(const Poly& p);

/// Inverse of palindromic_to_trace_poly: x^{deg H} H(x + 1/x).
Poly trace_poly_to_palindromic(const Poly& h);

/// Number of distinct real roots of the nonzero polynomial p in the open
/// interval (lo, hi), by an exact Sturm sequence. lo and hi must not be roots.
int count_real_roots(const Poly& p, const Rational& lo, const Rational& hi);

/// All distinct rational roots of p (nonzero), ascending.
std::vector<Rational> rational_roots(const Poly& p);

}  // namespace isoclass
