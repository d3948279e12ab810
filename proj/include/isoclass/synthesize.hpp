#pragma once

#include "isoclass/invariant.hpp"
#include "isoclass/matrix.hpp"

namespace isoclass {

/// An isometry M of the quadratic space with Gram matrix G.
struct ExactIsometry {
  Mat matrix;
  Mat gram;
};

/// The block anti-diagonal matrix with entries 2 and -a in the basis
/// (s^0..s^{l-1}, xs^0..xs^{l-1}), s = x + a + x^{-1}, times sign. For l >= 3
/// it is not preserved by mult_matrix_type_i; see invariant_gram_type_i.
Mat gram_type_i_odd(const Rational& a, int l, int sign);

/// Gram matrix of the trace form f, g -> mu(conj(f) g) on R[x]/(x^2+ax+1)^l
/// in the same basis, where mu(s^k) = 2 [k = l-1] and
/// mu(x s^k) = mu(x^{-1} s^k) = (mu(s^{k+1}) - a mu(s^k)) / 2. Agrees with
/// gram_type_i_odd except for 1 entries next to the -a anti-diagonals, and is
/// preserved by mult_matrix_type_i. Any l >= 1.
Mat invariant_gram_type_i(const Rational& a, int l, int sign);

/// Multiplication by x on R[x]/(x^2+ax+1)^l in the basis above.
Mat mult_matrix_type_i(const Rational& a, int l);

/// η · sign · A in the basis u^i, u = x - x^{-1}, where A is the alternating
/// anti-diagonal matrix with A(0, l-1) = 1.
Mat gram_type_o_odd(FactorKind kind, int l, int sign);

/// Multiplication by x on R[x]/(x-1)^l (OMinus) or R[x]/(x+1)^l (OPlus) in
/// the basis u^i. Any l >= 1.
Mat mult_matrix_type_o(FactorKind kind, int l);

/// Multiplication by x on R[x]/t^l in the basis x^j t^i (j < deg t, i < l):
/// companion blocks of t on the diagonal, each coupled to the next by a
/// single 1, so the entries stay those of t rather than of t^l.
Mat primary_block(const Poly& t, int l);

/// C ⊕ (C^{-1})ᵀ with C = primary_block(t, l), and G = [[0,I],[I,0]].
ExactIsometry hyperbolic_pair(const Poly& t, int l);

/// Cyclic block R[x]/t^l for self-reciprocal t. The form is found on the
/// companion matrix of t^l as a nondegenerate Toeplitz Gram G(i,j) = c(j-i),
/// c a symmetric solution of the linear recurrence of t^l, and returned in the
/// basis of primary_block(t, l). Throws InternalError when none is found.
ExactIsometry cyclic_block(const Poly& t, int l);

/// Block-diagonal canonical representative, families in canonical order.
/// Throws InvalidInput when inv is invalid.
ExactIsometry synthesize_isometry(const IsometryInvariant& inv);

}  // namespace isoclass
