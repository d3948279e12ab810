#include "isoclass/synthesize.hpp"

#include <algorithm>
#include <optional>

#include "isoclass/error.hpp"

namespace isoclass {

namespace {

void check_unit_quad(const Rational& a) {
  if (abs(a) >= 2) throw InvalidInput("unit_quad needs |a| < 2");
}

void check_odd(int l) {
  if (l < 1 || l % 2 == 0) throw InvalidInput("odd block size expected, got l=" + std::to_string(l));
}

void check_sign(int sign) {
  if (sign != 1 && sign != -1) throw InvalidInput("sign must be +1 or -1");
}

void check_type_o(FactorKind kind) {
  if (kind != FactorKind::OMinus && kind != FactorKind::OPlus) throw InvalidInput("Type O factor expected");
}

/// binom(1/2, n)
Rational half_binomial(int n) {
  Rational c = 1;
  for (int k = 0; k < n; ++k) c *= (Rational(1, 2) - k) / Rational(k + 1);
  return c;
}

}  // namespace

Mat gram_type_i_odd(const Rational& a, int l, int sign) {
  check_unit_quad(a);
  check_odd(l);
  check_sign(sign);
  const std::size_t n = static_cast<std::size_t>(l);
  Mat g(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t j = n - 1 - i;
    g(i, j) = g(n + i, n + j) = 2 * sign;
    g(i, n + j) = g(n + i, j) = -a * sign;
  }
  return g;
}

Mat invariant_gram_type_i(const Rational& a, int l, int sign) {
  check_unit_quad(a);
  check_sign(sign);
  if (l < 1) throw InvalidInput("block size must be positive");
  const std::size_t n = static_cast<std::size_t>(l);
  auto mu_s = [&](std::size_t k) -> Rational { return k == n - 1 ? Rational(2) : Rational(0); };
  auto mu_xs = [&](std::size_t k) -> Rational { return (mu_s(k + 1) - a * mu_s(k)) / 2; };
  Mat g(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      g(i, j) = g(n + i, n + j) = mu_s(i + j) * sign;
      g(i, n + j) = g(n + i, j) = mu_xs(i + j) * sign;
    }
  return g;
}

Mat mult_matrix_type_i(const Rational& a, int l) {
  check_unit_quad(a);
  if (l < 1) throw InvalidInput("block size must be positive");
  const std::size_t n = static_cast<std::size_t>(l);
  Mat m(2 * n, 2 * n);
  // x·s^i = xs^i and x·xs^i = xs^{i+1} - a·xs^i - s^i, from x^2 + 1 = x(s - a).
  for (std::size_t i = 0; i < n; ++i) {
    m(n + i, i) = 1;
    m(i, n + i) = -1;
    m(n + i, n + i) = -a;
    if (i + 1 < n) m(n + i + 1, n + i) = 1;
  }
  return m;
}

Mat gram_type_o_odd(FactorKind kind, int l, int sign) {
  check_type_o(kind);
  check_odd(l);
  check_sign(sign);
  const int eta = type_o_orientation(kind, l);
  const std::size_t n = static_cast<std::size_t>(l);
  Mat g(n, n);
  for (std::size_t i = 0; i < n; ++i) g(i, n - 1 - i) = Rational((i % 2 == 0 ? 1 : -1) * eta * sign);
  return g;
}

Mat mult_matrix_type_o(FactorKind kind, int l) {
  check_type_o(kind);
  if (l < 1) throw InvalidInput("block size must be positive");
  const std::size_t n = static_cast<std::size_t>(l);
  // x = u/2 ± sqrt(1 + u^2/4), truncated at u^l.
  const int branch = kind == FactorKind::OMinus ? 1 : -1;
  Vec c(n);
  for (std::size_t k = 0; 2 * k < n; ++k) {
    Rational quarter_pow = 1;
    for (std::size_t j = 0; j < k; ++j) quarter_pow /= 4;
    c[2 * k] = branch * half_binomial(static_cast<int>(k)) * quarter_pow;
  }
  if (n > 1) c[1] += Rational(1, 2);
  Mat m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; i + k < n; ++k) m(i + k, i) = c[k];
  return m;
}

Mat primary_block(const Poly& t, int l) {
  if (l < 1) throw InvalidInput("block size must be positive");
  const Mat c = companion(t);
  const std::size_t d = c.n(), n = d * static_cast<std::size_t>(l);
  Mat m(n, n);
  for (std::size_t b = 0; b < static_cast<std::size_t>(l); ++b) {
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) m(b * d + i, b * d + j) = c(i, j);
    if (b + 1 < static_cast<std::size_t>(l)) m((b + 1) * d, b * d + d - 1) = 1;
  }
  return m;
}

ExactIsometry hyperbolic_pair(const Poly& t, int l) {
  if (!t.is_monic() || t.degree() < 1) throw InvalidInput("hyperbolic pair needs a monic non-constant polynomial");
  if (is_zero(t.coeff(0))) throw InvalidInput("hyperbolic pair needs t(0) != 0");
  if (l < 1) throw InvalidInput("block size must be positive");
  Mat c = primary_block(t, l);
  const std::size_t d = c.n();
  Mat g(2 * d, 2 * d);
  for (std::size_t i = 0; i < d; ++i) g(i, d + i) = g(d + i, i) = 1;
  return {direct_sum(c, inverse(c).transpose()), g};
}

ExactIsometry cyclic_block(const Poly& t, int l) {
  if (l < 1) throw InvalidInput("block size must be positive");
  Poly big = pow(t.monic(), l);
  if (!is_self_reciprocal(big)) throw InvalidInput("cyclic block needs a self-reciprocal polynomial");
  const int d = big.degree();
  const auto ud = static_cast<std::size_t>(d);
  // c_k for k in [-(d-1), d-1] as linear forms in (c_0..c_{d-1}), running the
  // recurrence T_0 c_k = -sum_{j>=1} T_j c_{k+j} backwards.
  std::vector<Vec> coef(2 * ud - 1, Vec(ud));
  auto at = [&](int k) -> Vec& { return coef[static_cast<std::size_t>(k + d - 1)]; };
  for (int k = 0; k < d; ++k) at(k)[static_cast<std::size_t>(k)] = 1;
  for (int k = -1; k > -d; --k) {
    Vec& v = at(k);
    for (int j = 1; j <= d; ++j) {
      const Vec& w = at(k + j);
      for (std::size_t i = 0; i < ud; ++i) v[i] -= big.coeff(j) * w[i];
    }
    for (auto& x : v) x /= big.coeff(0);
  }
  Mat cons(ud > 1 ? ud - 1 : 1, ud);
  for (int k = 1; k < d; ++k)
    for (std::size_t i = 0; i < ud; ++i)
      cons(static_cast<std::size_t>(k - 1), i) = at(-k)[i] - at(k)[i];
  auto ns = rank_nullspace(ud > 1 ? cons : Mat(1, ud));
  const auto& basis = ns.basis;
  for (int trial = 0; trial <= 4 * d + 4; ++trial) {
    Vec init(ud);
    Rational w = 1;
    for (const auto& b : basis) {
      for (std::size_t i = 0; i < ud; ++i) init[i] += w * b[i];
      w *= trial + 1;
    }
    Mat g(ud, ud);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        const Vec& lin = at(j - i);
        Rational v = 0;
        for (std::size_t k = 0; k < ud; ++k) v += lin[k] * init[k];
        g(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = v;
      }
    if (is_zero(determinant(g))) continue;
    // Move to the basis x^j t^i of primary_block: column (i, j) holds the
    // monomial coefficients of x^j t^i.
    const Poly tm = t.monic();
    const int e = tm.degree();
    Mat p(ud, ud);
    Poly ti = Poly::constant(1);
    for (int i = 0; i < l; ++i, ti = ti * tm)
      for (int j = 0; j < e; ++j) {
        Poly col = ti * Poly::monomial(1, j);
        for (int k = 0; k <= col.degree(); ++k)
          p(static_cast<std::size_t>(k), static_cast<std::size_t>(i * e + j)) = col.coeff(k);
      }
    return {primary_block(tm, l), p.transpose() * g * p};
  }
  throw InternalError("no nondegenerate invariant form found for a cyclic block");
}

ExactIsometry synthesize_isometry(const IsometryInvariant& inv_in) {
  if (auto v = validate_invariant(inv_in); !v.empty()) throw InvalidInput("invalid invariant: " + v.front());
  IsometryInvariant inv = canonicalize(inv_in);
  std::vector<Mat> ms, gs;
  auto push = [&](const Mat& m, const Mat& g, int copies) {
    for (int i = 0; i < copies; ++i) {
      ms.push_back(m);
      gs.push_back(g);
    }
  };
  for (const auto& fam : inv.families) {
    const FactorClass& f = fam.factor;
    std::optional<Poly> half;
    if (f.is_type_ii() && is_self_reciprocal(f.q)) half = reciprocal_half(f.q);
    struct Item {
      int l;
      const SignedBlock* s;
      const FreeBlock* fr;
    };
    std::vector<Item> items;
    for (const auto& b : fam.signed_blocks) items.push_back({b.l, &b, nullptr});
    for (const auto& b : fam.free_blocks) items.push_back({b.l, nullptr, &b});
    std::sort(items.begin(), items.end(), [](const Item& x, const Item& y) { return x.l < y.l; });
    for (const auto& it : items) {
      if (it.s) {
        const SignedBlock& b = *it.s;
        if (f.is_type_o()) {
          Mat m = mult_matrix_type_o(f.kind, b.l);
          push(m, gram_type_o_odd(f.kind, b.l, 1), b.pos);
          push(m, gram_type_o_odd(f.kind, b.l, -1), b.neg);
        } else {
          Mat m = mult_matrix_type_i(f.a, b.l);
          push(m, invariant_gram_type_i(f.a, b.l, 1), b.pos);
          push(m, invariant_gram_type_i(f.a, b.l, -1), b.neg);
        }
        continue;
      }
      const FreeBlock& b = *it.fr;
      if (f.is_type_o()) {
        ExactIsometry h = hyperbolic_pair(f.base(), b.l);
        push(h.matrix, h.gram, b.mult / 2);
      } else if (f.is_type_i()) {
        ExactIsometry c = cyclic_block(f.base(), b.l);
        push(c.matrix, c.gram, b.mult);
      } else if (is_self_reciprocal(f.q)) {
        // A rational half g keeps the companion blocks at half the degree.
        ExactIsometry c = half ? hyperbolic_pair(*half, b.l) : cyclic_block(f.q, b.l);
        push(c.matrix, c.gram, b.mult);
      } else {
        ExactIsometry h = hyperbolic_pair(f.q, b.l);
        push(h.matrix, h.gram, b.mult);
      }
    }
  }
  return {direct_sum(ms), direct_sum(gs)};
}

}  // namespace isoclass
