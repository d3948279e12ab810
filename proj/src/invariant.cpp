#include "isoclass/invariant.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <sstream>

#include "isoclass/error.hpp"

namespace isoclass {

namespace {

int kind_rank(FactorKind k) {
  switch (k) {
    case FactorKind::OMinus: return 0;
    case FactorKind::OPlus: return 1;
    case FactorKind::UnitQuad: return 2;
    case FactorKind::RecipPair: return 3;
  }
  return 4;
}

bool factor_less(const FactorClass& x, const FactorClass& y) {
  if (x.kind != y.kind) return kind_rank(x.kind) < kind_rank(y.kind);
  if (x.kind == FactorKind::UnitQuad) return x.a < y.a;
  if (x.kind == FactorKind::RecipPair) {
    if (x.q.degree() != y.q.degree()) return x.q.degree() < y.q.degree();
    return lex_less(x.q, y.q);
  }
  return false;
}

/// Signature of the anti-diagonal alternating l×l matrix (top-right entry +1).
Signature alternating_antidiagonal_signature(int l) {
  int k = (l - 1) / 2;
  // char poly (x^2 - 1)^k (x - (-1)^k)
  return (k % 2 == 0) ? Signature{k + 1, k} : Signature{k, k + 1};
}

Signature swap(Signature s) { return {s.neg, s.pos}; }

}  // namespace

Poly FactorClass::base() const {
  switch (kind) {
    case FactorKind::OMinus: return Poly{Rational(-1), Rational(1)};
    case FactorKind::OPlus: return Poly{Rational(1), Rational(1)};
    case FactorKind::UnitQuad: return Poly{Rational(1), a, Rational(1)};
    case FactorKind::RecipPair: return q;
  }
  return {};
}

Poly FactorClass::realized() const {
  if (kind != FactorKind::RecipPair) return base();
  if (is_self_reciprocal(q)) return q;
  return q * reciprocal_adjoint(q);
}

std::string FactorClass::to_string() const {
  switch (kind) {
    case FactorKind::OMinus: return "x - 1";
    case FactorKind::OPlus: return "x + 1";
    case FactorKind::UnitQuad: return "unit_quad(a=" + isoclass::to_string(a) + ")";
    case FactorKind::RecipPair: return "recip_pair(" + q.to_string() + ")";
  }
  return "?";
}

int block_dimension(const FactorClass& f, int l, int mult) { return f.realized_degree() * l * mult; }

int Family::dimension() const {
  int d = 0;
  for (const auto& b : signed_blocks) d += block_dimension(factor, b.l, b.mult);
  for (const auto& b : free_blocks) d += block_dimension(factor, b.l, b.mult);
  return d;
}

int IsometryInvariant::dimension() const {
  int d = 0;
  for (const auto& f : families) d += f.dimension();
  return d;
}

int GLClassSpec::dimension() const {
  int d = 0;
  for (const auto& e : families)
    for (const auto& lc : e.layers) d += block_dimension(e.factor, lc.l, lc.mult);
  return d;
}

int type_o_orientation(FactorKind kind, int l) {
  if (kind != FactorKind::OMinus && kind != FactorKind::OPlus)
    throw InvalidInput("orientation is defined for Type O factors only");
  if (l < 1 || l % 2 == 0) throw InvalidInput("orientation is defined for odd layers only");
  // η(x-1, [1]), η(x-1, [3]), η(x+1, [1]), η(x+1, [3])
  static constexpr int table[2][2] = {{+1, +1}, {+1, +1}};
  return table[kind == FactorKind::OPlus ? 1 : 0][(l % 4 == 1) ? 0 : 1];
}

Signature block_quadratic_signature(const FactorClass& factor, const SignedBlock& b) {
  if (factor.is_type_ii()) throw InvalidInput("Type II factors carry no signed blocks");
  if (factor.is_type_i()) {
    int lm = b.l * b.mult;
    return {lm + b.pos - b.neg, lm + b.neg - b.pos};
  }
  Signature unit = alternating_antidiagonal_signature(b.l);
  if (type_o_orientation(factor.kind, b.l) < 0) unit = swap(unit);
  Signature s;
  s.pos = b.pos * unit.pos + b.neg * unit.neg;
  s.neg = b.pos * unit.neg + b.neg * unit.pos;
  return s;
}

EpsilonCounts epsilon_counts(const IsometryInvariant& inv) {
  EpsilonCounts e;
  for (const auto& f : inv.families)
    for (const auto& b : f.signed_blocks) {
      if (f.factor.is_type_o()) e.eps_o += b.mult;
      else if (f.factor.is_type_i()) e.eps_i += b.mult;
    }
  return e;
}

Signature odd_signature(const IsometryInvariant& inv) {
  Signature s;
  for (const auto& f : inv.families)
    for (const auto& b : f.signed_blocks) s += block_quadratic_signature(f.factor, b);
  return s;
}

Signature total_signature(const IsometryInvariant& inv) {
  Signature s = odd_signature(inv);
  for (const auto& f : inv.families)
    for (const auto& b : f.free_blocks) {
      int d = block_dimension(f.factor, b.l, b.mult);
      s += Signature{d / 2, d - d / 2};
    }
  return s;
}

GLClassSpec gl_class_of(const IsometryInvariant& inv) {
  GLClassSpec spec;
  for (const auto& f : inv.families) {
    GLClassSpec::Entry e{f.factor, {}};
    for (const auto& b : f.signed_blocks) e.layers.push_back({b.l, b.mult});
    for (const auto& b : f.free_blocks) e.layers.push_back({b.l, b.mult});
    std::sort(e.layers.begin(), e.layers.end(), [](auto& x, auto& y) { return x.l < y.l; });
    spec.families.push_back(std::move(e));
  }
  return spec;
}

namespace {

void validate_factor(const FactorClass& f, const std::string& where, std::vector<std::string>& out) {
  if (f.kind == FactorKind::UnitQuad) {
    if (abs(f.a) >= 2) out.push_back(where + ": |a| ≥ 2 (unit_quad needs |a| < 2)");
    return;
  }
  if (f.kind != FactorKind::RecipPair) return;
  const Poly& q = f.q;
  if (q.degree() < 1) {
    out.push_back(where + ": recip_pair q must be non-constant");
    return;
  }
  if (!q.is_monic()) out.push_back(where + ": recip_pair q must be monic");
  if (is_zero(q.coeff(0))) {
    out.push_back(where + ": recip_pair q has zero constant term");
    return;
  }
  if (is_zero(q(Rational(1))) || is_zero(q(Rational(-1))))
    out.push_back(where + ": recip_pair q has a root at 1 or -1");
  if (q.degree() == 2 && q.coeff(0) == 1 && abs(q.coeff(1)) < 2)
    out.push_back(where + ": recip_pair q has unit_quad shape");
  if (!out.empty()) return;
  if (poly_gcd(q, q.derivative()).degree() > 0) out.push_back(where + ": recip_pair q must be square-free");
  if (!is_self_reciprocal(q) && poly_gcd(q.monic(), reciprocal_adjoint(q.monic())).degree() > 0)
    out.push_back(where + ": recip_pair q shares a factor with q* without being self-reciprocal");
  if (!out.empty()) return;
  Poly h = f.realized();
  Poly trace = palindromic_to_trace_poly(h);
  if (count_real_roots(trace, Rational(-2), Rational(2)) > 0)
    out.push_back(where + ": recip_pair q has roots on the unit circle");
}

void validate_layers(const FactorClass& f, const std::vector<int>& ls, const std::string& where,
                     std::vector<std::string>& out) {
  std::vector<int> sorted = ls;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    out.push_back(where + ": repeated layer l within one family");
  (void)f;
}

}  // namespace

std::vector<std::string> validate_invariant(const IsometryInvariant& inv) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < inv.families.size(); ++i) {
    const Family& fam = inv.families[i];
    const std::string where = "family " + std::to_string(i) + " (" + fam.factor.to_string() + ")";
    std::size_t before = out.size();
    validate_factor(fam.factor, where, out);
    bool factor_ok = out.size() == before;
    if (fam.signed_blocks.empty() && fam.free_blocks.empty()) out.push_back(where + ": family has no blocks");
    if (fam.factor.is_type_ii() && !fam.signed_blocks.empty())
      out.push_back(where + ": recip_pair families carry no signed blocks");
    std::vector<int> ls;
    for (const auto& b : fam.signed_blocks) {
      ls.push_back(b.l);
      if (b.l < 1 || b.l % 2 == 0)
        out.push_back(where + ": odd-layer constraint: signed block has l=" + std::to_string(b.l));
      if (b.mult < 1) out.push_back(where + ": signed block multiplicity must be positive");
      if (b.pos < 0 || b.neg < 0 || b.pos + b.neg != b.mult)
        out.push_back(where + ": signed block needs pos, neg >= 0 with pos + neg = mult");
    }
    for (const auto& b : fam.free_blocks) {
      ls.push_back(b.l);
      if (b.l < 1) out.push_back(where + ": free block l must be positive");
      if (b.mult < 1) out.push_back(where + ": free block multiplicity must be positive");
      if (!fam.factor.is_type_ii() && b.l % 2 != 0)
        out.push_back(where + ": odd-layer constraint: odd layer l=" + std::to_string(b.l) +
                      " of a Type O/I factor must be a signed block");
      if (fam.factor.is_type_o() && b.l % 2 == 0 && b.mult % 2 != 0)
        out.push_back(where + ": even layer l=" + std::to_string(b.l) +
                      " of a Type O factor needs an even number of Jordan blocks");
    }
    validate_layers(fam.factor, ls, where, out);

    // Range and parity of the family's odd signature (redundant with the
    // per-block constraints above).
    if (factor_ok && !fam.factor.is_type_ii() && out.size() == before) {
      if (fam.factor.is_type_i()) {
        int n = 0, eps = 0;
        Signature s;
        for (const auto& b : fam.signed_blocks) {
          n += 2 * b.l * b.mult;
          eps += b.mult;
          s += block_quadratic_signature(fam.factor, b);
        }
        if (s.pos % 2 != 0 || s.neg % 2 != 0 || (n / 2 - eps) % 2 != 0 || s.pos < n / 2 - eps ||
            s.pos > n / 2 + eps)
          out.push_back(where + ": odd signature outside the admissible Type I range");
      } else {
        for (int chi : {1, 3}) {
          int n = 0, eps = 0;
          Signature s;
          for (const auto& b : fam.signed_blocks) {
            if (b.l % 4 != chi) continue;
            n += b.l * b.mult;
            eps += b.mult;
            s += block_quadratic_signature(fam.factor, b);
          }
          if (2 * s.pos < n - eps || 2 * s.pos > n + eps || s.dim() != n)
            out.push_back(where + ": odd signature outside the admissible Type O range");
        }
      }
    }
  }
  // Pairwise coprime realized factors.
  bool all_factors_ok = true;
  for (std::size_t i = 0; i < inv.families.size(); ++i) {
    std::vector<std::string> tmp;
    validate_factor(inv.families[i].factor, "", tmp);
    all_factors_ok = all_factors_ok && tmp.empty();
  }
  if (all_factors_ok)
    for (std::size_t i = 0; i < inv.families.size(); ++i)
      for (std::size_t j = i + 1; j < inv.families.size(); ++j)
        if (poly_gcd(inv.families[i].factor.realized(), inv.families[j].factor.realized()).degree() > 0)
          out.push_back("families " + std::to_string(i) + " and " + std::to_string(j) + " are not coprime");
  return out;
}

std::vector<std::string> validate_glclass(const GLClassSpec& spec) {
  // Validate through an invariant with arbitrary admissible signs.
  IsometryInvariant inv;
  for (const auto& e : spec.families) {
    Family f{e.factor, {}, {}};
    for (const auto& lc : e.layers) {
      if (!e.factor.is_type_ii() && lc.l % 2 == 1) f.signed_blocks.push_back({lc.l, lc.mult, lc.mult, 0});
      else f.free_blocks.push_back({lc.l, lc.mult});
    }
    inv.families.push_back(std::move(f));
  }
  return validate_invariant(inv);
}

namespace {

/// Monic g with rational coefficients built from the given roots, or nullopt
/// when rounding does not land on an exact factor g with g g* = h.
std::optional<Poly> rational_factor(const Poly& h, const std::vector<std::complex<double>>& roots) {
  std::vector<std::complex<double>> coeffs{1.0};
  for (auto z : roots) {
    std::vector<std::complex<double>> next(coeffs.size() + 1, 0.0);
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
      next[k + 1] += coeffs[k];
      next[k] -= z * coeffs[k];
    }
    coeffs = std::move(next);
  }
  // Denominators of a monic rational factor divide the leading coefficient of
  // the primitive integer multiple of h.
  Integer den_lcm = 1;
  for (const auto& c : h.coeffs()) mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den_mpz_t());
  Integer content = 0;
  for (const auto& c : h.coeffs()) {
    Integer v = c.get_num() * (den_lcm / c.get_den());
    mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), v.get_mpz_t());
  }
  Integer lead = den_lcm / content;
  std::vector<Rational> g(coeffs.size());
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    double scaled = coeffs[k].real() * lead.get_d();
    if (!std::isfinite(scaled)) return std::nullopt;
    Rational r(std::floor(scaled + 0.5));
    g[k] = r / Rational(lead);
    g[k].canonicalize();
  }
  Poly cand(g);
  if (!cand.is_monic() || is_zero(cand.coeff(0))) return std::nullopt;
  if (cand * reciprocal_adjoint(cand) != h) return std::nullopt;
  return cand;
}

/// Roots of h outside the unit circle grouped into real singletons and
/// conjugate pairs; empty when h has roots on the circle or the count is off.
std::vector<std::vector<std::complex<double>>> outside_units(const Poly& h) {
  const int n = h.degree();
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) comp(i, n - 1) = -h.coeff(i).get_d();
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  if (es.info() != Eigen::Success) return {};
  std::vector<std::vector<std::complex<double>>> units;
  int picked = 0;
  for (int i = 0; i < n; ++i) {
    std::complex<double> z = es.eigenvalues()[i];
    if (std::abs(z) <= 1.0 || z.imag() < 0) continue;
    if (z.imag() > 0) {
      units.push_back({z, std::conj(z)});
      picked += 2;
    } else {
      units.push_back({std::complex<double>(z.real(), 0.0)});
      picked += 1;
    }
  }
  if (picked != n / 2) return {};
  return units;
}

}  // namespace

Poly canonical_pair_presentation(const Poly& h_in) {
  Poly h = h_in.monic();
  const int n = h.degree();
  if (n < 2 || n % 2 != 0) return h;
  auto units = outside_units(h);
  if (units.empty()) return h;
  std::vector<std::complex<double>> roots;
  for (const auto& u : units) roots.insert(roots.end(), u.begin(), u.end());
  return rational_factor(h, roots).value_or(h);
}

std::optional<Poly> reciprocal_half(const Poly& h_in) {
  Poly h = h_in.monic();
  const int n = h.degree();
  if (n < 2 || n % 2 != 0) return std::nullopt;
  auto units = outside_units(h);
  if (units.empty() || units.size() > 12) return std::nullopt;
  for (unsigned mask = 0; mask < (1u << units.size()); ++mask) {
    std::vector<std::complex<double>> roots;
    for (std::size_t i = 0; i < units.size(); ++i)
      for (auto z : units[i]) roots.push_back((mask >> i) & 1u ? 1.0 / z : z);
    if (auto g = rational_factor(h, roots)) return g;
  }
  return std::nullopt;
}

namespace {

template <class Block>
void sort_blocks(std::vector<Block>& v) {
  std::sort(v.begin(), v.end(), [](const Block& x, const Block& y) { return x.l < y.l; });
}

}  // namespace

IsometryInvariant canonicalize(const IsometryInvariant& inv) {
  IsometryInvariant out;
  std::map<std::vector<std::pair<int, int>>, Poly> type_ii;
  for (Family f : inv.families) {
    sort_blocks(f.signed_blocks);
    sort_blocks(f.free_blocks);
    if (!f.factor.is_type_ii()) {
      out.families.push_back(std::move(f));
      continue;
    }
    std::vector<std::pair<int, int>> key;
    for (const auto& b : f.free_blocks) key.emplace_back(b.l, b.mult);
    auto [it, inserted] = type_ii.try_emplace(key, Poly::constant(1));
    it->second *= f.factor.realized();
  }
  for (const auto& [key, h] : type_ii) {
    Family f{FactorClass::recip_pair(canonical_pair_presentation(h)), {}, {}};
    for (const auto& [l, m] : key) f.free_blocks.push_back({l, m});
    out.families.push_back(std::move(f));
  }
  std::stable_sort(out.families.begin(), out.families.end(),
                   [](const Family& x, const Family& y) { return factor_less(x.factor, y.factor); });
  return out;
}

GLClassSpec canonicalize(const GLClassSpec& spec) {
  IsometryInvariant inv;
  for (const auto& e : spec.families) {
    Family f{e.factor, {}, {}};
    for (const auto& lc : e.layers) f.free_blocks.push_back({lc.l, lc.mult});
    if (e.factor.is_type_ii()) {
      inv.families.push_back(std::move(f));
      continue;
    }
    // Non-Type-II entries need only sorting.
    inv.families.push_back(std::move(f));
  }
  IsometryInvariant c = canonicalize(inv);
  GLClassSpec out;
  for (const auto& f : c.families) {
    GLClassSpec::Entry e{f.factor, {}};
    for (const auto& b : f.free_blocks) e.layers.push_back({b.l, b.mult});
    out.families.push_back(std::move(e));
  }
  return out;
}

}  // namespace isoclass
