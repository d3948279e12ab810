#include "isoclass/poly.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include "isoclass/error.hpp"

namespace isoclass {

Poly::Poly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

Poly::Poly(std::initializer_list<Rational> coeffs) : c_(coeffs) { trim(); }

Poly Poly::constant(const Rational& c) { return Poly({c}); }

Poly Poly::monomial(const Rational& c, int degree) {
  std::vector<Rational> v(static_cast<std::size_t>(degree) + 1);
  v.back() = c;
  return Poly(std::move(v));
}

Poly Poly::linear(const Rational& root) { return Poly({-root, Rational(1)}); }

void Poly::trim() {
  while (!c_.empty() && isoclass::is_zero(c_.back())) c_.pop_back();
}

Rational Poly::coeff(int i) const {
  if (i < 0 || i >= static_cast<int>(c_.size())) return 0;
  return c_[static_cast<std::size_t>(i)];
}

Rational Poly::operator()(const Rational& x) const {
  Rational acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Poly Poly::monic() const {
  if (is_zero()) return *this;
  Poly r = *this;
  Rational lc = leading();
  for (auto& c : r.c_) c /= lc;
  return r;
}

Poly Poly::derivative() const {
  if (c_.size() <= 1) return {};
  std::vector<Rational> d(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<long>(i);
  return Poly(std::move(d));
}

Poly& Poly::operator+=(const Poly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  trim();
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
  trim();
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rational> r(a.c_.size() + b.c_.size() - 1);
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (isoclass::is_zero(a.c_[i])) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
  }
  return Poly(std::move(r));
}

Poly& Poly::operator*=(const Poly& o) { return *this = *this * o; }

Poly& Poly::operator*=(const Rational& s) {
  for (auto& c : c_) c *= s;
  trim();
  return *this;
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& c : r.c_) c = -c;
  return r;
}

bool lex_less(const Poly& a, const Poly& b) {
  return std::lexicographical_compare(a.c_.begin(), a.c_.end(), b.c_.begin(), b.c_.end());
}

std::string Poly::to_string(char var) const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = degree(); i >= 0; --i) {
    const Rational& c = c_[static_cast<std::size_t>(i)];
    if (isoclass::is_zero(c)) continue;
    Rational mag = abs(c);
    if (!first) os << (sgn(c) < 0 ? " - " : " + ");
    else if (sgn(c) < 0) os << "-";
    first = false;
    bool unit = (mag == 1);
    if (!unit || i == 0) os << isoclass::to_string(mag);
    if (i > 0) os << var;
    if (i > 1) os << '^' << i;
  }
  return os.str();
}

std::pair<Poly, Poly> poly_divmod(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw InvalidInput("polynomial division by zero");
  std::vector<Rational> rem = a.coeffs();
  int db = b.degree();
  int da = a.degree();
  if (da < db) return {Poly{}, a};
  std::vector<Rational> quo(static_cast<std::size_t>(da - db) + 1);
  const Rational& lb = b.leading();
  for (int i = da; i >= db; --i) {
    const Rational& top = rem[static_cast<std::size_t>(i)];
    if (isoclass::is_zero(top)) continue;
    Rational f = top / lb;
    quo[static_cast<std::size_t>(i - db)] = f;
    for (int j = 0; j <= db; ++j) rem[static_cast<std::size_t>(i - db + j)] -= f * b.coeffs()[static_cast<std::size_t>(j)];
  }
  return {Poly(std::move(quo)), Poly(std::move(rem))};
}

Poly poly_gcd(const Poly& a, const Poly& b) {
  if (a.is_zero() && b.is_zero()) throw InvalidInput("gcd of two zero polynomials");
  Poly x = a, y = b;
  while (!y.is_zero()) {
    Poly r = poly_divmod(x, y).second;
    x = std::move(y);
    y = r.monic();
  }
  return x.monic();
}

bool divides(const Poly& b, const Poly& a) { return poly_divmod(a, b).second.is_zero(); }

Poly pow(const Poly& p, int e) {
  Poly r = Poly::constant(1);
  Poly base = p;
  while (e > 0) {
    if (e & 1) r *= base;
    e >>= 1;
    if (e) base = base * base;
  }
  return r;
}

Poly reciprocal_adjoint(const Poly& q) {
  if (q.is_zero() || isoclass::is_zero(q.coeff(0)))
    throw InvalidInput("reciprocal adjoint needs a nonzero constant term");
  std::vector<Rational> r(q.coeffs().rbegin(), q.coeffs().rend());
  Rational c0 = q.coeff(0);
  for (auto& c : r) c /= c0;
  return Poly(std::move(r));
}

bool is_self_reciprocal(const Poly& q) {
  if (q.is_zero() || isoclass::is_zero(q.coeff(0))) return false;
  return reciprocal_adjoint(q) == q.monic();
}

int multiplicity(const Poly& b, const Poly& a) {
  if (b.degree() < 1 || a.is_zero()) throw InvalidInput("multiplicity needs non-constant b and nonzero a");
  int e = 0;
  Poly cur = a;
  for (;;) {
    auto [q, r] = poly_divmod(cur, b);
    if (!r.is_zero()) return e;
    cur = std::move(q);
    ++e;
  }
}

std::vector<std::pair<Poly, int>> squarefree_decomposition(const Poly& a) {
  std::vector<std::pair<Poly, int>> out;
  if (a.degree() < 1) return out;
  Poly f = a.monic();
  Poly d = f.derivative();
  Poly g = poly_gcd(f, d);
  Poly b = poly_divmod(f, g).first;
  Poly c = poly_divmod(d, g).first;
  Poly e = c - b.derivative();
  int i = 1;
  while (b.degree() >= 1) {
    Poly h = e.is_zero() ? b : poly_gcd(b, e);
    Poly bn = poly_divmod(b, h).first;
    if (h.degree() >= 1) out.emplace_back(h.monic(), i);
    Poly cn = poly_divmod(e, h).first;
    b = bn;
    e = cn - b.derivative();
    ++i;
  }
  return out;
}

Poly squarefree_part(const Poly& a) {
  if (a.is_zero()) throw InvalidInput("square-free part of zero");
  if (a.degree() < 1) return Poly::constant(1);
  return poly_divmod(a, poly_gcd(a, a.derivative())).first.monic();
}

Poly palindromic_to_trace_poly(const Poly& p) {
  int n = p.degree();
  if (n < 0 || n % 2 != 0) throw InvalidInput("trace substitution needs even degree");
  for (int i = 0; i <= n; ++i)
    if (p.coeff(i) != p.coeff(n - i)) throw InvalidInput("trace substitution needs a palindromic polynomial");
  int d = n / 2;
  // x^{-d} p = c_0 + sum_k c_k (x^k + x^{-k}),  x^k + x^{-k} = V_k(y),
  // V_0 = 2, V_1 = y, V_{k+1} = y V_k - V_{k-1}; the constant term counts once.
  Poly y{Rational(0), Rational(1)};
  Poly vprev = Poly::constant(2), vcur = y;
  Poly h = Poly::constant(p.coeff(d));
  for (int k = 1; k <= d; ++k) {
    h += vcur * p.coeff(d + k);
    Poly vnext = y * vcur - vprev;
    vprev = std::move(vcur);
    vcur = std::move(vnext);
  }
  return h;
}

Poly trace_poly_to_palindromic(const Poly& h) {
  // x^d H(x + 1/x) = sum_k h_k (x^2 + 1)^k x^{d-k}
  int d = h.degree();
  if (d < 0) return {};
  Poly x2p1{Rational(1), Rational(0), Rational(1)};
  Poly acc;
  Poly pw = Poly::constant(1);
  for (int k = 0; k <= d; ++k) {
    acc += pw * Poly::monomial(h.coeff(k), d - k);
    pw *= x2p1;
  }
  return acc;
}

namespace {

int sign_changes(const std::vector<Poly>& seq, const Rational& x) {
  int changes = 0, last = 0;
  for (const auto& p : seq) {
    int s = sgn(p(x));
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

}  // namespace

int count_real_roots(const Poly& p, const Rational& lo, const Rational& hi) {
  if (p.is_zero()) throw InvalidInput("root count of zero polynomial");
  Poly s = squarefree_part(p);
  if (s.degree() < 1) return 0;
  if (is_zero(s(lo)) || is_zero(s(hi))) throw InvalidInput("Sturm interval endpoint is a root");
  std::vector<Poly> seq{s, s.derivative()};
  while (seq.back().degree() >= 1) {
    Poly r = poly_divmod(seq[seq.size() - 2], seq.back()).second;
    if (r.is_zero()) break;
    seq.push_back(-r);
  }
  return sign_changes(seq, lo) - sign_changes(seq, hi);
}

std::vector<Rational> rational_roots(const Poly& p) {
  if (p.is_zero()) throw InvalidInput("rational roots of zero polynomial");
  std::vector<Rational> roots;
  Poly s = squarefree_part(p);
  Poly rest = s;
  // Factor out the root 0 first; it never shows up in the numeric pass reliably.
  if (s.degree() >= 1 && is_zero(s.coeff(0))) {
    roots.emplace_back(0);
    rest = poly_divmod(rest, Poly::linear(0)).first;
  }
  if (rest.degree() >= 1) {
    // Any rational root p/q in lowest terms has q | lc of the primitive
    // integer multiple, so numeric roots scaled by that lc round exactly.
    Integer den_lcm = 1;
    for (const auto& c : rest.coeffs()) mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den_mpz_t());
    Integer content = 0;
    std::vector<Integer> ints;
    for (const auto& c : rest.coeffs()) {
      Integer v = c.get_num() * (den_lcm / c.get_den());
      mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), v.get_mpz_t());
      ints.push_back(v);
    }
    Integer lead = abs(ints.back() / content);
    const int n = rest.degree();
    Poly mon = rest.monic();
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) comp(i, n - 1) = -mon.coeff(i).get_d();
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
    Rational leadq(lead);
    for (int i = 0; i < n; ++i) {
      std::complex<double> z = es.eigenvalues()[i];
      double scale = std::max(1.0, std::abs(z));
      if (std::abs(z.imag()) > 1e-6 * scale) continue;
      Rational scaled(z.real() * lead.get_d());
      Integer nearest;
      mpz_fdiv_q(nearest.get_mpz_t(), Rational(scaled + Rational(1, 2)).get_num_mpz_t(),
                 Rational(scaled + Rational(1, 2)).get_den_mpz_t());
      Rational cand = Rational(nearest) / leadq;
      cand.canonicalize();
      if (is_zero(rest(cand)) && std::find(roots.begin(), roots.end(), cand) == roots.end())
        roots.push_back(cand);
    }
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace isoclass
