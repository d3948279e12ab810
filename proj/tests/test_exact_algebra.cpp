#include "doctest.h"

#include "isoclass/error.hpp"
#include "isoclass/matrix.hpp"
#include "support.hpp"

using namespace isoclass;
using isoclass::testing::q;
using isoclass::testing::X;

TEST_CASE("rational parsing and formatting") {
  CHECK(parse_rational("6/4") == q(3, 2));
  CHECK(to_string(parse_rational("-6/4")) == "-3/2");
  CHECK(to_string(parse_rational("5")) == "5");
  CHECK(to_string(parse_rational("4/-2")) == "-2");
  CHECK_THROWS_AS(parse_rational("1/0"), InvalidInput);
  CHECK_THROWS_AS(parse_rational("1.5"), InvalidInput);
  CHECK_THROWS_AS(parse_rational(""), InvalidInput);
}

TEST_CASE("poly_divmod") {
  Poly x = X();
  auto [q1, r1] = poly_divmod(x * x - Poly::constant(1), x - Poly::constant(1));
  CHECK(q1 == x + Poly::constant(1));
  CHECK(r1.is_zero());

  Poly p = x * x + x + Poly::constant(1);
  auto [q2, r2] = poly_divmod(p, x + Poly::constant(1));
  CHECK(q2 == x);
  CHECK(r2 == Poly::constant(1));

  auto [q3, r3] = poly_divmod(p * p, p);
  CHECK(q3 == p);
  CHECK(r3.is_zero());

  CHECK_THROWS_AS(poly_divmod(p, Poly{}), InvalidInput);
}

TEST_CASE("poly_divmod reconstitutes the dividend") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> c(-5, 5), d(1, 4), deg(0, 6);
  auto rnd = [&] {
    std::vector<Rational> v(static_cast<std::size_t>(deg(rng)) + 1);
    for (auto& x : v) x = q(c(rng), d(rng));
    return Poly(v);
  };
  for (int t = 0; t < 200; ++t) {
    Poly a = rnd(), b = rnd();
    if (b.is_zero()) continue;
    auto [quo, rem] = poly_divmod(a, b);
    CHECK(b * quo + rem == a);
    CHECK(rem.degree() < b.degree());
  }
}

TEST_CASE("poly_gcd") {
  Poly x = X(), one = Poly::constant(1);
  CHECK(poly_gcd(x * x - one, x - one) == x - one);
  CHECK(poly_gcd(x * x + x + one, x * x - one) == one);
  Poly a = (x - one) * (x - one) * (x + one), b = (x - one) * (x + one) * (x + one);
  CHECK(poly_gcd(a, b) == (x - one) * (x + one));
  CHECK(poly_gcd(Poly{}, x * q(3)) == x);
  CHECK_THROWS_AS(poly_gcd(Poly{}, Poly{}), InvalidInput);
}

TEST_CASE("reciprocal_adjoint") {
  Poly x = X();
  CHECK(reciprocal_adjoint(x - Poly::constant(2)) == x - Poly::constant(q(1, 2)));
  Poly p = x * x + x + Poly::constant(1);
  CHECK(reciprocal_adjoint(p) == p);
  Poly r = x * x - x * q(5, 2) + Poly::constant(1);
  CHECK(reciprocal_adjoint(r) == r);
  CHECK_THROWS_AS(reciprocal_adjoint(x * x + x), InvalidInput);

  // Involution on monic polynomials with nonzero constant term.
  Poly s = x * x * x + x * q(-7, 3) + Poly::constant(q(2, 5));
  CHECK(reciprocal_adjoint(reciprocal_adjoint(s)) == s);
}

TEST_CASE("square-free decomposition and trace substitution") {
  Poly x = X(), one = Poly::constant(1);
  Poly a = pow(x - one, 3) * pow(x + Poly::constant(2), 1) * pow(x * x + one, 2);
  auto sf = squarefree_decomposition(a);
  REQUIRE(sf.size() == 3);
  CHECK(sf[0] == std::make_pair(x + Poly::constant(2), 1));
  CHECK(sf[1] == std::make_pair(x * x + one, 2));
  CHECK(sf[2] == std::make_pair(x - one, 3));

  // x^2 + a x + 1 = x (y + a)
  Poly p = x * x + x * q(1, 2) + one;
  CHECK(palindromic_to_trace_poly(p) == Poly{q(1, 2), q(1)});
  Poly quartic = pow(p, 2);
  CHECK(trace_poly_to_palindromic(palindromic_to_trace_poly(quartic)) == quartic);
  CHECK_THROWS_AS(palindromic_to_trace_poly(x + Poly::constant(2)), InvalidInput);
}

TEST_CASE("exact root counting and rational roots") {
  Poly x = X(), one = Poly::constant(1);
  Poly p = (x - Poly::constant(q(1, 3))) * (x + Poly::constant(q(7, 2))) * (x * x - Poly::constant(2));
  CHECK(rational_roots(p) == std::vector<Rational>{q(-7, 2), q(1, 3)});
  CHECK(count_real_roots(p, q(-2), q(2)) == 3);
  CHECK(count_real_roots(x * x + one, q(-5), q(5)) == 0);
  CHECK(rational_roots(pow(x - Poly::constant(q(5, 4)), 3) * x) == std::vector<Rational>{q(0), q(5, 4)});
}

TEST_CASE("char_poly") {
  Poly x = X(), one = Poly::constant(1);
  CHECK(char_poly(Mat{{q(0), q(-1)}, {q(1), q(0)}}) == x * x + one);
  Mat bplus{{q(5, 4), q(3, 4)}, {q(-3, 4), q(-5, 4)}};
  CHECK(char_poly(bplus) == x * x - one);
  Mat aplus{{q(5, 4), q(3, 4)}, {q(3, 4), q(5, 4)}};
  CHECK(char_poly(aplus) == x * x - x * q(5, 2) + one);
  CHECK(char_poly(Mat()) == one);
}

TEST_CASE("Cayley-Hamilton on random matrices") {
  std::mt19937_64 rng(11);
  for (std::size_t n = 1; n <= 6; ++n)
    for (int t = 0; t < 4; ++t) {
      Mat m = isoclass::testing::random_rational(n, n, rng);
      CHECK(mat_poly_eval(char_poly(m), m).is_zero());
    }
}

TEST_CASE("mat_poly_eval") {
  Poly x = X(), one = Poly::constant(1);
  CHECK(mat_poly_eval(x * x + one, Mat{{q(0), q(-1)}, {q(1), q(0)}}).is_zero());
  CHECK(mat_poly_eval(x - one, Mat::identity(3)).is_zero());
  CHECK(mat_poly_eval(pow(x - one, 2), Mat{{q(1), q(1)}, {q(0), q(1)}}).is_zero());
  CHECK(!mat_poly_eval(x - one, Mat{{q(1), q(1)}, {q(0), q(1)}}).is_zero());
}

TEST_CASE("rank_nullspace") {
  auto r1 = rank_nullspace(Mat::identity(3));
  CHECK(r1.rank == 3);
  CHECK(r1.basis.empty());
  auto r2 = rank_nullspace(Mat::zero(2));
  CHECK(r2.rank == 0);
  CHECK(r2.basis.size() == 2);
  Mat ones{{q(1), q(1)}, {q(1), q(1)}};
  auto r3 = rank_nullspace(ones);
  CHECK(r3.rank == 1);
  REQUIRE(r3.basis.size() == 1);
  CHECK(r3.basis[0] == Vec{q(-1), q(1)});
}

TEST_CASE("rank_nullspace kernel vectors are exact and rank-nullity holds") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 30; ++t) {
    std::size_t n = 2 + t % 5;
    // Low-rank product so kernels are nontrivial.
    Mat a = isoclass::testing::random_rational(n, n / 2 + 1, rng);
    Mat b = isoclass::testing::random_rational(n / 2 + 1, n, rng);
    Mat m = a * b;
    auto rn = rank_nullspace(m);
    CHECK(rn.rank + rn.basis.size() == n);
    for (const auto& v : rn.basis) {
      Vec mv = m * v;
      bool zero = true;
      for (const auto& c : mv) zero = zero && is_zero(c);
      CHECK(zero);
    }
  }
}

TEST_CASE("symmetric_signature") {
  CHECK(symmetric_signature(Mat::diagonal({q(1), q(-1)})) == Signature{1, 1});
  CHECK(symmetric_signature(Mat{{q(2), q(-1)}, {q(-1), q(2)}}) == Signature{2, 0});
  Mat anti{{q(0), q(0), q(1)}, {q(0), q(-1), q(0)}, {q(1), q(0), q(0)}};
  CHECK(symmetric_signature(anti) == Signature{1, 2});
  CHECK(symmetric_signature(Mat{{q(0), q(1)}, {q(1), q(0)}}) == Signature{1, 1});
  CHECK(symmetric_signature(Mat::zero(3)) == Signature{0, 0});
  CHECK_THROWS_AS(symmetric_signature(Mat{{q(0), q(1)}, {q(2), q(0)}}), InvalidInput);
}

TEST_CASE("Sylvester's law: signature is a congruence invariant") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 40; ++t) {
    std::size_t n = 1 + t % 6;
    Mat a = isoclass::testing::random_rational(n, n, rng);
    Mat g = a + a.transpose();
    Mat p = isoclass::testing::random_rational(n, n, rng);
    if (is_zero(determinant(p))) continue;
    Signature s = symmetric_signature(g);
    CHECK(symmetric_signature(p.transpose() * g * p) == s);
    CHECK(static_cast<std::size_t>(s.dim()) == rank(g));
  }
}

TEST_CASE("is_isometry") {
  Mat g = Mat::diagonal({q(1), q(-1)});
  CHECK(is_isometry(Mat{{q(5, 4), q(3, 4)}, {q(-3, 4), q(-5, 4)}}, g));
  CHECK(!is_isometry(Mat{{q(1), q(1)}, {q(0), q(1)}}, g));
  CHECK(is_isometry(Mat{{q(0), q(-1)}, {q(1), q(-1)}}, Mat{{q(2), q(-1)}, {q(-1), q(2)}}));
  CHECK(!is_isometry(Mat::identity(2), Mat::zero(2)));
  CHECK_THROWS_AS(is_isometry(Mat::identity(2), Mat::identity(3)), InvalidInput);
}

TEST_CASE("inverse and restriction") {
  std::mt19937_64 rng(9);
  Mat p = isoclass::testing::random_unimodular(5, rng);
  CHECK(p * inverse(p) == Mat::identity(5));
  CHECK(abs(determinant(p)) == 1);
  CHECK_THROWS_AS(inverse(Mat::zero(2)), InvalidInput);
  // Restriction of diag(1,2,3) to span(e1, e3).
  Mat d = Mat::diagonal({q(1), q(2), q(3)});
  Mat basis = Mat::from_columns({{q(1), q(0), q(0)}, {q(0), q(0), q(1)}}, 3);
  CHECK(restrict_to(d, basis) == Mat::diagonal({q(1), q(3)}));
}
