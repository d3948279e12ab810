#include "doctest.h"

#include <random>

#include "isoclass/analyze.hpp"
#include "isoclass/classify.hpp"
#include "isoclass/error.hpp"
#include "support.hpp"

using namespace isoclass;
using isoclass::testing::q;
using isoclass::testing::X;

namespace {

ExactIsometry b_plus0() { return {Mat::diagonal({q(1), q(-1)}), Mat::diagonal({q(1), q(-1)})}; }
ExactIsometry a_plus(const Rational& c, const Rational& t) { return {Mat{{c, t}, {t, c}}, Mat::diagonal({q(1), q(-1)})}; }

IsometryInvariant random_small_invariant(std::mt19937_64& rng, int max_l) {
  auto coin = [&](int n) { return static_cast<int>(rng() % n); };
  IsometryInvariant inv;
  for (auto fc : {FactorClass::o_minus(), FactorClass::o_plus(), FactorClass::unit_quad(q(1, 2)),
                  FactorClass::unit_quad(q(-1))}) {
    if (coin(2)) continue;
    Family f{fc, {}, {}};
    for (int l = 1; l <= max_l; ++l) {
      if (coin(2)) continue;
      int m = 1 + coin(2);
      if (l % 2) {
        int p = coin(m + 1);
        f.signed_blocks.push_back({l, m, p, m - p});
      } else {
        f.free_blocks.push_back({l, fc.is_type_o() ? 2 : 1});
      }
    }
    if (!f.signed_blocks.empty() || !f.free_blocks.empty()) inv.families.push_back(f);
  }
  int k = coin(4);
  if (k == 1) inv.families.push_back({FactorClass::recip_pair(X() - q(3)), {}, {{1 + coin(2), 1}}});
  if (k == 2) inv.families.push_back({FactorClass::recip_pair(Poly{q(1), q(5), q(1)}), {}, {{1, 1}}});
  if (k == 3) {
    inv.families.push_back({FactorClass::recip_pair(X() - q(2)), {}, {{1, 1}}});
    inv.families.push_back({FactorClass::recip_pair(X() + q(3)), {}, {{2, 1}}});
  }
  return inv;
}

}  // namespace

TEST_CASE("factor_char_poly") {
  auto f = factor_char_poly(X() * X() - q(1));
  REQUIRE(f.size() == 2);
  CHECK(f[0].factor == FactorClass::o_minus());
  CHECK(f[1].factor == FactorClass::o_plus());
  f = factor_char_poly(Poly{q(1), q(1), q(1)});
  REQUIRE(f.size() == 1);
  CHECK(f[0].factor == FactorClass::unit_quad(q(1)));
  CHECK(f[0].multiplicity == 1);
  f = factor_char_poly(Poly{q(1), q(-5, 2), q(1)});
  REQUIRE(f.size() == 1);
  CHECK(f[0].factor.is_type_ii());
  CHECK(f[0].factor.realized() == Poly{q(1), q(-5, 2), q(1)});
  CHECK_THROWS_WITH_AS(factor_char_poly(Poly{q(1), q(1), q(1), q(1), q(1)}),
                       "irrational Type I splitting; use numeric path", InvalidInput);
  // Product identity on a mixed polynomial.
  Poly mixed = pow(X() - q(1), 3) * pow(Poly{q(1), q(0), q(1)}, 2) * pow(Poly{q(1), q(3), q(1)}, 2) *
               (X() - q(2)) * (X() - q(1, 2));
  Poly prod = Poly::constant(1);
  for (const auto& fp : factor_char_poly(mixed)) prod *= pow(fp.factor.realized(), fp.multiplicity);
  CHECK(prod == mixed);
  CHECK_THROWS_AS(factor_char_poly(X() - q(2)), InvalidInput);
}

TEST_CASE("primary_decomposition") {
  auto comps = primary_decomposition(b_plus0(), factor_char_poly(X() * X() - q(1)));
  REQUIRE(comps.size() == 2);
  CHECK(comps[0].basis == Mat{{q(1)}, {q(0)}});
  CHECK(comps[1].basis == Mat{{q(0)}, {q(1)}});

  auto l3 = synthesize_isometry({{Family{FactorClass::o_minus(), {{3, 1, 1, 0}}, {}}}});
  comps = primary_decomposition(l3, factor_char_poly(char_poly(l3.matrix)));
  REQUIRE(comps.size() == 1);
  CHECK(comps[0].layers == std::vector<LayerCount>{{3, 1}});

  auto hp = hyperbolic_pair(X() - q(2), 1);
  auto f = factor_char_poly(char_poly(hp.matrix));
  REQUIRE(f.size() == 1);
  comps = primary_decomposition(hp, f);
  REQUIRE(comps.size() == 1);
  CHECK(comps[0].dimension() == 2);
  for (const auto& c : {Vec{q(1), q(0)}, Vec{q(0), q(1)}}) {
    Vec gc = hp.gram * c;
    CHECK(gc[0] * c[0] + gc[1] * c[1] == 0);
  }
  CHECK_THROWS_AS(primary_decomposition(b_plus0(), {{FactorClass::o_minus(), 2}}), InvalidInput);
}

TEST_CASE("orthogonal_layer_split after transport") {
  std::mt19937_64 rng(5);
  for (auto fc : {FactorClass::o_minus(), FactorClass::unit_quad(q(0))}) {
    IsometryInvariant inv{{Family{fc, {{1, 1, 1, 0}, {3, 1, 1, 0}}, {}}}};
    auto iso = synthesize_isometry(inv);
    auto moved = transport_similarity(iso, testing::random_unimodular(iso.matrix.n(), rng));
    CHECK(is_isometry(moved.matrix, moved.gram));
    auto comps = primary_decomposition(moved, factor_char_poly(char_poly(moved.matrix)));
    REQUIRE(comps.size() == 1);
    auto layers = orthogonal_layer_split(comps[0]);
    REQUIRE(layers.size() == 2);
    int deg = fc.base().degree();
    CHECK(layers[0].basis.cols() == static_cast<std::size_t>(deg));
    CHECK(layers[1].basis.cols() == static_cast<std::size_t>(3 * deg));
    CHECK((layers[0].basis.transpose() * comps[0].gram * layers[1].basis).is_zero());
    for (const auto& layer : layers) CHECK(layer_signature(comps[0], layer) == Signature{1, 0});
  }
}

TEST_CASE("layer_signature examples") {
  auto comps = primary_decomposition(b_plus0(), factor_char_poly(X() * X() - q(1)));
  CHECK(layer_signature(comps[0], orthogonal_layer_split(comps[0])[0]) == Signature{1, 0});
  CHECK(layer_signature(comps[1], orthogonal_layer_split(comps[1])[0]) == Signature{0, 1});
  for (int sign : {1, -1}) {
    IsometryInvariant inv{{Family{FactorClass::unit_quad(q(0)), {{3, 1, sign > 0 ? 1 : 0, sign > 0 ? 0 : 1}}, {}}}};
    auto iso = synthesize_isometry(inv);
    auto c = primary_decomposition(iso, factor_char_poly(char_poly(iso.matrix)));
    auto layers = orthogonal_layer_split(c[0]);
    REQUIRE(layers.size() == 1);
    CHECK(layer_signature(c[0], layers[0]) == (sign > 0 ? Signature{1, 0} : Signature{0, 1}));
  }
}

TEST_CASE("analyze_exact examples") {
  auto inv = analyze_exact(b_plus0());
  IsometryInvariant expect{
      {Family{FactorClass::o_minus(), {{1, 1, 1, 0}}, {}}, Family{FactorClass::o_plus(), {{1, 1, 0, 1}}, {}}}};
  CHECK(inv == expect);
  auto a = analyze_exact(a_plus(q(5, 4), q(3, 4)));
  REQUIRE(a.families.size() == 1);
  CHECK(a.families[0].factor.is_type_ii());
  CHECK(a.families[0].factor.realized() == Poly{q(1), q(-5, 2), q(1)});
  CHECK(a.families[0].free_blocks == std::vector<FreeBlock>{{1, 1}});
  CHECK_THROWS_AS(analyze_exact({Mat{{q(2), q(0)}, {q(0), q(1)}}, Mat::identity(2)}), NotAnIsometry);
  CHECK_THROWS_AS(analyze_exact({Mat::identity(2), Mat::identity(3)}), InvalidInput);
  // Supplied factors are checked.
  CHECK(analyze_exact(b_plus0(), std::vector<Poly>{X() + q(1), X() - q(1)}) == expect);
  CHECK_THROWS_AS(analyze_exact(b_plus0(), std::vector<Poly>{X() - q(1)}), InvalidInput);
  CHECK_THROWS_AS(analyze_exact(b_plus0(), std::vector<Poly>{X() - q(1), X() - q(1)}), InvalidInput);
  // Identity and sign-flipped forms.
  auto id = analyze_exact({Mat::identity(2), Mat::diagonal({q(1), q(-1)})});
  CHECK(id.families[0].signed_blocks[0] == SignedBlock{1, 2, 1, 1});
}

TEST_CASE("transport_similarity") {
  auto iso = b_plus0();
  auto same = transport_similarity(iso, Mat::identity(2));
  CHECK(same.matrix == iso.matrix);
  CHECK(same.gram == iso.gram);
  auto perm = transport_similarity(iso, Mat{{q(0), q(1)}, {q(1), q(0)}});
  CHECK(analyze_exact(perm) == analyze_exact(iso));
  CHECK_THROWS_AS(transport_similarity(iso, Mat::zero(2)), InvalidInput);
}

TEST_CASE("round trip synthesize -> transport -> analyze") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 60; ++t) {
    auto inv = random_small_invariant(rng, 4);
    INFO(t);
    REQUIRE(validate_invariant(inv).empty());
    if (inv.dimension() > 16) continue;
    auto iso = synthesize_isometry(inv);
    CHECK(analyze_exact(iso) == canonicalize(inv));
    auto moved = transport_similarity(iso, testing::random_unimodular(iso.matrix.n(), rng));
    auto got = analyze_exact(moved);
    CHECK(got == canonicalize(inv));
    CHECK(o_conjugate(got, inv));
  }
}

TEST_CASE("Type II refinement with mixed Jordan structure") {
  // Roots 2, 1/2 in 2x2 Jordan blocks; roots 3, 1/3 twice as 1x1 blocks.
  IsometryInvariant inv{{Family{FactorClass::recip_pair(X() - q(2)), {}, {{2, 1}}},
                         Family{FactorClass::recip_pair(X() - q(3)), {}, {{1, 2}}}}};
  auto got = analyze_exact(synthesize_isometry(inv));
  CHECK(got == canonicalize(inv));
  REQUIRE(got.families.size() == 2);
}
