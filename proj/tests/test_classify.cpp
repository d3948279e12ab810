#include "doctest.h"

#include <random>

#include "isoclass/classify.hpp"
#include "isoclass/error.hpp"
#include "support.hpp"

using namespace isoclass;
using isoclass::testing::q;

namespace {

IsometryInvariant b_plus() {
  return {{Family{FactorClass::o_minus(), {{1, 1, 1, 0}}, {}}, Family{FactorClass::o_plus(), {{1, 1, 0, 1}}, {}}}};
}
IsometryInvariant b_minus() {
  return {{Family{FactorClass::o_minus(), {{1, 1, 0, 1}}, {}}, Family{FactorClass::o_plus(), {{1, 1, 1, 0}}, {}}}};
}
IsometryInvariant identity_11() { return {{Family{FactorClass::o_minus(), {{1, 2, 1, 1}}, {}}}}; }

GLClassSpec spec_of(std::vector<GLClassSpec::Entry> e) { return {std::move(e)}; }

/// Brute force: every pos tuple, keep those with the right total signature.
long brute_count(const GLClassSpec& spec, const Signature& total) {
  IsometryInvariant base;
  for (const auto& e : spec.families) {
    Family f{e.factor, {}, {}};
    for (const auto& lc : e.layers) {
      if (!e.factor.is_type_ii() && lc.l % 2) f.signed_blocks.push_back({lc.l, lc.mult, 0, lc.mult});
      else f.free_blocks.push_back({lc.l, lc.mult});
    }
    base.families.push_back(f);
  }
  std::vector<SignedBlock*> slots;
  for (auto& f : base.families)
    for (auto& b : f.signed_blocks) slots.push_back(&b);
  long count = 0;
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == slots.size()) {
      if (total_signature(base) == total) ++count;
      return;
    }
    for (int p = 0; p <= slots[i]->mult; ++p) {
      slots[i]->pos = p;
      slots[i]->neg = slots[i]->mult - p;
      self(self, i + 1);
    }
  };
  rec(rec, 0);
  return count;
}

IsometryInvariant random_small_invariant(std::mt19937_64& rng) {
  auto coin = [&](int n) { return static_cast<int>(rng() % n); };
  IsometryInvariant inv;
  for (auto fc : {FactorClass::o_minus(), FactorClass::o_plus(), FactorClass::unit_quad(q(0)),
                  FactorClass::unit_quad(q(1, 2))}) {
    if (coin(2)) continue;
    Family f{fc, {}, {}};
    for (int l = 1; l <= 5; ++l) {
      if (coin(2)) continue;
      int m = 1 + coin(3);
      if (l % 2) {
        int p = coin(m + 1);
        f.signed_blocks.push_back({l, m, p, m - p});
      } else {
        f.free_blocks.push_back({l, fc.is_type_o() ? 2 : m});
      }
    }
    if (!f.signed_blocks.empty() || !f.free_blocks.empty()) inv.families.push_back(f);
  }
  if (coin(3) == 0) inv.families.push_back({FactorClass::recip_pair(Poly{q(-2), q(1)}), {}, {{1 + coin(2), 1}}});
  return inv;
}

}  // namespace

TEST_CASE("gl_conjugate and o_conjugate") {
  CHECK(gl_conjugate(b_plus(), b_minus()));
  CHECK_FALSE(gl_conjugate(b_plus(), identity_11()));
  CHECK(gl_conjugate(b_plus(), b_plus()));
  CHECK_FALSE(o_conjugate(b_plus(), b_minus()));
  auto r = b_plus();
  std::swap(r.families[0], r.families[1]);
  CHECK(o_conjugate(r, b_plus()));
  IsometryInvariant p{{Family{FactorClass::recip_pair(Poly{q(-2), q(1)}), {}, {{1, 1}}}}};
  IsometryInvariant ps{{Family{FactorClass::recip_pair(Poly{q(-1, 2), q(1)}), {}, {{1, 1}}}}};
  CHECK(o_conjugate(p, ps));
}

TEST_CASE("enumerate_classes examples") {
  auto b = spec_of({{FactorClass::o_minus(), {{1, 1}}}, {FactorClass::o_plus(), {{1, 1}}}});
  auto e = enumerate_classes(b, {1, 1});
  CHECK(e.size() == 2);
  auto one = spec_of({{FactorClass::o_minus(), {{1, 2}}}});
  e = enumerate_classes(one, {1, 1});
  REQUIRE(e.size() == 1);
  CHECK(e[0].families[0].signed_blocks[0] == SignedBlock{1, 2, 1, 1});
  CHECK(enumerate_classes(spec_of({{FactorClass::unit_quad(q(0)), {{1, 1}}}}), {1, 1}).empty());
  CHECK_THROWS_AS(enumerate_classes(one, {2, 1}), InvalidInput);
  CHECK_THROWS_AS(count_classes(one, {0, 1}), InvalidInput);
  CHECK(enumerate_classes(b, {1, 1}, 1).size() == 1);
}

TEST_CASE("count_classes examples") {
  auto b = spec_of({{FactorClass::o_minus(), {{1, 1}}}, {FactorClass::o_plus(), {{1, 1}}}});
  CHECK(count_classes(b, {1, 1}) == 2);
  CHECK(count_classes(spec_of({{FactorClass::o_minus(), {{1, 2}}}}), {2, 0}) == 1);
  auto mixed = spec_of({{FactorClass::o_minus(), {{1, 3}}}, {FactorClass::unit_quad(q(0)), {{1, 2}}}});
  CHECK(count_classes(mixed, {2, 5}) == brute_count(mixed, {2, 5}));
  CHECK(count_classes(mixed, {2, 5}) == 2);
  // Large instance: counting stays cheap where enumeration would not be.
  auto big = spec_of({{FactorClass::o_minus(), {{1, 40}, {3, 40}, {5, 40}}},
                      {FactorClass::unit_quad(q(0)), {{1, 40}, {3, 40}}}});
  Integer c = count_classes(big, {big.dimension() / 2, big.dimension() - big.dimension() / 2});
  CHECK(c > 1000);
}

TEST_CASE("rigid_closed_form") {
  CHECK_FALSE(rigid_closed_form(b_plus()));
  CHECK(rigid_closed_form({{Family{FactorClass::o_minus(), {{3, 1, 1, 0}}, {}}}}));
  CHECK_FALSE(rigid_closed_form(identity_11()));
  CHECK(rigid_closed_form({}));
}

TEST_CASE("rigid_enumerative and compare_methods") {
  CHECK_FALSE(rigid_enumerative(b_plus()));
  CHECK(rigid_enumerative(identity_11()));
  CHECK(rigid_enumerative({{Family{FactorClass::o_minus(), {{3, 1, 1, 0}}, {}}}}));

  auto rep = compare_methods(b_plus());
  CHECK_FALSE(rep.closed_form_rigid);
  CHECK(rep.class_count == 2);
  CHECK_FALSE(rep.enumerative_rigid);
  CHECK(rep.agree);
  REQUIRE(rep.witnesses.size() == 2);
  CHECK(rep.witnesses[0] == canonicalize(b_plus()));

  rep = compare_methods(identity_11());
  CHECK_FALSE(rep.closed_form_rigid);
  CHECK(rep.class_count == 1);
  CHECK(rep.enumerative_rigid);
  CHECK_FALSE(rep.agree);
  CHECK(rep.witnesses.size() == 1);

  IsometryInvariant trade{{Family{FactorClass::o_minus(), {{1, 1, 1, 0}, {3, 1, 1, 0}}, {}}}};
  CHECK(total_signature(trade) == Signature{2, 2});
  rep = compare_methods(trade);
  CHECK(rep.class_count == 2);
  CHECK(rep.witnesses.size() == 2);
  CHECK(compare_methods(b_plus(), 1).witnesses.size() == 1);
}

TEST_CASE("randomized classification properties") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 150; ++t) {
    auto inv = random_small_invariant(rng);
    INFO(t);
    REQUIRE(validate_invariant(inv).empty());
    auto spec = gl_class_of(inv);
    auto total = total_signature(inv);
    auto list = enumerate_classes(spec, total);
    CHECK(Integer(static_cast<long>(list.size())) == count_classes(spec, total));
    CHECK(static_cast<long>(list.size()) == brute_count(canonicalize(spec), total));
    CHECK(std::find(list.begin(), list.end(), canonicalize(inv)) != list.end());
    for (std::size_t i = 0; i < list.size(); ++i) {
      CHECK(canonicalize(list[i]) == list[i]);
      CHECK(total_signature(list[i]) == total);
      CHECK(gl_conjugate(list[i], inv));
      for (std::size_t j = i + 1; j < list.size() && j < i + 4; ++j) CHECK_FALSE(o_conjugate(list[i], list[j]));
    }
    // Endpoint rigidity.
    Signature rs = odd_signature(inv);
    auto e = epsilon_counts(inv);
    long twice = static_cast<long>(rs.dim()) - e.eps_o - 2L * e.eps_i;
    if (2L * rs.pos == twice || 2L * rs.neg == twice) CHECK(count_classes(spec, total) == 1);
  }
}
