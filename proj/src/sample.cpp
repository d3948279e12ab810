#include "isoclass/sample.hpp"

namespace isoclass {

namespace {

Rational rat(long p, long d = 1) {
  Rational r(p, d);
  r.canonicalize();
  return r;
}

std::vector<FactorClass> pool(const SampleOptions& opt) {
  std::vector<FactorClass> out;
  if (opt.type_o) {
    out.push_back(FactorClass::o_minus());
    out.push_back(FactorClass::o_plus());
  }
  if (opt.type_i)
    for (auto a : {rat(0), rat(1, 2), rat(-1), rat(1), rat(3, 2), rat(-1, 3)}) out.push_back(FactorClass::unit_quad(a));
  if (opt.type_ii) {
    out.push_back(FactorClass::recip_pair(Poly{rat(-2), rat(1)}));
    out.push_back(FactorClass::recip_pair(Poly{rat(3), rat(1)}));
    out.push_back(FactorClass::recip_pair(Poly{rat(-1, 3), rat(1)}));
    out.push_back(FactorClass::recip_pair(Poly{rat(1), rat(5), rat(1)}));
    out.push_back(FactorClass::recip_pair(Poly{rat(3), rat(-5), rat(1)}));
  }
  return out;
}

}  // namespace

IsometryInvariant random_invariant(std::mt19937_64& rng, const SampleOptions& opt) {
  const auto factors = pool(opt);
  if (factors.empty()) return {};
  auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<unsigned>(n)); };
  for (;;) {
    IsometryInvariant inv;
    const int nfam = 1 + pick(3);
    std::vector<int> used;
    for (int f = 0; f < nfam; ++f) {
      int idx = pick(static_cast<int>(factors.size()));
      bool clash = false;
      for (int u : used) clash = clash || u == idx;
      // x-1/3 and x-3 present the same Type II family.
      if (clash) continue;
      used.push_back(idx);
      const FactorClass& fc = factors[static_cast<std::size_t>(idx)];
      Family fam{fc, {}, {}};
      for (int l = 1; l <= opt.max_l; ++l) {
        if (pick(3) != 0) continue;
        int m = 1 + pick(opt.max_mult);
        if (fc.is_type_ii()) {
          fam.free_blocks.push_back({l, m});
        } else if (l % 2) {
          int p = pick(m + 1);
          fam.signed_blocks.push_back({l, m, p, m - p});
        } else {
          fam.free_blocks.push_back({l, fc.is_type_o() ? 2 * ((m + 1) / 2) : m});
        }
      }
      if (!fam.signed_blocks.empty() || !fam.free_blocks.empty()) inv.families.push_back(std::move(fam));
    }
    if (inv.families.empty() || inv.dimension() > opt.max_dim) continue;
    if (!validate_invariant(inv).empty()) continue;
    return inv;
  }
}

Mat random_unimodular(std::size_t n, std::mt19937_64& rng, int steps) {
  Mat p = Mat::identity(n);
  if (n < 2) {
    if (n == 1 && (rng() & 1)) p(0, 0) = -1;
    return p;
  }
  std::uniform_int_distribution<std::size_t> idx(0, n - 1);
  std::uniform_int_distribution<int> coef(-2, 2);
  if (steps == 0) steps = static_cast<int>(2 * n);
  for (int s = 0; s < steps; ++s) {
    std::size_t i = idx(rng), j = idx(rng);
    if (i == j) continue;
    Rational c = coef(rng);
    for (std::size_t k = 0; k < n; ++k) p(i, k) += c * p(j, k);
  }
  for (std::size_t i = n - 1; i > 0; --i) {
    std::size_t j = std::uniform_int_distribution<std::size_t>(0, i)(rng);
    for (std::size_t k = 0; k < n; ++k) std::swap(p(i, k), p(j, k));
  }
  return p;
}

}  // namespace isoclass
