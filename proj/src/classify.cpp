#include "isoclass/classify.hpp"

#include <map>

#include "isoclass/error.hpp"

namespace isoclass {

namespace {

/// One signed layer to distribute: its pos-contribution for each choice of
/// pos in [0, mult].
struct Slot {
  std::size_t family;
  std::size_t block;
  std::vector<int> contribution;
  int lo = 0, hi = 0;
};

struct Layout {
  IsometryInvariant base;  // all pos set to mult
  std::vector<Slot> slots;
  int fixed_pos = 0;       // contribution of free blocks
};

Layout prepare(const GLClassSpec& spec_in, const Signature& total) {
  if (auto v = validate_glclass(spec_in); !v.empty()) throw InvalidInput("invalid GL class: " + v.front());
  GLClassSpec spec = canonicalize(spec_in);
  if (spec.dimension() != total.dim())
    throw InvalidInput("signature dimension " + std::to_string(total.dim()) + " does not match GL class dimension " +
                       std::to_string(spec.dimension()));
  if (total.pos < 0 || total.neg < 0) throw InvalidInput("negative signature entry");
  Layout out;
  for (const auto& e : spec.families) {
    Family f{e.factor, {}, {}};
    for (const auto& lc : e.layers) {
      if (!e.factor.is_type_ii() && lc.l % 2 == 1) {
        f.signed_blocks.push_back({lc.l, lc.mult, lc.mult, 0});
      } else {
        f.free_blocks.push_back({lc.l, lc.mult});
        out.fixed_pos += block_dimension(e.factor, lc.l, lc.mult) / 2;
      }
    }
    out.base.families.push_back(std::move(f));
  }
  for (std::size_t i = 0; i < out.base.families.size(); ++i) {
    const Family& f = out.base.families[i];
    for (std::size_t j = 0; j < f.signed_blocks.size(); ++j) {
      const SignedBlock& b = f.signed_blocks[j];
      Slot s{i, j, {}};
      for (int p = 0; p <= b.mult; ++p)
        s.contribution.push_back(block_quadratic_signature(f.factor, {b.l, b.mult, p, b.mult - p}).pos);
      s.lo = *std::min_element(s.contribution.begin(), s.contribution.end());
      s.hi = *std::max_element(s.contribution.begin(), s.contribution.end());
      out.slots.push_back(std::move(s));
    }
  }
  return out;
}

}  // namespace

bool gl_conjugate(const IsometryInvariant& a, const IsometryInvariant& b) {
  return canonicalize(gl_class_of(a)) == canonicalize(gl_class_of(b));
}

bool o_conjugate(const IsometryInvariant& a, const IsometryInvariant& b) {
  return gl_conjugate(a, b) && canonicalize(a) == canonicalize(b);
}

std::vector<IsometryInvariant> enumerate_classes(const GLClassSpec& spec, const Signature& total, std::size_t limit) {
  Layout lay = prepare(spec, total);
  const std::size_t k = lay.slots.size();
  // suffix bounds for pruning
  std::vector<int> suf_lo(k + 1, 0), suf_hi(k + 1, 0);
  for (std::size_t i = k; i-- > 0;) {
    suf_lo[i] = suf_lo[i + 1] + lay.slots[i].lo;
    suf_hi[i] = suf_hi[i + 1] + lay.slots[i].hi;
  }
  std::vector<IsometryInvariant> out;
  std::vector<int> choice(k, 0);
  IsometryInvariant cur = lay.base;
  auto rec = [&](auto&& self, std::size_t i, int acc) -> void {
    if (out.size() >= limit) return;
    int need = total.pos - lay.fixed_pos - acc;
    if (need < suf_lo[i] || need > suf_hi[i]) return;
    if (i == k) {
      out.push_back(cur);
      return;
    }
    const Slot& s = lay.slots[i];
    SignedBlock& b = cur.families[s.family].signed_blocks[s.block];
    for (int p = 0; p <= b.mult; ++p) {
      b.pos = p;
      b.neg = b.mult - p;
      self(self, i + 1, acc + s.contribution[p]);
    }
  };
  rec(rec, 0, 0);
  return out;
}

Integer count_classes(const GLClassSpec& spec, const Signature& total) {
  Layout lay = prepare(spec, total);
  std::map<int, Integer> ways{{0, 1}};
  for (const Slot& s : lay.slots) {
    std::map<int, Integer> next;
    for (const auto& [acc, w] : ways)
      for (int c : s.contribution) next[acc + c] += w;
    ways = std::move(next);
  }
  auto it = ways.find(total.pos - lay.fixed_pos);
  return it == ways.end() ? Integer(0) : it->second;
}

bool rigid_closed_form(const IsometryInvariant& inv) {
  Signature rs = odd_signature(inv);
  const long r = rs.pos, s = rs.neg, n = r + s;
  EpsilonCounts e = epsilon_counts(inv);
  // Compare doubled values so odd n needs no rational arithmetic.
  auto hits = [&](long twice_target) { return 2 * r == twice_target || 2 * s == twice_target; };
  if (e.eps_o == 1) return hits(n - 1 - 2L * e.eps_i) || hits(n + 1 - 2L * e.eps_i);
  return hits(n - e.eps_o - 2L * e.eps_i);
}

bool rigid_enumerative(const IsometryInvariant& inv) {
  return count_classes(gl_class_of(inv), total_signature(inv)) == 1;
}

RigidityReport compare_methods(const IsometryInvariant& inv, std::size_t witness_cap) {
  RigidityReport rep;
  GLClassSpec spec = gl_class_of(inv);
  Signature total = total_signature(inv);
  rep.closed_form_rigid = rigid_closed_form(inv);
  rep.class_count = count_classes(spec, total);
  rep.enumerative_rigid = rep.class_count == 1;
  rep.agree = rep.closed_form_rigid == rep.enumerative_rigid;
  if (witness_cap == 0) return rep;
  IsometryInvariant self = canonicalize(inv);
  rep.witnesses.push_back(self);
  for (auto& w : enumerate_classes(spec, total, witness_cap)) {
    if (rep.witnesses.size() >= witness_cap) break;
    if (!(w == self)) rep.witnesses.push_back(std::move(w));
  }
  return rep;
}

}  // namespace isoclass
