#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "isoclass/matrix.hpp"
#include "isoclass/poly.hpp"

namespace isoclass {

enum class FactorKind { OMinus, OPlus, UnitQuad, RecipPair };

/// One coprime factor of the characteristic polynomial.
///
///   OMinus     x - 1
///   OPlus      x + 1
///   UnitQuad   x^2 + a x + 1 with |a| < 2 (a conjugate pair on the unit circle)
///   RecipPair  q together with q*; when q is itself self-reciprocal (roots off
///              the unit circle that pair up inside q) the family realizes q
///              alone.
struct FactorClass {
  FactorKind kind = FactorKind::OMinus;
  Rational a;  // UnitQuad only
  Poly q;      // RecipPair only

  static FactorClass o_minus() { return {FactorKind::OMinus, 0, {}}; }
  static FactorClass o_plus() { return {FactorKind::OPlus, 0, {}}; }
  static FactorClass unit_quad(Rational a) { return {FactorKind::UnitQuad, std::move(a), {}}; }
  static FactorClass recip_pair(Poly q) { return {FactorKind::RecipPair, 0, std::move(q)}; }

  bool is_type_o() const { return kind == FactorKind::OMinus || kind == FactorKind::OPlus; }
  bool is_type_i() const { return kind == FactorKind::UnitQuad; }
  bool is_type_ii() const { return kind == FactorKind::RecipPair; }

  /// x-1, x+1, x^2+ax+1 or q.
  Poly base() const;
  /// The polynomial whose powers are the elementary divisors of one layer
  /// generator: base() for Type O/I, and q q* (or q when q = q*) for Type II.
  Poly realized() const;
  int realized_degree() const { return realized().degree(); }

  std::string to_string() const;

  friend bool operator==(const FactorClass& x, const FactorClass& y) {
    return x.kind == y.kind && x.a == y.a && x.q == y.q;
  }
};

/// Odd layer of a Type O or Type I factor: mult Jordan blocks of size l whose
/// induced form (b_l or h_l) has signature (pos, neg).
struct SignedBlock {
  int l = 1;
  int mult = 1;
  int pos = 0;
  int neg = 0;
  friend bool operator==(const SignedBlock&, const SignedBlock&) = default;
};

/// Layer carrying no signature datum: even l for Type O/I, any l for Type II.
struct FreeBlock {
  int l = 1;
  int mult = 1;
  friend bool operator==(const FreeBlock&, const FreeBlock&) = default;
};

struct Family {
  FactorClass factor;
  std::vector<SignedBlock> signed_blocks;
  std::vector<FreeBlock> free_blocks;
  friend bool operator==(const Family&, const Family&) = default;

  /// Real dimension of the primary component.
  int dimension() const;
};

/// Complete O(V)-conjugacy invariant of an isometry.
struct IsometryInvariant {
  std::vector<Family> families;
  friend bool operator==(const IsometryInvariant&, const IsometryInvariant&) = default;
  int dimension() const;
};

struct LayerCount {
  int l = 1;
  int mult = 1;
  friend bool operator==(const LayerCount&, const LayerCount&) = default;
};

/// Similarity-class datum: elementary divisors, no signature data.
struct GLClassSpec {
  struct Entry {
    FactorClass factor;
    std::vector<LayerCount> layers;
    friend bool operator==(const Entry&, const Entry&) = default;
  };
  std::vector<Entry> families;
  friend bool operator==(const GLClassSpec&, const GLClassSpec&) = default;
  int dimension() const;
};

/// Real dimension of one layer of `mult` blocks of size l.
int block_dimension(const FactorClass& f, int l, int mult);

/// Orientation η(factor, l mod 4) of the Type O odd-block builder: sign = +1
/// blocks are built as η·A with A the alternating anti-diagonal matrix, chosen
/// so that b_l reads (1, 0) on them. The table is frozen after an exact check
/// in the test suite.
int type_o_orientation(FactorKind kind, int l);

/// Empty iff the invariant is structurally valid; otherwise human-readable
/// violations.
std::vector<std::string> validate_invariant(const IsometryInvariant& inv);
std::vector<std::string> validate_glclass(const GLClassSpec& spec);

/// Sorted families (O-, O+, UnitQuad by a, RecipPair by degree then
/// coefficients), sorted blocks, Type II families with identical layer data
/// merged and presented by a canonical q. Idempotent.
IsometryInvariant canonicalize(const IsometryInvariant& inv);
GLClassSpec canonicalize(const GLClassSpec& spec);

/// Canonical RecipPair presentation of a self-reciprocal polynomial h that
/// has no roots on the unit circle: the monic factor carrying the roots
/// outside the unit circle when it has rational coefficients, h otherwise.
Poly canonical_pair_presentation(const Poly& h);

/// A monic rational g with g g* = h for a self-reciprocal h without roots on
/// the unit circle, with g coprime to g*; the outside factor when it is
/// rational. nullopt when h does not split that way over the rationals.
std::optional<Poly> reciprocal_half(const Poly& h);

struct EpsilonCounts {
  int eps_o = 0;
  int eps_i = 0;
  friend bool operator==(const EpsilonCounts&, const EpsilonCounts&) = default;
};

EpsilonCounts epsilon_counts(const IsometryInvariant& inv);

/// Signature of the ambient form restricted to one signed layer.
/// Throws InvalidInput for Type II factors.
Signature block_quadratic_signature(const FactorClass& factor, const SignedBlock& b);

/// Signature of V^odd (sum over all signed blocks).
Signature odd_signature(const IsometryInvariant& inv);

/// odd_signature plus split (d/2, d/2) for every free block.
Signature total_signature(const IsometryInvariant& inv);

GLClassSpec gl_class_of(const IsometryInvariant& inv);

}  // namespace isoclass
