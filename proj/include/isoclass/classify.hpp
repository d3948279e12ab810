#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "isoclass/invariant.hpp"

namespace isoclass {

struct RigidityReport {
  bool closed_form_rigid = false;
  Integer class_count = 0;
  bool enumerative_rigid = false;
  bool agree = false;
  std::vector<IsometryInvariant> witnesses;
};

bool gl_conjugate(const IsometryInvariant& a, const IsometryInvariant& b);
bool o_conjugate(const IsometryInvariant& a, const IsometryInvariant& b);

/// All canonical invariants with the GL data of `spec` and the given ambient
/// signature, in lexicographic order of the per-layer pos values (layers in
/// canonical order). Stops after `limit` results.
/// Throws InvalidInput when spec is invalid or the dimensions disagree.
std::vector<IsometryInvariant> enumerate_classes(const GLClassSpec& spec, const Signature& total,
                                                 std::size_t limit = std::numeric_limits<std::size_t>::max());

/// Same count as enumerate_classes, by dynamic programming over the
/// achievable positive index.
Integer count_classes(const GLClassSpec& spec, const Signature& total);

/// The closed-form criterion, implemented as stated.
bool rigid_closed_form(const IsometryInvariant& inv);

/// True iff the O-class of inv is the only one in its GL-class on the same
/// ambient space.
bool rigid_enumerative(const IsometryInvariant& inv);

RigidityReport compare_methods(const IsometryInvariant& inv, std::size_t witness_cap = 16);

}  // namespace isoclass
