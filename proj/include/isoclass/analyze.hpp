#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "isoclass/invariant.hpp"
#include "isoclass/matrix.hpp"
#include "isoclass/synthesize.hpp"

namespace isoclass {

struct FactorPower {
  FactorClass factor;
  int multiplicity = 1;  // exponent of factor.realized() in the characteristic polynomial
};

/// Coprime classification of a monic f with f(0) != 0 whose part away from
/// ±1 is self-reciprocal. Type II parts come out grouped by algebraic
/// multiplicity (square-free decomposition), not split further.
/// Throws InvalidInput for non-self-reciprocal input and for unit-circle
/// roots that are not rational-quadratic ("irrational Type I splitting; use
/// numeric path").
std::vector<FactorPower> factor_char_poly(const Poly& f);

/// One t(M)-primary component: ker t(M)^e with the restricted matrix and form.
struct PrimaryComponent {
  FactorClass factor;
  Mat basis;   // n × d, columns in ambient coordinates
  Mat matrix;  // d × d restriction of M
  Mat gram;    // d × d restriction of G
  std::vector<LayerCount> layers;
  int dimension() const { return static_cast<int>(basis.cols()); }
};

/// Primary components for a verified factor list. Type II entries are refined
/// so that every returned component has the same Jordan structure at each of
/// its roots. Throws InvalidInput when the factors do not multiply out to the
/// characteristic polynomial.
std::vector<PrimaryComponent> primary_decomposition(const ExactIsometry& iso, const std::vector<FactorPower>& factors);

struct Layer {
  int l = 1;
  Mat basis;  // columns in component coordinates
};

/// V^(l) pieces of a Type O or Type I component, pairwise orthogonal, each
/// free over R[x]/t^l, ascending l. Postconditions are checked exactly;
/// failures throw InternalError.
std::vector<Layer> orthogonal_layer_split(const PrimaryComponent& comp);

/// Signature (r_l, s_l) of b_l (Type O) or h_l (Type I) on an odd layer.
Signature layer_signature(const PrimaryComponent& comp, const Layer& layer);

/// Canonical invariant of an exact isometry. When `factors` is given it is
/// used instead of factoring the characteristic polynomial, after checking
/// that the polynomials are monic, pairwise coprime and multiply out to it.
/// Throws NotAnIsometry, InvalidInput.
IsometryInvariant analyze_exact(const ExactIsometry& iso, const std::optional<std::vector<Poly>>& factors = {});

/// (P^{-1} M P, Pᵀ G P). Throws InvalidInput for singular P.
ExactIsometry transport_similarity(const ExactIsometry& iso, const Mat& p);

// Numeric path.

struct NumericIsometry {
  std::vector<std::vector<double>> matrix;
  std::vector<std::vector<double>> gram;
  std::size_t n() const { return matrix.size(); }
};

struct ToleranceProfile {
  double orthogonality = 1e-8;
  double eig_cluster = 1e-8;
  double rank_rel = 1e-10;
  double sig_margin = 1e-9;
  long max_denominator = 1000;  // for rounding UNIT_QUAD a
};

struct Diagnostic {
  std::string quantity;
  double value = 0;
  double threshold = 0;
};

struct AnalysisReport {
  IsometryInvariant invariant;
  std::vector<Diagnostic> diagnostics;  // warnings; empty when every margin is comfortable
  std::vector<double> unit_quad_a;      // unrounded a per UNIT_QUAD family, canonical order
};

/// Floating-point front end. Throws Indeterminate when a decision margin is
/// below its threshold, InvalidInput for malformed input and NotAnIsometry
/// when the orthogonality defect exceeds tol.orthogonality.
AnalysisReport analyze_numeric(const NumericIsometry& iso, const ToleranceProfile& tol = {});

NumericIsometry to_numeric(const ExactIsometry& iso);

}  // namespace isoclass
