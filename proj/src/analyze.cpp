#include "isoclass/analyze.hpp"

#include <algorithm>
#include <map>

#include "isoclass/error.hpp"

namespace isoclass {

namespace {

Poly linear(const Rational& root) { return Poly{-root, Rational(1)}; }

Mat nullspace_mat(const Mat& a) {
  if (a.rows() == 0) return Mat::identity(a.cols());
  auto rn = rank_nullspace(a);
  return Mat::from_columns(rn.basis, a.cols());
}

/// Columns of `a` followed by columns of `b`.
Mat join(const Mat& a, const Mat& b) {
  if (a.cols() == 0) return b;
  if (b.cols() == 0) return a;
  return hstack(a, b);
}

Mat krylov(const Mat& m, const Vec& v, int len) {
  std::vector<Vec> cols;
  Vec cur = v;
  for (int j = 0; j < len; ++j) {
    cols.push_back(cur);
    cur = m * cur;
  }
  return Mat::from_columns(cols, v.size());
}

bool nondegenerate(const Mat& basis, const Mat& g) {
  return basis.cols() > 0 && !is_zero(determinant(basis.transpose() * g * basis));
}

bool is_zero_vec(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& x) { return is_zero(x); });
}

/// Self-adjoint (Type I) or skew/self-adjoint (Type O) nilpotent generator of
/// the layer filtration: M - M^{-1} for x∓1, M + a + M^{-1} for x^2+ax+1.
Mat layer_operator(const PrimaryComponent& comp) {
  Mat inv = inverse(comp.matrix);
  if (comp.factor.is_type_o()) return comp.matrix - inv;
  return comp.matrix + comp.factor.a * Mat::identity(comp.matrix.n()) + inv;
}

FactorClass classify_factor(const Poly& t) {
  if (t == linear(Rational(1))) return FactorClass::o_minus();
  if (t == linear(Rational(-1))) return FactorClass::o_plus();
  if (t.degree() == 2 && t.coeff(0) == 1 && t.coeff(2) == 1 && abs(t.coeff(1)) < 2)
    return FactorClass::unit_quad(t.coeff(1));
  return FactorClass::recip_pair(t);
}

void check_no_unit_circle_roots(const Poly& palindromic) {
  if (palindromic.degree() == 0) return;
  Poly h = palindromic_to_trace_poly(palindromic);
  if (count_real_roots(h, Rational(-2), Rational(2)) > 0)
    throw InvalidInput("irrational Type I splitting; use numeric path");
}

std::vector<int> kernel_dims(const Mat& n_op, int e) {
  std::vector<int> dims{0};
  Mat p = Mat::identity(n_op.n());
  for (int k = 1; k <= e; ++k) {
    p = p * n_op;
    dims.push_back(static_cast<int>(n_op.n() - rank(p)));
  }
  return dims;
}

std::vector<LayerCount> layers_from_kernel_dims(const std::vector<int>& dims, int deg) {
  std::vector<LayerCount> out;
  const int e = static_cast<int>(dims.size()) - 1;
  for (int l = 1; l <= e; ++l) {
    int next = l + 1 <= e ? dims[static_cast<std::size_t>(l + 1)] : dims[static_cast<std::size_t>(e)];
    int cnt = 2 * dims[static_cast<std::size_t>(l)] - dims[static_cast<std::size_t>(l - 1)] - next;
    if (cnt % deg != 0) throw InternalError("layer count not divisible by factor degree");
    if (cnt > 0) out.push_back({l, cnt / deg});
  }
  return out;
}

PrimaryComponent make_component(const ExactIsometry& iso, const FactorClass& f, int e) {
  PrimaryComponent c;
  c.factor = f;
  Poly t = f.realized();
  c.basis = nullspace_mat(power(mat_poly_eval(t, iso.matrix), e));
  c.matrix = restrict_to(iso.matrix, c.basis);
  c.gram = c.basis.transpose() * iso.gram * c.basis;
  c.layers = layers_from_kernel_dims(kernel_dims(mat_poly_eval(t, c.matrix), e), t.degree());
  return c;
}

/// Splits a self-reciprocal square-free s (all roots of algebraic
/// multiplicity e) into pieces with uniform block structure.
std::vector<Poly> refine_type_ii(const ExactIsometry& iso, const Poly& s, int e) {
  Mat basis = nullspace_mat(power(mat_poly_eval(s, iso.matrix), e));
  Mat m = restrict_to(iso.matrix, basis);
  Mat n_op = mat_poly_eval(s, m);
  std::vector<Poly> pieces{s};
  Mat nk = Mat::identity(m.n());  // N^{k-1}
  for (int k = 1; k <= e; ++k) {
    Mat ker = nullspace_mat(nk * n_op);
    Mat top = column_basis(nk * ker);  // N^{k-1}(ker N^k)
    Poly ck = top.cols() == 0 ? Poly::constant(1) : char_poly(restrict_to(m, top));
    std::vector<Poly> next;
    for (const Poly& p : pieces) {
      Poly rest = p;
      if (ck.degree() > 0)
        for (const auto& [g, mult] : squarefree_decomposition(ck)) {
          (void)mult;
          Poly h = poly_gcd(rest, g);
          if (h.degree() > 0) {
            next.push_back(h);
            rest = poly_divmod(rest, h).first;
          }
        }
      if (rest.degree() > 0) next.push_back(rest.monic());
    }
    pieces = std::move(next);
    nk = nk * n_op;
  }
  for (const Poly& p : pieces)
    if (!is_self_reciprocal(p)) throw InternalError("Type II refinement produced a non-self-reciprocal piece");
  return pieces;
}

std::vector<FactorPower> factors_from_list(const std::vector<Poly>& list, const Poly& f) {
  std::vector<Poly> ts;
  for (const Poly& t : list) {
    if (t.degree() < 1 || !t.is_monic()) throw InvalidInput("supplied factors must be monic and non-constant");
    if (is_zero(t.coeff(0))) throw InvalidInput("supplied factor has a zero root");
    ts.push_back(t);
  }
  for (std::size_t i = 0; i < ts.size(); ++i)
    for (std::size_t j = i + 1; j < ts.size(); ++j)
      if (poly_gcd(ts[i], ts[j]).degree() > 0) throw InvalidInput("supplied factors are not pairwise coprime");
  std::vector<bool> used(ts.size(), false);
  std::vector<FactorPower> out;
  Poly product = Poly::constant(1);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    FactorClass fc = classify_factor(ts[i]);
    Poly realized = ts[i];
    if (fc.is_type_ii() && !is_self_reciprocal(ts[i])) {
      Poly partner = reciprocal_adjoint(ts[i]);
      auto it = std::find(ts.begin(), ts.end(), partner);
      if (it != ts.end()) used[static_cast<std::size_t>(it - ts.begin())] = true;
      realized = ts[i] * partner;
    }
    if (fc.is_type_ii()) check_no_unit_circle_roots(realized);
    int e = multiplicity(realized, f);
    if (e == 0) throw InvalidInput("supplied factor " + ts[i].to_string() + " does not divide the characteristic polynomial");
    product *= pow(realized, e);
    out.push_back({fc, e});
  }
  if (product != f) throw InvalidInput("supplied factors do not multiply out to the characteristic polynomial");
  return out;
}

}  // namespace

std::vector<FactorPower> factor_char_poly(const Poly& f_in) {
  if (f_in.is_zero() || f_in.degree() < 0) throw InvalidInput("characteristic polynomial must be nonzero");
  Poly f = f_in.monic();
  if (f.degree() > 0 && is_zero(f.coeff(0))) throw InvalidInput("polynomial has a zero root");
  std::vector<FactorPower> out;
  Poly rest = f;
  for (const auto& [fc, root] : {std::pair{FactorClass::o_minus(), Rational(1)}, std::pair{FactorClass::o_plus(), Rational(-1)}}) {
    if (rest.degree() == 0) break;
    int e = multiplicity(linear(root), rest);
    if (e > 0) {
      rest = poly_divmod(rest, pow(linear(root), e)).first;
      out.push_back({fc, e});
    }
  }
  if (rest.degree() == 0) return out;
  if (!is_self_reciprocal(rest))
    throw InvalidInput("polynomial is not self-reciprocal away from ±1; not the characteristic polynomial of an isometry");
  Poly h = palindromic_to_trace_poly(rest);
  std::vector<FactorPower> recip;
  for (const Rational& y : rational_roots(h)) {
    if (abs(y) == 2) throw InternalError("trace root ±2 after removing x∓1");
    Poly quad{Rational(1), -y, Rational(1)};
    int e = multiplicity(quad, rest);
    rest = poly_divmod(rest, pow(quad, e)).first;
    if (abs(y) < 2) out.push_back({FactorClass::unit_quad(-y), e});
    else recip.push_back({FactorClass::recip_pair(quad), e});
  }
  if (rest.degree() > 0) {
    check_no_unit_circle_roots(rest);
    for (const auto& [s, e] : squarefree_decomposition(rest)) recip.push_back({FactorClass::recip_pair(s), e});
  }
  out.insert(out.end(), recip.begin(), recip.end());
  return out;
}

std::vector<PrimaryComponent> primary_decomposition(const ExactIsometry& iso, const std::vector<FactorPower>& factors) {
  Poly product = Poly::constant(1);
  for (const auto& fp : factors) product *= pow(fp.factor.realized(), fp.multiplicity);
  if (product != char_poly(iso.matrix)) throw InvalidInput("factor product does not match the characteristic polynomial");
  std::vector<PrimaryComponent> out;
  for (const auto& fp : factors) {
    if (!fp.factor.is_type_ii()) {
      out.push_back(make_component(iso, fp.factor, fp.multiplicity));
      continue;
    }
    for (const Poly& piece : refine_type_ii(iso, fp.factor.realized(), fp.multiplicity))
      out.push_back(make_component(iso, FactorClass::recip_pair(piece), fp.multiplicity));
  }
  int total = 0;
  for (const auto& c : out) total += c.dimension();
  if (total != static_cast<int>(iso.matrix.n())) throw InternalError("primary components do not span the space");
  return out;
}

std::vector<Layer> orthogonal_layer_split(const PrimaryComponent& comp) {
  if (comp.factor.is_type_ii()) throw InvalidInput("layer split needs a Type O or Type I component");
  const Mat& m = comp.matrix;
  const Mat& g = comp.gram;
  const std::size_t d = m.n();
  const int deg = comp.factor.base().degree();
  Mat n_op = mat_poly_eval(comp.factor.base(), m);
  std::map<int, Mat> pieces;
  Mat u = Mat::identity(d);
  while (u.cols() > 0) {
    int top = 0;
    Mat pw = u;
    while (!pw.is_zero()) {
      pw = n_op * pw;
      ++top;
    }
    Mat lead = power(n_op, top - 1);
    auto reaches_top = [&](const Vec& v) { return !is_zero_vec(lead * v); };
    const int len = deg * top;
    auto cyclic_ok = [&](const Mat& c) {
      return rank(c) == c.cols() && nondegenerate(c, g);
    };
    std::vector<Vec> cand;
    for (std::size_t i = 0; i < u.cols(); ++i) cand.push_back(u.column(i));
    Mat chosen;
    for (const Vec& v : cand) {
      if (!reaches_top(v)) continue;
      Mat c = krylov(m, v, len);
      if (cyclic_ok(c)) {
        chosen = c;
        break;
      }
    }
    for (std::size_t i = 0; chosen.cols() == 0 && i < cand.size(); ++i)
      for (std::size_t j = 0; chosen.cols() == 0 && j < cand.size(); ++j) {
        if (i == j) continue;
        Vec mv = m * cand[j];
        for (int variant = 0; variant < 2 && chosen.cols() == 0; ++variant) {
          Vec v = cand[i];
          for (std::size_t k = 0; k < d; ++k) v[k] += variant == 0 ? cand[j][k] : mv[k];
          if (!reaches_top(v)) continue;
          Mat c = krylov(m, v, len);
          if (cyclic_ok(c)) chosen = c;
        }
      }
    // Skew top form (Type O, even layer): split off a pair of cyclic modules.
    for (std::size_t i = 0; chosen.cols() == 0 && i < cand.size(); ++i) {
      if (!reaches_top(cand[i])) continue;
      Mat ci = krylov(m, cand[i], len);
      for (std::size_t j = i + 1; chosen.cols() == 0 && j < cand.size(); ++j) {
        if (!reaches_top(cand[j])) continue;
        Mat c = hstack(ci, krylov(m, cand[j], len));
        if (cyclic_ok(c)) chosen = c;
      }
    }
    if (chosen.cols() == 0) throw InternalError("no nondegenerate cyclic generator found in layer split");
    auto [it, inserted] = pieces.try_emplace(top, Mat(d, 0));
    it->second = join(it->second, chosen);
    // Orthogonal complement of the chosen piece inside u.
    Mat y = nullspace_mat(chosen.transpose() * g * u);
    u = y.cols() == 0 ? Mat(d, 0) : u * y;
  }
  std::vector<Layer> out;
  for (auto& [l, b] : pieces) out.push_back({l, b});
  // Postconditions.
  Mat all(d, 0);
  for (const auto& layer : out) all = join(all, layer.basis);
  if (rank(all) != d || all.cols() != d) throw InternalError("layers do not form a direct sum decomposition");
  for (std::size_t i = 0; i < out.size(); ++i) {
    Mat ni = power(n_op, out[i].l);
    if (!(ni * out[i].basis).is_zero()) throw InternalError("layer not killed by t^l");
    for (std::size_t j = i + 1; j < out.size(); ++j)
      if (!(out[i].basis.transpose() * g * out[j].basis).is_zero()) throw InternalError("layers are not orthogonal");
  }
  return out;
}

Signature layer_signature(const PrimaryComponent& comp, const Layer& layer) {
  if (comp.factor.is_type_ii()) throw InvalidInput("Type II layers carry no signature");
  if (layer.l % 2 == 0) throw InvalidInput("layer signature is defined for odd layers");
  const Mat& b = layer.basis;
  Mat n_op = mat_poly_eval(comp.factor.base(), comp.matrix);
  // Representatives of layer / t(M)·layer: basis columns outside span(N·layer).
  Mat reps = column_basis(n_op * b);
  const std::size_t low = reps.cols();
  Mat ext = join(reps, b);
  Mat cb = column_basis(ext);
  std::vector<Vec> top;
  for (std::size_t j = low; j < cb.cols(); ++j) top.push_back(cb.column(j));
  Mat r = Mat::from_columns(top, comp.matrix.n());
  Mat op = power(layer_operator(comp), layer.l - 1);
  Mat form = (op * r).transpose() * comp.gram * r;
  if (!form.is_symmetric()) throw InternalError("induced layer form is not symmetric");
  Signature s = symmetric_signature(form);
  if (s.dim() != static_cast<int>(r.cols())) throw InternalError("induced layer form is degenerate");
  if (comp.factor.is_type_i()) {
    if (s.pos % 2 != 0 || s.neg % 2 != 0) throw InternalError("Type I trace form has odd signature components");
    s = {s.pos / 2, s.neg / 2};
  }
  const int eta = comp.factor.is_type_o() ? type_o_orientation(comp.factor.kind, layer.l) : 1;
  return eta > 0 ? s : Signature{s.neg, s.pos};
}

IsometryInvariant analyze_exact(const ExactIsometry& iso, const std::optional<std::vector<Poly>>& factor_list) {
  if (iso.matrix.rows() != iso.matrix.cols() || iso.gram.rows() != iso.gram.cols() ||
      iso.matrix.n() != iso.gram.n())
    throw InvalidInput("matrix and Gram matrix must be square of the same size");
  if (!is_isometry(iso.matrix, iso.gram)) throw NotAnIsometry("input is not an isometry of a nondegenerate symmetric form");
  Poly f = char_poly(iso.matrix);
  std::vector<FactorPower> factors = factor_list ? factors_from_list(*factor_list, f) : factor_char_poly(f);
  IsometryInvariant inv;
  for (const PrimaryComponent& comp : primary_decomposition(iso, factors)) {
    Family fam{comp.factor, {}, {}};
    if (comp.factor.is_type_ii()) {
      for (const auto& lc : comp.layers) fam.free_blocks.push_back({lc.l, lc.mult});
      inv.families.push_back(std::move(fam));
      continue;
    }
    const int deg = comp.factor.base().degree();
    for (const Layer& layer : orthogonal_layer_split(comp)) {
      int mult = static_cast<int>(layer.basis.cols()) / (deg * layer.l);
      if (layer.l % 2 == 0) {
        fam.free_blocks.push_back({layer.l, mult});
        continue;
      }
      Signature s = layer_signature(comp, layer);
      if (s.dim() != mult) throw InternalError("layer signature does not match its multiplicity");
      fam.signed_blocks.push_back({layer.l, mult, s.pos, s.neg});
    }
    inv.families.push_back(std::move(fam));
  }
  inv = canonicalize(inv);
  if (auto v = validate_invariant(inv); !v.empty()) throw InternalError("analyzer produced an invalid invariant: " + v.front());
  if (total_signature(inv) != symmetric_signature(iso.gram))
    throw InternalError("recovered invariant does not reproduce the signature of the form");
  return inv;
}

ExactIsometry transport_similarity(const ExactIsometry& iso, const Mat& p) {
  Mat pinv = inverse(p);
  return {pinv * iso.matrix * p, p.transpose() * iso.gram * p};
}

}  // namespace isoclass
