#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>

#include "isoclass/analyze.hpp"
#include "isoclass/error.hpp"

namespace isoclass {

namespace {

// Singular values within this factor of the rank threshold are reported.
constexpr double kRankBand = 4.0;

using Cplx = std::complex<double>;
using MatD = Eigen::MatrixXd;
using MatC = Eigen::MatrixXcd;

constexpr double kEps = std::numeric_limits<double>::epsilon();

MatD to_eigen(const std::vector<std::vector<double>>& rows, std::size_t n, const char* what) {
  if (rows.size() != n) throw InvalidInput(std::string(what) + " has the wrong number of rows");
  MatD m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) throw InvalidInput(std::string(what) + " is not square");
    for (std::size_t j = 0; j < n; ++j) {
      if (!std::isfinite(rows[i][j])) throw InvalidInput(std::string(what) + " has a non-finite entry");
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return m;
}

double inf_norm(const MatD& m) { return m.rows() == 0 ? 0.0 : m.cwiseAbs().rowwise().sum().maxCoeff(); }

/// Best rational approximation with bounded denominator (continued fractions).
Rational round_rational(double x, long max_den) {
  long sign = x < 0 ? -1 : 1;
  double v = std::abs(x);
  long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double rest = v;
  for (int it = 0; it < 64; ++it) {
    double fl = std::floor(rest);
    if (fl > 1e15) break;
    long a = static_cast<long>(fl);
    long p2 = a * p1 + p0, q2 = a * q1 + q0;
    if (q2 > max_den) {
      // Semiconvergent check.
      long k = (max_den - q0) / q1;
      long ps = k * p1 + p0, qs = k * q1 + q0;
      if (std::abs(v - static_cast<double>(ps) / qs) < std::abs(v - static_cast<double>(p1) / q1)) {
        p1 = ps;
        q1 = qs;
      }
      break;
    }
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    double frac = rest - fl;
    if (frac < 1e-15) break;
    rest = 1.0 / frac;
  }
  Rational r(sign * p1, q1);
  r.canonicalize();
  return r;
}

struct RankInfo {
  int nullity = 0;
  double largest_zero = 0;      // relative to the scale
  double smallest_nonzero = 0;  // relative to the scale
};

/// Kernels of A, A^2, ..., A^kmax as orthonormal bases, each computed as the
/// kernel of (I - Q Q^*) A with Q a basis of the previous one, so that every
/// rank decision is made on a matrix of norm at most |A|.
template <class M>
std::vector<M> kernel_staircase(const M& a, double scale, int kmax, double rank_rel, std::vector<RankInfo>* info) {
  const auto n = a.rows();
  std::vector<M> out;
  M q(n, 0);
  const double thr = rank_rel * scale;
  for (int j = 1; j <= kmax; ++j) {
    M proj = M::Identity(n, n) - q * q.adjoint();
    M b = proj * a;
    Eigen::JacobiSVD<M> svd(b, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    RankInfo r;
    r.smallest_nonzero = std::numeric_limits<double>::infinity();
    int rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      if (s(i) > thr) {
        ++rank;
        r.smallest_nonzero = std::min(r.smallest_nonzero, s(i) / scale);
      } else {
        r.largest_zero = std::max(r.largest_zero, s(i) / scale);
      }
    }
    r.nullity = static_cast<int>(n) - rank;
    q = svd.matrixV().rightCols(r.nullity);
    out.push_back(q);
    if (info) info->push_back(r);
  }
  return out;
}

double spectral_norm(const MatD& m) {
  if (m.rows() == 0) return 0;
  Eigen::JacobiSVD<MatD> svd(m);
  return svd.singularValues()(0);
}

struct Cluster {
  std::vector<Cplx> eig;
  Cplx center;
  int index = 1;  // smallest power with full nullity
  double spread = 0;
};

class Analyzer {
 public:
  Analyzer(const NumericIsometry& iso, const ToleranceProfile& tol) : tol_(tol) {
    for (double t : {tol.orthogonality, tol.eig_cluster, tol.rank_rel, tol.sig_margin})
      if (!(t > 0)) throw InvalidInput("tolerances must be positive");
    if (tol.max_denominator < 1) throw InvalidInput("max_denominator must be positive");
    const std::size_t n = iso.n();
    m_ = to_eigen(iso.matrix, n, "matrix");
    g_ = to_eigen(iso.gram, n, "gram");
    n_ = static_cast<Eigen::Index>(n);
  }

  AnalysisReport run() {
    if (n_ == 0) return {};
    const double gnorm = inf_norm(g_);
    if (gnorm == 0) throw NotAnIsometry("Gram matrix is zero");
    double asym = inf_norm(g_ - g_.transpose()) / gnorm;
    if (asym > tol_.orthogonality) throw NotAnIsometry("Gram matrix is not symmetric within tolerance");
    g_ = (g_ + g_.transpose()) / 2;
    // Relative to |M|^2 |G|, the size of the terms in MᵀGM.
    const double m_inf = std::max(1.0, inf_norm(m_));
    defect_ = inf_norm(m_.transpose() * g_ * m_ - g_) / (gnorm * m_inf * m_inf);
    if (defect_ > tol_.orthogonality) throw NotAnIsometry("orthogonality defect exceeds tolerance");
    mnorm_ = std::max(1.0, spectral_norm(m_));
    noise_ = std::max(defect_, static_cast<double>(n_) * kEps) * mnorm_;
    Eigen::FullPivLU<MatD> lu(m_);
    if (!lu.isInvertible()) throw NotAnIsometry("matrix is singular");
    minv_ = lu.inverse();

    Eigen::EigenSolver<MatD> es(m_, false);
    if (es.info() != Eigen::Success) throw Indeterminate("eigenvalue solver", 0, 0);
    std::vector<Cplx> eig(es.eigenvalues().data(), es.eigenvalues().data() + n_);
    split(eig);
    build_families();

    report_.invariant = canonicalize(report_.invariant);
    if (auto v = validate_invariant(report_.invariant); !v.empty())
      throw Indeterminate("structure consistency (" + v.front() + ")", 0, 0);
    check_total_signature();
    for (const auto& f : report_.invariant.families)
      if (f.factor.is_type_i()) {
        for (const auto& [rounded, raw] : quad_a_)
          if (rounded == f.factor.a) report_.unit_quad_a.push_back(raw);
      }
    return report_;
  }

 private:
  double bound(int m) const { return tol_.eig_cluster + 10.0 * std::pow(noise_, 1.0 / m); }

  void warn(const std::string& q, double value, double threshold) { report_.diagnostics.push_back({q, value, threshold}); }

  /// Smallest j <= |eig| with dim ker (M - c)^j = |eig|, or -1.
  int validate_center(const std::vector<Cplx>& eig, Cplx c, RankInfo* worst) const {
    const int k = static_cast<int>(eig.size());
    MatC a = m_.cast<Cplx>() - c * MatC::Identity(n_, n_);
    std::vector<RankInfo> info;
    kernel_staircase(a, mnorm_ + std::abs(c), k, tol_.rank_rel, &info);
    for (int j = 0; j < k; ++j) {
      if (info[static_cast<std::size_t>(j)].nullity > k) return -1;
      if (info[static_cast<std::size_t>(j)].nullity == k) {
        if (worst) {
          *worst = {};
          for (int i = 0; i <= j; ++i) worst->largest_zero = std::max(worst->largest_zero, info[static_cast<std::size_t>(i)].largest_zero);
        }
        return j + 1;
      }
    }
    return -1;
  }

  bool accept(const std::vector<Cplx>& eig, Cluster& out) {
    Cplx mean = std::accumulate(eig.begin(), eig.end(), Cplx(0)) / static_cast<double>(eig.size());
    const int k = static_cast<int>(eig.size());
    std::vector<Cplx> centers;
    if (std::abs(mean - 1.0) <= bound(k)) centers.push_back(1.0);
    if (std::abs(mean + 1.0) <= bound(k)) centers.push_back(-1.0);
    if (std::abs(mean.imag()) > bound(k) && std::abs(std::abs(mean) - 1.0) <= bound(k))
      centers.push_back(mean / std::abs(mean));
    centers.push_back(mean);
    for (Cplx c : centers) {
      RankInfo info;
      int idx = validate_center(eig, c, &info);
      if (idx < 0) continue;
      double spread = 0;
      for (Cplx z : eig) spread = std::max(spread, std::abs(z - c));
      if (spread > bound(idx)) continue;
      out = {eig, c, idx, spread};
      if (spread > 10.0 * std::pow(noise_, 1.0 / idx))
        warn("eigenvalue cluster spread", spread, 10.0 * std::pow(noise_, 1.0 / idx));
      if (info.largest_zero > tol_.rank_rel / kRankBand)
        warn("cluster rank gap (zero singular value)", info.largest_zero, tol_.rank_rel / kRankBand);
      return true;
    }
    return false;
  }

  void split(std::vector<Cplx> eig) {
    if (eig.empty()) return;
    Cluster c;
    if (accept(eig, c)) {
      clusters_.push_back(std::move(c));
      return;
    }
    if (eig.size() == 1) throw Indeterminate("eigenvalue cluster validation", std::abs(eig[0]), tol_.rank_rel);
    // Single linkage: drop the longest edge of the minimum spanning tree.
    const std::size_t k = eig.size();
    std::vector<double> dist(k, std::numeric_limits<double>::infinity());
    std::vector<int> parent(k, -1);
    std::vector<bool> in(k, false);
    dist[0] = 0;
    std::vector<std::pair<double, std::pair<int, int>>> edges;
    for (std::size_t it = 0; it < k; ++it) {
      std::size_t u = k;
      for (std::size_t i = 0; i < k; ++i)
        if (!in[i] && (u == k || dist[i] < dist[u])) u = i;
      in[u] = true;
      if (parent[u] >= 0) edges.push_back({dist[u], {parent[u], static_cast<int>(u)}});
      for (std::size_t i = 0; i < k; ++i) {
        double d = std::abs(eig[i] - eig[u]);
        if (!in[i] && d < dist[i]) {
          dist[i] = d;
          parent[i] = static_cast<int>(u);
        }
      }
    }
    auto longest = std::max_element(edges.begin(), edges.end());
    // Components after removing the longest edge.
    std::vector<std::vector<int>> adj(k);
    for (const auto& e : edges)
      if (&e != &*longest) {
        adj[static_cast<std::size_t>(e.second.first)].push_back(e.second.second);
        adj[static_cast<std::size_t>(e.second.second)].push_back(e.second.first);
      }
    std::vector<int> side(k, 1);
    std::vector<int> stack{longest->second.first};
    side[static_cast<std::size_t>(longest->second.first)] = 0;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int v : adj[static_cast<std::size_t>(u)])
        if (side[static_cast<std::size_t>(v)] == 1) {
          side[static_cast<std::size_t>(v)] = 0;
          stack.push_back(v);
        }
    }
    std::vector<Cplx> a, b;
    for (std::size_t i = 0; i < k; ++i) (side[i] == 0 ? a : b).push_back(eig[i]);
    split(std::move(a));
    split(std::move(b));
  }

  /// Cluster whose center is within tolerance of z and has the given size.
  int find_cluster(Cplx z, std::size_t size, const std::vector<bool>& used) const {
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < clusters_.size(); ++i) {
      if (used[i] || clusters_[i].eig.size() != size) continue;
      double d = std::abs(clusters_[i].center - z);
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(i);
      }
    }
    if (best >= 0 && best_d <= bound(clusters_[static_cast<std::size_t>(best)].index) * (1 + std::abs(z))) return best;
    return -1;
  }

  /// Real matrix polynomial t(M), coefficients lowest degree first.
  MatD eval(const std::vector<double>& t, double* scale) const {
    MatD acc = MatD::Zero(n_, n_);
    MatD pw = MatD::Identity(n_, n_);
    double s = 0, mp = 1;
    for (std::size_t i = 0; i < t.size(); ++i) {
      acc += t[i] * pw;
      s += std::abs(t[i]) * mp;
      pw = pw * m_;
      mp *= mnorm_;
    }
    *scale = s;
    return acc;
  }

  Rational rounded(double v, const std::string& what) {
    Rational r = round_rational(v, tol_.max_denominator);
    double err = std::abs(v - r.get_d());
    double thr = 100 * tol_.eig_cluster;
    if (err > thr) warn(what + " rational rounding", err, thr);
    return r;
  }

  void build_families() {
    std::vector<bool> used(clusters_.size(), false);
    std::vector<PendingPair> pairs;
    for (std::size_t i = 0; i < clusters_.size(); ++i) {
      if (used[i]) continue;
      const Cluster& c = clusters_[i];
      const std::size_t k = c.eig.size();
      used[i] = true;
      if (c.center == Cplx(1.0) || c.center == Cplx(-1.0)) {
        FactorClass f = c.center.real() > 0 ? FactorClass::o_minus() : FactorClass::o_plus();
        report_.invariant.families.push_back(family(f, {-c.center.real(), 1.0}, static_cast<int>(k), 0));
        continue;
      }
      bool on_circle = std::abs(std::abs(c.center) - 1.0) <= bound(c.index) && std::abs(c.center.imag()) > 0;
      if (on_circle) {
        int j = find_cluster(std::conj(c.center), k, used);
        if (j < 0) throw Indeterminate("conjugate eigenvalue cluster", std::abs(c.center.imag()), tol_.eig_cluster);
        used[static_cast<std::size_t>(j)] = true;
        double a = -2 * c.center.real();
        Rational ar = rounded(a, "unit_quad a");
        if (abs(ar) >= 2) throw Indeterminate("unit_quad a", a, 2);
        quad_a_.emplace_back(ar, a);
        report_.invariant.families.push_back(family(FactorClass::unit_quad(ar), {1.0, a, 1.0}, static_cast<int>(k), a));
        continue;
      }
      // Type II: collect the orbit {z, conj z, 1/z, 1/conj z}.
      std::vector<Cplx> orbit{c.center};
      for (Cplx z : {std::conj(c.center), 1.0 / c.center, 1.0 / std::conj(c.center)})
        if (std::none_of(orbit.begin(), orbit.end(), [&](Cplx w) { return std::abs(w - z) <= bound(c.index) * (1 + std::abs(z)); }))
          orbit.push_back(z);
      for (std::size_t t = 1; t < orbit.size(); ++t) {
        int j = find_cluster(orbit[t], k, used);
        if (j < 0) throw Indeterminate("reciprocal eigenvalue cluster", std::abs(orbit[t]), tol_.eig_cluster);
        used[static_cast<std::size_t>(j)] = true;
      }
      // h = prod (x - z) over the orbit, real coefficients.
      std::vector<Cplx> h{1.0};
      for (Cplx z : orbit) {
        std::vector<Cplx> next(h.size() + 1, 0.0);
        for (std::size_t t = 0; t < h.size(); ++t) {
          next[t + 1] += h[t];
          next[t] -= z * h[t];
        }
        h = std::move(next);
      }
      std::vector<double> hr;
      for (Cplx v : h) hr.push_back(v.real());
      Family fam = family(FactorClass{FactorKind::RecipPair, 0, {}}, hr, static_cast<int>(k), 0);
      pairs.push_back({std::move(hr), std::move(fam.free_blocks)});
    }
    merge_pairs(pairs);
  }

  struct PendingPair {
    std::vector<double> h;
    std::vector<FreeBlock> blocks;
  };

  /// An orbit polynomial need not be rational (real roots of x^2-5x+3 and its
  /// adjoint form two orbits), but the product over all orbits with the same
  /// layers is, and it is what the canonical form presents.
  void merge_pairs(const std::vector<PendingPair>& pairs) {
    std::vector<bool> done(pairs.size(), false);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if (done[i]) continue;
      std::vector<double> h{1.0};
      for (std::size_t j = i; j < pairs.size(); ++j) {
        if (done[j] || pairs[j].blocks != pairs[i].blocks) continue;
        done[j] = true;
        std::vector<double> next(h.size() + pairs[j].h.size() - 1, 0.0);
        for (std::size_t s = 0; s < h.size(); ++s)
          for (std::size_t t = 0; t < pairs[j].h.size(); ++t) next[s + t] += h[s] * pairs[j].h[t];
        h = std::move(next);
      }
      std::vector<Rational> hq;
      for (double v : h) hq.push_back(rounded(v, "recip_pair coefficient"));
      Poly hp(hq);
      if (!is_self_reciprocal(hp)) throw Indeterminate("recip_pair self-reciprocity after rounding", 0, 0);
      report_.invariant.families.push_back({FactorClass::recip_pair(hp), {}, pairs[i].blocks});
    }
  }

  Family family(const FactorClass& f, const std::vector<double>& t, int k, double a) {
    const int deg = static_cast<int>(t.size()) - 1;
    double scale1 = 0;
    MatD nmat = eval(t, &scale1);
    std::vector<RankInfo> info;
    std::vector<MatD> kernels{MatD(n_, 0)};
    for (auto& kb : kernel_staircase(nmat, scale1, k + 1, tol_.rank_rel, &info)) kernels.push_back(std::move(kb));
    std::vector<int> d{0};
    for (int j = 1; j <= k + 1; ++j) {
      const RankInfo& r = info[static_cast<std::size_t>(j - 1)];
      if (j <= k && r.largest_zero > tol_.rank_rel / kRankBand) warn("layer rank gap (zero singular value)", r.largest_zero, tol_.rank_rel / kRankBand);
      if (j <= k && r.smallest_nonzero < kRankBand * tol_.rank_rel)
        warn("layer rank gap (nonzero singular value)", r.smallest_nonzero, kRankBand * tol_.rank_rel);
      d.push_back(r.nullity);
    }
    if (d[static_cast<std::size_t>(k)] != deg * k || d[static_cast<std::size_t>(k + 1)] != deg * k)
      throw Indeterminate("primary component dimension", d[static_cast<std::size_t>(k)], deg * k);
    Family fam{f, {}, {}};
    for (int l = 1; l <= k; ++l) {
      int cnt = 2 * d[static_cast<std::size_t>(l)] - d[static_cast<std::size_t>(l - 1)] - d[static_cast<std::size_t>(l + 1)];
      if (cnt < 0 || cnt % deg != 0) throw Indeterminate("layer multiplicity", cnt, deg);
      int mult = cnt / deg;
      if (mult == 0) continue;
      if (f.is_type_ii() || l % 2 == 0) {
        fam.free_blocks.push_back({l, mult});
        continue;
      }
      Signature s = signature(f, kernels[static_cast<std::size_t>(l)], l, mult * deg, a);
      if (f.is_type_i()) {
        if (s.pos % 2 || s.neg % 2) throw Indeterminate("Type I trace form parity", s.pos, 2);
        s = {s.pos / 2, s.neg / 2};
      }
      fam.signed_blocks.push_back({l, mult, s.pos, s.neg});
    }
    return fam;
  }

  /// Signature of <T^{l-1} u, v> on ker N^l keeping the `rank` largest eigenvalues.
  Signature signature(const FactorClass& f, const MatD& kernel, int l, int rank, double a) {
    MatD t = f.is_type_o() ? MatD(m_ - minv_) : MatD(m_ + a * MatD::Identity(n_, n_) + minv_);
    MatD tp = MatD::Identity(n_, n_);
    for (int j = 1; j < l; ++j) tp = tp * t;
    MatD q = (tp * kernel).transpose() * g_ * kernel;
    q = (q + q.transpose()) / 2;
    Eigen::SelfAdjointEigenSolver<MatD> es(q);
    std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(ev.begin(), ev.end(), [](double x, double y) { return std::abs(x) > std::abs(y); });
    const double scale = g_.norm() * std::pow(t.norm(), l - 1);
    if (static_cast<int>(ev.size()) < rank) throw Indeterminate("signature rank", static_cast<double>(ev.size()), rank);
    Signature s;
    for (int i = 0; i < rank; ++i) (ev[static_cast<std::size_t>(i)] > 0 ? s.pos : s.neg)++;
    double kept = std::abs(ev[static_cast<std::size_t>(rank - 1)]) / scale;
    if (kept <= tol_.sig_margin) throw Indeterminate("signature margin", kept, tol_.sig_margin);
    if (static_cast<int>(ev.size()) > rank) {
      double dropped = std::abs(ev[static_cast<std::size_t>(rank)]) / scale;
      if (dropped > tol_.sig_margin) warn("signature gap (discarded eigenvalue)", dropped, tol_.sig_margin);
    }
    return s;
  }

  void check_total_signature() {
    Eigen::SelfAdjointEigenSolver<MatD> es(g_);
    const double scale = es.eigenvalues().cwiseAbs().maxCoeff();
    Signature s;
    double smallest = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
      double v = es.eigenvalues()(i);
      smallest = std::min(smallest, std::abs(v) / scale);
      (v > 0 ? s.pos : s.neg)++;
    }
    if (smallest <= tol_.sig_margin) throw Indeterminate("Gram matrix conditioning", smallest, tol_.sig_margin);
    if (s != total_signature(report_.invariant))
      throw Indeterminate("signature consistency", static_cast<double>(s.pos), total_signature(report_.invariant).pos);
  }

  ToleranceProfile tol_;
  MatD m_, g_, minv_;
  Eigen::Index n_ = 0;
  double defect_ = 0, mnorm_ = 1, noise_ = 0;
  std::vector<Cluster> clusters_;
  std::vector<std::pair<Rational, double>> quad_a_;
  AnalysisReport report_;
};

}  // namespace

AnalysisReport analyze_numeric(const NumericIsometry& iso, const ToleranceProfile& tol) {
  if (iso.gram.size() != iso.matrix.size()) throw InvalidInput("matrix and Gram matrix differ in size");
  return Analyzer(iso, tol).run();
}

NumericIsometry to_numeric(const ExactIsometry& iso) {
  auto conv = [](const Mat& m) {
    std::vector<std::vector<double>> out(m.rows(), std::vector<double>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = m(i, j).get_d();
    return out;
  };
  return {conv(iso.matrix), conv(iso.gram)};
}

}  // namespace isoclass
