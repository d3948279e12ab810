#include "isoclass/matrix.hpp"

#include <sstream>
#include <utility>

#include "isoclass/error.hpp"

namespace isoclass {

Mat::Mat(std::initializer_list<std::initializer_list<Rational>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  a_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw InvalidInput("ragged matrix literal");
    a_.insert(a_.end(), r.begin(), r.end());
  }
}

Mat Mat::identity(std::size_t n) {
  Mat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Mat Mat::diagonal(const std::vector<Rational>& d) {
  Mat m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

Mat Mat::from_columns(const std::vector<Vec>& cols, std::size_t rows) {
  Mat m(rows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (cols[j].size() != rows) throw InvalidInput("column length mismatch");
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
  }
  return m;
}

Vec Mat::column(std::size_t j) const {
  Vec v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

std::vector<Vec> Mat::columns() const {
  std::vector<Vec> out;
  out.reserve(cols_);
  for (std::size_t j = 0; j < cols_; ++j) out.push_back(column(j));
  return out;
}

Mat Mat::transpose() const {
  Mat t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

bool Mat::is_zero() const {
  for (const auto& x : a_)
    if (!isoclass::is_zero(x)) return false;
  return true;
}

bool Mat::is_symmetric() const {
  if (!is_square()) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i + 1; j < cols_; ++j)
      if ((*this)(i, j) != (*this)(j, i)) return false;
  return true;
}

Mat& Mat::operator+=(const Mat& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw InvalidInput("matrix sum dimension mismatch");
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
  return *this;
}

Mat& Mat::operator-=(const Mat& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw InvalidInput("matrix difference dimension mismatch");
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
  return *this;
}

Mat& Mat::operator*=(const Rational& s) {
  for (auto& x : a_) x *= s;
  return *this;
}

Mat operator*(const Mat& a, const Mat& b) {
  if (a.cols_ != b.rows_) throw InvalidInput("matrix product dimension mismatch");
  Mat r(a.rows_, b.cols_);
  Rational t;
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Rational& aik = a(i, k);
      if (is_zero(aik)) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) {
        const Rational& bkj = b(k, j);
        if (is_zero(bkj)) continue;
        t = aik * bkj;
        r(i, j) += t;
      }
    }
  return r;
}

Vec operator*(const Mat& a, const Vec& v) {
  if (a.cols_ != v.size()) throw InvalidInput("matrix-vector dimension mismatch");
  Vec r(a.rows_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k)
      if (!is_zero(v[k]) && !is_zero(a(i, k))) r[i] += a(i, k) * v[k];
  return r;
}

Mat Mat::operator-() const {
  Mat r = *this;
  for (auto& x : r.a_) x = -x;
  return r;
}

std::string Mat::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < rows_; ++i) {
    os << (i ? ", [" : "[");
    for (std::size_t j = 0; j < cols_; ++j) os << (j ? ", " : "") << isoclass::to_string((*this)(i, j));
    os << ']';
  }
  os << ']';
  return os.str();
}

Mat direct_sum(const Mat& a, const Mat& b) { return direct_sum(std::vector<Mat>{a, b}); }

Mat direct_sum(const std::vector<Mat>& blocks) {
  std::size_t r = 0, c = 0;
  for (const auto& b : blocks) {
    r += b.rows();
    c += b.cols();
  }
  Mat out(r, c);
  std::size_t ro = 0, co = 0;
  for (const auto& b : blocks) {
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) out(ro + i, co + j) = b(i, j);
    ro += b.rows();
    co += b.cols();
  }
  return out;
}

Mat hstack(const Mat& a, const Mat& b) {
  if (a.cols() == 0) return b;
  if (b.cols() == 0) return a;
  if (a.rows() != b.rows()) throw InvalidInput("hstack row mismatch");
  Mat out(a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) out(i, a.cols() + j) = b(i, j);
  }
  return out;
}

Mat power(const Mat& m, int e) {
  Mat r = Mat::identity(m.n());
  Mat base = m;
  while (e > 0) {
    if (e & 1) r = r * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return r;
}

Mat mat_poly_eval(const Poly& f, const Mat& m) {
  if (!m.is_square()) throw InvalidInput("polynomial evaluation needs a square matrix");
  const std::size_t n = m.n();
  Mat acc(n, n);
  for (int i = f.degree(); i >= 0; --i) {
    acc = acc * m;
    const Rational c = f.coeff(i);
    if (!is_zero(c))
      for (std::size_t k = 0; k < n; ++k) acc(k, k) += c;
  }
  return acc;
}

Poly char_poly(const Mat& m) {
  if (!m.is_square()) throw InvalidInput("characteristic polynomial needs a square matrix");
  const std::size_t n = m.n();
  std::vector<Rational> c(n + 1);
  c[n] = 1;
  Mat mk(n, n);  // M_0 = 0
  for (std::size_t k = 1; k <= n; ++k) {
    mk = m * mk;
    for (std::size_t i = 0; i < n; ++i) mk(i, i) += c[n - k + 1];
    Mat amk = m * mk;
    Rational tr = 0;
    for (std::size_t i = 0; i < n; ++i) tr += amk(i, i);
    c[n - k] = -tr / static_cast<long>(k);
  }
  return Poly(std::move(c));
}

namespace {

/// In-place reduced row-echelon form; returns pivot columns.
std::vector<std::size_t> rref(Mat& a) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
    std::size_t p = row;
    while (p < a.rows() && is_zero(a(p, col))) ++p;
    if (p == a.rows()) continue;
    if (p != row)
      for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(p, j), a(row, j));
    Rational inv = 1 / a(row, col);
    for (std::size_t j = col; j < a.cols(); ++j) a(row, j) *= inv;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == row || is_zero(a(i, col))) continue;
      Rational f = a(i, col);
      for (std::size_t j = col; j < a.cols(); ++j)
        if (!is_zero(a(row, j))) a(i, j) -= f * a(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace

RankNullspace rank_nullspace(const Mat& m) {
  Mat a = m;
  auto pivots = rref(a);
  RankNullspace out;
  out.rank = pivots.size();
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : pivots) is_pivot[p] = true;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    Vec v(m.cols());
    v[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -a(r, free);
    out.basis.push_back(std::move(v));
  }
  return out;
}

std::size_t rank(const Mat& m) {
  Mat a = m;
  return rref(a).size();
}

Mat column_basis(const Mat& m) {
  Mat a = m;
  auto pivots = rref(a);
  Mat out(m.rows(), pivots.size());
  for (std::size_t k = 0; k < pivots.size(); ++k)
    for (std::size_t i = 0; i < m.rows(); ++i) out(i, k) = m(i, pivots[k]);
  return out;
}

Mat inverse(const Mat& m) {
  if (!m.is_square()) throw InvalidInput("inverse of a non-square matrix");
  const std::size_t n = m.n();
  Mat aug = hstack(m, Mat::identity(n));
  if (n == 0) return Mat();
  auto pivots = rref(aug);
  if (pivots.size() < n || pivots[n - 1] != n - 1) throw InvalidInput("singular matrix");
  Mat inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
  return inv;
}

Rational determinant(const Mat& m) {
  if (!m.is_square()) throw InvalidInput("determinant of a non-square matrix");
  Mat a = m;
  const std::size_t n = m.n();
  Rational det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t p = col;
    while (p < n && is_zero(a(p, col))) ++p;
    if (p == n) return 0;
    if (p != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(p, j), a(col, j));
      det = -det;
    }
    det *= a(col, col);
    for (std::size_t i = col + 1; i < n; ++i) {
      if (is_zero(a(i, col))) continue;
      Rational f = a(i, col) / a(col, col);
      for (std::size_t j = col; j < n; ++j) a(i, j) -= f * a(col, j);
    }
  }
  return det;
}

Mat solve_in_span(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows()) throw InvalidInput("solve dimension mismatch");
  const std::size_t k = a.cols();
  Mat aug = hstack(a, b);
  if (b.cols() == 0) return Mat(k, 0);
  if (k == 0) {
    if (!b.is_zero()) throw InternalError("right-hand side outside an empty span");
    return Mat(0, b.cols());
  }
  auto pivots = rref(aug);
  for (std::size_t r = 0; r < pivots.size(); ++r)
    if (pivots[r] >= k) throw InternalError("right-hand side outside the column span");
  if (pivots.size() != k) throw InternalError("solve_in_span needs independent columns");
  Mat x(k, b.cols());
  for (std::size_t r = 0; r < k; ++r)
    for (std::size_t j = 0; j < b.cols(); ++j) x(r, j) = aug(r, k + j);
  return x;
}

Mat restrict_to(const Mat& m, const Mat& basis) { return solve_in_span(basis, m * basis); }

bool in_span(const Mat& basis, const Vec& v) {
  Mat col = Mat::from_columns({v}, v.size());
  return rank(hstack(basis, col)) == rank(basis);
}

Signature symmetric_signature(const Mat& g) {
  if (!g.is_symmetric()) throw InvalidInput("signature of a non-symmetric matrix");
  Mat a = g;
  const std::size_t n = g.n();
  std::vector<bool> done(n, false);
  Signature sig;
  auto pivot_on = [&](std::size_t p) {
    const Rational d = a(p, p);
    (sgn(d) > 0 ? sig.pos : sig.neg) += 1;
    done[p] = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i] || is_zero(a(i, p))) continue;
      Rational f = a(i, p) / d;
      for (std::size_t j = 0; j < n; ++j)
        if (!done[j] && !is_zero(a(p, j))) a(i, j) -= f * a(p, j);
    }
    for (std::size_t i = 0; i < n; ++i) a(i, p) = a(p, i) = 0;
  };
  for (;;) {
    std::size_t p = n;
    for (std::size_t i = 0; i < n && p == n; ++i)
      if (!done[i] && !is_zero(a(i, i))) p = i;
    if (p != n) {
      pivot_on(p);
      continue;
    }
    // Zero diagonal: find an off-diagonal entry and fold row/col j into i,
    // which makes a(i,i) = 2 a(i,j) != 0.
    std::size_t pi = n, pj = n;
    for (std::size_t i = 0; i < n && pi == n; ++i) {
      if (done[i]) continue;
      for (std::size_t j = i + 1; j < n; ++j)
        if (!done[j] && !is_zero(a(i, j))) {
          pi = i;
          pj = j;
          break;
        }
    }
    if (pi == n) break;
    for (std::size_t k = 0; k < n; ++k) a(pi, k) += a(pj, k);
    for (std::size_t k = 0; k < n; ++k) a(k, pi) += a(k, pj);
    pivot_on(pi);
  }
  return sig;
}

bool is_isometry(const Mat& m, const Mat& g) {
  if (!m.is_square() || !g.is_square() || m.n() != g.n())
    throw InvalidInput("isometry check dimension mismatch");
  if (!g.is_symmetric()) return false;
  if (is_zero(determinant(g))) return false;
  return m.transpose() * g * m == g;
}

Mat companion(const Poly& t) {
  if (!t.is_monic()) throw InvalidInput("companion matrix needs a monic polynomial");
  const auto d = static_cast<std::size_t>(t.degree());
  Mat c(d, d);
  for (std::size_t i = 1; i < d; ++i) c(i, i - 1) = 1;
  for (std::size_t i = 0; i < d; ++i) c(i, d - 1) = -t.coeff(static_cast<int>(i));
  return c;
}

}  // namespace isoclass
