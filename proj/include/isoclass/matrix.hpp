#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "isoclass/poly.hpp"
#include "isoclass/rational.hpp"

namespace isoclass {

using Vec = std::vector<Rational>;

/// Dense rational matrix, row-major. Most operations expect square input;
/// rectangular matrices appear as bases of subspaces (one vector per column).
class Mat {
 public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}
  Mat(std::initializer_list<std::initializer_list<Rational>> rows);

  static Mat identity(std::size_t n);
  static Mat zero(std::size_t n) { return Mat(n, n); }
  static Mat diagonal(const std::vector<Rational>& d);
  /// Columns placed side by side; all must have the same length.
  static Mat from_columns(const std::vector<Vec>& cols, std::size_t rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  /// Dimension of a square matrix.
  std::size_t n() const { return rows_; }
  bool is_square() const { return rows_ == cols_; }

  Rational& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  Vec column(std::size_t j) const;
  std::vector<Vec> columns() const;
  Mat transpose() const;
  bool is_zero() const;
  bool is_symmetric() const;

  Mat& operator+=(const Mat& o);
  Mat& operator-=(const Mat& o);
  Mat& operator*=(const Rational& s);
  friend Mat operator+(Mat a, const Mat& b) { return a += b; }
  friend Mat operator-(Mat a, const Mat& b) { return a -= b; }
  friend Mat operator*(Mat a, const Rational& s) { return a *= s; }
  friend Mat operator*(const Rational& s, Mat a) { return a *= s; }
  friend Mat operator*(const Mat& a, const Mat& b);
  friend Vec operator*(const Mat& a, const Vec& v);
  Mat operator-() const;

  friend bool operator==(const Mat& a, const Mat& b) = default;

  std::string to_string() const;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Rational> a_;
};

/// Block-diagonal direct sum.
Mat direct_sum(const Mat& a, const Mat& b);
Mat direct_sum(const std::vector<Mat>& blocks);

/// Columns of a then columns of b.
Mat hstack(const Mat& a, const Mat& b);

Mat power(const Mat& m, int e);

/// f(M), exact (Horner).
Mat mat_poly_eval(const Poly& f, const Mat& m);

/// Monic characteristic polynomial det(xI - M) by Faddeev–LeVerrier.
Poly char_poly(const Mat& m);

struct RankNullspace {
  std::size_t rank = 0;
  std::vector<Vec> basis;
};

/// Rank and a kernel basis (one vector per free column of the reduced
/// row-echelon form).
RankNullspace rank_nullspace(const Mat& m);
std::size_t rank(const Mat& m);

/// Maximal linearly independent subset of the columns, in order.
Mat column_basis(const Mat& m);

/// Inverse of a square matrix; throws InvalidInput when singular.
Mat inverse(const Mat& m);
Rational determinant(const Mat& m);

/// Solves A X = B for a full-column-rank A whose column space contains B.
/// Throws InternalError when B is not in the column space.
Mat solve_in_span(const Mat& a, const Mat& b);

/// Matrix of the restriction of M to the invariant subspace spanned by the
/// (independent) columns of basis, in that basis.
Mat restrict_to(const Mat& m, const Mat& basis);

/// True when v lies in the column span of basis.
bool in_span(const Mat& basis, const Vec& v);

struct Signature {
  int pos = 0;
  int neg = 0;
  int dim() const { return pos + neg; }
  friend bool operator==(const Signature&, const Signature&) = default;
  friend auto operator<=>(const Signature&, const Signature&) = default;
  Signature& operator+=(const Signature& o) {
    pos += o.pos;
    neg += o.neg;
    return *this;
  }
  friend Signature operator+(Signature a, const Signature& b) { return a += b; }
};

/// Exact inertia (positive, negative counts) of a symmetric matrix by
/// congruence diagonalization; pos + neg = rank. Degenerate input is allowed.
/// Throws InvalidInput for non-symmetric input.
Signature symmetric_signature(const Mat& g);

/// G symmetric, det G != 0 and MᵀGM = G. Throws InvalidInput on a
/// dimension mismatch.
bool is_isometry(const Mat& m, const Mat& g);

/// Companion matrix of a monic polynomial (basis 1, x, ..., x^{d-1}).
Mat companion(const Poly& t);

}  // namespace isoclass
