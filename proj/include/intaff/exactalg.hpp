#pragma once

// Exact linear algebra over Z, Q and prime fields.
//
// Convention used throughout the library: linear maps act on column vectors,
// so a map Z^n -> Z^m is an m x n matrix. Relations of a quotient module are
// rows, i.e. cokernel(M) = Z^cols / (row span of M).

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "intaff/error.hpp"

namespace intaff {

using Integer = mpz_class;
using Rational = mpq_class;
using IntegerVector = std::vector<Integer>;
using RationalVector = std::vector<Rational>;

template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}
  Matrix(std::initializer_list<std::initializer_list<T>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_)
        throw Error(ErrorCode::DimensionMismatch, "ragged matrix initializer");
      for (const auto& v : row) data_.push_back(v);
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::vector<T> row(std::size_t r) const {
    return std::vector<T>(data_.begin() + r * cols_,
                          data_.begin() + (r + 1) * cols_);
  }
  std::vector<T> col(std::size_t c) const {
    std::vector<T> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  bool is_zero() const {
    for (const auto& v : data_)
      if (v != 0) return false;
    return true;
  }

  std::vector<T> apply(const std::vector<T>& x) const {
    if (x.size() != cols_)
      throw Error(ErrorCode::DimensionMismatch, "matrix-vector shape mismatch");
    std::vector<T> y(rows_, T(0));
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c)
        if ((*this)(r, c) != 0) y[r] += (*this)(r, c) * x[c];
    return y;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_)
      throw Error(ErrorCode::DimensionMismatch, "matrix product shape mismatch");
    Matrix p(a.rows_, b.cols_);
    // Both factors are usually sparse (coboundaries, elimination transforms).
    std::vector<std::vector<std::size_t>> nonzero(b.rows_);
    for (std::size_t k = 0; k < b.rows_; ++k)
      for (std::size_t j = 0; j < b.cols_; ++j)
        if (b(k, j) != 0) nonzero[k].push_back(j);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T& aik = a(i, k);
        if (aik == 0) continue;
        for (std::size_t j : nonzero[k]) p(i, j) += aik * b(k, j);
      }
    return p;
  }
  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    a.check_same_shape(b);
    Matrix s = a;
    for (std::size_t i = 0; i < s.data_.size(); ++i) s.data_[i] += b.data_[i];
    return s;
  }
  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    a.check_same_shape(b);
    Matrix s = a;
    for (std::size_t i = 0; i < s.data_.size(); ++i) s.data_[i] -= b.data_[i];
    return s;
  }
  friend Matrix operator-(const Matrix& a) {
    Matrix s = a;
    for (auto& v : s.data_) v = -v;
    return s;
  }
  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }
  friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

  friend std::ostream& operator<<(std::ostream& os, const Matrix& m) {
    os << '[';
    for (std::size_t r = 0; r < m.rows_; ++r) {
      os << (r ? ",[" : "[");
      for (std::size_t c = 0; c < m.cols_; ++c) os << (c ? "," : "") << m(r, c);
      os << ']';
    }
    return os << ']';
  }

 private:
  void check_same_shape(const Matrix& b) const {
    if (rows_ != b.rows_ || cols_ != b.cols_)
      throw Error(ErrorCode::DimensionMismatch, "matrix shapes differ");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using IntegerMatrix = Matrix<Integer>;
using RationalMatrix = Matrix<Rational>;

RationalMatrix to_rational(const IntegerMatrix& m);
// nullopt when some entry is not an integer.
std::optional<IntegerMatrix> to_integer(const RationalMatrix& m);
RationalVector to_rational(const IntegerVector& v);
std::optional<IntegerVector> to_integer(const RationalVector& v);

// Parses "p", "-p" or "p/q" (decimal, arbitrary size); throws Error(Parse).
Rational parse_rational(const std::string& text);
Integer parse_integer(const std::string& text);
std::string to_string(const Rational& q);
// "(a, b, ...)"
std::string to_string(const RationalVector& v);
std::string to_string(const IntegerVector& v);

Integer determinant(const IntegerMatrix& m);
Rational determinant(const RationalMatrix& m);
bool is_unimodular(const IntegerMatrix& m);
std::optional<RationalMatrix> inverse(const RationalMatrix& m);
// Inverse of a unimodular integer matrix; nullopt if |det| != 1.
std::optional<IntegerMatrix> unimodular_inverse(const IntegerMatrix& m);

// Finitely generated abelian group Z^free_rank + sum Z/d_i, d_i | d_{i+1},
// every d_i >= 2.
struct AbelianGroup {
  std::size_t free_rank = 0;
  std::vector<Integer> invariant_factors;

  static AbelianGroup free(std::size_t rank) { return {rank, {}}; }
  // Builds the canonical form from an arbitrary diagonal presentation
  // (entries 0 give free summands, entries +-1 are dropped).
  static AbelianGroup from_diagonal(const std::vector<Integer>& diagonal);

  bool is_trivial() const { return free_rank == 0 && invariant_factors.empty(); }
  // "Z^3 ⊕ Z/2", "Z", "0".
  std::string to_string() const;

  friend bool operator==(const AbelianGroup&, const AbelianGroup&) = default;
};

std::ostream& operator<<(std::ostream& os, const AbelianGroup& g);

struct HermiteForm {
  IntegerMatrix H;  // row Hermite normal form
  IntegerMatrix U;  // unimodular, H = U * M
};

HermiteForm hnf(const IntegerMatrix& m);

struct SmithDecomposition {
  IntegerMatrix D;  // D = U * M * V
  IntegerMatrix U;
  IntegerMatrix V;
  IntegerMatrix U_inverse;
  IntegerMatrix V_inverse;
  std::size_t rank = 0;

  std::vector<Integer> diagonal() const;
};

SmithDecomposition snf(const IntegerMatrix& m);

// Z^cols / (row span of m), invariant factors equal to 1 dropped.
AbelianGroup cokernel(const IntegerMatrix& m);

class Ring {
 public:
  enum class Kind { Integers, Rationals, PrimeField };

  static Ring integers() { return Ring(Kind::Integers, 0); }
  static Ring rationals() { return Ring(Kind::Rationals, 0); }
  static Ring prime_field(const Integer& p);

  Kind kind() const { return kind_; }
  const Integer& modulus() const { return modulus_; }
  bool is_field() const { return kind_ != Kind::Integers; }
  std::string name() const;

  // Canonical representative of x in this ring: identity over Z and Q,
  // residue in [0, p) over F_p. Throws if x has no image (e.g. 1/p in F_p).
  Rational normalize(const Rational& x) const;
  RationalVector normalize(const RationalVector& v) const;
  RationalMatrix normalize(const RationalMatrix& m) const;
  bool contains(const Rational& x) const;

  friend bool operator==(const Ring&, const Ring&) = default;

 private:
  Ring(Kind kind, Integer modulus) : kind_(kind), modulus_(std::move(modulus)) {}
  Kind kind_;
  Integer modulus_;
};

struct RowEchelon {
  RationalMatrix R;                  // reduced row echelon form
  std::vector<std::size_t> pivots;   // pivot column of each nonzero row
};

// Reduced row echelon form over a field ring.
RowEchelon row_reduce(const RationalMatrix& m, const Ring& field);
std::size_t rank(const RationalMatrix& m, const Ring& field = Ring::rationals());

// Kernel bases, as columns.
IntegerMatrix integer_kernel(const IntegerMatrix& m);
RationalMatrix field_kernel(const RationalMatrix& m, const Ring& field);

std::optional<IntegerVector> solve_integer(const IntegerMatrix& m,
                                           const IntegerVector& b);
// Solves m x = b over the ring. Over Z, m and b must be integral.
// Throws DimensionMismatch when b has the wrong length.
std::optional<RationalVector> solve(const RationalMatrix& m,
                                    const RationalVector& b, const Ring& ring);

// The module ring^n / (span of the relation rows), with a fixed set of
// generators. Coordinates are ordered torsion first, then free.
class QuotientModule {
 public:
  QuotientModule(const RationalMatrix& relations, std::size_t ambient,
                 const Ring& ring);

  const Ring& ring() const { return ring_; }
  std::size_t ambient() const { return ambient_; }
  std::size_t generator_count() const { return orders_.size(); }
  // Order of each generator: d_i for torsion, 0 for free/field directions.
  const std::vector<Integer>& orders() const { return orders_; }
  AbelianGroup group() const;

  // Coordinates of the class of x; torsion coordinates reduced to [0, d).
  RationalVector reduce(const RationalVector& x) const;
  // A representative of generator i in the ambient module.
  RationalVector lift(std::size_t i) const;

 private:
  Ring ring_;
  std::size_t ambient_;
  std::vector<Integer> orders_;
  // Z: generator i corresponds to coordinate index_[i] of y = V^T x.
  // Fields: index_[i] is a non-pivot column of the relation RREF.
  std::vector<std::size_t> index_;
  IntegerMatrix Vt_;          // V^T (Z only)
  IntegerMatrix Vt_inverse_;  // (V^T)^{-1} (Z only)
  RowEchelon echelon_;        // fields only
};

}  // namespace intaff
