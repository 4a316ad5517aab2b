#include "intaff/exactalg.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

namespace intaff {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "dimension-mismatch";
    case ErrorCode::InvalidInput: return "invalid-input";
    case ErrorCode::NotASurface: return "not-a-surface";
    case ErrorCode::Disconnected: return "disconnected";
    case ErrorCode::MissingBoundaryWords: return "missing-boundary-words";
    case ErrorCode::FixedCell: return "fixed-cell-found";
    case ErrorCode::NotASubcomplex: return "not-a-subcomplex";
    case ErrorCode::NotACocycle: return "not-a-cocycle";
    case ErrorCode::MismatchedClasses: return "mismatched-classes";
    case ErrorCode::SequenceNotExact: return "sequence-not-exact";
    case ErrorCode::NotAnAutomorphism: return "not-an-automorphism";
    case ErrorCode::NoFixedCovector: return "no-fixed-covector";
    case ErrorCode::NonPolygonalChart: return "non-polygonal-chart";
    case ErrorCode::EpsilonTooLarge: return "epsilon-too-large";
    case ErrorCode::UnboundedPolytope: return "unbounded-polytope";
    case ErrorCode::EmptyPolytope: return "empty-polytope";
    case ErrorCode::IdentificationConflict: return "identification-conflict";
    case ErrorCode::RegionNotRegular: return "region-not-regular";
    case ErrorCode::UnknownName: return "unknown-name";
    case ErrorCode::Parse: return "parse-error";
  }
  return "unknown";
}

RationalMatrix to_rational(const IntegerMatrix& m) {
  RationalMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = Rational(m(i, j));
  return r;
}

std::optional<IntegerMatrix> to_integer(const RationalMatrix& m) {
  IntegerMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (m(i, j).get_den() != 1) return std::nullopt;
      r(i, j) = m(i, j).get_num();
    }
  return r;
}

RationalVector to_rational(const IntegerVector& v) {
  return RationalVector(v.begin(), v.end());
}

std::optional<IntegerVector> to_integer(const RationalVector& v) {
  IntegerVector out;
  out.reserve(v.size());
  for (const auto& q : v) {
    if (q.get_den() != 1) return std::nullopt;
    out.push_back(q.get_num());
  }
  return out;
}

namespace {

bool is_decimal(const std::string& s, bool allow_sign) {
  std::size_t i = 0;
  if (allow_sign && !s.empty() && (s[0] == '-' || s[0] == '+')) i = 1;
  if (i >= s.size()) return false;
  for (; i < s.size(); ++i)
    if (s[i] < '0' || s[i] > '9') return false;
  return true;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  const std::string num = text.substr(0, slash);
  const std::string den =
      slash == std::string::npos ? std::string("1") : text.substr(slash + 1);
  if (!is_decimal(num, true) || !is_decimal(den, false))
    throw Error(ErrorCode::Parse, "not a rational number: \"" + text + "\"");
  Integer n(num[0] == '+' ? num.substr(1) : num, 10);
  Integer d(den, 10);
  if (d == 0) throw Error(ErrorCode::Parse, "zero denominator: \"" + text + "\"");
  Rational q(n, d);
  q.canonicalize();
  return q;
}

Integer parse_integer(const std::string& text) {
  if (!is_decimal(text, true))
    throw Error(ErrorCode::Parse, "not an integer: \"" + text + "\"");
  return Integer(text[0] == '+' ? text.substr(1) : text, 10);
}

std::string to_string(const Rational& q) { return q.get_str(); }

namespace {
template <typename T>
std::string join_vector(const std::vector<T>& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + v[i].get_str();
  return out + ")";
}
}  // namespace

std::string to_string(const RationalVector& v) { return join_vector(v); }
std::string to_string(const IntegerVector& v) { return join_vector(v); }

Integer determinant(const IntegerMatrix& m) {
  if (m.rows() != m.cols())
    throw Error(ErrorCode::DimensionMismatch, "determinant of non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  // Fraction-free Bareiss elimination.
  IntegerMatrix a = m;
  Integer sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && a(p, k) == 0) ++p;
      if (p == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        Integer t = a(i, j) * a(k, k) - a(i, k) * a(k, j);
        mpz_divexact(a(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

Rational determinant(const RationalMatrix& m) {
  if (m.rows() != m.cols())
    throw Error(ErrorCode::DimensionMismatch, "determinant of non-square matrix");
  RationalMatrix a = m;
  const std::size_t n = a.rows();
  Rational det = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && a(p, k) == 0) ++p;
    if (p == n) return 0;
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      det = -det;
    }
    det *= a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a(i, k) == 0) continue;
      Rational f = a(i, k) / a(k, k);
      for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return det;
}

bool is_unimodular(const IntegerMatrix& m) {
  if (m.rows() != m.cols()) return false;
  Integer d = determinant(m);
  return d == 1 || d == -1;
}

std::optional<RationalMatrix> inverse(const RationalMatrix& m) {
  if (m.rows() != m.cols())
    throw Error(ErrorCode::DimensionMismatch, "inverse of non-square matrix");
  const std::size_t n = m.rows();
  RationalMatrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = 1;
  }
  RowEchelon e = row_reduce(aug, Ring::rationals());
  if (e.pivots.size() < n || (n > 0 && e.pivots[n - 1] != n - 1)) return std::nullopt;
  RationalMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = e.R(i, n + j);
  return inv;
}

std::optional<IntegerMatrix> unimodular_inverse(const IntegerMatrix& m) {
  if (!is_unimodular(m)) return std::nullopt;
  auto inv = inverse(to_rational(m));
  return to_integer(*inv);
}

AbelianGroup AbelianGroup::from_diagonal(const std::vector<Integer>& diagonal) {
  AbelianGroup g;
  std::vector<Integer> t;
  for (const auto& d : diagonal) {
    Integer a = abs(d);
    if (a == 0)
      ++g.free_rank;
    else if (a != 1)
      t.push_back(a);
  }
  // (a_i, a_j) -> (gcd, lcm) leaves a divisibility chain.
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t j = i + 1; j < t.size(); ++j) {
      Integer g = gcd(t[i], t[j]);
      Integer l = lcm(t[i], t[j]);
      t[i] = g;
      t[j] = l;
    }
  for (auto& a : t)
    if (a != 1) g.invariant_factors.push_back(a);
  return g;
}

std::string AbelianGroup::to_string() const {
  if (is_trivial()) return "0";
  std::ostringstream os;
  bool first = true;
  if (free_rank > 0) {
    os << "Z";
    if (free_rank > 1) os << '^' << free_rank;
    first = false;
  }
  for (const auto& d : invariant_factors) {
    if (!first) os << " ⊕ ";
    os << "Z/" << d;
    first = false;
  }
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const AbelianGroup& g) {
  return os << g.to_string();
}

namespace {

void row_combine(IntegerMatrix& a, std::size_t p, std::size_t i, const Integer& s,
                 const Integer& t, const Integer& u, const Integer& v) {
  // (row p, row i) <- (s*p + t*i, u*p + v*i)
  for (std::size_t c = 0; c < a.cols(); ++c) {
    Integer x = a(p, c), y = a(i, c);
    if (x == 0 && y == 0) continue;
    a(p, c) = s * x + t * y;
    a(i, c) = u * x + v * y;
  }
}

}  // namespace

HermiteForm hnf(const IntegerMatrix& m) {
  HermiteForm out{m, IntegerMatrix::identity(m.rows())};
  IntegerMatrix& H = out.H;
  IntegerMatrix& U = out.U;
  std::size_t row = 0;
  for (std::size_t col = 0; col < H.cols() && row < H.rows(); ++col) {
    for (std::size_t i = row + 1; i < H.rows(); ++i) {
      if (H(i, col) == 0) continue;
      Integer g, s, t;
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(),
                 H(row, col).get_mpz_t(), H(i, col).get_mpz_t());
      Integer u = -H(i, col) / g, v = H(row, col) / g;
      row_combine(H, row, i, s, t, u, v);
      row_combine(U, row, i, s, t, u, v);
    }
    if (H(row, col) == 0) continue;
    if (H(row, col) < 0) {
      for (std::size_t c = 0; c < H.cols(); ++c) H(row, c) = -H(row, c);
      for (std::size_t c = 0; c < U.cols(); ++c) U(row, c) = -U(row, c);
    }
    for (std::size_t i = 0; i < row; ++i) {
      Integer q;
      mpz_fdiv_q(q.get_mpz_t(), H(i, col).get_mpz_t(), H(row, col).get_mpz_t());
      if (q == 0) continue;
      for (std::size_t c = 0; c < H.cols(); ++c) H(i, c) -= q * H(row, c);
      for (std::size_t c = 0; c < U.cols(); ++c) U(i, c) -= q * U(row, c);
    }
    ++row;
  }
  return out;
}

std::vector<Integer> SmithDecomposition::diagonal() const {
  std::vector<Integer> d;
  for (std::size_t i = 0; i < std::min(D.rows(), D.cols()); ++i) d.push_back(D(i, i));
  return d;
}

namespace {

// Elimination state for the Smith form, keeping U, U^{-1}, V, V^{-1} in step
// with every elementary operation on A.
struct SmithState {
  IntegerMatrix A, U, Ui, V, Vi;

  void swap_rows(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t c = 0; c < A.cols(); ++c) std::swap(A(i, c), A(j, c));
    for (std::size_t c = 0; c < U.cols(); ++c) std::swap(U(i, c), U(j, c));
    for (std::size_t r = 0; r < Ui.rows(); ++r) std::swap(Ui(r, i), Ui(r, j));
  }
  void swap_cols(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t r = 0; r < A.rows(); ++r) std::swap(A(r, i), A(r, j));
    for (std::size_t r = 0; r < V.rows(); ++r) std::swap(V(r, i), V(r, j));
    for (std::size_t c = 0; c < Vi.cols(); ++c) std::swap(Vi(i, c), Vi(j, c));
  }
  // row i += q * row j
  void add_row(std::size_t i, std::size_t j, const Integer& q) {
    for (std::size_t c = 0; c < A.cols(); ++c)
      if (A(j, c) != 0) A(i, c) += q * A(j, c);
    for (std::size_t c = 0; c < U.cols(); ++c)
      if (U(j, c) != 0) U(i, c) += q * U(j, c);
    for (std::size_t r = 0; r < Ui.rows(); ++r)
      if (Ui(r, i) != 0) Ui(r, j) -= q * Ui(r, i);
  }
  // col i += q * col j
  void add_col(std::size_t i, std::size_t j, const Integer& q) {
    for (std::size_t r = 0; r < A.rows(); ++r)
      if (A(r, j) != 0) A(r, i) += q * A(r, j);
    for (std::size_t r = 0; r < V.rows(); ++r)
      if (V(r, j) != 0) V(r, i) += q * V(r, j);
    for (std::size_t c = 0; c < Vi.cols(); ++c)
      if (Vi(i, c) != 0) Vi(j, c) -= q * Vi(i, c);
  }
  void negate_row(std::size_t i) {
    for (std::size_t c = 0; c < A.cols(); ++c) A(i, c) = -A(i, c);
    for (std::size_t c = 0; c < U.cols(); ++c) U(i, c) = -U(i, c);
    for (std::size_t r = 0; r < Ui.rows(); ++r) Ui(r, i) = -Ui(r, i);
  }
};

}  // namespace

SmithDecomposition snf(const IntegerMatrix& m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  SmithState s{m, IntegerMatrix::identity(rows), IntegerMatrix::identity(rows),
               IntegerMatrix::identity(cols), IntegerMatrix::identity(cols)};
  IntegerMatrix& A = s.A;
  std::size_t t = 0;
  const std::size_t limit = std::min(rows, cols);
  while (t < limit) {
    // Pivot: smallest nonzero absolute value in the trailing block.
    std::size_t pr = rows, pc = cols;
    Integer best;
    for (std::size_t i = t; i < rows && best != 1; ++i)
      for (std::size_t j = t; j < cols; ++j) {
        if (A(i, j) == 0) continue;
        Integer a = abs(A(i, j));
        if (pr == rows || a < best) {
          best = a;
          pr = i;
          pc = j;
          if (best == 1) break;
        }
      }
    if (pr == rows) break;
    s.swap_rows(t, pr);
    s.swap_cols(t, pc);

    for (;;) {
      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (A(i, t) == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), A(i, t).get_mpz_t(), A(t, t).get_mpz_t());
        s.add_row(i, t, -q);
        if (A(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (A(t, j) == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), A(t, j).get_mpz_t(), A(t, t).get_mpz_t());
        s.add_col(j, t, -q);
        if (A(t, j) != 0) clean = false;
      }
      if (!clean) {
        // Remainders are smaller than the pivot; move the smallest in.
        std::size_t bi = t, bj = t;
        Integer b = abs(A(t, t));
        for (std::size_t i = t + 1; i < rows; ++i)
          if (A(i, t) != 0 && abs(A(i, t)) < b) { b = abs(A(i, t)); bi = i; bj = t; }
        for (std::size_t j = t + 1; j < cols; ++j)
          if (A(t, j) != 0 && abs(A(t, j)) < b) { b = abs(A(t, j)); bi = t; bj = j; }
        s.swap_rows(t, bi);
        s.swap_cols(t, bj);
        continue;
      }
      // Divisibility: the pivot must divide the whole trailing block.
      bool divides = true;
      for (std::size_t i = t + 1; i < rows && divides; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (A(i, j) != 0 && !mpz_divisible_p(A(i, j).get_mpz_t(), A(t, t).get_mpz_t())) {
            s.add_row(t, i, 1);
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (A(t, t) < 0) s.negate_row(t);
    ++t;
  }
  SmithDecomposition out{std::move(s.A), std::move(s.U), std::move(s.V),
                         std::move(s.Ui), std::move(s.Vi), t};
  return out;
}

AbelianGroup cokernel(const IntegerMatrix& m) {
  SmithDecomposition s = snf(m);
  std::vector<Integer> diag;
  for (std::size_t i = 0; i < s.rank; ++i) diag.push_back(s.D(i, i));
  AbelianGroup g = AbelianGroup::from_diagonal(diag);
  g.free_rank += m.cols() - s.rank;
  return g;
}

Ring Ring::prime_field(const Integer& p) {
  if (p < 2 || mpz_probab_prime_p(p.get_mpz_t(), 30) == 0)
    throw Error(ErrorCode::InvalidInput, "field modulus must be prime");
  return Ring(Kind::PrimeField, p);
}

std::string Ring::name() const {
  switch (kind_) {
    case Kind::Integers: return "Z";
    case Kind::Rationals: return "Q";
    case Kind::PrimeField: return "Z/" + modulus_.get_str();
  }
  return "?";
}

Rational Ring::normalize(const Rational& x) const {
  if (kind_ != Kind::PrimeField) return x;
  Integer num, den, inv;
  mpz_fdiv_r(num.get_mpz_t(), x.get_num_mpz_t(), modulus_.get_mpz_t());
  mpz_fdiv_r(den.get_mpz_t(), x.get_den_mpz_t(), modulus_.get_mpz_t());
  if (den == 0 || mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), modulus_.get_mpz_t()) == 0)
    throw Error(ErrorCode::InvalidInput,
                "value " + x.get_str() + " has no image in " + name());
  Integer r;
  mpz_fdiv_r(r.get_mpz_t(), Integer(num * inv).get_mpz_t(), modulus_.get_mpz_t());
  return Rational(r);
}

RationalVector Ring::normalize(const RationalVector& v) const {
  if (kind_ != Kind::PrimeField) return v;
  RationalVector out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(normalize(x));
  return out;
}

RationalMatrix Ring::normalize(const RationalMatrix& m) const {
  if (kind_ != Kind::PrimeField) return m;
  RationalMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = normalize(m(i, j));
  return out;
}

bool Ring::contains(const Rational& x) const {
  return kind_ != Kind::Integers || x.get_den() == 1;
}

RowEchelon row_reduce(const RationalMatrix& m, const Ring& field) {
  if (!field.is_field())
    throw Error(ErrorCode::InvalidInput, "row_reduce requires a field");
  RowEchelon e{field.normalize(m), {}};
  RationalMatrix& R = e.R;
  const bool modular = field.kind() == Ring::Kind::PrimeField;
  std::size_t r = 0;
  for (std::size_t c = 0; c < R.cols() && r < R.rows(); ++c) {
    std::size_t p = r;
    while (p < R.rows() && R(p, c) == 0) ++p;
    if (p == R.rows()) continue;
    if (p != r)
      for (std::size_t j = 0; j < R.cols(); ++j) std::swap(R(r, j), R(p, j));
    const Rational inv = modular ? field.normalize(Rational(1) / R(r, c)) : Rational(1) / R(r, c);
    for (std::size_t j = c; j < R.cols(); ++j) {
      if (R(r, j) == 0) continue;
      R(r, j) *= inv;
      if (modular) R(r, j) = field.normalize(R(r, j));
    }
    for (std::size_t i = 0; i < R.rows(); ++i) {
      if (i == r || R(i, c) == 0) continue;
      const Rational f = R(i, c);
      for (std::size_t j = c; j < R.cols(); ++j) {
        if (R(r, j) == 0) continue;
        R(i, j) -= f * R(r, j);
        if (modular) R(i, j) = field.normalize(R(i, j));
      }
    }
    e.pivots.push_back(c);
    ++r;
  }
  return e;
}

std::size_t rank(const RationalMatrix& m, const Ring& field) {
  return row_reduce(m, field).pivots.size();
}

IntegerMatrix integer_kernel(const IntegerMatrix& m) {
  SmithDecomposition s = snf(m);
  IntegerMatrix k(m.cols(), m.cols() - s.rank);
  for (std::size_t j = s.rank; j < m.cols(); ++j)
    for (std::size_t i = 0; i < m.cols(); ++i) k(i, j - s.rank) = s.V(i, j);
  return k;
}

RationalMatrix field_kernel(const RationalMatrix& m, const Ring& field) {
  RowEchelon e = row_reduce(m, field);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0; c < m.cols(); ++c)
    if (!is_pivot[c]) free_cols.push_back(c);
  RationalMatrix k(m.cols(), free_cols.size());
  for (std::size_t f = 0; f < free_cols.size(); ++f) {
    k(free_cols[f], f) = 1;
    for (std::size_t r = 0; r < e.pivots.size(); ++r)
      k(e.pivots[r], f) = field.normalize(-e.R(r, free_cols[f]));
  }
  return k;
}

std::optional<IntegerVector> solve_integer(const IntegerMatrix& m,
                                           const IntegerVector& b) {
  if (b.size() != m.rows())
    throw Error(ErrorCode::DimensionMismatch, "right-hand side length differs from row count");
  SmithDecomposition s = snf(m);
  IntegerVector ub = s.U.apply(b);
  IntegerVector y(m.cols(), Integer(0));
  for (std::size_t i = 0; i < ub.size(); ++i) {
    if (i < s.rank) {
      if (!mpz_divisible_p(ub[i].get_mpz_t(), s.D(i, i).get_mpz_t())) return std::nullopt;
      y[i] = ub[i] / s.D(i, i);
    } else if (ub[i] != 0) {
      return std::nullopt;
    }
  }
  return s.V.apply(y);
}

std::optional<RationalVector> solve(const RationalMatrix& m, const RationalVector& b,
                                    const Ring& ring) {
  if (b.size() != m.rows())
    throw Error(ErrorCode::DimensionMismatch, "right-hand side length differs from row count");
  if (!ring.is_field()) {
    auto mi = to_integer(m);
    auto bi = to_integer(b);
    if (!mi || !bi)
      throw Error(ErrorCode::InvalidInput, "integer solve requires integral data");
    auto x = solve_integer(*mi, *bi);
    if (!x) return std::nullopt;
    return to_rational(*x);
  }
  RationalMatrix aug(m.rows(), m.cols() + 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
    aug(i, m.cols()) = b[i];
  }
  RowEchelon e = row_reduce(aug, ring);
  RationalVector x(m.cols(), Rational(0));
  for (std::size_t r = 0; r < e.pivots.size(); ++r) {
    if (e.pivots[r] == m.cols()) return std::nullopt;
    x[e.pivots[r]] = e.R(r, m.cols());
  }
  return x;
}

QuotientModule::QuotientModule(const RationalMatrix& relations, std::size_t ambient,
                               const Ring& ring)
    : ring_(ring), ambient_(ambient) {
  if (relations.cols() != ambient && relations.rows() != 0)
    throw Error(ErrorCode::DimensionMismatch, "relation width differs from ambient rank");
  RationalMatrix rel = relations.rows() ? relations : RationalMatrix(0, ambient);
  if (!ring.is_field()) {
    auto ri = to_integer(rel);
    if (!ri) throw Error(ErrorCode::InvalidInput, "integer relations must be integral");
    SmithDecomposition s = snf(*ri);
    Vt_ = s.V.transpose();
    Vt_inverse_ = s.V_inverse.transpose();
    for (std::size_t i = 0; i < s.rank; ++i)
      if (s.D(i, i) != 1) {
        orders_.push_back(s.D(i, i));
        index_.push_back(i);
      }
    for (std::size_t i = s.rank; i < ambient; ++i) {
      orders_.push_back(0);
      index_.push_back(i);
    }
  } else {
    echelon_ = row_reduce(rel, ring);
    std::vector<bool> is_pivot(ambient, false);
    for (auto p : echelon_.pivots) is_pivot[p] = true;
    for (std::size_t c = 0; c < ambient; ++c)
      if (!is_pivot[c]) {
        orders_.push_back(0);
        index_.push_back(c);
      }
  }
}

AbelianGroup QuotientModule::group() const {
  AbelianGroup g;
  for (const auto& d : orders_) {
    if (ring_.kind() == Ring::Kind::PrimeField)
      g.invariant_factors.push_back(ring_.modulus());
    else if (d == 0)
      ++g.free_rank;
    else
      g.invariant_factors.push_back(d);
  }
  return g;
}

RationalVector QuotientModule::reduce(const RationalVector& x) const {
  if (x.size() != ambient_)
    throw Error(ErrorCode::DimensionMismatch, "vector length differs from ambient rank");
  RationalVector out(orders_.size());
  if (!ring_.is_field()) {
    auto xi = to_integer(x);
    if (!xi) throw Error(ErrorCode::InvalidInput, "integer module element must be integral");
    IntegerVector y = Vt_.apply(*xi);
    for (std::size_t i = 0; i < orders_.size(); ++i) {
      Integer v = y[index_[i]];
      if (orders_[i] != 0) mpz_fdiv_r(v.get_mpz_t(), v.get_mpz_t(), orders_[i].get_mpz_t());
      out[i] = Rational(v);
    }
    return out;
  }
  RationalVector y = ring_.normalize(x);
  for (std::size_t r = 0; r < echelon_.pivots.size(); ++r) {
    const Rational f = y[echelon_.pivots[r]];
    if (f == 0) continue;
    for (std::size_t j = 0; j < ambient_; ++j)
      if (echelon_.R(r, j) != 0) y[j] = ring_.normalize(y[j] - f * echelon_.R(r, j));
  }
  for (std::size_t i = 0; i < orders_.size(); ++i) out[i] = y[index_[i]];
  return out;
}

RationalVector QuotientModule::lift(std::size_t i) const {
  RationalVector x(ambient_, Rational(0));
  if (!ring_.is_field()) {
    for (std::size_t r = 0; r < ambient_; ++r) x[r] = Rational(Vt_inverse_(r, index_[i]));
  } else {
    x[index_[i]] = 1;
  }
  return x;
}

}  // namespace intaff
