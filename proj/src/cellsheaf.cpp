#include "intaff/cellsheaf.hpp"

#include <algorithm>

namespace intaff {

namespace {

std::string shape(const RationalMatrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

RationalMatrix block_diagonal(const RationalMatrix& a, const RationalMatrix& b) {
  RationalMatrix m(a.rows() + b.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) m(a.rows() + i, a.cols() + j) = b(i, j);
  return m;
}

bool integral(const RationalMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (m(i, j).get_den() != 1) return false;
  return true;
}

IntegerMatrix as_integer(const RationalMatrix& m, const char* what) {
  auto r = to_integer(m);
  if (!r) throw Error(ErrorCode::InvalidInput, std::string(what) + " must be integral");
  return *r;
}

// Lattice spanned by the columns, in canonical form (nonzero HNF rows).
IntegerMatrix lattice(const IntegerMatrix& columns) {
  IntegerMatrix h = hnf(columns.transpose()).H;
  std::size_t rows = 0;
  while (rows < h.rows()) {
    bool nonzero = false;
    for (std::size_t j = 0; j < h.cols(); ++j) nonzero = nonzero || h(rows, j) != 0;
    if (!nonzero) break;
    ++rows;
  }
  IntegerMatrix out(rows, h.cols());
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < h.cols(); ++j) out(i, j) = h(i, j);
  return out;
}

// Columns x of Z^n with m x in the lattice spanned by the columns of rel.
IntegerMatrix preimage_lattice(const IntegerMatrix& m, const IntegerMatrix& rel) {
  const std::size_t n = m.cols();
  IntegerMatrix aug(m.rows(), n + rel.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    for (std::size_t j = 0; j < rel.cols(); ++j) aug(i, n + j) = rel(i, j);
  }
  IntegerMatrix k = integer_kernel(aug);
  IntegerMatrix out(n, k.cols());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < k.cols(); ++j) out(i, j) = k(i, j);
  return out;
}

IntegerMatrix order_relations(const std::vector<Integer>& orders) {
  std::vector<std::size_t> torsion;
  for (std::size_t i = 0; i < orders.size(); ++i)
    if (orders[i] != 0) torsion.push_back(i);
  IntegerMatrix r(orders.size(), torsion.size());
  for (std::size_t j = 0; j < torsion.size(); ++j) r(torsion[j], j) = orders[torsion[j]];
  return r;
}

IntegerMatrix hcat(const IntegerMatrix& a, const IntegerMatrix& b) {
  IntegerMatrix m(a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) m(i, a.cols() + j) = b(i, j);
  }
  return m;
}

}  // namespace

CellularSheaf::CellularSheaf(std::shared_ptr<const CellComplex> base, Ring ring)
    : base_(std::move(base)), ring_(std::move(ring)), stalks_(base_->size(), 0) {}

CellularSheaf CellularSheaf::constant(std::shared_ptr<const CellComplex> base, Ring ring,
                                      std::size_t rank) {
  CellularSheaf f(std::move(base), std::move(ring));
  const CellComplex& x = f.base();
  for (std::size_t c = 0; c < x.size(); ++c) f.set_stalk(c, rank);
  for (std::size_t c = 0; c < x.size(); ++c)
    for (const auto& s : x.faces(c)) f.set_restriction(s.cell, c, RationalMatrix::identity(rank));
  return f;
}

void CellularSheaf::set_stalk(std::size_t cell, std::size_t rank) {
  if (cell >= stalks_.size()) throw Error(ErrorCode::InvalidInput, "stalk for a missing cell");
  stalks_[cell] = rank;
  offsets_valid_ = false;
}

void CellularSheaf::set_restriction(std::size_t sigma, std::size_t tau, RationalMatrix m) {
  if (sigma >= stalks_.size() || tau >= stalks_.size())
    throw Error(ErrorCode::InvalidInput, "restriction for a missing cell");
  restrictions_[{sigma, tau}] = ring_.normalize(m);
}

bool CellularSheaf::has_restriction(std::size_t sigma, std::size_t tau) const {
  return restrictions_.count({sigma, tau}) > 0;
}

RationalMatrix CellularSheaf::restriction(std::size_t sigma, std::size_t tau) const {
  auto it = restrictions_.find({sigma, tau});
  if (it == restrictions_.end()) return RationalMatrix(stalks_[tau], stalks_[sigma]);
  return it->second;
}

void CellularSheaf::refresh_offsets() const {
  if (offsets_valid_) return;
  const CellComplex& x = *base_;
  offsets_.assign(x.size(), 0);
  dims_.assign(std::max(0, x.dimension() + 1), 0);
  for (int k = 0; k <= x.dimension(); ++k) {
    std::size_t off = 0;
    for (auto c : x.cells_of_dim(k)) {
      offsets_[c] = off;
      off += stalks_[c];
    }
    dims_[k] = off;
  }
  offsets_valid_ = true;
}

std::size_t CellularSheaf::cochain_dim(int k) const {
  refresh_offsets();
  if (k < 0 || static_cast<std::size_t>(k) >= dims_.size()) return 0;
  return dims_[k];
}

std::size_t CellularSheaf::offset(std::size_t cell) const {
  refresh_offsets();
  return offsets_[cell];
}

RationalMatrix CellularSheaf::coboundary(int k) const {
  RationalMatrix d(cochain_dim(k + 1), cochain_dim(k));
  if (d.rows() == 0 || d.cols() == 0) return d;
  const CellComplex& x = *base_;
  for (auto tau : x.cells_of_dim(k + 1))
    for (const auto& s : x.faces(tau)) {
      auto it = restrictions_.find({s.cell, tau});
      if (it == restrictions_.end()) continue;
      const RationalMatrix& r = it->second;
      const std::size_t ro = offset(tau), co = offset(s.cell);
      for (std::size_t i = 0; i < r.rows(); ++i)
        for (std::size_t j = 0; j < r.cols(); ++j)
          if (r(i, j) != 0) d(ro + i, co + j) += s.coefficient * r(i, j);
    }
  return ring_.normalize(d);
}

RationalVector CellularSheaf::block(const RationalVector& cochain, std::size_t cell) const {
  const std::size_t off = offset(cell);
  if (off + stalks_[cell] > cochain.size())
    throw Error(ErrorCode::DimensionMismatch, "cochain too short");
  return RationalVector(cochain.begin() + off, cochain.begin() + off + stalks_[cell]);
}

Report validate_sheaf(const CellularSheaf& f) {
  Report r;
  const CellComplex& x = f.base();
  for (const auto& [key, m] : f.restrictions()) {
    auto [s, t] = key;
    const std::string pair = "(" + x.id(s) + " <= " + x.id(t) + ")";
    if (x.incidence(t, s) == 0) r.add("restriction " + pair + " is not along a face relation");
    if (m.rows() != f.stalk(t) || m.cols() != f.stalk(s))
      r.add("restriction " + pair + " has shape " + shape(m) + ", expected " +
            std::to_string(f.stalk(t)) + "x" + std::to_string(f.stalk(s)));
    else if (f.ring().kind() == Ring::Kind::Integers && !integral(m))
      r.add("restriction " + pair + " is not integral");
  }
  if (!r.ok()) return r;
  for (std::size_t t = 0; t < x.size(); ++t)
    for (const auto& s : x.faces(t))
      if (f.stalk(s.cell) && f.stalk(t) && !f.has_restriction(s.cell, t))
        r.add("restriction (" + x.id(s.cell) + " <= " + x.id(t) + ") is missing");
  for (std::size_t rho = 0; rho < x.size(); ++rho) {
    if (x.dim(rho) < 2) continue;
    std::map<std::size_t, RationalMatrix> seen;
    for (const auto& t : x.faces(rho))
      for (const auto& s : x.faces(t.cell)) {
        RationalMatrix path = f.ring().normalize(f.restriction(t.cell, rho) * f.restriction(s.cell, t.cell));
        auto it = seen.find(s.cell);
        if (it == seen.end())
          seen.emplace(s.cell, path);
        else if (it->second != path)
          r.add("restrictions do not commute on (" + x.id(s.cell) + " <= " + x.id(rho) + ")");
      }
  }
  return r;
}

Cohomology::Cohomology(const CellularSheaf& f, int k) : ring_(f.ring()), k_(k) {
  if (k < 0 || k > f.base().dimension()) return;
  n_ = f.cochain_dim(k);
  d_ = f.coboundary(k);
  RationalMatrix b = f.coboundary(k - 1);
  if (b.rows() != n_) b = RationalMatrix(n_, 0);
  if (ring_.kind() == Ring::Kind::Integers) {
    SmithDecomposition s = snf(as_integer(d_, "coboundary"));
    rank_ = s.rank;
    V_ = std::move(s.V);
    V_inverse_ = std::move(s.V_inverse);
    const std::size_t m = n_ - rank_;
    IntegerMatrix image = V_inverse_ * as_integer(b, "coboundary");
    RationalMatrix rel(b.cols(), m);
    for (std::size_t j = 0; j < b.cols(); ++j)
      for (std::size_t i = 0; i < m; ++i) rel(j, i) = image(rank_ + i, j);
    quotient_.emplace(rel, m, ring_);
    orders_ = quotient_->orders();
    group_ = quotient_->group();
    for (std::size_t g = 0; g < orders_.size(); ++g) {
      RationalVector kappa = quotient_->lift(g);
      RationalVector z(n_, Rational(0));
      for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < m; ++j)
          if (kappa[j] != 0 && V_(i, rank_ + j) != 0) z[i] += kappa[j] * V_(i, rank_ + j);
      generators_.push_back(std::move(z));
    }
  } else {
    RowEchelon e = row_reduce(d_, ring_);
    std::vector<bool> pivot(n_, false);
    for (auto p : e.pivots) pivot[p] = true;
    for (std::size_t c = 0; c < n_; ++c)
      if (!pivot[c]) free_columns_.push_back(c);
    field_kernel_ = field_kernel(d_, ring_);
    RationalMatrix rel(b.cols(), free_columns_.size());
    for (std::size_t j = 0; j < b.cols(); ++j)
      for (std::size_t i = 0; i < free_columns_.size(); ++i) rel(j, i) = b(free_columns_[i], j);
    quotient_.emplace(rel, free_columns_.size(), ring_);
    group_ = quotient_->group();
    for (std::size_t g = 0; g < quotient_->generator_count(); ++g) {
      orders_.push_back(ring_.kind() == Ring::Kind::PrimeField ? ring_.modulus() : Integer(0));
      generators_.push_back(ring_.normalize(field_kernel_.apply(quotient_->lift(g))));
    }
  }
}

bool Cohomology::is_cocycle(const RationalVector& z) const {
  if (z.size() != n_) return false;
  if (!quotient_) return true;
  if (ring_.kind() == Ring::Kind::Integers && !to_integer(z)) return false;
  for (const auto& v : ring_.normalize(d_.apply(z)))
    if (v != 0) return false;
  return true;
}

RationalVector Cohomology::reduce(const RationalVector& z) const {
  if (z.size() != n_) throw Error(ErrorCode::DimensionMismatch, "cochain has the wrong length");
  if (!quotient_) return {};
  if (!is_cocycle(z)) throw Error(ErrorCode::NotACocycle, "cochain is not a cocycle");
  if (ring_.kind() == Ring::Kind::Integers) {
    IntegerVector w = V_inverse_.apply(*to_integer(z));
    RationalVector kappa(w.begin() + rank_, w.end());
    return quotient_->reduce(kappa);
  }
  RationalVector zn = ring_.normalize(z);
  RationalVector kappa;
  for (auto c : free_columns_) kappa.push_back(zn[c]);
  return quotient_->reduce(kappa);
}

RationalVector Cohomology::representative(const RationalVector& coords) const {
  if (coords.size() != generators_.size())
    throw Error(ErrorCode::DimensionMismatch, "coordinate vector has the wrong length");
  RationalVector z(n_, Rational(0));
  for (std::size_t g = 0; g < coords.size(); ++g)
    if (coords[g] != 0)
      for (std::size_t i = 0; i < n_; ++i) z[i] += coords[g] * generators_[g][i];
  return ring_.normalize(z);
}

RationalVector class_reduce(const Cohomology& h, const CohomologyClass& c) {
  if (c.degree != h.degree())
    throw Error(ErrorCode::MismatchedClasses, "class degree differs from the cohomology degree");
  return h.reduce(c.cocycle);
}

CohomologyClass class_add(const CohomologyClass& a, const CohomologyClass& b) {
  if (a.sheaf != b.sheaf || a.degree != b.degree || a.cocycle.size() != b.cocycle.size())
    throw Error(ErrorCode::MismatchedClasses, "classes live in different groups");
  CohomologyClass c = a;
  for (std::size_t i = 0; i < c.cocycle.size(); ++i) c.cocycle[i] += b.cocycle[i];
  if (a.sheaf) c.cocycle = a.sheaf->ring().normalize(c.cocycle);
  return c;
}

CohomologyClass class_negate(const CohomologyClass& a) {
  CohomologyClass c = a;
  for (auto& v : c.cocycle) v = -v;
  if (a.sheaf) c.cocycle = a.sheaf->ring().normalize(c.cocycle);
  return c;
}

bool class_equal(const Cohomology& h, const CohomologyClass& a, const CohomologyClass& b) {
  return class_reduce(h, a) == class_reduce(h, b);
}

RationalVector SheafMap::apply(const RationalVector& cochain, int k) const {
  const CellComplex& x = source->base();
  RationalVector out(target->cochain_dim(k), Rational(0));
  for (auto c : x.cells_of_dim(k)) {
    RationalVector y = components[c].apply(source->block(cochain, c));
    const std::size_t off = target->offset(c);
    for (std::size_t i = 0; i < y.size(); ++i) out[off + i] = y[i];
  }
  return target->ring().normalize(out);
}

SheafMap identity_map(const CellularSheaf& source, const CellularSheaf& target) {
  SheafMap m{&source, &target, {}};
  for (std::size_t c = 0; c < source.base().size(); ++c)
    m.components.push_back(RationalMatrix::identity(source.stalk(c)));
  return m;
}

Report validate_sheaf_map(const SheafMap& m) {
  Report r;
  const CellComplex& x = m.source->base();
  if (&m.target->base() != &x && m.target->base().size() != x.size()) {
    r.add("source and target live on different complexes");
    return r;
  }
  if (m.components.size() != x.size()) {
    r.add("sheaf map needs one matrix per cell");
    return r;
  }
  for (std::size_t c = 0; c < x.size(); ++c)
    if (m.components[c].rows() != m.target->stalk(c) || m.components[c].cols() != m.source->stalk(c))
      r.add("component at '" + x.id(c) + "' has shape " + shape(m.components[c]));
  if (!r.ok()) return r;
  const Ring& ring = m.target->ring();
  for (std::size_t t = 0; t < x.size(); ++t)
    for (const auto& s : x.faces(t)) {
      RationalMatrix lhs = ring.normalize(m.components[t] * m.source->restriction(s.cell, t));
      RationalMatrix rhs = ring.normalize(m.target->restriction(s.cell, t) * m.components[s.cell]);
      if (lhs != rhs)
        r.add("map does not commute with restriction (" + x.id(s.cell) + " <= " + x.id(t) + ")");
    }
  return r;
}

namespace {

InducedMap make_map(const Cohomology& source, const Cohomology& target) {
  return InducedMap{source.group(), target.group(), source.orders(), target.orders(),
                    RationalMatrix(target.generator_count(), source.generator_count())};
}

void set_column(RationalMatrix& m, std::size_t j, const RationalVector& v) {
  for (std::size_t i = 0; i < v.size(); ++i) m(i, j) = v[i];
}

}  // namespace

InducedMap induced_map(const SheafMap& m, const Cohomology& source, const Cohomology& target) {
  InducedMap out = make_map(source, target);
  for (std::size_t g = 0; g < source.generator_count(); ++g)
    set_column(out.matrix, g, target.reduce(m.apply(source.generators()[g], source.degree())));
  return out;
}

namespace {

bool same_lattice(const IntegerMatrix& a, const IntegerMatrix& b) { return lattice(a) == lattice(b); }

}  // namespace

Report validate_exact(const ShortExactSequence& s) {
  Report r = validate_sheaf_map(s.inclusion);
  r.merge(validate_sheaf_map(s.projection));
  if (!r.ok()) return r;
  if (s.inclusion.target != s.projection.source) {
    r.add("maps do not compose");
    return r;
  }
  const CellularSheaf& a = *s.inclusion.source;
  const CellularSheaf& b = *s.inclusion.target;
  const CellularSheaf& c = *s.projection.target;
  const CellComplex& x = b.base();
  for (std::size_t cell = 0; cell < x.size(); ++cell) {
    const std::string at = " at '" + x.id(cell) + "'";
    const RationalMatrix& i = s.inclusion.components[cell];
    const RationalMatrix& p = s.projection.components[cell];
    if (!c.ring().normalize(p * i).is_zero()) {
      r.add("composite is nonzero" + at);
      continue;
    }
    const Ring field_b = b.ring().is_field() ? b.ring() : Ring::rationals();
    if (rank(i, field_b) != a.stalk(cell)) r.add("inclusion is not injective" + at);
    if (b.ring().kind() == Ring::Kind::Integers) {
      IntegerMatrix pi = as_integer(p, "projection");
      IntegerMatrix ii = as_integer(i, "inclusion");
      if (c.ring().kind() == Ring::Kind::PrimeField) {
        if (rank(p, c.ring()) != c.stalk(cell)) r.add("projection is not surjective" + at);
        IntegerMatrix rel = IntegerMatrix::identity(c.stalk(cell));
        for (std::size_t q = 0; q < rel.rows(); ++q) rel(q, q) = c.ring().modulus();
        if (!same_lattice(preimage_lattice(pi, rel), ii)) r.add("sequence is not exact in the middle" + at);
      } else {
        if (!cokernel(pi.transpose()).is_trivial() && c.stalk(cell) > 0)
          r.add("projection is not surjective" + at);
        if (!same_lattice(integer_kernel(pi), ii)) r.add("sequence is not exact in the middle" + at);
      }
    } else {
      if (rank(p, field_b) != c.stalk(cell)) r.add("projection is not surjective" + at);
      if (rank(i, field_b) + rank(p, field_b) != b.stalk(cell))
        r.add("sequence is not exact in the middle" + at);
    }
  }
  return r;
}

namespace {

RationalVector random_vector(std::mt19937& rng, std::size_t n) {
  std::uniform_int_distribution<int> d(-3, 3);
  RationalVector v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

}  // namespace

RationalVector connecting_cocycle(const ShortExactSequence& s, int k, const RationalVector& z,
                                  std::mt19937* rng) {
  const CellularSheaf& a = *s.inclusion.source;
  const CellularSheaf& b = *s.inclusion.target;
  const CellularSheaf& c = *s.projection.target;
  const CellComplex& x = b.base();
  RationalVector y(b.cochain_dim(k), Rational(0));
  for (auto cell : x.cells_of_dim(k)) {
    RationalVector target = c.block(z, cell);
    const RationalMatrix& p = s.projection.components[cell];
    std::optional<RationalVector> lift;
    if (c.ring().kind() == Ring::Kind::PrimeField && b.ring().kind() == Ring::Kind::Integers) {
      // Solve p y + modulus * t = target over Z.
      RationalMatrix aug(p.rows(), p.cols() + p.rows());
      for (std::size_t i = 0; i < p.rows(); ++i) {
        for (std::size_t j = 0; j < p.cols(); ++j) aug(i, j) = p(i, j);
        aug(i, p.cols() + i) = Rational(c.ring().modulus());
      }
      auto sol = solve(aug, target, Ring::integers());
      if (sol) lift = RationalVector(sol->begin(), sol->begin() + p.cols());
    } else {
      lift = solve(p, target, b.ring().is_field() || c.ring().is_field() ? b.ring() : Ring::integers());
    }
    if (!lift) throw Error(ErrorCode::SequenceNotExact, "no lift at '" + x.id(cell) + "'");
    if (rng) {
      RationalVector extra = s.inclusion.components[cell].apply(random_vector(*rng, a.stalk(cell)));
      for (std::size_t i = 0; i < extra.size(); ++i) (*lift)[i] += extra[i];
    }
    const std::size_t off = b.offset(cell);
    for (std::size_t i = 0; i < lift->size(); ++i) y[off + i] = (*lift)[i];
  }
  RationalVector w = b.ring().normalize(b.coboundary(k).apply(y));
  RationalVector out(a.cochain_dim(k + 1), Rational(0));
  for (auto cell : x.cells_of_dim(k + 1)) {
    auto pre = solve(s.inclusion.components[cell], b.block(w, cell), a.ring());
    if (!pre) throw Error(ErrorCode::SequenceNotExact, "no preimage at '" + x.id(cell) + "'");
    const std::size_t off = a.offset(cell);
    for (std::size_t i = 0; i < pre->size(); ++i) out[off + i] = (*pre)[i];
  }
  return a.ring().normalize(out);
}

InducedMap connecting_map(const ShortExactSequence& s, const Cohomology& hc, const Cohomology& ha,
                          std::mt19937* rng) {
  InducedMap out = make_map(hc, ha);
  for (std::size_t g = 0; g < hc.generator_count(); ++g)
    set_column(out.matrix, g, ha.reduce(connecting_cocycle(s, hc.degree(), hc.generators()[g], rng)));
  return out;
}

InducedMap connecting_map(const ShortExactSequence& s, int k, std::mt19937* rng) {
  Report r = validate_exact(s);
  if (!r.ok()) throw Error(ErrorCode::SequenceNotExact, r.violations.front());
  Cohomology hc(*s.projection.target, k);
  Cohomology ha(*s.inclusion.source, k + 1);
  return connecting_map(s, hc, ha, rng);
}

Subcomplex make_subcomplex(const CellComplex& x, const std::vector<std::size_t>& cells) {
  if (!x.is_subcomplex(cells))
    throw Error(ErrorCode::NotASubcomplex, "cell set is not closed under taking faces");
  Subcomplex s;
  s.index.assign(x.size(), std::nullopt);
  std::vector<std::size_t> sorted = cells;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  auto complex = std::make_shared<CellComplex>();
  for (auto c : sorted) {
    s.index[c] = complex->add_cell(x.id(c), x.dim(c));
    s.cells.push_back(c);
  }
  for (auto c : sorted)
    for (const auto& f : x.faces(c)) complex->set_incidence(*s.index[c], *s.index[f.cell], f.coefficient);
  for (auto c : sorted)
    if (x.dim(c) == 2 && x.has_boundary_word(c)) {
      std::vector<SignedEdge> w;
      for (const auto& l : x.boundary_word(c)) w.push_back({*s.index[l.edge], l.sign});
      complex->set_boundary_word(*s.index[c], w);
    }
  s.complex = complex;
  return s;
}

CellularSheaf restrict_sheaf(const CellularSheaf& f, const Subcomplex& sub) {
  CellularSheaf g(sub.complex, f.ring());
  for (std::size_t i = 0; i < sub.cells.size(); ++i) g.set_stalk(i, f.stalk(sub.cells[i]));
  for (const auto& [key, m] : f.restrictions()) {
    auto s = sub.index[key.first], t = sub.index[key.second];
    if (s && t) g.set_restriction(*s, *t, m);
  }
  return g;
}

RationalVector restrict_cochain(const CellularSheaf& f, const Subcomplex& sub, int k,
                                const RationalVector& cochain) {
  RationalVector out;
  for (std::size_t i = 0; i < sub.cells.size(); ++i) {
    const std::size_t c = sub.cells[i];
    if (f.base().dim(c) != k) continue;
    RationalVector b = f.block(cochain, c);
    out.insert(out.end(), b.begin(), b.end());
  }
  return out;
}

InducedMap restriction_on_cohomology(const CellularSheaf& f, const Subcomplex& sub, int k) {
  CellularSheaf g = restrict_sheaf(f, sub);
  Cohomology hf(f, k), hg(g, k);
  InducedMap out = make_map(hf, hg);
  for (std::size_t j = 0; j < hf.generator_count(); ++j)
    set_column(out.matrix, j, hg.reduce(restrict_cochain(f, sub, k, hf.generators()[j])));
  return out;
}

CellularSheaf pullback_sum(const CellularSheaf& f1, const CellularSheaf& f2) {
  if (!(f1.ring() == f2.ring()))
    throw Error(ErrorCode::InvalidInput, "summands must share a coefficient ring");
  const CellComplex& x = f1.base();
  const CellComplex& y = f2.base();
  auto base = std::make_shared<CellComplex>(product(x, y));
  CellularSheaf g(base, f1.ring());
  const std::size_t ny = y.size();
  for (std::size_t a = 0; a < x.size(); ++a)
    for (std::size_t b = 0; b < ny; ++b) g.set_stalk(a * ny + b, f1.stalk(a) + f2.stalk(b));
  for (std::size_t a = 0; a < x.size(); ++a)
    for (std::size_t b = 0; b < ny; ++b) {
      for (const auto& s : x.faces(a))
        g.set_restriction(s.cell * ny + b, a * ny + b,
                          block_diagonal(f1.restriction(s.cell, a), RationalMatrix::identity(f2.stalk(b))));
      for (const auto& s : y.faces(b))
        g.set_restriction(a * ny + s.cell, a * ny + b,
                          block_diagonal(RationalMatrix::identity(f1.stalk(a)), f2.restriction(s.cell, b)));
    }
  return g;
}

SheafAutomorphism product_automorphism(const CellularSheaf& f1, const SheafAutomorphism& phi1,
                                       const CellularSheaf& f2, const SheafAutomorphism& phi2) {
  const std::size_t nx = f1.base().size(), ny = f2.base().size();
  if (phi1.cell_map.size() != nx || phi2.cell_map.size() != ny || phi1.matrices.size() != nx ||
      phi2.matrices.size() != ny)
    throw Error(ErrorCode::NotAnAutomorphism, "factor automorphisms must cover every cell");
  SheafAutomorphism out;
  out.cell_map.resize(nx * ny);
  out.matrices.resize(nx * ny);
  for (std::size_t a = 0; a < nx; ++a)
    for (std::size_t b = 0; b < ny; ++b) {
      out.cell_map[a * ny + b] = phi1.cell_map[a] * ny + phi2.cell_map[b];
      out.matrices[a * ny + b] = block_diagonal(phi1.matrices[a], phi2.matrices[b]);
    }
  return out;
}

CellularSheaf quotient_sheaf(const CellularSheaf& f, const SheafAutomorphism& sigma,
                             const Quotient& q, std::shared_ptr<const CellComplex> base) {
  const CellComplex& x = f.base();
  const std::size_t n = x.size();
  if (q.cell_map.size() != n || sigma.cell_map.size() != n || sigma.matrices.size() != n)
    throw Error(ErrorCode::NotAnAutomorphism, "involution must cover every cell");
  for (std::size_t c = 0; c < n; ++c) {
    const std::size_t d = sigma.cell_map[c];
    if (d >= n || sigma.cell_map[d] != c || q.cell_map[d] != q.cell_map[c])
      throw Error(ErrorCode::NotAnAutomorphism, "cell map is not the involution of the quotient");
    if (sigma.matrices[d] * sigma.matrices[c] != RationalMatrix::identity(f.stalk(c)))
      throw Error(ErrorCode::NotAnAutomorphism, "stalk maps at '" + x.id(c) + "' do not square to the identity");
  }
  for (const auto& [key, r] : f.restrictions()) {
    const auto [s, t] = key;
    if (f.restriction(sigma.cell_map[s], sigma.cell_map[t]) * sigma.matrices[s] != sigma.matrices[t] * r)
      throw Error(ErrorCode::NotAnAutomorphism,
                  "stalk maps do not commute with restriction '" + x.id(s) + "' <= '" + x.id(t) + "'");
  }
  CellularSheaf out(base, f.ring());
  // The representative of a quotient cell is its lower-index preimage.
  std::vector<std::size_t> rep(base->size(), n);
  for (std::size_t c = 0; c < n; ++c)
    if (c < sigma.cell_map[c]) rep[q.cell_map[c]] = c;
  for (std::size_t qc = 0; qc < base->size(); ++qc) out.set_stalk(qc, f.stalk(rep[qc]));
  for (std::size_t qt = 0; qt < base->size(); ++qt) {
    const std::size_t t = rep[qt];
    for (const auto& face : x.faces(t)) {
      const std::size_t s = face.cell;
      const std::size_t qs = q.cell_map[s];
      RationalMatrix to_s = s == rep[qs] ? RationalMatrix::identity(f.stalk(s)) : sigma.matrices[rep[qs]];
      // Lifted cochains carry q.sign on non-representative cells.
      const int factor = face.coefficient * q.sign[s] * base->incidence(qt, qs);
      RationalMatrix m = f.restriction(s, t) * to_s;
      if (factor < 0) m = -m;
      out.set_restriction(qs, qt, m);
    }
  }
  return out;
}

namespace {

// Chain-level signs making the cell map commute with incidence.
std::vector<int> automorphism_signs(const CellularSheaf& f, const SheafAutomorphism& phi) {
  const CellComplex& x = f.base();
  const std::size_t n = x.size();
  if (phi.cell_map.size() != n || phi.matrices.size() != n)
    throw Error(ErrorCode::NotAnAutomorphism, "automorphism must cover every cell");
  std::vector<bool> hit(n, false);
  for (std::size_t c = 0; c < n; ++c) {
    const std::size_t d = phi.cell_map[c];
    if (d >= n || hit[d] || x.dim(d) != x.dim(c))
      throw Error(ErrorCode::NotAnAutomorphism, "cell map is not a dimension-preserving bijection");
    hit[d] = true;
    if (phi.matrices[c].rows() != f.stalk(d) || phi.matrices[c].cols() != f.stalk(c) ||
        rank(phi.matrices[c], f.ring().is_field() ? f.ring() : Ring::rationals()) != f.stalk(c) ||
        f.stalk(c) != f.stalk(d))
      throw Error(ErrorCode::NotAnAutomorphism, "stalk map at '" + x.id(c) + "' is not an isomorphism");
    if (f.ring().kind() == Ring::Kind::Integers && f.stalk(c) &&
        !is_unimodular(as_integer(phi.matrices[c], "stalk map")))
      throw Error(ErrorCode::NotAnAutomorphism, "stalk map at '" + x.id(c) + "' is not invertible over Z");
  }
  std::vector<int> sign(n, 0);
  for (int k = 0; k <= x.dimension(); ++k)
    for (auto c : x.cells_of_dim(k)) {
      if (k == 0) {
        sign[c] = 1;
        continue;
      }
      for (const auto& s : x.faces(c)) {
        const int img = x.incidence(phi.cell_map[c], phi.cell_map[s.cell]);
        if (img == 0)
          throw Error(ErrorCode::NotAnAutomorphism, "cell map does not preserve faces of '" + x.id(c) + "'");
        const int e = img * sign[s.cell] * s.coefficient;
        if (sign[c] == 0) sign[c] = e;
        if (sign[c] != e)
          throw Error(ErrorCode::NotAnAutomorphism, "cell map does not commute with incidence at '" + x.id(c) + "'");
      }
    }
  for (std::size_t t = 0; t < n; ++t)
    for (const auto& s : x.faces(t)) {
      RationalMatrix lhs = f.ring().normalize(phi.matrices[t] * f.restriction(s.cell, t));
      RationalMatrix rhs = f.ring().normalize(
          f.restriction(phi.cell_map[s.cell], phi.cell_map[t]) * phi.matrices[s.cell]);
      if (lhs != rhs)
        throw Error(ErrorCode::NotAnAutomorphism,
                    "stalk maps do not commute with restriction (" + x.id(s.cell) + " <= " + x.id(t) + ")");
    }
  return sign;
}

RationalVector push_cochain(const CellularSheaf& f, const SheafAutomorphism& phi,
                            const std::vector<int>& sign, int k, const RationalVector& z) {
  RationalVector out(z.size(), Rational(0));
  for (auto c : f.base().cells_of_dim(k)) {
    RationalVector y = phi.matrices[c].apply(f.block(z, c));
    const std::size_t off = f.offset(phi.cell_map[c]);
    for (std::size_t i = 0; i < y.size(); ++i) out[off + i] = sign[c] * y[i];
  }
  return f.ring().normalize(out);
}

}  // namespace

CohomologyClass automorphism_action(const CellularSheaf& f, const SheafAutomorphism& phi,
                                    const CohomologyClass& c) {
  auto sign = automorphism_signs(f, phi);
  if (c.cocycle.size() != f.cochain_dim(c.degree))
    throw Error(ErrorCode::DimensionMismatch, "class does not live on this sheaf");
  return CohomologyClass{c.sheaf, c.degree, push_cochain(f, phi, sign, c.degree, c.cocycle)};
}

InducedMap automorphism_matrix(const CellularSheaf& f, const SheafAutomorphism& phi,
                               const Cohomology& h) {
  auto sign = automorphism_signs(f, phi);
  InducedMap out = make_map(h, h);
  for (std::size_t g = 0; g < h.generator_count(); ++g)
    set_column(out.matrix, g, h.reduce(push_cochain(f, phi, sign, h.degree(), h.generators()[g])));
  return out;
}

std::set<RationalVector> enumerate_orbit(const std::vector<RationalMatrix>& actions,
                                         const RationalVector& start,
                                         const std::vector<Integer>& orders, int max_length) {
  auto normalize = [&](RationalVector v) {
    for (std::size_t i = 0; i < v.size() && i < orders.size(); ++i)
      if (orders[i] != 0) {
        Integer r;
        mpz_fdiv_r(r.get_mpz_t(), v[i].get_num_mpz_t(), orders[i].get_mpz_t());
        v[i] = r;
      }
    return v;
  };
  std::set<RationalVector> orbit{normalize(start)};
  std::vector<RationalVector> frontier{normalize(start)};
  for (int step = 0; step < max_length && !frontier.empty(); ++step) {
    std::vector<RationalVector> next;
    for (const auto& v : frontier)
      for (const auto& a : actions) {
        RationalVector w = normalize(a.apply(v));
        if (orbit.insert(w).second) next.push_back(w);
      }
    frontier = std::move(next);
  }
  return orbit;
}

bool exact_at(const InducedMap& f, const InducedMap& g) {
  IntegerMatrix fm = as_integer(f.matrix, "induced map");
  IntegerMatrix gm = as_integer(g.matrix, "induced map");
  IntegerMatrix image = hcat(fm, order_relations(f.target_orders));
  IntegerMatrix kernel = preimage_lattice(gm, order_relations(g.target_orders));
  return same_lattice(image, kernel);
}

bool rank_exact_at(const InducedMap& f, const InducedMap& g) {
  auto free_indices = [](const std::vector<Integer>& orders) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < orders.size(); ++i)
      if (orders[i] == 0) out.push_back(i);
    return out;
  };
  auto g_src = free_indices(f.source_orders), h = free_indices(f.target_orders),
       k = free_indices(g.target_orders);
  RationalMatrix fq(h.size(), g_src.size()), gq(k.size(), h.size());
  for (std::size_t i = 0; i < h.size(); ++i)
    for (std::size_t j = 0; j < g_src.size(); ++j) fq(i, j) = f.matrix(h[i], g_src[j]);
  for (std::size_t i = 0; i < k.size(); ++i)
    for (std::size_t j = 0; j < h.size(); ++j) gq(i, j) = g.matrix(k[i], h[j]);
  if (!(gq * fq).is_zero()) return false;
  return rank(fq) + rank(gq) == h.size();
}

}  // namespace intaff
