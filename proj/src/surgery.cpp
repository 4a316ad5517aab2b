#include "intaff/surgery.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace intaff {

namespace {

// Position of each overlap cell of a piece, or none.
std::vector<std::optional<std::size_t>> positions(std::size_t n, const std::vector<std::size_t>& cells) {
  std::vector<std::optional<std::size_t>> pos(n);
  for (std::size_t i = 0; i < cells.size(); ++i)
    if (cells[i] < n) pos[cells[i]] = i;
  return pos;
}

RationalMatrix stalk_map(const GluingSpec& spec, std::size_t i) {
  if (spec.stalk_maps.empty()) return RationalMatrix::identity(spec.first->stalk(spec.overlap_first[i]));
  return spec.stalk_maps[i];
}

bool invertible(const RationalMatrix& m, const Ring& ring) {
  if (m.rows() != m.cols()) return false;
  if (m.rows() == 0) return true;
  if (ring.is_field()) return rank(m, ring) == m.rows();
  auto z = to_integer(m);
  return z && is_unimodular(*z);
}

std::vector<std::size_t> iota(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

}  // namespace

Report validate_gluing(const GluingSpec& spec) {
  Report r;
  if (!spec.first || !spec.second) {
    r.add("gluing needs two pieces");
    return r;
  }
  const CellularSheaf& f1 = *spec.first;
  const CellularSheaf& f2 = *spec.second;
  const CellComplex& x1 = f1.base();
  const CellComplex& x2 = f2.base();
  if (!(f1.ring() == f2.ring())) r.add("pieces have different coefficient rings");
  const std::size_t n = spec.overlap_first.size();
  if (spec.overlap_second.size() != n) r.add("overlap lists have different lengths");
  if (!spec.stalk_maps.empty() && spec.stalk_maps.size() != n) r.add("one stalk map is needed per overlap cell");
  if (!r.ok()) return r;
  auto check_cells = [&](const std::vector<std::size_t>& cells, const CellComplex& x, const char* which) {
    std::vector<std::size_t> sorted = cells;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      r.add(std::string("overlap of the ") + which + " piece repeats a cell");
    if (!sorted.empty() && sorted.back() >= x.size())
      r.add(std::string("overlap of the ") + which + " piece names a missing cell");
    else if (!x.is_subcomplex(cells))
      r.add(std::string("overlap of the ") + which + " piece is not a subcomplex");
  };
  check_cells(spec.overlap_first, x1, "first");
  check_cells(spec.overlap_second, x2, "second");
  if (!r.ok()) return r;

  auto pos1 = positions(x1.size(), spec.overlap_first);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t a = spec.overlap_first[i], b = spec.overlap_second[i];
    const std::string pair = "'" + x1.id(a) + "' ~ '" + x2.id(b) + "'";
    if (x1.dim(a) != x2.dim(b)) {
      r.add("identified cells " + pair + " have different dimensions");
      continue;
    }
    if (x1.faces(a).size() != x2.faces(b).size()) r.add("identified cells " + pair + " have different boundaries");
    for (const auto& face : x1.faces(a)) {
      const std::size_t j = *pos1[face.cell];
      if (x2.incidence(b, spec.overlap_second[j]) != face.coefficient)
        r.add("identification does not commute with incidence at " + pair);
    }
    const RationalMatrix m = stalk_map(spec, i);
    if (f1.stalk(a) != f2.stalk(b) || m.rows() != f2.stalk(b) || m.cols() != f1.stalk(a) ||
        !invertible(m, f1.ring()))
      r.add("stalk map at " + pair + " is not an isomorphism");
  }
  if (!r.ok()) return r;
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& face : x1.faces(spec.overlap_first[i])) {
      const std::size_t j = *pos1[face.cell];
      const RationalMatrix lhs = f2.restriction(spec.overlap_second[j], spec.overlap_second[i]) * stalk_map(spec, j);
      const RationalMatrix rhs = stalk_map(spec, i) * f1.restriction(face.cell, spec.overlap_first[i]);
      if (f1.ring().normalize(lhs - rhs) != RationalMatrix(lhs.rows(), lhs.cols()))
        r.add("stalk maps do not commute with restriction '" + x1.id(face.cell) + "' <= '" +
              x1.id(spec.overlap_first[i]) + "'");
    }
  return r;
}

GluedSheaf glue(const GluingSpec& spec) {
  Report r = validate_gluing(spec);
  if (!r.ok()) throw Error(ErrorCode::IdentificationConflict, r.violations.front());
  const CellularSheaf& f1 = *spec.first;
  const CellularSheaf& f2 = *spec.second;
  const CellComplex& x1 = f1.base();
  const CellComplex& x2 = f2.base();
  auto pos2 = positions(x2.size(), spec.overlap_second);

  auto x = std::make_shared<CellComplex>();
  for (std::size_t c = 0; c < x1.size(); ++c) x->add_cell(x1.id(c), x1.dim(c));
  GluedSheaf out;
  out.second_cells.assign(x2.size(), 0);
  for (std::size_t c = 0; c < x2.size(); ++c) {
    if (pos2[c]) {
      out.second_cells[c] = spec.overlap_first[*pos2[c]];
      continue;
    }
    std::string id = x2.id(c);
    while (x->find(id)) id = "2." + id;
    out.second_cells[c] = x->add_cell(id, x2.dim(c));
  }
  for (std::size_t c = 0; c < x1.size(); ++c)
    for (const auto& face : x1.faces(c)) x->set_incidence(c, face.cell, face.coefficient);
  for (std::size_t c = 0; c < x2.size(); ++c) {
    if (pos2[c]) continue;
    for (const auto& face : x2.faces(c))
      x->set_incidence(out.second_cells[c], out.second_cells[face.cell], face.coefficient);
  }
  for (const auto& [face, word] : x1.boundary_words()) x->set_boundary_word(face, word);
  for (const auto& [face, word] : x2.boundary_words()) {
    if (pos2[face]) continue;
    std::vector<SignedEdge> w;
    for (const auto& l : word) w.push_back({out.second_cells[l.edge], l.sign});
    x->set_boundary_word(out.second_cells[face], w);
  }

  auto g = std::make_shared<CellularSheaf>(x, f1.ring());
  for (std::size_t c = 0; c < x1.size(); ++c) g->set_stalk(c, f1.stalk(c));
  for (std::size_t c = 0; c < x2.size(); ++c)
    if (!pos2[c]) g->set_stalk(out.second_cells[c], f2.stalk(c));
  for (const auto& [key, m] : f1.restrictions()) g->set_restriction(key.first, key.second, m);
  for (const auto& [key, m] : f2.restrictions()) {
    const auto [s, t] = key;
    if (pos2[t]) continue;
    RationalMatrix rm = pos2[s] ? m * stalk_map(spec, *pos2[s]) : m;
    g->set_restriction(out.second_cells[s], out.second_cells[t], f1.ring().normalize(rm));
  }
  out.complex = x;
  out.sheaf = g;
  return out;
}

GluingSpec split_sheaf(const CellularSheaf& f, const std::vector<std::size_t>& first,
                       const std::vector<std::size_t>& second) {
  Subcomplex s1 = make_subcomplex(f.base(), first);
  Subcomplex s2 = make_subcomplex(f.base(), second);
  GluingSpec spec;
  spec.first = std::make_shared<CellularSheaf>(restrict_sheaf(f, s1));
  spec.second = std::make_shared<CellularSheaf>(restrict_sheaf(f, s2));
  for (std::size_t c = 0; c < f.base().size(); ++c)
    if (s1.index[c] && s2.index[c]) {
      spec.overlap_first.push_back(*s1.index[c]);
      spec.overlap_second.push_back(*s2.index[c]);
    }
  return spec;
}

CellularSheaf overlap_sheaf(const GluingSpec& spec) {
  return restrict_sheaf(*spec.first, make_subcomplex(spec.first->base(), spec.overlap_first));
}

RationalVector overlap_class(const GluingSpec& spec, int piece, int degree, const RationalVector& cocycle) {
  const CellularSheaf& f1 = *spec.first;
  Subcomplex sub = make_subcomplex(f1.base(), spec.overlap_first);
  if (piece == 0) return restrict_cochain(f1, sub, degree, cocycle);
  if (piece != 1) throw Error(ErrorCode::InvalidInput, "piece must be 0 or 1");
  const CellularSheaf& f2 = *spec.second;
  auto pos1 = positions(f1.base().size(), spec.overlap_first);
  RationalVector out;
  for (auto c : sub.cells) {
    if (f1.base().dim(c) != degree) continue;
    const std::size_t i = *pos1[c];
    auto inv = inverse(stalk_map(spec, i));
    RationalVector y = inv->apply(f2.block(cocycle, spec.overlap_second[i]));
    out.insert(out.end(), y.begin(), y.end());
  }
  return f1.ring().normalize(out);
}

Integer GluingObstruction::element_order() const {
  Integer order = 1;
  for (std::size_t i = 0; i < element.size(); ++i) {
    if (element[i] == 0) continue;
    if (orders[i] == 0) return 0;
    const Integer x = element[i].get_num();
    order = lcm(order, orders[i] / gcd(orders[i], x));
  }
  return order;
}

std::string GluingObstruction::verdict() const {
  if (vanishes) return "gluable: obstruction vanishes";
  const Integer order = element_order();
  std::string group = order == 0 ? "Z" : "Z/" + order.get_str();
  std::string out = "non-realizable: obstruction " + group + " nonzero";
  if (!rational_vanishes) out += " (rational part nonzero)";
  return out;
}

GluingObstruction gluing_obstruction(const GluingSpec& spec, const RationalVector& class_first,
                                     const RationalVector& class_second, int degree) {
  GluedSheaf g = glue(spec);
  const CellularSheaf& glued = *g.sheaf;
  const Ring& ring = glued.ring();
  Subcomplex overlap = make_subcomplex(*g.complex, spec.overlap_first);
  CellularSheaf f0 = restrict_sheaf(glued, overlap);
  Cohomology h0(f0, degree);

  std::vector<RationalVector> relations;
  const std::vector<std::vector<std::size_t>> pieces{iota(spec.first->base().size()), g.second_cells};
  for (const auto& cells : pieces) {
    Subcomplex sp = make_subcomplex(*g.complex, cells);
    CellularSheaf fp = restrict_sheaf(glued, sp);
    std::vector<std::size_t> inner;
    for (auto c : spec.overlap_first) inner.push_back(*sp.index[c]);
    Subcomplex sub = make_subcomplex(fp.base(), inner);
    Cohomology hp(fp, degree);
    for (const auto& z : hp.generators()) relations.push_back(h0.reduce(restrict_cochain(fp, sub, degree, z)));
  }
  const std::size_t m = h0.generator_count();
  for (std::size_t j = 0; j < m; ++j)
    if (h0.orders()[j] != 0 && !ring.is_field()) {
      RationalVector row(m, Rational(0));
      row[j] = h0.orders()[j];
      relations.push_back(row);
    }
  RationalMatrix rel(relations.size(), m);
  for (std::size_t i = 0; i < relations.size(); ++i)
    for (std::size_t j = 0; j < m; ++j) rel(i, j) = relations[i][j];
  QuotientModule q(rel, m, ring);

  if (class_first.size() != f0.cochain_dim(degree) || class_second.size() != f0.cochain_dim(degree))
    throw Error(ErrorCode::DimensionMismatch, "classes must be cochains on the overlap");
  RationalVector a = h0.reduce(class_first), b = h0.reduce(class_second);
  RationalVector diff(m);
  for (std::size_t j = 0; j < m; ++j) diff[j] = a[j] - b[j];

  GluingObstruction out;
  out.degree = degree;
  out.overlap_group = h0.group();
  out.quotient = q.group();
  out.orders = q.orders();
  out.element = q.reduce(diff);
  out.vanishes = std::all_of(out.element.begin(), out.element.end(), [](const Rational& v) { return v == 0; });
  out.rational_rank = out.quotient.free_rank;
  out.rational_vanishes = true;
  for (std::size_t i = 0; i < out.element.size(); ++i)
    if (out.orders[i] == 0 && out.element[i] != 0) out.rational_vanishes = false;
  return out;
}

std::vector<std::size_t> cut_edges(const AffineSurface& s, const std::vector<std::size_t>& region) {
  const CellComplex& x = *s.base;
  std::vector<std::size_t> out;
  for (auto e : x.cells_of_dim(1)) {
    std::size_t inside = 0;
    for (const auto& cf : x.cofaces(e))
      if (std::find(region.begin(), region.end(), cf.cell) != region.end()) ++inside;
    if (inside == 1) out.push_back(e);
  }
  return out;
}

AffineSurface dehn_reglue(const AffineSurface& s, const std::vector<std::size_t>& region,
                          const std::map<std::size_t, IntegerVector>& twist) {
  const CellComplex& x = *s.base;
  for (auto f : region)
    if (f >= x.size() || x.dim(f) != 2) throw Error(ErrorCode::InvalidInput, "region must consist of faces");
  for (auto c : x.closure(region))
    if (s.marks[c].kind != MarkKind::Regular)
      throw Error(ErrorCode::RegionNotRegular, "region meets the singular cell '" + x.id(c) + "'");
  const auto cut = cut_edges(s, region);
  for (auto e : cut)
    if (x.cofaces(e).size() != 2) throw Error(ErrorCode::InvalidInput, "region touches the boundary at '" + x.id(e) + "'");
  CellularSheaf r = build_R_sheaf(s);
  RationalVector tau(r.cochain_dim(1), Rational(0));
  for (const auto& [e, w] : twist) {
    if (std::find(cut.begin(), cut.end(), e) == cut.end())
      throw Error(ErrorCode::InvalidInput, "twist is supported off the cut at cell " + std::to_string(e));
    if (w.size() != r.stalk(e)) throw Error(ErrorCode::DimensionMismatch, "twist value has the wrong rank");
    for (std::size_t i = 0; i < w.size(); ++i) tau[r.offset(e) + i] = w[i];
  }
  RationalVector shift = r.coboundary(1).apply(tau);
  AffineSurface out = s;
  if (!out.chern) out.chern = RationalVector(r.cochain_dim(2), Rational(0));
  for (auto f : region)
    for (std::size_t i = 0; i < r.stalk(f); ++i) (*out.chern)[r.offset(f) + i] += shift[r.offset(f) + i];
  return out;
}

std::string RealizabilityReport::describe() const {
  std::ostringstream os;
  os << verdict << " (dimension " << dimension << ")";
  if (h2) os << "\n  H^2(O, R) = " << h2->to_string();
  if (moduli) os << "\n  Lagrangian moduli " << intaff::describe(*moduli);
  for (const auto& m : monodromy) os << "\n  monodromy: " << m;
  if (!dhat_condition.empty()) os << "\n  dhat condition: " << dhat_condition;
  for (const auto& v : violations) os << "\n  violation: " << v;
  return os.str();
}

namespace {

std::string dhat_status(const CellComplex& x) {
  if (x.dimension() < 3) return "holds (H^3(O, Q) = 0)";
  auto base = std::make_shared<CellComplex>(x);
  Cohomology h3(CellularSheaf::constant(base, Ring::rationals(), 1), 3);
  if (h3.group().free_rank == 0) return "holds (H^3(O, Q) = 0)";
  return "not decided (H^3(O, Q) = Q^" + std::to_string(h3.group().free_rank) + ")";
}

}  // namespace

RealizabilityReport realizability_report_2d(const AffineSurface& s) {
  RealizabilityReport out;
  out.dimension = s.base->dimension();
  Report valid = validate_affine(s);
  if (!valid.ok()) {
    out.verdict = "invalid";
    out.violations = valid.violations;
    return out;
  }
  CellularSheaf r = build_R_sheaf(s);
  out.h2 = Cohomology(r, 2).group();
  out.moduli = lagrangian_moduli(s);
  auto rep = monodromy_rep(s);
  std::map<std::string, std::size_t> classes;
  for (std::size_t i = 0; i < rep.vertex_loop_vertex.size(); ++i) {
    const IntegerMatrix& m = rep.images[rep.loops.size() - rep.vertex_loop_vertex.size() + i];
    if (m == IntegerMatrix::identity(2)) continue;
    std::ostringstream os;
    os << conjugacy_representative(m);
    ++classes[os.str()];
  }
  for (const auto& [m, n] : classes)
    out.monodromy.push_back(std::to_string(n) + " vertex loop(s) conjugate to " + m);
  if (!rep.relations_hold) out.monodromy.push_back("loop relations fail");
  out.dhat_condition = dhat_status(*s.base);
  out.verdict = out.dimension == 2 ? "realizable" : "undecided";
  return out;
}

RealizabilityReport realizability_report(const CellularSheaf& r) {
  RealizabilityReport out;
  out.dimension = r.base().dimension();
  Report valid = validate_sheaf(r);
  if (!valid.ok()) {
    out.verdict = "invalid";
    out.violations = valid.violations;
    return out;
  }
  out.h2 = Cohomology(r, 2).group();
  out.dhat_condition = dhat_status(r.base());
  out.verdict = out.dimension == 2 ? "realizable" : "undecided";
  return out;
}

}  // namespace intaff
