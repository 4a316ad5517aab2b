#include "intaff/affinebase.hpp"

#include <algorithm>
#include <numeric>

namespace intaff {

namespace {

IntegerMatrix column(const IntegerVector& v) {
  IntegerMatrix m(v.size(), 1);
  for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
  return m;
}

// Edges of a face that contain the vertex.
std::vector<std::size_t> face_edges_at(const CellComplex& x, std::size_t face, std::size_t v) {
  std::vector<std::size_t> out;
  for (const auto& e : x.faces(face))
    if (x.incidence(e.cell, v) != 0) out.push_back(e.cell);
  return out;
}

std::size_t other_coface(const CellComplex& x, std::size_t edge, std::size_t face) {
  for (const auto& c : x.cofaces(edge))
    if (c.cell != face) return c.cell;
  return face;
}

}  // namespace

AffineMap AffineMap::identity(std::size_t n) {
  return AffineMap{IntegerMatrix::identity(n), RationalVector(n, Rational(0))};
}

RationalVector AffineMap::apply(const RationalVector& p) const {
  RationalVector out = to_rational(A).apply(p);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += t[i];
  return out;
}

AffineMap compose(const AffineMap& second, const AffineMap& first) {
  RationalVector t = to_rational(second.A).apply(first.t);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] += second.t[i];
  return AffineMap{second.A * first.A, t};
}

AffineMap inverse(const AffineMap& m) {
  auto inv = unimodular_inverse(m.A);
  if (!inv) throw Error(ErrorCode::InvalidInput, "transition matrix is not unimodular");
  RationalVector t = to_rational(*inv).apply(m.t);
  for (auto& v : t) v = -v;
  return AffineMap{*inv, t};
}

IntegerMatrix covector_transport(const AffineMap& m) {
  auto inv = unimodular_inverse(m.A);
  if (!inv) throw Error(ErrorCode::InvalidInput, "transition matrix is not unimodular");
  return inv->transpose();
}

const char* to_string(MarkKind k) {
  switch (k) {
    case MarkKind::Regular: return "regular";
    case MarkKind::FocusFocus: return "focus_focus";
    case MarkKind::EllipticEdge: return "elliptic_edge";
    case MarkKind::EllipticVertex: return "elliptic_vertex";
    case MarkKind::HyperbolicEdge: return "hyperbolic_edge";
    case MarkKind::HyperbolicVertex: return "hyperbolic_vertex";
  }
  return "?";
}

std::optional<MarkKind> parse_mark_kind(const std::string& s) {
  for (auto k : {MarkKind::Regular, MarkKind::FocusFocus, MarkKind::EllipticEdge, MarkKind::EllipticVertex,
                 MarkKind::HyperbolicEdge, MarkKind::HyperbolicVertex})
    if (s == to_string(k)) return k;
  return std::nullopt;
}

Williamson williamson(const SingularityMark& m, int) {
  switch (m.kind) {
    case MarkKind::Regular: return {};
    case MarkKind::FocusFocus: return {0, 0, 1};
    case MarkKind::EllipticEdge: return {1, 0, 0};
    case MarkKind::EllipticVertex: return {2, 0, 0};
    case MarkKind::HyperbolicEdge: return {0, 1, 0};
    case MarkKind::HyperbolicVertex: return {0, 2, 0};
  }
  return {};
}

std::size_t stalk_rank(const SingularityMark& m, int cell_dim) {
  // Rank r + k_e + k_f with r + k_e + k_h + 2 k_f = 2.
  Williamson w = williamson(m, cell_dim);
  return 2 - w.hyperbolic - w.focus_focus;
}

AffineSurface::AffineSurface(std::shared_ptr<const CellComplex> b)
    : base(std::move(b)), marks(base->size()) {}

AffineMap AffineSurface::crossing(std::size_t edge, std::size_t from) const {
  auto it = transitions.find(edge);
  if (it == transitions.end())
    throw Error(ErrorCode::InvalidInput, "no transition across '" + base->id(edge) + "'");
  if (it->second.from == from) return it->second.map;
  if (it->second.to == from) return inverse(it->second.map);
  throw Error(ErrorCode::InvalidInput,
              "face '" + base->id(from) + "' does not border '" + base->id(edge) + "'");
}

std::size_t AffineSurface::other_face(std::size_t edge, std::size_t from) const {
  return other_coface(*base, edge, from);
}

void AffineSurface::set_transition(std::size_t edge, std::size_t from, std::size_t to, AffineMap m) {
  transitions[edge] = Transition{from, to, std::move(m)};
}

std::vector<std::size_t> AffineSurface::focus_focus_vertices() const {
  std::vector<std::size_t> out;
  for (auto v : base->cells_of_dim(0))
    if (marks[v].kind == MarkKind::FocusFocus) out.push_back(v);
  return out;
}

void set_transition_from_charts(AffineSurface& s, std::size_t edge, std::size_t from,
                                std::size_t to, const IntegerMatrix& A) {
  const CellComplex& x = *s.base;
  const std::size_t v = x.tail(edge);
  auto pf = s.charts.at(from).at(v);
  auto pt = s.charts.at(to).at(v);
  RationalVector ap = to_rational(A).apply(pf);
  RationalVector t{pt[0] - ap[0], pt[1] - ap[1]};
  s.set_transition(edge, from, to, AffineMap{A, t});
}

AffineSurface quotient_affine(const AffineSurface& s, const std::vector<std::size_t>& sigma,
                              const std::map<std::size_t, AffineMap>& chart_map) {
  const CellComplex& x = *s.base;
  Quotient q = quotient_by_free_involution(x, sigma);
  auto base = std::make_shared<CellComplex>(std::move(q.complex));
  AffineSurface out(base);
  // Representative of each quotient cell, and the map from a face's chart
  // to its representative's chart.
  std::vector<std::size_t> rep(base->size(), x.size());
  for (std::size_t c = 0; c < x.size(); ++c)
    if (rep[q.cell_map[c]] == x.size() && c < sigma[c]) rep[q.cell_map[c]] = c;
  auto to_rep = [&](std::size_t f) {
    if (rep[q.cell_map[f]] == f) return AffineMap::identity();
    return inverse(chart_map.at(sigma[f]));
  };
  for (std::size_t c = 0; c < base->size(); ++c) out.marks[c] = s.marks[rep[c]];
  for (auto f : base->cells_of_dim(2)) {
    auto chart = s.charts.find(rep[f]);
    if (chart == s.charts.end()) continue;
    for (const auto& [v, p] : chart->second) out.charts[f][q.cell_map[v]] = p;
  }
  for (auto e : base->cells_of_dim(1)) {
    const std::size_t e0 = rep[e];
    auto it = s.transitions.find(e0);
    if (it == s.transitions.end()) continue;
    const Transition& tr = it->second;
    AffineMap m = compose(to_rep(tr.to), compose(tr.map, inverse(to_rep(tr.from))));
    out.set_transition(e, q.cell_map[tr.from], q.cell_map[tr.to], m);
  }
  return out;
}

AffineSurface disjoint_union(const AffineSurface& a, const AffineSurface& b) {
  auto base = std::make_shared<CellComplex>(disjoint_union(*a.base, *b.base));
  const std::size_t off = a.base->size();
  AffineSurface out(base);
  for (std::size_t c = 0; c < off; ++c) out.marks[c] = a.marks[c];
  for (std::size_t c = 0; c < b.base->size(); ++c) out.marks[off + c] = b.marks[c];
  out.charts = a.charts;
  for (const auto& [f, chart] : b.charts)
    for (const auto& [v, p] : chart) out.charts[off + f][off + v] = p;
  out.transitions = a.transitions;
  for (const auto& [e, tr] : b.transitions) out.set_transition(off + e, off + tr.from, off + tr.to, tr.map);
  if (a.chern && b.chern) {
    RationalVector c = *a.chern;
    c.insert(c.end(), b.chern->begin(), b.chern->end());
    out.chern = c;
  }
  return out;
}

VertexStar vertex_star(const CellComplex& x, std::size_t vertex) {
  VertexStar star;
  std::vector<std::size_t> edges;
  for (const auto& e : x.cofaces(vertex))
    if (!x.cofaces(e.cell).empty()) edges.push_back(e.cell);
  if (edges.empty()) return star;
  // Start next to a boundary edge when there is one.
  std::size_t start_edge = edges.front();
  bool open = false;
  for (auto e : edges)
    if (x.cofaces(e).size() == 1) {
      start_edge = e;
      open = true;
      break;
    }
  const std::size_t first = x.cofaces(start_edge).front().cell;
  std::size_t face = first, came = start_edge;
  star.faces.push_back(face);
  for (std::size_t guard = 0; guard <= x.size(); ++guard) {
    auto at = face_edges_at(x, face, vertex);
    if (at.size() != 2)
      throw Error(ErrorCode::NotASurface, "face '" + x.id(face) + "' is not a polygon at '" + x.id(vertex) + "'");
    const std::size_t next = at[0] == came ? at[1] : at[0];
    if (x.cofaces(next).size() != 2) break;
    face = other_coface(x, next, face);
    star.edges.push_back(next);
    star.faces.push_back(face);
    if (!open && next == start_edge) {
      star.closed = true;
      break;
    }
    came = next;
  }
  return star;
}

AffineMap holonomy(const AffineSurface& s, const std::vector<std::size_t>& faces,
                   const std::vector<std::size_t>& edges) {
  AffineMap h = AffineMap::identity();
  for (std::size_t i = 0; i < edges.size(); ++i) h = compose(s.crossing(edges[i], faces[i]), h);
  return h;
}

std::optional<Integer> unipotent_power(const IntegerMatrix& m) {
  if (m.rows() != 2 || m.cols() != 2) return std::nullopt;
  if (determinant(m) != 1 || m(0, 0) + m(1, 1) != 2) return std::nullopt;
  Integer g = 0;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) g = gcd(g, m(i, j) - (i == j ? 1 : 0));
  if (g == 0) return std::nullopt;
  return g;
}

std::optional<IntegerVector> fixed_covector(const IntegerMatrix& m) {
  IntegerMatrix n = m.transpose() - IntegerMatrix::identity(m.rows());
  IntegerMatrix k = integer_kernel(n);
  if (k.cols() != 1) return std::nullopt;
  IntegerVector w(k.rows());
  Integer g = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] = k(i, 0);
    g = gcd(g, w[i]);
  }
  for (auto& v : w) v /= g;
  for (const auto& v : w)
    if (v != 0) {
      if (v < 0)
        for (auto& u : w) u = -u;
      break;
    }
  return w;
}

IntegerMatrix conjugacy_representative(const IntegerMatrix& m) {
  if (auto k = unipotent_power(m)) return IntegerMatrix{{1, *k}, {0, 1}};
  return m;
}

Report validate_affine(const AffineSurface& s) {
  Report r;
  const CellComplex& x = *s.base;
  r.merge(validate(x));
  if (x.dimension() != 2) r.add("base must be 2-dimensional");
  if (s.marks.size() != x.size()) r.add("marks must cover every cell");
  if (!r.ok()) return r;

  for (const auto& [edge, tr] : s.transitions) {
    const std::string at = "transition across '" + (edge < x.size() ? x.id(edge) : "?") + "'";
    if (edge >= x.size() || x.dim(edge) != 1) {
      r.add(at + " is not on an edge");
      continue;
    }
    if (x.incidence(tr.from, edge) == 0 || x.incidence(tr.to, edge) == 0 || tr.from == tr.to)
      r.add(at + " does not join the faces on both sides");
    if (tr.map.A.rows() != 2 || tr.map.A.cols() != 2 || tr.map.t.size() != 2)
      r.add(at + " has the wrong shape");
    else if (!is_unimodular(tr.map.A))
      r.add(at + " is not in GL(2,Z)");
  }
  for (auto e : x.cells_of_dim(1)) {
    const auto n = x.cofaces(e).size();
    if (n == 2 && !s.transitions.count(e)) r.add("interior edge '" + x.id(e) + "' has no transition");
    if (n > 2) r.add("edge '" + x.id(e) + "' has more than two faces");
  }
  for (std::size_t c = 0; c < x.size(); ++c) {
    const SingularityMark& m = s.marks[c];
    const std::string at = "mark " + std::string(to_string(m.kind)) + " on '" + x.id(c) + "'";
    const int d = x.dim(c);
    const bool boundary_edge = d == 1 && x.cofaces(c).size() == 1;
    switch (m.kind) {
      case MarkKind::Regular: break;
      case MarkKind::FocusFocus:
        if (d != 0) r.add(at + " must be on a vertex");
        if (m.multiplicity < 1) r.add(at + " needs a positive multiplicity");
        break;
      case MarkKind::EllipticEdge:
        if (!boundary_edge) r.add(at + " must be on a boundary edge");
        break;
      case MarkKind::EllipticVertex:
      case MarkKind::HyperbolicVertex:
        if (d != 0) r.add(at + " must be on a vertex");
        break;
      case MarkKind::HyperbolicEdge:
        if (d != 1) r.add(at + " must be on an edge");
        if (!m.covector || m.covector->size() != 2 || gcd((*m.covector)[0], (*m.covector)[1]) != 1)
          r.add(at + " needs a primitive covector");
        break;
    }
  }
  if (!r.ok()) return r;

  for (auto v : x.cells_of_dim(0)) {
    VertexStar star = vertex_star(x, v);
    const SingularityMark& m = s.marks[v];
    if (!star.closed) {
      if (m.kind == MarkKind::FocusFocus) r.add("focus-focus vertex '" + x.id(v) + "' is on the boundary");
      continue;
    }
    AffineMap h = holonomy(s, star.faces, star.edges);
    if (m.kind == MarkKind::FocusFocus) {
      auto k = unipotent_power(h.A);
      if (!k || *k != m.multiplicity) {
        r.add("vertex '" + x.id(v) + "' monodromy is not conjugate to [[1," +
              std::to_string(m.multiplicity) + "],[0,1]]");
        continue;
      }
      IntegerVector w = *fixed_covector(h.A);
      if (w[0] * h.t[0] + w[1] * h.t[1] != 0)
        r.add("vertex '" + x.id(v) + "' affine monodromy has no fixed point");
    } else if (m.kind != MarkKind::HyperbolicVertex && !(h == AffineMap::identity())) {
      Integer tr = h.A(0, 0) + h.A(1, 1);
      r.add("regular vertex '" + x.id(v) + "' has nontrivial monodromy (trace " + tr.get_str() + ")");
    }
  }

  for (const auto& [face, coords] : s.charts) {
    if (face >= x.size() || x.dim(face) != 2) {
      r.add("chart attached to a non-face");
      continue;
    }
    for (const auto& [v, p] : coords) {
      if (p.size() != 2) r.add("chart of '" + x.id(face) + "' has a non-planar point");
      if (v >= x.size() || x.dim(v) != 0) r.add("chart of '" + x.id(face) + "' names a non-vertex");
    }
  }
  for (const auto& [edge, tr] : s.transitions) {
    auto fa = s.charts.find(tr.from), fb = s.charts.find(tr.to);
    if (fa == s.charts.end() || fb == s.charts.end()) continue;
    for (const auto& v : x.faces(edge)) {
      auto pa = fa->second.find(v.cell), pb = fb->second.find(v.cell);
      if (pa == fa->second.end() || pb == fb->second.end()) continue;
      if (tr.map.apply(pa->second) != pb->second)
        r.add("transition across '" + x.id(edge) + "' moves vertex '" + x.id(v.cell) + "' off its chart position");
    }
  }
  return r;
}

MonodromyRep monodromy_rep(const AffineSurface& s) {
  const CellComplex& x = *s.base;
  MonodromyRep rep;
  rep.basepoint = x.cells_of_dim(2).front();
  LoopSet loops = dual_loops(x, rep.basepoint);
  for (const auto& l : loops.generators) {
    rep.loops.push_back(l);
    rep.images.push_back(holonomy(s, l.faces, l.edges).A);
  }
  IntegerMatrix product = IntegerMatrix::identity(2);
  for (const auto& l : loops.vertex_loops) {
    rep.loops.push_back(l);
    IntegerMatrix h = holonomy(s, l.faces, l.edges).A;
    rep.images.push_back(h);
    rep.vertex_loop_vertex.push_back(*l.vertex);
    product = h * product;
    if (s.marks[*l.vertex].kind != MarkKind::FocusFocus && h != IntegerMatrix::identity(2))
      rep.relations_hold = false;
  }
  if (loops.vertex_product_trivial && product != IntegerMatrix::identity(2)) rep.relations_hold = false;
  return rep;
}

namespace {

// Affine map from the chart of `from` to the chart of `to`, walking through
// faces around the cell.
AffineMap transport(const AffineSurface& s, std::size_t cell, std::size_t from, std::size_t to) {
  if (from == to) return AffineMap::identity();
  const CellComplex& x = *s.base;
  if (x.dim(cell) == 1) return s.crossing(cell, from);
  VertexStar star = vertex_star(x, cell);
  auto i = std::find(star.faces.begin(), star.faces.end(), from) - star.faces.begin();
  auto j = std::find(star.faces.begin(), star.faces.end(), to) - star.faces.begin();
  const auto n = static_cast<std::ptrdiff_t>(star.faces.size());
  if (i == n || j == n)
    throw Error(ErrorCode::InvalidInput, "faces are not around '" + x.id(cell) + "'");
  AffineMap h = AffineMap::identity();
  if (i < j) {
    for (auto k = i; k < j; ++k) h = compose(s.crossing(star.edges[k], star.faces[k]), h);
  } else {
    for (auto k = i; k > j; --k) h = compose(s.crossing(star.edges[k - 1], star.faces[k]), h);
  }
  return h;
}

}  // namespace

RFrames r_frames(const AffineSurface& s) {
  const CellComplex& x = *s.base;
  RFrames fr;
  fr.frame_face.assign(x.size(), 0);
  fr.basis.assign(x.size(), IntegerMatrix::identity(2));
  for (std::size_t c = 0; c < x.size(); ++c) {
    const SingularityMark& m = s.marks[c];
    if (x.dim(c) == 2) {
      fr.frame_face[c] = c;
    } else if (x.dim(c) == 1) {
      if (x.cofaces(c).empty()) throw Error(ErrorCode::NotASurface, "edge '" + x.id(c) + "' bounds no face");
      fr.frame_face[c] = x.cofaces(c).front().cell;
      if (m.kind == MarkKind::HyperbolicEdge) fr.basis[c] = column(*m.covector);
    } else {
      VertexStar star = vertex_star(x, c);
      if (star.faces.empty()) throw Error(ErrorCode::NotASurface, "vertex '" + x.id(c) + "' bounds no face");
      fr.frame_face[c] = star.faces.front();
      if (m.kind == MarkKind::FocusFocus) {
        if (!star.closed)
          throw Error(ErrorCode::NoFixedCovector, "focus-focus vertex '" + x.id(c) + "' is on the boundary");
        auto w = fixed_covector(holonomy(s, star.faces, star.edges).A);
        if (!w) throw Error(ErrorCode::NoFixedCovector, "no fixed covector at '" + x.id(c) + "'");
        fr.basis[c] = column(*w);
      } else if (m.kind == MarkKind::HyperbolicVertex) {
        fr.basis[c] = IntegerMatrix(2, 0);
      }
    }
  }
  return fr;
}

namespace {

struct RData {
  RFrames frames;
  // (sigma, tau) -> (path map, restriction over Z)
  std::map<std::pair<std::size_t, std::size_t>, std::pair<AffineMap, IntegerMatrix>> maps;
};

RData r_data(const AffineSurface& s) {
  const CellComplex& x = *s.base;
  RData d{r_frames(s), {}};
  for (std::size_t t = 0; t < x.size(); ++t)
    for (const auto& f : x.faces(t)) {
      const std::size_t sg = f.cell;
      AffineMap path = transport(s, sg, d.frames.frame_face[sg], d.frames.frame_face[t]);
      IntegerMatrix g = covector_transport(path) * d.frames.basis[sg];
      const IntegerMatrix& bt = d.frames.basis[t];
      IntegerMatrix m(bt.cols(), g.cols());
      for (std::size_t j = 0; j < g.cols(); ++j) {
        IntegerVector col(g.rows());
        for (std::size_t i = 0; i < g.rows(); ++i) col[i] = g(i, j);
        auto sol = solve_integer(bt, col);
        if (!sol)
          throw Error(ErrorCode::NoFixedCovector,
                      "stalk of '" + x.id(sg) + "' does not restrict into '" + x.id(t) + "'");
        for (std::size_t i = 0; i < sol->size(); ++i) m(i, j) = (*sol)[i];
      }
      d.maps.emplace(std::pair{sg, t}, std::pair{path, m});
    }
  return d;
}

}  // namespace

CellularSheaf build_R_sheaf(const AffineSurface& s) {
  RData d = r_data(s);
  CellularSheaf f(s.base, Ring::integers());
  for (std::size_t c = 0; c < s.base->size(); ++c) f.set_stalk(c, d.frames.basis[c].cols());
  for (const auto& [key, v] : d.maps) f.set_restriction(key.first, key.second, to_rational(v.second));
  return f;
}

SheafAutomorphism affine_automorphism(const AffineSurface& s, const std::vector<std::size_t>& cell_map,
                                      const std::map<std::size_t, AffineMap>& chart_map) {
  const CellComplex& x = *s.base;
  if (cell_map.size() != x.size()) throw Error(ErrorCode::NotAnAutomorphism, "cell map must cover every cell");
  RFrames fr = r_frames(s);
  SheafAutomorphism out{cell_map, std::vector<RationalMatrix>(x.size())};
  for (std::size_t c = 0; c < x.size(); ++c) {
    const std::size_t d = cell_map[c];
    const std::size_t f = fr.frame_face[c];
    auto g = chart_map.find(f);
    if (g == chart_map.end()) throw Error(ErrorCode::NotAnAutomorphism, "no chart map at '" + x.id(f) + "'");
    IntegerMatrix image = covector_transport(transport(s, d, cell_map[f], fr.frame_face[d])) *
                          covector_transport(g->second) * fr.basis[c];
    const IntegerMatrix& bd = fr.basis[d];
    if (bd.cols() != image.cols())
      throw Error(ErrorCode::NotAnAutomorphism, "stalk ranks differ at '" + x.id(c) + "'");
    RationalMatrix m(bd.cols(), image.cols());
    for (std::size_t j = 0; j < image.cols(); ++j) {
      auto sol = solve_integer(bd, image.col(j));
      if (!sol) throw Error(ErrorCode::NotAnAutomorphism, "stalk of '" + x.id(c) + "' is not carried onto its image");
      for (std::size_t i = 0; i < sol->size(); ++i) m(i, j) = (*sol)[i];
    }
    out.matrices[c] = std::move(m);
  }
  return out;
}

ISequence build_I_sheaf(const AffineSurface& s) {
  RData d = r_data(s);
  const CellComplex& x = *s.base;
  ISequence out;
  out.constants = std::make_unique<CellularSheaf>(CellularSheaf::constant(s.base, Ring::rationals(), 1));
  out.I = std::make_unique<CellularSheaf>(s.base, Ring::rationals());
  out.R = std::make_unique<CellularSheaf>(s.base, Ring::rationals());
  for (std::size_t c = 0; c < x.size(); ++c) {
    out.R->set_stalk(c, d.frames.basis[c].cols());
    out.I->set_stalk(c, 1 + d.frames.basis[c].cols());
  }
  for (const auto& [key, v] : d.maps) {
    const auto& [path, m] = v;
    out.R->set_restriction(key.first, key.second, to_rational(m));
    RationalVector shift = to_rational(*unimodular_inverse(path.A)).apply(path.t);
    RationalMatrix b = to_rational(d.frames.basis[key.first]);
    RationalMatrix im(1 + m.rows(), 1 + m.cols());
    im(0, 0) = 1;
    for (std::size_t j = 0; j < b.cols(); ++j) {
      Rational v0 = 0;
      for (std::size_t i = 0; i < b.rows(); ++i) v0 -= shift[i] * b(i, j);
      im(0, 1 + j) = v0;
    }
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) im(1 + i, 1 + j) = m(i, j);
    out.I->set_restriction(key.first, key.second, im);
  }
  out.sequence.inclusion = SheafMap{out.constants.get(), out.I.get(), {}};
  out.sequence.projection = SheafMap{out.I.get(), out.R.get(), {}};
  for (std::size_t c = 0; c < x.size(); ++c) {
    const std::size_t r = d.frames.basis[c].cols();
    RationalMatrix inc(1 + r, 1), proj(r, 1 + r);
    inc(0, 0) = 1;
    for (std::size_t i = 0; i < r; ++i) proj(i, 1 + i) = 1;
    out.sequence.inclusion.components.push_back(inc);
    out.sequence.projection.components.push_back(proj);
  }
  return out;
}

RationalVector dhat(const AffineSurface& s, const ISequence& seq, int k, const RationalVector& cocycle) {
  if (k + 1 > s.base->dimension() || k < 0) return {};
  RationalVector z = connecting_cocycle(seq.sequence, k, cocycle);
  return Cohomology(*seq.constants, k + 1).reduce(z);
}

RationalVector dhat(const AffineSurface& s, int k, const RationalVector& cocycle) {
  ISequence seq = build_I_sheaf(s);
  return dhat(s, seq, k, cocycle);
}

ModuliPair lagrangian_moduli(const AffineSurface& s) {
  ISequence seq = build_I_sheaf(s);
  Cohomology h2(*seq.constants, 2);
  CellularSheaf r = build_R_sheaf(s);
  Cohomology h1(r, 1);
  RationalMatrix images(h2.generator_count(), h1.generator_count());
  for (std::size_t g = 0; g < h1.generator_count(); ++g) {
    RationalVector y = dhat(s, seq, 1, h1.generators()[g]);
    for (std::size_t i = 0; i < y.size(); ++i) images(i, g) = y[i];
  }
  return ModuliPair{h2.generator_count(), rank(images)};
}

std::string describe(const ModuliPair& m) {
  std::string out = "(dim " + std::to_string(m.dimension) + ", lattice rank " + std::to_string(m.lattice_rank) + ")";
  const std::size_t line = m.dimension - m.lattice_rank;
  std::vector<std::string> parts;
  if (line == 1) parts.push_back("R");
  if (line > 1) parts.push_back("R^" + std::to_string(line));
  if (m.lattice_rank == 1) parts.push_back("R/Z");
  if (m.lattice_rank > 1) parts.push_back("(R/Z)^" + std::to_string(m.lattice_rank));
  if (parts.empty()) return out + " = 0";
  out += " ≅ " + parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) out += " x " + parts[i];
  return out;
}

AbelianGroup torus_bundle_h1(const Integer& c1, const Integer& c2) {
  // Generators a, b (base) and x, y (central fiber); [a,b] = x^c1 y^c2.
  return cokernel(IntegerMatrix{{0, 0, c1, c2}});
}

Rational affine_area(const AffineSurface& s) {
  const CellComplex& x = *s.base;
  Rational total = 0;
  for (auto f : x.cells_of_dim(2)) {
    auto chart = s.charts.find(f);
    if (chart == s.charts.end() || !x.has_boundary_word(f))
      throw Error(ErrorCode::NonPolygonalChart, "face '" + x.id(f) + "' has no polygonal chart");
    std::vector<RationalVector> poly;
    for (const auto& l : x.boundary_word(f)) {
      const std::size_t v = l.sign > 0 ? x.tail(l.edge) : x.head(l.edge);
      auto p = chart->second.find(v);
      if (p == chart->second.end())
        throw Error(ErrorCode::NonPolygonalChart, "face '" + x.id(f) + "' chart misses '" + x.id(v) + "'");
      poly.push_back(p->second);
    }
    Rational twice = 0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const auto& a = poly[i];
      const auto& b = poly[(i + 1) % poly.size()];
      twice += a[0] * b[1] - a[1] * b[0];
    }
    total += abs(twice) / 2;
  }
  return total;
}

AffineSurface recharted(const AffineSurface& s, std::size_t face, const AffineMap& g) {
  AffineSurface out = s;
  auto chart = out.charts.find(face);
  if (chart != out.charts.end())
    for (auto& [v, p] : chart->second) p = g.apply(p);
  const AffineMap gi = inverse(g);
  for (auto& [edge, tr] : out.transitions) {
    if (tr.from == face) tr.map = compose(tr.map, gi);
    if (tr.to == face) tr.map = compose(g, tr.map);
  }
  if (out.chern) {
    const IntegerMatrix gt = covector_transport(g);
    const std::size_t off = 2 * s.base->position(face);
    RationalVector block{(*out.chern)[off], (*out.chern)[off + 1]};
    RationalVector moved = to_rational(gt).apply(block);
    (*out.chern)[off] = moved[0];
    (*out.chern)[off + 1] = moved[1];
  }
  // Cells framed in this face: their frames follow the new chart, and the
  // hyperbolic covectors with them.
  for (std::size_t c = 0; c < s.base->size(); ++c)
    if (s.marks[c].kind == MarkKind::HyperbolicEdge && s.base->cofaces(c).front().cell == face)
      out.marks[c].covector = covector_transport(g).apply(*s.marks[c].covector);
  return out;
}

namespace {

std::vector<RationalMatrix> compute_torus_actions() {
  const std::size_t n = 3;
  auto torus = std::make_shared<CellComplex>(grid_complex(n, n, Wrap::Straight, Wrap::Straight));
  const CellComplex& t = *torus;
  CellularSheaf f = CellularSheaf::constant(torus, Ring::integers(), 2);
  Cohomology h2(f, 2);

  std::vector<std::size_t> identity_map(t.size()), reflection(t.size());
  std::iota(identity_map.begin(), identity_map.end(), 0);
  auto name = [](const char* p, std::size_t i, std::size_t j) {
    return p + std::to_string(i) + "," + std::to_string(j);
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      reflection[t.index_of(name("v", i, j))] = t.index_of(name("v", (n - i) % n, j));
      reflection[t.index_of(name("f", i, j))] = t.index_of(name("f", (2 * n - i - 1) % n, j));
    }
  for (auto e : t.cells_of_dim(1))
    reflection[e] = *edge_between(t, reflection[t.tail(e)], reflection[t.head(e)]);

  // Class coordinates <-> Chern vectors c placed on face f0,0.
  const std::size_t f00 = t.index_of("f0,0");
  RationalMatrix basis(2, 2);
  for (std::size_t i = 0; i < 2; ++i) {
    RationalVector z(f.cochain_dim(2), Rational(0));
    z[f.offset(f00) + i] = 1;
    RationalVector c = h2.reduce(z);
    basis(0, i) = c[0];
    basis(1, i) = c[1];
  }
  RationalMatrix basis_inv = *inverse(basis);

  const std::vector<IntegerMatrix> generators{
      {{0, -1}, {1, 0}}, {{1, 1}, {0, 1}}, {{-1, 0}, {0, 1}}};
  std::vector<RationalMatrix> out;
  for (const auto& a : generators) {
    SheafAutomorphism phi;
    phi.cell_map = determinant(a) > 0 ? identity_map : reflection;
    RationalMatrix coeff = to_rational(*unimodular_inverse(a)).transpose();
    phi.matrices.assign(t.size(), coeff);
    out.push_back(basis_inv * automorphism_matrix(f, phi, h2).matrix * basis);
  }
  return out;
}

}  // namespace

std::vector<RationalMatrix> torus_class_actions() {
  static const std::vector<RationalMatrix> actions = compute_torus_actions();
  return actions;
}

std::set<RationalVector> chern_orbit(const RationalVector& c, int max_length) {
  return enumerate_orbit(torus_class_actions(), c, {0, 0}, max_length);
}

}  // namespace intaff
