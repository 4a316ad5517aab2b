#include "intaff/surfaces.hpp"

#include <array>

namespace intaff {

namespace {

RationalVector point(long x, long y, long scale = 1) {
  RationalVector p{Rational(x, scale), Rational(y, scale)};
  for (auto& v : p) v.canonicalize();
  return p;
}

std::pair<long, long> grid_index(const std::string& id) {
  auto comma = id.find(',');
  return {std::stol(id.substr(1, comma - 1)), std::stol(id.substr(comma + 1))};
}

// Charts of a grid surface with side-1/n squares. vertex(a, b) names the
// vertex cell at grid corner (a, b) after the wraps.
template <typename VertexOf>
void grid_charts(AffineSurface& s, long n, VertexOf vertex) {
  const CellComplex& x = *s.base;
  for (auto f : x.cells_of_dim(2)) {
    auto [i, j] = grid_index(x.id(f));
    for (long da = 0; da <= 1; ++da)
      for (long db = 0; db <= 1; ++db) s.charts[f][vertex(i + da, j + db)] = point(i + da, j + db, n);
  }
}

// Transitions with linear part A across every interior edge; seam(e) tells
// whether an edge lies on the flipped seam.
template <typename Linear>
void grid_transitions(AffineSurface& s, Linear linear) {
  const CellComplex& x = *s.base;
  for (auto e : x.cells_of_dim(1)) {
    const auto& cf = x.cofaces(e);
    if (cf.size() != 2) continue;
    set_transition_from_charts(s, e, cf[0].cell, cf[1].cell, linear(e, cf[0].cell, cf[1].cell));
  }
}

}  // namespace

AffineSurface flat_torus_surface(const Integer& m) {
  const long n = 3;
  auto base = std::make_shared<CellComplex>(grid_complex(n, n, Wrap::Straight, Wrap::Straight));
  AffineSurface s(base);
  grid_charts(s, n, [&](long a, long b) {
    return base->index_of("v" + std::to_string(a % n) + "," + std::to_string(b % n));
  });
  grid_transitions(s, [](std::size_t, std::size_t, std::size_t) { return IntegerMatrix::identity(2); });
  RationalVector chern(2 * base->count(2), Rational(0));
  chern[2 * base->position(base->index_of("f0,0"))] = m;
  s.chern = chern;
  return s;
}

AffineSurface untranslated_torus_surface() {
  auto base = std::make_shared<CellComplex>(grid_complex(3, 3, Wrap::Straight, Wrap::Straight));
  AffineSurface s(base);
  for (auto e : base->cells_of_dim(1)) {
    const auto& cf = base->cofaces(e);
    s.set_transition(e, cf[0].cell, cf[1].cell, AffineMap::identity());
  }
  s.chern = RationalVector(2 * base->count(2), Rational(0));
  return s;
}

AffineSurface klein_surface(long nx, long ny) {
  auto base = std::make_shared<CellComplex>(grid_complex(nx, ny, Wrap::Straight, Wrap::Flipped));
  AffineSurface s(base);
  grid_charts(s, 3, [&](long a, long b) {
    if (b == ny) {
      a = (nx - a) % nx;
      b = 0;
    }
    return base->index_of("v" + std::to_string(a % nx) + "," + std::to_string(b));
  });
  const IntegerMatrix flip{{-1, 0}, {0, 1}};
  grid_transitions(s, [&](std::size_t, std::size_t f, std::size_t g) {
    const long jf = grid_index(base->id(f)).second, jg = grid_index(base->id(g)).second;
    return std::abs(jf - jg) > 1 ? flip : IntegerMatrix::identity(2);
  });
  return s;
}

AffineCover klein_double_cover() {
  const long nx = 6, ny = 3;
  AffineCover out{klein_surface(nx, ny), {}, {}};
  const CellComplex& x = *out.surface.base;
  out.deck.assign(x.size(), 0);
  for (long i = 0; i < nx; ++i)
    for (long j = 0; j < ny; ++j) {
      const std::string shifted = std::to_string((i + nx / 2) % nx) + "," + std::to_string(j);
      const std::string here = std::to_string(i) + "," + std::to_string(j);
      out.deck[x.index_of("v" + here)] = x.index_of("v" + shifted);
      out.deck[x.index_of("f" + here)] = x.index_of("f" + shifted);
    }
  for (auto e : x.cells_of_dim(1))
    out.deck[e] = *edge_between(x, out.deck[x.tail(e)], out.deck[x.head(e)]);
  for (auto f : x.cells_of_dim(2)) {
    const auto& chart = out.surface.charts.at(f);
    const auto& image = out.surface.charts.at(out.deck[f]);
    AffineMap g;
    const auto& [v0, p0] = *chart.begin();
    const auto& q0 = image.at(out.deck[v0]);
    g.t = {q0[0] - p0[0], q0[1] - p0[1]};
    for (const auto& [v, p] : chart)
      if (g.apply(p) != image.at(out.deck[v]))
        throw Error(ErrorCode::InvalidInput, "deck map is not a translation on '" + x.id(f) + "'");
    out.deck_charts[f] = g;
  }
  return out;
}

AffineSurface ff_disk_surface(int k) {
  auto base = std::make_shared<CellComplex>();
  CellComplex& x = *base;
  const auto c = x.add_cell("c", 0);
  std::array<std::size_t, 4> b{};
  for (int i = 0; i < 4; ++i) b[i] = x.add_cell("b" + std::to_string(i), 0);
  std::array<std::size_t, 4> spoke{};
  for (int i = 0; i < 4; ++i) spoke[i] = add_edge(x, "s" + std::to_string(i), c, b[i]);
  for (int i = 0; i < 4; ++i) add_edge(x, "r" + std::to_string(i), b[i], b[(i + 1) % 4]);
  std::array<std::size_t, 4> tri{};
  for (int i = 0; i < 4; ++i) tri[i] = add_polygon(x, "T" + std::to_string(i), {c, b[i], b[(i + 1) % 4]});

  AffineSurface s(base);
  const std::array<RationalVector, 4> corner{point(1, 0), point(0, 1), point(-1, 0), point(0, -1)};
  for (int i = 0; i < 4; ++i) {
    s.charts[tri[i]][c] = point(0, 0);
    s.charts[tri[i]][b[i]] = corner[i];
    s.charts[tri[i]][b[(i + 1) % 4]] = corner[(i + 1) % 4];
  }
  for (int i = 1; i < 4; ++i) set_transition_from_charts(s, spoke[i], tri[i - 1], tri[i], IntegerMatrix::identity(2));
  set_transition_from_charts(s, spoke[0], tri[3], tri[0], IntegerMatrix{{1, k}, {0, 1}});
  s.marks[c] = SingularityMark{MarkKind::FocusFocus, k, std::nullopt};
  return s;
}

AffineSurface cp2_triangle_surface() {
  auto base = std::make_shared<CellComplex>();
  CellComplex& x = *base;
  const auto a = x.add_cell("p0", 0), b = x.add_cell("p1", 0), c = x.add_cell("p2", 0);
  add_edge(x, "e01", a, b);
  add_edge(x, "e12", b, c);
  add_edge(x, "e20", c, a);
  const auto f = add_polygon(x, "D", {a, b, c});
  AffineSurface s(base);
  s.charts[f] = {{a, point(0, 0)}, {b, point(1, 0)}, {c, point(0, 1)}};
  for (auto v : x.cells_of_dim(0)) s.marks[v].kind = MarkKind::EllipticVertex;
  for (auto e : x.cells_of_dim(1)) s.marks[e].kind = MarkKind::EllipticEdge;
  s.chern = RationalVector(2, Rational(0));
  return s;
}

namespace {

// Template of one corner-cut triangle of side 8. Corners C0, C1, C2; the
// glued small-edge pairs meet at the side points B, L, H; the focus-focus
// points are Pb, Pl, Ph.
struct FaceTemplate {
  const char* name;
  std::vector<std::pair<const char*, RationalVector>> vertices;  // boundary order
};

const std::vector<FaceTemplate>& sphere_template() {
  static const std::vector<FaceTemplate> faces{
      {"F1", {{"C0", point(0, 0)}, {"B", point(3, 0)}, {"Pb", point(3, 2)}, {"Pl", point(2, 3)}, {"L", point(0, 3)}}},
      {"F2", {{"B", point(5, 0)}, {"C1", point(8, 0)}, {"H", point(5, 3)}, {"Ph", point(3, 3)}, {"Pb", point(3, 2)}}},
      {"F3", {{"Ph", point(3, 3)}, {"H", point(3, 5)}, {"C2", point(0, 8)}, {"L", point(0, 5)}, {"Pl", point(2, 3)}}},
      {"F4", {{"Pb", point(3, 2)}, {"Ph", point(3, 3)}, {"Pl", point(2, 3)}}},
  };
  return faces;
}

struct HalfEdge {
  const char* corner;
  const char* side;  // B, L or H
  const char* face;
  RationalVector at;
  IntegerVector e, f;  // edge direction and the other boundary direction
};

const std::vector<HalfEdge>& sphere_halves() {
  static const std::vector<HalfEdge> halves{
      {"C0", "B", "F1", point(0, 0), {1, 0}, {0, 1}},   {"C0", "L", "F1", point(0, 0), {0, 1}, {1, 0}},
      {"C1", "B", "F2", point(8, 0), {-1, 0}, {-1, 1}}, {"C1", "H", "F2", point(8, 0), {-1, 1}, {-1, 0}},
      {"C2", "H", "F3", point(0, 8), {1, -1}, {0, -1}}, {"C2", "L", "F3", point(0, 8), {0, -1}, {1, -1}},
  };
  return halves;
}

std::string octahedron_vertex(int axis, int sign) {
  return std::string("o") + (sign > 0 ? "+" : "-") + "XYZ"[axis];
}

std::string midpoint_name(std::string a, std::string b) {
  if (b < a) std::swap(a, b);
  return "m" + a.substr(1) + b.substr(1);
}

std::string triangle_prefix(int t) { return "t" + std::to_string(t) + "."; }

// Octahedron vertex of each corner of triangle t; bit i of t set means the
// sign of axis i is negative.
std::map<std::string, std::string> triangle_corners(int t) {
  const int sx = t & 1 ? -1 : 1, sy = t & 2 ? -1 : 1, sz = t & 4 ? -1 : 1;
  const bool even = ((t & 1) + ((t >> 1) & 1) + ((t >> 2) & 1)) % 2 == 0;
  std::map<std::string, std::string> c;
  c["C0"] = octahedron_vertex(2, sz);
  c["C1"] = even ? octahedron_vertex(0, sx) : octahedron_vertex(1, sy);
  c["C2"] = even ? octahedron_vertex(1, sy) : octahedron_vertex(0, sx);
  c["B"] = midpoint_name(c["C0"], c["C1"]);
  c["L"] = midpoint_name(c["C0"], c["C2"]);
  c["H"] = midpoint_name(c["C1"], c["C2"]);
  return c;
}

std::string template_vertex_id(int t, const std::string& name) {
  auto corners = triangle_corners(t);
  auto it = corners.find(name);
  return it != corners.end() ? it->second : triangle_prefix(t) + name;
}

std::size_t vertex_named(CellComplex& x, const std::string& id) {
  if (auto v = x.find(id)) return *v;
  return x.add_cell(id, 0);
}

std::size_t edge_named(CellComplex& x, std::size_t a, std::size_t b) {
  if (auto e = edge_between(x, a, b)) return *e;
  return add_edge(x, "e:" + x.id(a) + "|" + x.id(b), a, b);
}

const char* swapped(const std::string& name) {
  static const std::map<std::string, const char*> swap{
      {"C0", "C0"}, {"C1", "C2"}, {"C2", "C1"}, {"B", "L"},   {"L", "B"},   {"H", "H"},
      {"Pb", "Pl"}, {"Pl", "Pb"}, {"Ph", "Ph"}, {"F1", "F1"}, {"F2", "F3"}, {"F3", "F2"}, {"F4", "F4"}};
  return swap.at(name);
}

}  // namespace

AffineSurface sphere_24ff_surface() {
  auto base = std::make_shared<CellComplex>();
  CellComplex& x = *base;
  struct Pending {
    std::size_t face;
    RationalVector at;
    IntegerVector e, f;
  };
  std::map<std::size_t, std::vector<Pending>> outer;
  std::map<std::pair<int, std::string>, std::size_t> face_of;

  for (int t = 0; t < 8; ++t) {
    for (const auto& ft : sphere_template()) {
      std::vector<std::size_t> cycle;
      for (const auto& [name, p] : ft.vertices) cycle.push_back(vertex_named(x, template_vertex_id(t, name)));
      for (std::size_t i = 0; i < cycle.size(); ++i) edge_named(x, cycle[i], cycle[(i + 1) % cycle.size()]);
      face_of[{t, ft.name}] = add_polygon(x, triangle_prefix(t) + ft.name, cycle);
    }
  }
  AffineSurface s(base);
  for (int t = 0; t < 8; ++t) {
    for (const auto& ft : sphere_template())
      for (const auto& [name, p] : ft.vertices)
        s.charts[face_of[{t, ft.name}]][x.index_of(template_vertex_id(t, name))] = p;
    auto v = [&](const char* name) { return x.index_of(template_vertex_id(t, name)); };
    auto f = [&](const char* name) { return face_of[{t, name}]; };
    set_transition_from_charts(s, *edge_between(x, v("B"), v("Pb")), f("F1"), f("F2"), IntegerMatrix{{1, -1}, {0, 1}});
    set_transition_from_charts(s, *edge_between(x, v("L"), v("Pl")), f("F1"), f("F3"), IntegerMatrix{{1, 0}, {-1, 1}});
    set_transition_from_charts(s, *edge_between(x, v("H"), v("Ph")), f("F2"), f("F3"), IntegerMatrix{{0, -1}, {1, 2}});
    set_transition_from_charts(s, *edge_between(x, v("Pb"), v("Pl")), f("F1"), f("F4"), IntegerMatrix::identity(2));
    set_transition_from_charts(s, *edge_between(x, v("Pb"), v("Ph")), f("F2"), f("F4"), IntegerMatrix::identity(2));
    set_transition_from_charts(s, *edge_between(x, v("Ph"), v("Pl")), f("F3"), f("F4"), IntegerMatrix::identity(2));
    for (const char* p : {"Pb", "Pl", "Ph"}) s.marks[v(p)] = SingularityMark{MarkKind::FocusFocus, 1, std::nullopt};
    for (const auto& h : sphere_halves())
      outer[*edge_between(x, v(h.corner), v(h.side))].push_back(Pending{f(h.face), h.at, h.e, h.f});
  }
  // Half edges at a shared corner: e -> e', f -> -f'.
  for (const auto& [edge, sides] : outer) {
    if (sides.size() != 2) throw Error(ErrorCode::InvalidInput, "octahedron half edge is not shared by two faces");
    const Pending& a = sides[0];
    const Pending& b = sides[1];
    IntegerMatrix frame{{a.e[0], a.f[0]}, {a.e[1], a.f[1]}};
    IntegerMatrix image{{b.e[0], -b.f[0]}, {b.e[1], -b.f[1]}};
    IntegerMatrix L = image * *unimodular_inverse(frame);
    RationalVector moved = to_rational(L).apply(a.at);
    s.set_transition(edge, a.face, b.face, AffineMap{L, {b.at[0] - moved[0], b.at[1] - moved[1]}});
  }
  s.chern = RationalVector(2 * x.count(2), Rational(0));
  return s;
}

std::vector<std::size_t> sphere_antipodal(const CellComplex& x) {
  std::vector<std::size_t> sigma(x.size());
  auto flip_sign = [](const std::string& v) { return std::string(1, v[0] == '+' ? '-' : '+') + v[1]; };
  for (std::size_t c = 0; c < x.size(); ++c) {
    if (x.dim(c) == 1) continue;
    const std::string& id = x.id(c);
    std::string image;
    if (id[0] == 'o') {
      image = "o" + flip_sign(id.substr(1));
    } else if (id[0] == 'm') {
      image = midpoint_name("o" + flip_sign(id.substr(1, 2)), "o" + flip_sign(id.substr(3, 2)));
    } else {
      const auto dot = id.find('.');
      const int t = std::stoi(id.substr(1, dot - 1));
      image = triangle_prefix(7 - t) + swapped(id.substr(dot + 1));
    }
    sigma[c] = x.index_of(image);
  }
  for (auto e : x.cells_of_dim(1)) sigma[e] = *edge_between(x, sigma[x.tail(e)], sigma[x.head(e)]);
  return sigma;
}

std::map<std::size_t, AffineMap> sphere_antipodal_charts(const CellComplex& x) {
  std::map<std::size_t, AffineMap> out;
  for (auto f : x.cells_of_dim(2)) out[f] = AffineMap{IntegerMatrix{{0, 1}, {1, 0}}, point(0, 0)};
  return out;
}

AffineSurface rp2_12ff_surface() {
  AffineSurface sphere = sphere_24ff_surface();
  AffineSurface q = quotient_affine(sphere, sphere_antipodal(*sphere.base), sphere_antipodal_charts(*sphere.base));
  q.chern = RationalVector(2 * q.base->count(2), Rational(0));
  return q;
}

}  // namespace intaff
