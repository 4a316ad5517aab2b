#include "intaff/polytope.hpp"

#include <algorithm>
#include <numeric>

namespace intaff {

namespace {

Rational dot(const IntegerVector& a, const RationalVector& x) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * x[i];
  return s;
}

Integer dot(const IntegerVector& a, const IntegerVector& d) {
  Integer s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * d[i];
  return s;
}

IntegerVector primitive(IntegerVector v) {
  Integer g = 0;
  for (const auto& x : v) g = gcd(g, x);
  if (g > 1)
    for (auto& x : v) x /= g;
  return v;
}

// All k-subsets of {0..m-1} in lexicographic order.
std::vector<std::vector<std::size_t>> subsets(std::size_t m, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  if (k > m) return out;
  std::vector<std::size_t> s(k);
  std::iota(s.begin(), s.end(), 0);
  while (true) {
    out.push_back(s);
    std::size_t i = k;
    while (i > 0 && s[i - 1] == m - k + i - 1) --i;
    if (i == 0) return out;
    ++s[i - 1];
    for (std::size_t j = i; j < k; ++j) s[j] = s[j - 1] + 1;
  }
}

IntegerMatrix normal_rows(const LatticePolytope& p, const std::vector<std::size_t>& idx) {
  IntegerMatrix m(idx.size(), p.dimension);
  for (std::size_t r = 0; r < idx.size(); ++r)
    for (std::size_t c = 0; c < p.dimension; ++c) m(r, c) = p.halfspaces[idx[r]].a[c];
  return m;
}

bool feasible(const LatticePolytope& p, const RationalVector& x) {
  for (const auto& h : p.halfspaces)
    if (dot(h.a, x) > h.b) return false;
  return true;
}

// Vertices without the boundedness checks; the caller has verified that
// the normals span.
std::vector<PolytopeVertex> raw_vertices(const LatticePolytope& p) {
  const std::size_t n = p.dimension;
  std::vector<RationalVector> points;
  for (const auto& s : subsets(p.halfspaces.size(), n)) {
    RationalMatrix m = to_rational(normal_rows(p, s));
    RationalVector rhs(n);
    for (std::size_t i = 0; i < n; ++i) rhs[i] = p.halfspaces[s[i]].b;
    if (determinant(m) == 0) continue;
    auto x = solve(m, rhs, Ring::rationals());
    if (x && feasible(p, *x)) points.push_back(*x);
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  std::vector<PolytopeVertex> out;
  for (auto& x : points) {
    PolytopeVertex v{std::move(x), {}};
    for (std::size_t i = 0; i < p.halfspaces.size(); ++i)
      if (dot(p.halfspaces[i].a, v.point) == p.halfspaces[i].b) v.facets.push_back(i);
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<PolytopeEdge> raw_edges(const LatticePolytope& p, const PolytopeVertex& v) {
  const std::size_t n = p.dimension;
  std::vector<PolytopeEdge> out;
  for (const auto& s : subsets(v.facets.size(), n - 1)) {
    IntegerVector d;
    if (n == 1) {
      d = {1};
    } else {
      std::vector<std::size_t> idx;
      for (auto i : s) idx.push_back(v.facets[i]);
      IntegerMatrix k = integer_kernel(normal_rows(p, idx));
      if (k.cols() != 1) continue;
      d = primitive(k.col(0));
    }
    bool nonpositive = true, nonnegative = true;
    for (auto f : v.facets) {
      const Integer ad = dot(p.halfspaces[f].a, d);
      if (ad > 0) nonpositive = false;
      if (ad < 0) nonnegative = false;
    }
    if (!nonpositive && !nonnegative) continue;
    if (!nonpositive)
      for (auto& x : d) x = -x;
    if (std::any_of(out.begin(), out.end(), [&](const PolytopeEdge& e) { return e.direction == d; }))
      continue;
    std::optional<Rational> length;
    for (const auto& h : p.halfspaces) {
      const Integer ad = dot(h.a, d);
      if (ad <= 0) continue;
      Rational t = (h.b - dot(h.a, v.point)) / Rational(ad);
      if (!length || t < *length) length = t;
    }
    if (!length) throw Error(ErrorCode::UnboundedPolytope, "polytope has an unbounded edge at " + to_string(v.point));
    out.push_back({d, *length});
  }
  std::sort(out.begin(), out.end(), [](const PolytopeEdge& x, const PolytopeEdge& y) { return x.direction < y.direction; });
  return out;
}

void check_shape(std::size_t n, const std::vector<Halfspace>& hs) {
  if (n < 1 || n > 3) throw Error(ErrorCode::InvalidInput, "polytope dimension must be 1, 2 or 3");
  for (const auto& h : hs) {
    if (h.a.size() != n) throw Error(ErrorCode::DimensionMismatch, "halfspace normal has the wrong length");
    if (std::all_of(h.a.begin(), h.a.end(), [](const Integer& x) { return x == 0; }))
      throw Error(ErrorCode::InvalidInput, "halfspace with zero normal");
  }
}

void check_bounded(const LatticePolytope& p) {
  std::vector<std::size_t> all(p.halfspaces.size());
  std::iota(all.begin(), all.end(), 0);
  if (rank(to_rational(normal_rows(p, all))) < p.dimension)
    throw Error(ErrorCode::UnboundedPolytope, "facet normals do not span");
}

std::size_t affine_rank(const std::vector<RationalVector>& pts) {
  if (pts.size() < 2) return 0;
  RationalMatrix m(pts.size() - 1, pts[0].size());
  for (std::size_t i = 1; i < pts.size(); ++i)
    for (std::size_t j = 0; j < pts[0].size(); ++j) m(i - 1, j) = pts[i][j] - pts[0][j];
  return rank(m);
}

}  // namespace

LatticePolytope make_polytope(std::size_t dimension, std::vector<Halfspace> halfspaces) {
  check_shape(dimension, halfspaces);
  LatticePolytope merged{dimension, {}};
  for (auto& h : halfspaces) {
    Integer g = 0;
    for (const auto& x : h.a) g = gcd(g, x);
    Halfspace c{primitive(h.a), h.b / Rational(g)};
    c.b.canonicalize();
    auto same = std::find_if(merged.halfspaces.begin(), merged.halfspaces.end(),
                             [&](const Halfspace& o) { return o.a == c.a; });
    if (same == merged.halfspaces.end())
      merged.halfspaces.push_back(std::move(c));
    else if (c.b < same->b)
      same->b = c.b;
  }
  check_bounded(merged);
  auto verts = vertices(merged);
  LatticePolytope out{dimension, {}};
  for (std::size_t i = 0; i < merged.halfspaces.size(); ++i) {
    std::vector<RationalVector> tight;
    for (const auto& v : verts)
      if (std::binary_search(v.facets.begin(), v.facets.end(), i)) tight.push_back(v.point);
    if (!tight.empty() && affine_rank(tight) + 1 == dimension) out.halfspaces.push_back(merged.halfspaces[i]);
  }
  return out;
}

Report validate_polytope(const LatticePolytope& p) {
  Report r;
  try {
    check_shape(p.dimension, p.halfspaces);
  } catch (const Error& e) {
    r.add(e.what());
    return r;
  }
  for (std::size_t i = 0; i < p.halfspaces.size(); ++i) {
    if (primitive(p.halfspaces[i].a) != p.halfspaces[i].a)
      r.add("normal of halfspace " + std::to_string(i) + " is not primitive");
    for (std::size_t j = 0; j < i; ++j)
      if (p.halfspaces[j].a == p.halfspaces[i].a)
        r.add("halfspaces " + std::to_string(j) + " and " + std::to_string(i) + " are parallel");
  }
  if (!r.ok()) return r;
  try {
    auto canonical = make_polytope(p.dimension, p.halfspaces);
    if (canonical.halfspaces.size() != p.halfspaces.size())
      r.add(std::to_string(p.halfspaces.size() - canonical.halfspaces.size()) + " redundant halfspace(s)");
  } catch (const Error& e) {
    r.add(e.what());
  }
  return r;
}

std::vector<PolytopeVertex> vertices(const LatticePolytope& p) {
  check_shape(p.dimension, p.halfspaces);
  check_bounded(p);
  auto out = raw_vertices(p);
  if (out.empty()) throw Error(ErrorCode::EmptyPolytope, "polytope is empty");
  for (const auto& v : out) raw_edges(p, v);  // throws on an unbounded edge
  RationalVector centre(p.dimension, Rational(0));
  for (const auto& v : out)
    for (std::size_t i = 0; i < p.dimension; ++i) centre[i] += v.point[i];
  for (auto& c : centre) c /= static_cast<long>(out.size());
  for (const auto& h : p.halfspaces)
    if (dot(h.a, centre) == h.b) throw Error(ErrorCode::EmptyPolytope, "polytope is not full-dimensional");
  return out;
}

std::vector<PolytopeEdge> vertex_edges(const LatticePolytope& p, const PolytopeVertex& v) {
  return raw_edges(p, v);
}

std::string DelzantResult::describe() const {
  if (pass) return "pass";
  std::string s = "fail at vertex " + to_string(*vertex) + ": edges";
  for (const auto& e : edges) s += " " + to_string(e);
  return s + ", det " + det.get_str();
}

DelzantResult delzant_check(const LatticePolytope& p) {
  for (const auto& v : vertices(p)) {
    auto edges = vertex_edges(p, v);
    DelzantResult r;
    for (const auto& e : edges) r.edges.push_back(e.direction);
    if (edges.size() == p.dimension) {
      IntegerMatrix m(p.dimension, p.dimension);
      for (std::size_t j = 0; j < p.dimension; ++j)
        for (std::size_t i = 0; i < p.dimension; ++i) m(i, j) = edges[j].direction[i];
      r.det = determinant(m);
      if (abs(r.det) == 1) continue;
    }
    r.pass = false;
    r.vertex = v.point;
    return r;
  }
  return {};
}

LatticePolytope vertex_blowup(const LatticePolytope& p, const RationalVector& point,
                              const Rational& epsilon) {
  if (epsilon <= 0) throw Error(ErrorCode::InvalidInput, "epsilon must be positive");
  auto verts = vertices(p);
  auto v = std::find_if(verts.begin(), verts.end(), [&](const PolytopeVertex& x) { return x.point == point; });
  if (v == verts.end()) throw Error(ErrorCode::InvalidInput, to_string(point) + " is not a vertex");
  auto edges = vertex_edges(p, *v);
  if (v->facets.size() != p.dimension || edges.size() != p.dimension)
    throw Error(ErrorCode::InvalidInput, "vertex " + to_string(point) + " is not simple");
  IntegerMatrix dirs(p.dimension, p.dimension);
  for (std::size_t j = 0; j < p.dimension; ++j)
    for (std::size_t i = 0; i < p.dimension; ++i) dirs(i, j) = edges[j].direction[i];
  if (abs(determinant(dirs)) != 1)
    throw Error(ErrorCode::InvalidInput, "vertex " + to_string(point) + " is not a Delzant vertex");
  for (const auto& e : edges)
    if (epsilon >= e.length)
      throw Error(ErrorCode::EpsilonTooLarge, "cut of size " + to_string(epsilon) + " reaches the vertex " +
                                                  to_string(point) + " + " + to_string(e.length) + " * " +
                                                  to_string(e.direction));
  // Sum of the outward facet normals at v; it pairs to -1 with every edge.
  IntegerVector a(p.dimension, Integer(0));
  for (auto f : v->facets)
    for (std::size_t i = 0; i < p.dimension; ++i) a[i] += p.halfspaces[f].a[i];
  auto hs = p.halfspaces;
  hs.push_back({a, dot(a, point) - epsilon});
  return make_polytope(p.dimension, hs);
}

LatticePolytope stratum_cut(const LatticePolytope& p, std::size_t facet, const Rational& epsilon) {
  if (facet >= p.halfspaces.size())
    throw Error(ErrorCode::InvalidInput, "no facet " + std::to_string(facet));
  if (epsilon <= 0) throw Error(ErrorCode::InvalidInput, "epsilon must be positive");
  const IntegerVector& a = p.halfspaces[facet].a;
  for (const auto& v : vertices(p)) {
    if (!std::binary_search(v.facets.begin(), v.facets.end(), facet)) continue;
    for (const auto& e : vertex_edges(p, v)) {
      const Integer ad = dot(a, e.direction);
      if (ad >= 0) continue;
      if (epsilon / Rational(-ad) >= e.length)
        throw Error(ErrorCode::EpsilonTooLarge, "cut of size " + to_string(epsilon) + " reaches past the edge at " +
                                                    to_string(v.point) + " along " + to_string(e.direction));
    }
  }
  auto hs = p.halfspaces;
  hs[facet].b -= epsilon;
  return make_polytope(p.dimension, hs);
}

LatticePolytope transform(const LatticePolytope& p, const IntegerMatrix& B, const RationalVector& s) {
  auto inv = unimodular_inverse(B);
  if (!inv || B.rows() != p.dimension) throw Error(ErrorCode::InvalidInput, "transform is not in GL(n,Z)");
  IntegerMatrix dual = inv->transpose();
  LatticePolytope out{p.dimension, {}};
  for (const auto& h : p.halfspaces) {
    IntegerVector a = dual.apply(h.a);
    out.halfspaces.push_back({a, h.b + dot(a, s)});
  }
  return out;
}

}  // namespace intaff
