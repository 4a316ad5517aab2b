#pragma once

// Rational polytopes {x : <a_i, x> <= b_i} with primitive integer normals,
// as bases of toric systems.

#include <optional>
#include <string>

#include "intaff/exactalg.hpp"
#include "intaff/report.hpp"

namespace intaff {

struct Halfspace {
  IntegerVector a;
  Rational b;
  friend bool operator==(const Halfspace&, const Halfspace&) = default;
};

struct LatticePolytope {
  std::size_t dimension = 0;
  std::vector<Halfspace> halfspaces;
};

// Scales normals to primitive vectors, merges parallel copies and drops
// halfspaces that are not facets. Throws UnboundedPolytope, EmptyPolytope
// or InvalidInput.
LatticePolytope make_polytope(std::size_t dimension, std::vector<Halfspace> halfspaces);

Report validate_polytope(const LatticePolytope& p);

struct PolytopeVertex {
  RationalVector point;
  std::vector<std::size_t> facets;  // tight halfspaces, ascending
};

// Sorted lexicographically by point. Throws UnboundedPolytope, EmptyPolytope.
std::vector<PolytopeVertex> vertices(const LatticePolytope& p);

struct PolytopeEdge {
  IntegerVector direction;  // primitive, pointing into the polytope
  Rational length;          // in units of direction
};
std::vector<PolytopeEdge> vertex_edges(const LatticePolytope& p, const PolytopeVertex& v);

struct DelzantResult {
  bool pass = true;
  // First failing vertex, with its edge directions and their determinant
  // (0 when the vertex does not have exactly n edges).
  std::optional<RationalVector> vertex;
  std::vector<IntegerVector> edges;
  Integer det = 0;

  std::string describe() const;
};
DelzantResult delzant_check(const LatticePolytope& p);

// Cuts the corner at vertex v by a simplex of edge length epsilon. Throws
// InvalidInput when v is not a Delzant vertex, EpsilonTooLarge when the cut
// reaches another vertex.
LatticePolytope vertex_blowup(const LatticePolytope& p, const RationalVector& v,
                              const Rational& epsilon);
// Moves a facet inward by epsilon. Throws EpsilonTooLarge.
LatticePolytope stratum_cut(const LatticePolytope& p, std::size_t facet,
                            const Rational& epsilon);

// Image under x -> B x + s, B in GL(n,Z).
LatticePolytope transform(const LatticePolytope& p, const IntegerMatrix& B,
                          const RationalVector& s);

}  // namespace intaff
