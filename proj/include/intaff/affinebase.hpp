#pragma once

// Integral affine surfaces with singularities.
//
// Each 2-cell has a chart; crossing an interior edge from face f to face g
// changes chart coordinates by p_g = A p_f + t with A in GL(2,Z) and t in Q^2.
// Sections of R are integral covectors, so R-stalk coordinates change by
// A^{-T}.

#include <map>
#include <memory>
#include <optional>
#include <tuple>

#include "intaff/cellsheaf.hpp"

namespace intaff {

struct AffineMap {
  IntegerMatrix A = IntegerMatrix::identity(2);
  RationalVector t = RationalVector(2, Rational(0));

  static AffineMap identity(std::size_t n = 2);
  RationalVector apply(const RationalVector& p) const;
  friend bool operator==(const AffineMap&, const AffineMap&) = default;
};

// (second o first)(p) = second(first(p)).
AffineMap compose(const AffineMap& second, const AffineMap& first);
AffineMap inverse(const AffineMap& m);
// A^{-T}, the covector transport of m.
IntegerMatrix covector_transport(const AffineMap& m);

enum class MarkKind {
  Regular,
  FocusFocus,
  EllipticEdge,
  EllipticVertex,
  HyperbolicEdge,
  HyperbolicVertex,
};
const char* to_string(MarkKind k);
std::optional<MarkKind> parse_mark_kind(const std::string& s);

struct SingularityMark {
  MarkKind kind = MarkKind::Regular;
  int multiplicity = 1;  // k for focus_focus(k)
  // Hyperbolic edges: the surviving covector, in the frame of the edge's
  // first coface.
  std::optional<IntegerVector> covector;
};

struct Williamson {
  int elliptic = 0;
  int hyperbolic = 0;
  int focus_focus = 0;
  friend bool operator==(const Williamson&, const Williamson&) = default;
};

// Williamson type of a mark on a cell of the given dimension of a surface.
Williamson williamson(const SingularityMark& m, int cell_dim);
// Rank r + k_e + k_f of the R-stalk, where r is the rank of the singular
// point (r + k_e + k_h + 2 k_f = 2).
std::size_t stalk_rank(const SingularityMark& m, int cell_dim);

struct Transition {
  std::size_t from;  // face
  std::size_t to;    // face
  AffineMap map;     // p_to = map(p_from)
};

struct AffineSurface {
  std::shared_ptr<const CellComplex> base;
  // Face -> (vertex -> chart coordinates). Optional per face.
  std::map<std::size_t, std::map<std::size_t, RationalVector>> charts;
  std::map<std::size_t, Transition> transitions;  // keyed by edge
  std::vector<SingularityMark> marks;              // per cell
  // Chern 2-cocycle of the R-sheaf built by build_R_sheaf, when known.
  std::optional<RationalVector> chern;

  explicit AffineSurface(std::shared_ptr<const CellComplex> b);

  const SingularityMark& mark(std::size_t cell) const { return marks[cell]; }
  // Map from the chart of `from` to the chart of the other face across edge.
  AffineMap crossing(std::size_t edge, std::size_t from) const;
  std::size_t other_face(std::size_t edge, std::size_t from) const;
  void set_transition(std::size_t edge, std::size_t from, std::size_t to, AffineMap m);
  std::vector<std::size_t> focus_focus_vertices() const;
};

// Sets the transition across edge with linear part A, taking the translation
// that carries the edge's first endpoint from one chart to the other.
void set_transition_from_charts(AffineSurface& s, std::size_t edge, std::size_t from,
                                std::size_t to, const IntegerMatrix& A);

// Quotient by a free involution sigma of the base that respects the affine
// data. chart_map[f] carries the chart of face f to the chart of sigma(f).
AffineSurface quotient_affine(const AffineSurface& s, const std::vector<std::size_t>& sigma,
                              const std::map<std::size_t, AffineMap>& chart_map);

AffineSurface disjoint_union(const AffineSurface& a, const AffineSurface& b);

// Faces around a vertex, in rotation order, joined by the interior edges
// at the vertex: faces[i] and faces[i+1] share edges[i]. For interior
// vertices the walk is closed (faces.front() == faces.back()).
struct VertexStar {
  std::vector<std::size_t> faces;
  std::vector<std::size_t> edges;
  bool closed = false;
};
VertexStar vertex_star(const CellComplex& x, std::size_t vertex);

// Composite of the crossings along a face path.
AffineMap holonomy(const AffineSurface& s, const std::vector<std::size_t>& faces,
                   const std::vector<std::size_t>& edges);

Report validate_affine(const AffineSurface& s);

// k > 0 with M conjugate in GL(2,Z) to [[1,k],[0,1]], or nullopt.
std::optional<Integer> unipotent_power(const IntegerMatrix& m);
// Primitive w with M^T w = w when the fixed space is rank one.
std::optional<IntegerVector> fixed_covector(const IntegerMatrix& m);
// Representative [[1,k],[0,1]] of the GL(2,Z) class of a unipotent, or the
// matrix itself otherwise.
IntegerMatrix conjugacy_representative(const IntegerMatrix& m);

struct MonodromyRep {
  std::size_t basepoint;
  std::vector<FaceLoop> loops;    // generator loops, then vertex loops
  std::vector<IntegerMatrix> images;
  std::vector<std::size_t> vertex_loop_vertex;  // vertex of each vertex loop
  bool relations_hold = true;
};

MonodromyRep monodromy_rep(const AffineSurface& s);

// Frame data behind the R-sheaf: each cell's stalk is the column span of
// basis[c], a 2 x rank matrix of covectors in the chart of frame_face[c].
struct RFrames {
  std::vector<std::size_t> frame_face;
  std::vector<IntegerMatrix> basis;
};
RFrames r_frames(const AffineSurface& s);

// Throws NoFixedCovector.
CellularSheaf build_R_sheaf(const AffineSurface& s);

// Stalk maps on build_R_sheaf(s) induced by an affine self-map of s that
// sends cell c to cell_map[c] and the chart of face f to the chart of
// cell_map[f] by chart_map[f]. Throws NotAnAutomorphism.
SheafAutomorphism affine_automorphism(const AffineSurface& s, const std::vector<std::size_t>& cell_map,
                                      const std::map<std::size_t, AffineMap>& chart_map);

// 0 -> Q -> I -> R (x) Q -> 0 over Q.
struct ISequence {
  std::unique_ptr<CellularSheaf> constants;
  std::unique_ptr<CellularSheaf> I;
  std::unique_ptr<CellularSheaf> R;
  ShortExactSequence sequence;
};
ISequence build_I_sheaf(const AffineSurface& s);

// Image of a degree-k R-cocycle in H^{k+1}(O, Q) coordinates.
RationalVector dhat(const AffineSurface& s, const ISequence& seq, int k,
                    const RationalVector& cocycle);
RationalVector dhat(const AffineSurface& s, int k, const RationalVector& cocycle);

struct ModuliPair {
  std::size_t dimension;
  std::size_t lattice_rank;
  friend bool operator==(const ModuliPair&, const ModuliPair&) = default;
};
ModuliPair lagrangian_moduli(const AffineSurface& s);
std::string describe(const ModuliPair& m);

AbelianGroup torus_bundle_h1(const Integer& c1, const Integer& c2);

// Sum of chart polygon areas. Throws NonPolygonalChart.
Rational affine_area(const AffineSurface& s);

// Replace the chart of one face by g applied to it.
AffineSurface recharted(const AffineSurface& s, std::size_t face, const AffineMap& g);

// Matrices of the GL(2,Z) generators acting on H^2(T^2, Z^2) = Z^2 by
// pushing classes forward along a torus self-map together with the
// coefficient change A^{-T}.
std::vector<RationalMatrix> torus_class_actions();
std::set<RationalVector> chern_orbit(const RationalVector& c, int max_length);

}  // namespace intaff
