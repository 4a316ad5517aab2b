#pragma once

// Finite regular cell complexes with signed incidence.
//
// Cells are addressed by a global index (insertion order) and carry a string
// id. Incidence [tau:sigma] is stored for dim tau = dim sigma + 1 only.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "intaff/exactalg.hpp"
#include "intaff/report.hpp"

namespace intaff {

struct SignedEdge {
  std::size_t edge;
  int sign;  // +1: traversed tail -> head, -1: head -> tail
  friend bool operator==(const SignedEdge&, const SignedEdge&) = default;
};

struct Incidence {
  std::size_t cell;
  int coefficient;
};

class CellComplex {
 public:
  std::size_t add_cell(const std::string& id, int dim);
  // Sets [tau:sigma]; coefficient 0 removes the pair.
  void set_incidence(std::size_t tau, std::size_t sigma, int coefficient);
  void set_boundary_word(std::size_t face, std::vector<SignedEdge> word);

  std::size_t size() const { return ids_.size(); }
  int dimension() const;  // -1 for the empty complex
  int dim(std::size_t cell) const { return dims_[cell]; }
  const std::string& id(std::size_t cell) const { return ids_[cell]; }
  std::optional<std::size_t> find(const std::string& id) const;
  std::size_t index_of(const std::string& id) const;  // throws UnknownName

  const std::vector<std::size_t>& cells_of_dim(int k) const;
  std::size_t count(int k) const { return cells_of_dim(k).size(); }
  // Position of a cell among the cells of its dimension.
  std::size_t position(std::size_t cell) const { return position_[cell]; }

  const std::vector<Incidence>& faces(std::size_t cell) const { return faces_[cell]; }
  const std::vector<Incidence>& cofaces(std::size_t cell) const { return cofaces_[cell]; }
  int incidence(std::size_t tau, std::size_t sigma) const;

  bool has_boundary_word(std::size_t face) const { return words_.count(face) > 0; }
  const std::vector<SignedEdge>& boundary_word(std::size_t face) const;
  const std::map<std::size_t, std::vector<SignedEdge>>& boundary_words() const {
    return words_;
  }

  // Head (coefficient +1) and tail (-1) vertex of an edge.
  std::size_t head(std::size_t edge) const;
  std::size_t tail(std::size_t edge) const;

  // Coboundary d^{k-1}: C^{k-1} -> C^k, rows k-cells, columns (k-1)-cells,
  // entry [tau:sigma]. Rows/columns follow cells_of_dim order.
  IntegerMatrix coboundary_matrix(int k) const;

  // All cells in the closure of the given cells (faces of faces ...).
  std::vector<std::size_t> closure(const std::vector<std::size_t>& cells) const;
  bool is_subcomplex(const std::vector<std::size_t>& cells) const;

 private:
  std::vector<std::string> ids_;
  std::vector<int> dims_;
  std::vector<std::size_t> position_;
  std::vector<std::vector<std::size_t>> by_dim_;
  std::vector<std::vector<Incidence>> faces_;
  std::vector<std::vector<Incidence>> cofaces_;
  std::unordered_map<std::string, std::size_t> index_;
  std::map<std::size_t, std::vector<SignedEdge>> words_;
};

// Boundary-of-boundary, incidence shape, regularity and boundary-word checks.
Report validate(const CellComplex& x);
Integer euler_characteristic(const CellComplex& x);

// Connected components, as lists of cells.
std::vector<std::vector<std::size_t>> connected_components(const CellComplex& x);

enum class SurfaceType {
  Annulus,
  MobiusBand,
  KleinBottle,
  Torus,
  Disk,
  ProjectivePlane,
  Sphere,
};
const char* to_string(SurfaceType t);

struct SurfaceClassification {
  SurfaceType kind;
  Integer euler;
  bool orientable;
  std::size_t boundary_components;
  // Sphere or projective plane without focus-focus points.
  bool constraint_violation = false;
  std::string note;
};

// Structure of a connected 2-dimensional surface complex.
struct SurfaceData {
  std::vector<std::size_t> boundary_edges;
  std::vector<bool> interior_vertex;  // indexed by global cell index
  bool orientable = true;
  // Face orientations (+1/-1, indexed by global cell index) making every
  // interior edge cancel; only meaningful when orientable.
  std::vector<int> face_orientation;
  std::size_t boundary_components = 0;
};

// Throws NotASurface / Disconnected.
SurfaceData analyze_surface(const CellComplex& x);
SurfaceClassification classify_surface(const CellComplex& x, std::size_t focus_focus_count);

// Cells are pairs (a, b) with index a * |Y| + b and id "a*b".
CellComplex product(const CellComplex& x, const CellComplex& y);
CellComplex disjoint_union(const CellComplex& x, const CellComplex& y,
                           const std::string& left_prefix = "L.",
                           const std::string& right_prefix = "R.");

struct Quotient {
  CellComplex complex;
  std::vector<std::size_t> cell_map;  // cell of X -> cell of X/sigma
  // Chain-level sign: the class of cell c is sign[c] times the quotient cell.
  std::vector<int> sign;
};

// sigma[i] is the image of cell i. Throws FixedCell when a cell is fixed and
// InvalidInput when sigma is not a cellular involution or the quotient would
// not be regular.
Quotient quotient_by_free_involution(const CellComplex& x,
                                     const std::vector<std::size_t>& sigma);

struct Letter {
  std::size_t generator;
  int power;  // +1 or -1
  friend bool operator==(const Letter&, const Letter&) = default;
};

struct GroupPresentation {
  std::vector<std::string> generators;
  std::vector<std::vector<Letter>> relators;

  AbelianGroup abelianization() const;
  std::string to_string() const;
};

GroupPresentation pi1_presentation(const CellComplex& x, std::size_t basepoint);

struct FaceLoop {
  enum class Kind { Generator, Vertex };
  Kind kind;
  std::vector<std::size_t> faces;  // closed: faces.front() == faces.back()
  std::vector<std::size_t> edges;  // edges[i] separates faces[i], faces[i+1]
  std::optional<std::size_t> vertex;
};

struct LoopSet {
  std::size_t basepoint_face;
  std::vector<FaceLoop> generators;  // one per edge outside tree and cotree
  std::vector<FaceLoop> vertex_loops;  // one per interior vertex
  // True when traversing vertex_loops in order gives a null-homotopic loop
  // in the complement of the vertices (closed orientable genus 0 surfaces).
  bool vertex_product_trivial = false;
};

LoopSet dual_loops(const CellComplex& x, std::size_t basepoint_face);

// Construction helpers.
std::size_t add_edge(CellComplex& x, const std::string& id, std::size_t tail, std::size_t head);
std::optional<std::size_t> edge_between(const CellComplex& x, std::size_t a, std::size_t b);
// 2-cell bounded by a closed vertex cycle; consecutive vertices must already
// be joined by an edge. Sets incidence and boundary word.
std::size_t add_polygon(CellComplex& x, const std::string& id,
                        const std::vector<std::size_t>& cycle);

CellComplex point_complex();
CellComplex interval_complex();                  // a -> b
CellComplex circle_complex(std::size_t n);       // n >= 3 vertices
CellComplex cube_surface();                      // boundary of [-1,1]^3
std::vector<std::size_t> cube_antipodal(const CellComplex& cube);

enum class Wrap { None, Straight, Flipped };
// nx x ny grid of unit squares. Straight wraps identify opposite sides;
// Flipped reverses the identified side. Vertex ids "v<i>,<j>", faces
// "f<i>,<j>" (lower-left corner).
CellComplex grid_complex(std::size_t nx, std::size_t ny, Wrap x_wrap, Wrap y_wrap);

}  // namespace intaff
