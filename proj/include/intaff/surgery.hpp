#pragma once

// Surgery on base spaces: gluing sheaves along a common subcomplex, the
// obstruction to gluing characteristic classes, and Dehn-type regluing.

#include "intaff/affinebase.hpp"

namespace intaff {

// Two sheaves identified over a subcomplex of each: overlap_first[i] is
// glued to overlap_second[i] with stalk map stalk_maps[i] from the first
// sheaf to the second (identities when stalk_maps is empty).
struct GluingSpec {
  std::shared_ptr<const CellularSheaf> first;
  std::shared_ptr<const CellularSheaf> second;
  std::vector<std::size_t> overlap_first;
  std::vector<std::size_t> overlap_second;
  std::vector<RationalMatrix> stalk_maps;
};

Report validate_gluing(const GluingSpec& spec);

struct GluedSheaf {
  std::shared_ptr<const CellComplex> complex;
  std::shared_ptr<const CellularSheaf> sheaf;
  // Cells of the first piece keep their index; second_cells maps the
  // second piece into the glued complex.
  std::vector<std::size_t> second_cells;
};

// Pushout of the two pieces. Ids of second-piece cells that collide with
// first-piece ids get a "2." prefix. Throws IdentificationConflict.
GluedSheaf glue(const GluingSpec& spec);

// The restrictions of f to two subcomplexes, identified over their
// intersection.
GluingSpec split_sheaf(const CellularSheaf& f, const std::vector<std::size_t>& first,
                       const std::vector<std::size_t>& second);

// Sheaf on the overlap, in the first piece's coordinates. Classes passed to
// gluing_obstruction are cocycles of this sheaf.
CellularSheaf overlap_sheaf(const GluingSpec& spec);
// Restriction of a piece cocycle (piece 0 or 1) to overlap_sheaf(spec).
RationalVector overlap_class(const GluingSpec& spec, int piece, int degree, const RationalVector& cocycle);

struct GluingObstruction {
  int degree = 2;
  AbelianGroup overlap_group;  // H^k(overlap)
  // H^k(overlap) / (image from the first piece + image from the second).
  AbelianGroup quotient;
  std::vector<Integer> orders;  // of the quotient generators, torsion first
  RationalVector element;       // class difference in quotient coordinates
  bool vanishes = true;
  // Rank of the quotient over Q, and whether the element survives there.
  std::size_t rational_rank = 0;
  bool rational_vanishes = true;

  // Order of the element (0 for infinite order).
  Integer element_order() const;
  std::string verdict() const;
};

GluingObstruction gluing_obstruction(const GluingSpec& spec, const RationalVector& class_first,
                                     const RationalVector& class_second, int degree = 2);

// Faces of s whose closure holds regular marks only, with every cut edge
// (one coface inside, one outside) interior. twist maps cut edges to
// covectors in R-stalk coordinates of the edge. The base affine structure is
// unchanged; the Chern cocycle gains d(twist) restricted to the region.
// Throws RegionNotRegular and InvalidInput.
AffineSurface dehn_reglue(const AffineSurface& s, const std::vector<std::size_t>& region,
                          const std::map<std::size_t, IntegerVector>& twist);
// Edges with exactly one coface in the region.
std::vector<std::size_t> cut_edges(const AffineSurface& s, const std::vector<std::size_t>& region);

struct RealizabilityReport {
  std::string verdict;  // "realizable", "undecided" or "invalid"
  int dimension = 0;
  std::optional<AbelianGroup> h2;
  std::optional<ModuliPair> moduli;
  std::vector<std::string> monodromy;
  std::string dhat_condition;
  std::vector<std::string> violations;

  std::string describe() const;
};

RealizabilityReport realizability_report_2d(const AffineSurface& s);
// Sheaf-only form: decides dimension 2, otherwise reports the status of the
// dhat condition through H^3(O, Q).
RealizabilityReport realizability_report(const CellularSheaf& r);

}  // namespace intaff
