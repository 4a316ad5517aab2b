#pragma once

// Concrete integral affine surfaces used by the catalog.

#include "intaff/affinebase.hpp"

namespace intaff {

// 3 x 3 grid torus of side 1 charts, identity transitions, seam translations.
// The Chern cocycle is m * e_1 on face f0,0.
AffineSurface flat_torus_surface(const Integer& m);
// Same torus with every transition a pure identity (no seam translations).
AffineSurface untranslated_torus_surface();
// nx x ny grid, straight in x and flipped in y; the y-seam transitions are
// x -> -x.
AffineSurface klein_surface(long nx = 3, long ny = 3);

// A surface with a free affine involution.
struct AffineCover {
  AffineSurface surface;
  std::vector<std::size_t> deck;
  std::map<std::size_t, AffineMap> deck_charts;
};
// 6 x 3 Klein grid doubly covering klein_surface() by x -> x + 1.
AffineCover klein_double_cover();
// Four triangles around one focus-focus(k) vertex.
AffineSurface ff_disk_surface(int k);
// Single Delzant triangle (0,0), (1,0), (0,1) with elliptic boundary.
AffineSurface cp2_triangle_surface();

// Eight corner-cut triangles glued along an octahedron.
AffineSurface sphere_24ff_surface();
// The antipodal involution of sphere_24ff_surface on cells, and the chart
// map of each face to its image.
std::vector<std::size_t> sphere_antipodal(const CellComplex& sphere);
std::map<std::size_t, AffineMap> sphere_antipodal_charts(const CellComplex& sphere);
AffineSurface rp2_12ff_surface();

}  // namespace intaff
