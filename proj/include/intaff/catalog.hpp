#pragma once

// Named worked examples with their expected invariants.

#include "intaff/polytope.hpp"
#include "intaff/surgery.hpp"

namespace intaff {

// Where an expected value comes from: "published" values are stated in the
// literature, "elementary" ones are direct hand computations, "computed"
// ones follow from other results by a recheck.
struct Expectation {
  std::string invariant;
  std::string expected;
  std::string source;
};

struct NamedCocycle {
  std::string sheaf;  // key into CatalogEntry::sheaves, or "overlap"
  int degree = 2;
  RationalVector values;
};

struct CatalogEntry {
  std::string name;
  std::string description;
  std::optional<AffineSurface> surface;
  std::map<std::string, std::shared_ptr<CellularSheaf>> sheaves;
  std::optional<LatticePolytope> polytope;
  std::optional<GluingSpec> gluing;
  std::map<std::string, NamedCocycle> classes;
  std::vector<Expectation> expected;

  // Base complex of the surface or of the first sheaf.
  std::shared_ptr<const CellComplex> base() const;
};

// Names with their parameters, e.g. "flat_torus(m)".
std::vector<std::string> catalog_names();
// Accepts "flat_torus(2)", "flat_torus:2" and bare names with default
// parameters. Throws UnknownName listing the available entries.
CatalogEntry build_entry(const std::string& name);

// Value of a named invariant of the entry, as printed in expectations.
// Throws UnknownName for invariants the entry cannot provide.
std::string compute_invariant(const CatalogEntry& e, const std::string& invariant);

struct VerifyLine {
  Expectation expectation;
  std::string actual;
  bool pass = false;
};
struct VerifyReport {
  std::string name;
  std::vector<VerifyLine> lines;
  bool ok() const;
  std::string describe() const;
};
VerifyReport verify(const CatalogEntry& e);

// Individual builders shared with tests and the acceptance run.
CellularSheaf torus_morse_graph();
CellularSheaf twisted_product_base();
struct FakeBaseSpace {
  std::shared_ptr<CellularSheaf> sheaf;  // on O
  GluingSpec pieces;                     // O- and O+ over O0
  RationalVector c_minus, c_plus;        // restricted classes on O0
};
FakeBaseSpace fake_base_space();
LatticePolytope cp2_polytope();
// Triangle (0,0), (1,0), (1,2), not Delzant at the origin.
LatticePolytope skew_triangle_polytope();

}  // namespace intaff
