#include <catch2/catch_amalgamated.hpp>

#include <functional>
#include <numeric>

#include "generators.hpp"
#include "intaff/surfaces.hpp"
#include "intaff/surgery.hpp"

using namespace intaff;

namespace {

std::vector<std::size_t> faces_where(const CellComplex& x, const std::function<bool(const std::string&)>& keep) {
  std::vector<std::size_t> out;
  for (auto f : x.cells_of_dim(2))
    if (keep(x.id(f))) out.push_back(f);
  return x.closure(out);
}

std::vector<std::size_t> grid_rows(const CellComplex& x, long lo, long hi) {
  return faces_where(x, [&](const std::string& id) {
    const long j = std::stol(id.substr(id.find(',') + 1));
    return lo <= j && j <= hi;
  });
}

std::vector<AbelianGroup> groups(const CellularSheaf& f) {
  std::vector<AbelianGroup> out;
  for (int k = 0; k <= std::max(0, f.base().dimension()); ++k) out.push_back(Cohomology(f, k).group());
  return out;
}

// Glues a sheaf on a piece whose cell ids are shared with the accumulated
// sheaf, identifying cells by id.
GluedSheaf glue_by_id(std::shared_ptr<const CellularSheaf> acc, std::shared_ptr<const CellularSheaf> piece) {
  GluingSpec spec{acc, piece, {}, {}, {}};
  for (std::size_t c = 0; c < piece->base().size(); ++c)
    if (auto a = acc->base().find(piece->base().id(c))) {
      spec.overlap_first.push_back(*a);
      spec.overlap_second.push_back(c);
    }
  return glue(spec);
}

RationalVector random_cochain(std::mt19937& rng, std::size_t n) {
  RationalVector v(n);
  for (auto& x : v) x = testgen::uniform(rng, -3, 3);
  return v;
}

}  // namespace

TEST_CASE("gluing complexes") {
  auto circle = std::make_shared<CellComplex>(circle_complex(3));
  auto c1 = std::make_shared<CellularSheaf>(CellularSheaf::constant(circle, Ring::integers(), 1));
  auto c2 = std::make_shared<CellularSheaf>(CellularSheaf::constant(circle, Ring::integers(), 2));
  GluedSheaf two = glue({c1, c2, {}, {}, {}});
  CHECK(two.complex->size() == 2 * circle->size());
  CHECK(groups(*two.sheaf) == std::vector<AbelianGroup>{AbelianGroup::free(3), AbelianGroup::free(3)});

  // Two triangles sharing an edge.
  auto tri = std::make_shared<CellComplex>();
  auto a = tri->add_cell("a", 0), b = tri->add_cell("b", 0), c = tri->add_cell("c", 0);
  auto ab = add_edge(*tri, "ab", a, b);
  add_edge(*tri, "bc", b, c);
  add_edge(*tri, "ca", c, a);
  add_polygon(*tri, "T", {a, b, c});
  auto t1 = std::make_shared<CellularSheaf>(CellularSheaf::constant(tri, Ring::integers(), 1));
  // Swapping the endpoints reverses the edge.
  CHECK_FALSE(validate_gluing({t1, t1, {a, b, ab}, {b, a, ab}, {}}).ok());
  CHECK_THROWS_AS(glue({t1, t1, {a, b, ab}, {b, a, ab}, {}}), Error);
  GluedSheaf square = glue({t1, t1, {a, b, ab}, {a, b, ab}, {}});
  CHECK(validate(*square.complex).ok());
  CHECK(euler_characteristic(*square.complex) == 1);
  CHECK(classify_surface(*square.complex, 0).kind == SurfaceType::Disk);
  CHECK(groups(*square.sheaf) == std::vector<AbelianGroup>{AbelianGroup::free(1), {}, {}});
}

TEST_CASE("identification conflicts") {
  auto torus = std::make_shared<CellularSheaf>(build_R_sheaf(flat_torus_surface(0)));
  const CellComplex& x = torus->base();
  const std::size_t v = x.index_of("v0,0");
  // A vertex glued to an edge.
  CHECK_THROWS_AS(glue({torus, torus, {v}, {x.cells_of_dim(1)[0]}, {}}), Error);
  // A stalk map that is not invertible over Z.
  try {
    glue({torus, torus, {v}, {v}, {RationalMatrix{{2, 0}, {0, 1}}}});
    FAIL("singular stalk map accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IdentificationConflict);
  }
  // Stalk maps that disagree along an edge.
  const std::size_t e = x.cells_of_dim(1)[0];
  std::vector<std::size_t> cells = x.closure({e});
  std::vector<RationalMatrix> maps;
  for (auto c : cells) maps.push_back(c == e ? -RationalMatrix::identity(2) : RationalMatrix::identity(2));
  Report r = validate_gluing({torus, torus, cells, cells, maps});
  CHECK_FALSE(r.ok());
  CHECK(r.violations.front().find("commute") != std::string::npos);
  // Not a subcomplex.
  CHECK_FALSE(validate_gluing({torus, torus, {e}, {e}, {}}).ok());
}

TEST_CASE("sphere from eight triangles") {
  AffineSurface sphere = sphere_24ff_surface();
  auto r = std::make_shared<CellularSheaf>(build_R_sheaf(sphere));
  const CellComplex& x = *sphere.base;
  std::vector<std::shared_ptr<const CellularSheaf>> pieces;
  for (int t = 0; t < 8; ++t) {
    const std::string prefix = "t" + std::to_string(t) + ".";
    Subcomplex sub = make_subcomplex(x, faces_where(x, [&](const std::string& id) { return id.rfind(prefix, 0) == 0; }));
    pieces.push_back(std::make_shared<CellularSheaf>(restrict_sheaf(*r, sub)));
  }
  std::shared_ptr<const CellularSheaf> acc = pieces[0];
  for (int t = 1; t < 8; ++t) acc = glue_by_id(acc, pieces[t]).sheaf;
  const CellComplex& g = acc->base();
  CHECK(g.size() == x.size());
  CHECK(validate(g).ok());
  std::size_t rank_one = 0;
  for (auto v : g.cells_of_dim(0))
    if (acc->stalk(v) == 1) ++rank_one;
  CHECK(rank_one == 24);
  CHECK(classify_surface(g, rank_one).kind == SurfaceType::Sphere);
  CHECK(groups(*acc) == groups(*r));
}

TEST_CASE("glue restricts to its pieces and is associative") {
  AffineSurface sphere = sphere_24ff_surface();
  CellularSheaf r = build_R_sheaf(sphere);
  const CellComplex& x = *sphere.base;
  auto piece = [&](std::initializer_list<int> ts) {
    auto cells = faces_where(x, [&](const std::string& id) {
      for (int t : ts)
        if (id.rfind("t" + std::to_string(t) + ".", 0) == 0) return true;
      return false;
    });
    return std::make_shared<CellularSheaf>(restrict_sheaf(r, make_subcomplex(x, cells)));
  };
  auto a = piece({0}), b = piece({1}), c = piece({3});
  auto ab_c = glue_by_id(glue_by_id(a, b).sheaf, c).sheaf;
  auto a_bc = glue_by_id(a, glue_by_id(b, c).sheaf).sheaf;
  CHECK(ab_c->base().size() == a_bc->base().size());
  CHECK(groups(*ab_c) == groups(*a_bc));
  CHECK(groups(*ab_c) == groups(*piece({0, 1, 3})));

  GluedSheaf ab = glue_by_id(a, b);
  Subcomplex back = make_subcomplex(*ab.complex, ab.second_cells);
  CellularSheaf again = restrict_sheaf(*ab.sheaf, back);
  for (std::size_t i = 0; i < b->base().size(); ++i) {
    const std::size_t j = *back.index[ab.second_cells[i]];
    CHECK(again.stalk(j) == b->stalk(i));
    for (const auto& f : b->base().faces(i))
      CHECK(again.restriction(*back.index[ab.second_cells[f.cell]], j) == b->restriction(f.cell, i));
  }
}

TEST_CASE("gluing obstruction basics") {
  auto circle = std::make_shared<CellComplex>(circle_complex(4));
  auto c1 = std::make_shared<CellularSheaf>(CellularSheaf::constant(circle, Ring::integers(), 1));
  auto empty = gluing_obstruction({c1, c1, {}, {}, {}}, {}, {});
  CHECK(empty.quotient.is_trivial());
  CHECK(empty.vanishes);
  CHECK(empty.verdict() == "gluable: obstruction vanishes");

  // Klein bottle with constant Z cut along a band of squares.
  auto klein = std::make_shared<CellComplex>(grid_complex(3, 4, Wrap::Straight, Wrap::Flipped));
  CellularSheaf z = CellularSheaf::constant(klein, Ring::integers(), 1);
  GluingSpec spec = split_sheaf(z, grid_rows(*klein, 0, 1), grid_rows(*klein, 1, 3));
  CellularSheaf f0 = overlap_sheaf(spec);
  RationalVector zero(f0.cochain_dim(2), Rational(0)), one = zero;
  one[0] = 1;
  auto ob = gluing_obstruction(spec, zero, one);
  CHECK(ob.quotient.is_trivial());
  CHECK(ob.vanishes);

  // The whole Klein bottle as the overlap of itself: H^2 = Z/2 is hit by the
  // pieces, so nothing survives.
  std::vector<std::size_t> all(klein->size());
  std::iota(all.begin(), all.end(), 0);
  GluingSpec same = split_sheaf(z, all, all);
  RationalVector face(z.cochain_dim(2), Rational(0));
  face[0] = 1;
  CHECK(gluing_obstruction(same, face, RationalVector(face.size(), Rational(0))).vanishes);

  // Overlap classes from the pieces.
  RationalVector piece_cocycle(spec.second->cochain_dim(2), Rational(1));
  CHECK(overlap_class(spec, 1, 2, piece_cocycle).size() == f0.cochain_dim(2));
}

TEST_CASE("obstruction vanishes over strips") {
  std::mt19937 rng(12);
  int cases = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const long nx = testgen::uniform(rng, 3, 5), ny = testgen::uniform(rng, 3, 5);
    AffineSurface s = trial % 3 == 0 ? flat_torus_surface(testgen::uniform(rng, -3, 3))
                                     : klein_surface(nx, ny);
    const long rows = trial % 3 == 0 ? 3 : ny;
    // Random re-charting leaves the sheaf isomorphic.
    for (int k = 0; k < 2; ++k) {
      const auto& faces = s.base->cells_of_dim(2);
      AffineMap g{testgen::random_unimodular(rng, 2, 3), {0, 0}};
      s = recharted(s, faces[testgen::uniform(rng, 0, faces.size() - 1)], g);
    }
    CellularSheaf r = build_R_sheaf(s);
    const long cut = testgen::uniform(rng, 0, rows - 2);
    const long thick = testgen::uniform(rng, 0, 1);
    auto lower = grid_rows(*s.base, 0, cut + thick);
    auto upper = grid_rows(*s.base, cut, rows - 1);
    GluingSpec spec = split_sheaf(r, lower, upper);
    CellularSheaf f0 = overlap_sheaf(spec);
    REQUIRE(f0.base().dimension() == 2);
    auto ob = gluing_obstruction(spec, random_cochain(rng, f0.cochain_dim(2)), random_cochain(rng, f0.cochain_dim(2)));
    CHECK(ob.overlap_group.is_trivial());
    CHECK(ob.vanishes);
    ++cases;
  }
  CHECK(cases >= 50);
}

TEST_CASE("dehn regluing") {
  AffineSurface torus = flat_torus_surface(1);
  const CellComplex& x = *torus.base;
  const std::size_t face = x.index_of("f1,1");
  auto cut = cut_edges(torus, {face});
  REQUIRE(cut.size() == 4);
  CellularSheaf r = build_R_sheaf(torus);
  Cohomology h2(r, 2);
  const RationalVector before = h2.reduce(*torus.chern);

  AffineSurface same = dehn_reglue(torus, {face}, {});
  CHECK(same.chern == torus.chern);
  CHECK(validate_affine(same).ok());

  AffineSurface twisted = dehn_reglue(torus, {face}, {{cut[0], {1, 0}}});
  CHECK(validate_affine(twisted).ok());
  const RationalVector after = h2.reduce(*twisted.chern);
  RationalVector diff{after[0] - before[0], after[1] - before[1]};
  CHECK(gcd(diff[0].get_num(), diff[1].get_num()) == 1);

  std::mt19937 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<std::size_t> region;
    for (auto f : x.cells_of_dim(2))
      if (testgen::uniform(rng, 0, 2) == 0) region.push_back(f);
    if (region.empty() || region.size() == x.count(2)) continue;
    std::map<std::size_t, IntegerVector> tw, untw;
    for (auto e : cut_edges(torus, region)) {
      IntegerVector w{testgen::uniform(rng, -2, 2), testgen::uniform(rng, -2, 2)};
      tw[e] = w;
      untw[e] = {-w[0], -w[1]};
    }
    AffineSurface there = dehn_reglue(torus, region, tw);
    AffineSurface back = dehn_reglue(there, region, untw);
    CHECK(h2.reduce(*back.chern) == before);
    CHECK(*back.chern == *torus.chern);
  }

  AffineSurface disk = ff_disk_surface(1);
  try {
    dehn_reglue(disk, {disk.base->index_of("T0")}, {});
    FAIL("singular region accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RegionNotRegular);
  }
  CHECK_THROWS_AS(dehn_reglue(torus, {face}, {{x.index_of("f0,0"), {1, 0}}}), Error);
}

TEST_CASE("realizability of surfaces") {
  auto report = realizability_report_2d(sphere_24ff_surface());
  CHECK(report.verdict == "realizable");
  CHECK(report.monodromy == std::vector<std::string>{"24 vertex loop(s) conjugate to [[1,1],[0,1]]"});
  CHECK(report.h2 == AbelianGroup{});
  for (const auto& s : {flat_torus_surface(2), klein_surface(), ff_disk_surface(2), cp2_triangle_surface(),
                        rp2_12ff_surface()})
    CHECK(realizability_report_2d(s).verdict == "realizable");

  AffineSurface bad = untranslated_torus_surface();
  bad.transitions.begin()->second.map.A = IntegerMatrix{{2, 1}, {1, 1}};
  CHECK(realizability_report_2d(bad).verdict == "invalid");

  auto f = CellularSheaf::constant(std::make_shared<CellComplex>(product(grid_complex(3, 3, Wrap::Straight, Wrap::Straight),
                                                                         interval_complex())),
                                   Ring::integers(), 1);
  auto solid = realizability_report(f);
  CHECK(solid.verdict == "undecided");
  CHECK(solid.dhat_condition == "holds (H^3(O, Q) = 0)");
}
