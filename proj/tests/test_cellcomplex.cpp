#include <catch2/catch_amalgamated.hpp>

#include "intaff/cellcomplex.hpp"

using namespace intaff;

namespace {

std::size_t cell(const CellComplex& x, const std::string& id) { return x.index_of(id); }

// Glide reflection (i, j) -> (i + nx/2, -j) on an nx x ny grid torus.
std::vector<std::size_t> glide(const CellComplex& t, long nx, long ny) {
  auto vid = [&](long i, long j) {
    return "v" + std::to_string(((i % nx) + nx) % nx) + "," + std::to_string(((j % ny) + ny) % ny);
  };
  auto parse = [](const std::string& id) {
    auto comma = id.find(',');
    return std::pair{std::stol(id.substr(1, comma - 1)), std::stol(id.substr(comma + 1))};
  };
  std::vector<std::size_t> sigma(t.size());
  for (std::size_t c = 0; c < t.size(); ++c) {
    if (t.dim(c) == 0) {
      auto [i, j] = parse(t.id(c));
      sigma[c] = t.index_of(vid(i + nx / 2, -j));
    }
  }
  for (std::size_t c = 0; c < t.size(); ++c) {
    if (t.dim(c) == 1) sigma[c] = *edge_between(t, sigma[t.tail(c)], sigma[t.head(c)]);
    if (t.dim(c) == 2) {
      auto [i, j] = parse(t.id(c));
      const long ii = ((i + nx / 2) % nx), jj = (((-j - 1) % ny) + ny) % ny;
      sigma[c] = t.index_of("f" + std::to_string(ii) + "," + std::to_string(jj));
    }
  }
  return sigma;
}

void check_loop(const CellComplex& x, const FaceLoop& l) {
  REQUIRE(l.faces.size() == l.edges.size() + 1);
  REQUIRE(l.faces.front() == l.faces.back());
  for (std::size_t i = 0; i < l.edges.size(); ++i) {
    REQUIRE(x.incidence(l.faces[i], l.edges[i]) != 0);
    REQUIRE(x.incidence(l.faces[i + 1], l.edges[i]) != 0);
    REQUIRE(l.faces[i] != l.faces[i + 1]);
  }
}

}  // namespace

TEST_CASE("validation") {
  CHECK(validate(point_complex()).ok());
  CellComplex t = grid_complex(3, 3, Wrap::Straight, Wrap::Straight);
  CHECK(t.count(0) == 9);
  CHECK(t.count(1) == 18);
  CHECK(t.count(2) == 9);
  CHECK(validate(t).ok());
  CHECK(euler_characteristic(t) == 0);
  CHECK(euler_characteristic(point_complex()) == 1);

  // Flip one incidence sign of a face.
  auto f = cell(t, "f1,1");
  auto e = t.faces(f)[0];
  t.set_incidence(f, e.cell, -e.coefficient);
  Report r = validate(t);
  REQUIRE_FALSE(r.ok());
  bool named = false;
  for (const auto& v : r.violations)
    if (v.find("(f1,1, ") != std::string::npos) named = true;
  CHECK(named);
}

TEST_CASE("surface classification") {
  CHECK(classify_surface(grid_complex(3, 3, Wrap::Straight, Wrap::Straight), 0).kind == SurfaceType::Torus);
  CHECK(classify_surface(grid_complex(3, 3, Wrap::Straight, Wrap::Flipped), 0).kind ==
        SurfaceType::KleinBottle);
  CHECK(classify_surface(grid_complex(2, 2, Wrap::None, Wrap::None), 0).kind == SurfaceType::Disk);
  CHECK(classify_surface(grid_complex(3, 2, Wrap::Straight, Wrap::None), 0).kind == SurfaceType::Annulus);
  CHECK(classify_surface(grid_complex(3, 2, Wrap::Flipped, Wrap::None), 0).kind == SurfaceType::MobiusBand);

  auto sphere = classify_surface(cube_surface(), 24);
  CHECK(sphere.kind == SurfaceType::Sphere);
  CHECK_FALSE(sphere.constraint_violation);
  auto bare = classify_surface(cube_surface(), 0);
  CHECK(bare.constraint_violation);

  CellComplex cube = cube_surface();
  auto rp2 = quotient_by_free_involution(cube, cube_antipodal(cube));
  CHECK(validate(rp2.complex).ok());
  CHECK(classify_surface(rp2.complex, 12).kind == SurfaceType::ProjectivePlane);

  // Three squares on one edge.
  CellComplex book;
  auto a = book.add_cell("a", 0), b = book.add_cell("b", 0);
  add_edge(book, "ab", a, b);
  for (int i = 0; i < 3; ++i) {
    auto c = book.add_cell("c" + std::to_string(i), 0);
    auto d = book.add_cell("d" + std::to_string(i), 0);
    add_edge(book, "bc" + std::to_string(i), b, c);
    add_edge(book, "cd" + std::to_string(i), c, d);
    add_edge(book, "da" + std::to_string(i), d, a);
    add_polygon(book, "F" + std::to_string(i), {a, b, c, d});
  }
  CHECK(validate(book).ok());
  try {
    classify_surface(book, 0);
    FAIL("expected not-a-surface");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::NotASurface);
  }
}

TEST_CASE("products") {
  CellComplex c = circle_complex(3);
  CellComplex p = product(point_complex(), c);
  CHECK(p.size() == c.size());
  CHECK(validate(p).ok());

  CellComplex sq = product(interval_complex(), interval_complex());
  CHECK(sq.count(0) == 4);
  CHECK(sq.count(1) == 4);
  CHECK(sq.count(2) == 1);
  CHECK(validate(sq).ok());

  CellComplex torus = product(c, circle_complex(4));
  CHECK(validate(torus).ok());
  CHECK(euler_characteristic(torus) == 0);
  CHECK(classify_surface(torus, 0).kind == SurfaceType::Torus);
  CHECK(pi1_presentation(torus, 0).abelianization() == AbelianGroup::free(2));

  CellComplex k = grid_complex(3, 3, Wrap::Straight, Wrap::Flipped);
  CellComplex kk = product(k, interval_complex());
  CHECK(validate(kk).ok());
  CHECK(euler_characteristic(kk) == euler_characteristic(k) * 1);
  CellComplex s2 = cube_surface();
  CHECK(euler_characteristic(product(s2, s2)) == 4);
}

TEST_CASE("free involution quotients") {
  CellComplex c = circle_complex(3);
  CellComplex two = disjoint_union(c, c);
  std::vector<std::size_t> swap(two.size());
  for (std::size_t i = 0; i < two.size(); ++i) swap[i] = (i + c.size()) % two.size();
  auto q = quotient_by_free_involution(two, swap);
  CHECK(q.complex.size() == c.size());
  CHECK(validate(q.complex).ok());

  CellComplex t = grid_complex(6, 3, Wrap::Straight, Wrap::Straight);
  auto k = quotient_by_free_involution(t, glide(t, 6, 3));
  CHECK(validate(k.complex).ok());
  CHECK(euler_characteristic(k.complex) * 2 == euler_characteristic(t));
  CHECK(classify_surface(k.complex, 0).kind == SurfaceType::KleinBottle);
  CHECK(pi1_presentation(k.complex, 0).abelianization() == AbelianGroup{1, {2}});

  // Reflection of a hexagon fixing vertex 0.
  CellComplex hex = circle_complex(6);
  std::vector<std::size_t> refl(hex.size());
  for (std::size_t i = 0; i < 6; ++i) refl[i] = (6 - i) % 6;
  for (std::size_t e = 0; e < 6; ++e)
    refl[6 + e] = *edge_between(hex, refl[hex.tail(6 + e)], refl[hex.head(6 + e)]);
  try {
    quotient_by_free_involution(hex, refl);
    FAIL("expected fixed cell");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::FixedCell);
  }
}

TEST_CASE("fundamental group presentations") {
  auto tree = pi1_presentation(interval_complex(), 0);
  CHECK(tree.generators.empty());
  CHECK(tree.abelianization().is_trivial());

  CellComplex k = grid_complex(3, 3, Wrap::Straight, Wrap::Flipped);
  CHECK(pi1_presentation(k, 0).abelianization() == AbelianGroup{1, {2}});
  CellComplex t = grid_complex(3, 3, Wrap::Straight, Wrap::Straight);
  CHECK(pi1_presentation(t, 0).abelianization() == AbelianGroup::free(2));
  CHECK(pi1_presentation(cube_surface(), 0).abelianization().is_trivial());
  CellComplex cube = cube_surface();
  auto rp2 = quotient_by_free_involution(cube, cube_antipodal(cube)).complex;
  CHECK(pi1_presentation(rp2, 0).abelianization() == AbelianGroup{0, {2}});

  CellComplex no_words;
  auto a = no_words.add_cell("a", 0), b = no_words.add_cell("b", 0), c = no_words.add_cell("c", 0);
  auto e1 = add_edge(no_words, "ab", a, b), e2 = add_edge(no_words, "bc", b, c),
       e3 = add_edge(no_words, "ca", c, a);
  auto f = no_words.add_cell("F", 2);
  no_words.set_incidence(f, e1, 1);
  no_words.set_incidence(f, e2, 1);
  no_words.set_incidence(f, e3, 1);
  CHECK(validate(no_words).ok());
  CHECK_THROWS_AS(pi1_presentation(no_words, a), Error);

  CellComplex two = disjoint_union(interval_complex(), interval_complex());
  try {
    pi1_presentation(two, 0);
    FAIL("expected disconnected");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::Disconnected);
  }
}

TEST_CASE("dual loops") {
  CellComplex disk = grid_complex(2, 2, Wrap::None, Wrap::None);
  auto dl = dual_loops(disk, disk.cells_of_dim(2)[0]);
  CHECK(dl.generators.empty());
  REQUIRE(dl.vertex_loops.size() == 1);
  CHECK(disk.id(*dl.vertex_loops[0].vertex) == "v1,1");
  check_loop(disk, dl.vertex_loops[0]);

  CellComplex t = grid_complex(3, 3, Wrap::Straight, Wrap::Straight);
  auto tl = dual_loops(t, t.index_of("f0,0"));
  CHECK(tl.generators.size() == 2);
  CHECK(tl.vertex_loops.size() == 9);
  CHECK_FALSE(tl.vertex_product_trivial);
  for (const auto& l : tl.generators) check_loop(t, l);
  for (const auto& l : tl.vertex_loops) check_loop(t, l);

  CellComplex cube = cube_surface();
  auto cl = dual_loops(cube, cube.cells_of_dim(2)[0]);
  CHECK(cl.generators.empty());
  CHECK(cl.vertex_loops.size() == 8);
  CHECK(cl.vertex_product_trivial);
  for (const auto& l : cl.vertex_loops) check_loop(cube, l);

  CellComplex annulus = grid_complex(3, 2, Wrap::Straight, Wrap::None);
  auto al = dual_loops(annulus, annulus.cells_of_dim(2)[0]);
  CHECK(al.generators.size() == 1);
  for (const auto& l : al.generators) check_loop(annulus, l);

  CellComplex k = grid_complex(3, 3, Wrap::Straight, Wrap::Flipped);
  auto kl = dual_loops(k, k.cells_of_dim(2)[0]);
  CHECK(kl.generators.size() == 2);
  for (const auto& l : kl.generators) check_loop(k, l);
}
