#include <catch2/catch_amalgamated.hpp>

#include "generators.hpp"
#include "intaff/cellsheaf.hpp"

using namespace intaff;

namespace {

using Complex = std::shared_ptr<const CellComplex>;

Complex share(CellComplex x) { return std::make_shared<CellComplex>(std::move(x)); }

AbelianGroup h(const CellularSheaf& f, int k) { return Cohomology(f, k).group(); }

CellularSheaf constant_z(Complex x, std::size_t rank = 1) {
  return CellularSheaf::constant(std::move(x), Ring::integers(), rank);
}

Complex rp2() {
  CellComplex cube = cube_surface();
  return share(quotient_by_free_involution(cube, cube_antipodal(cube)).complex);
}

// Independent count: rank over Q and torsion of C^k / im d^{k-1}.
AbelianGroup oracle(const CellularSheaf& f, int k) {
  const std::size_t n = f.cochain_dim(k);
  IntegerMatrix prev = *to_integer(f.coboundary(k - 1));
  if (prev.rows() != n) prev = IntegerMatrix(n, 0);
  const std::size_t free = n - rank(f.coboundary(k)) - rank(to_rational(prev));
  AbelianGroup coker = cokernel(prev.transpose());
  return AbelianGroup{free, coker.invariant_factors};
}

RationalVector unit(std::size_t n, std::size_t i) {
  RationalVector v(n, Rational(0));
  v[i] = 1;
  return v;
}

}  // namespace

TEST_CASE("classical constant coefficients") {
  auto sphere = constant_z(share(cube_surface()));
  CHECK(h(sphere, 0) == AbelianGroup::free(1));
  CHECK(h(sphere, 1).is_trivial());
  CHECK(h(sphere, 2) == AbelianGroup::free(1));

  auto torus = constant_z(share(grid_complex(3, 3, Wrap::Straight, Wrap::Straight)));
  CHECK(h(torus, 0) == AbelianGroup::free(1));
  CHECK(h(torus, 1) == AbelianGroup::free(2));
  CHECK(h(torus, 2) == AbelianGroup::free(1));

  auto klein = constant_z(share(grid_complex(3, 3, Wrap::Straight, Wrap::Flipped)));
  CHECK(h(klein, 1) == AbelianGroup::free(1));
  CHECK(h(klein, 2) == AbelianGroup{0, {2}});

  auto projective = constant_z(rp2());
  CHECK(h(projective, 1).is_trivial());
  CHECK(h(projective, 2) == AbelianGroup{0, {2}});
  auto projective2 = CellularSheaf::constant(rp2(), Ring::prime_field(2), 1);
  CHECK(Cohomology(projective2, 1).generator_count() == 1);
  CHECK(Cohomology(projective2, 2).orders() == std::vector<Integer>{2});

  auto torus2 = constant_z(share(grid_complex(3, 3, Wrap::Straight, Wrap::Straight)), 2);
  CHECK(h(torus2, 2) == AbelianGroup::free(2));
  CHECK(h(torus2, 1) == AbelianGroup::free(4));

  auto point = constant_z(share(point_complex()), 3);
  CHECK(h(point, 0) == AbelianGroup::free(3));
  CHECK(h(point, 1).is_trivial());
  CHECK(h(point, 5).is_trivial());
}

TEST_CASE("sheaf validation") {
  auto x = share(grid_complex(2, 2, Wrap::None, Wrap::None));
  auto f = constant_z(x, 2);
  CHECK(validate_sheaf(f).ok());
  // Break commutativity on one face.
  auto face = x->index_of("f0,0");
  auto edge = x->faces(face)[0].cell;
  RationalMatrix swap(2, 2);
  swap(0, 1) = 1;
  swap(1, 0) = 1;
  f.set_restriction(edge, face, swap);
  Report r = validate_sheaf(f);
  REQUIRE_FALSE(r.ok());
  CHECK(r.violations.front().find("f0,0") != std::string::npos);

  auto g = constant_z(x, 2);
  g.set_restriction(edge, face, RationalMatrix(3, 2));
  CHECK_FALSE(validate_sheaf(g).ok());
}

TEST_CASE("coboundary squares to zero") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    auto f = testgen::random_sheaf(rng, testgen::random_base(rng), testgen::uniform(rng, 1, 3));
    REQUIRE(validate_sheaf(f).ok());
    for (int k = 0; k + 1 <= f.base().dimension(); ++k)
      CHECK((f.coboundary(k + 1) * f.coboundary(k)).is_zero());
  }
}

TEST_CASE("cohomology matches the cokernel oracle") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    auto f = testgen::random_sheaf(rng, testgen::random_base(rng), testgen::uniform(rng, 1, 3));
    for (int k = 0; k <= f.base().dimension(); ++k) CHECK(h(f, k) == oracle(f, k));
  }
}

TEST_CASE("class reduction round trips") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    auto f = testgen::random_sheaf(rng, testgen::random_base(rng), 2);
    for (int k = 0; k <= f.base().dimension(); ++k) {
      Cohomology hk(f, k);
      RationalVector coords(hk.generator_count());
      for (std::size_t g = 0; g < coords.size(); ++g) {
        coords[g] = testgen::uniform(rng, -4, 4);
        if (hk.orders()[g] != 0) {
          Integer r;
          mpz_fdiv_r(r.get_mpz_t(), coords[g].get_num_mpz_t(), hk.orders()[g].get_mpz_t());
          coords[g] = r;
        }
      }
      RationalVector z = hk.representative(coords);
      // Add a random coboundary.
      if (k > 0) {
        RationalVector y(f.cochain_dim(k - 1));
        for (auto& v : y) v = testgen::uniform(rng, -3, 3);
        RationalVector dy = f.coboundary(k - 1).apply(y);
        for (std::size_t i = 0; i < z.size(); ++i) z[i] += dy[i];
      }
      CHECK(hk.reduce(z) == coords);
    }
  }

  auto torus = constant_z(share(grid_complex(3, 3, Wrap::Straight, Wrap::Straight)));
  Cohomology h1(torus, 1);
  CHECK_THROWS_AS(h1.reduce(unit(h1.cochain_dim(), 0)), Error);
  CohomologyClass a{&torus, 1, h1.generators()[0]};
  CohomologyClass b{&torus, 1, h1.generators()[1]};
  auto sum = class_add(a, class_negate(a));
  CHECK(class_reduce(h1, sum) == RationalVector{0, 0});
  CHECK(class_reduce(h1, class_add(a, b)) == RationalVector{1, 1});
  CohomologyClass c{&torus, 2, Cohomology(torus, 2).generators()[0]};
  try {
    class_add(a, c);
    FAIL("expected mismatched classes");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MismatchedClasses);
  }
}

TEST_CASE("restriction to a meridian") {
  auto x = share(grid_complex(3, 3, Wrap::Straight, Wrap::Straight));
  auto f = constant_z(x);
  std::vector<std::size_t> cells;
  for (int i = 0; i < 3; ++i) {
    cells.push_back(x->index_of("v" + std::to_string(i) + ",0"));
    cells.push_back(x->index_of("h" + std::to_string(i) + ",0"));
  }
  auto sub = make_subcomplex(*x, cells);
  CHECK(restrict_sheaf(f, sub).base().size() == 6);
  InducedMap r = restriction_on_cohomology(f, sub, 1);
  CHECK(r.source == AbelianGroup::free(2));
  CHECK(r.target == AbelianGroup::free(1));
  CHECK(cokernel(to_integer(r.matrix)->transpose()).is_trivial());

  try {
    make_subcomplex(*x, {x->index_of("h0,0")});
    FAIL("expected not-a-subcomplex");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotASubcomplex);
  }
}

TEST_CASE("bockstein") {
  auto circle = constant_z(share(circle_complex(4)));
  auto sc = testgen::bockstein_case(circle, 2);
  REQUIRE(validate_exact(sc.s).ok());
  InducedMap d0 = connecting_map(sc.s, 0);
  CHECK(d0.matrix.is_zero());
  CHECK(testgen::long_sequence_exact(sc));

  auto proj = constant_z(rp2());
  auto sp = testgen::bockstein_case(proj, 2);
  InducedMap d1 = connecting_map(sp.s, 1);
  REQUIRE(d1.target == AbelianGroup{0, {2}});
  REQUIRE(d1.matrix.rows() == 1);
  REQUIRE(d1.matrix.cols() == 1);
  CHECK(d1.matrix(0, 0) == 1);
  CHECK(testgen::long_sequence_exact(sp));

  // Not exact: projection by 2 instead of reduction.
  auto broken = testgen::bockstein_case(circle, 3);
  for (auto& m : broken.s.inclusion.components) m = testgen::scaled_identity(m.rows(), 2);
  CHECK_FALSE(validate_exact(broken.s).ok());
  CHECK_THROWS_AS(connecting_map(broken.s, 0), Error);
}

TEST_CASE("random short exact sequences") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 25; ++trial) {
    auto sc = testgen::random_sequence(rng);
    INFO(sc.kind);
    REQUIRE(validate_exact(sc.s).ok());
    CHECK(testgen::long_sequence_exact(sc));
    for (int k = 0; k < sc.b->base().dimension(); ++k) {
      Cohomology hc(*sc.c, k), ha(*sc.a, k + 1);
      auto plain = connecting_map(sc.s, hc, ha);
      auto shaken = connecting_map(sc.s, hc, ha, &rng);
      CHECK(plain.matrix == shaken.matrix);
    }
  }
}

TEST_CASE("pullback sums") {
  auto c1 = share(circle_complex(3)), c2 = share(circle_complex(4));
  auto f = pullback_sum(constant_z(c1), constant_z(c2));
  CHECK(validate_sheaf(f).ok());
  CHECK(h(f, 0) == AbelianGroup::free(2));
  CHECK(h(f, 1) == AbelianGroup::free(4));
  CHECK(h(f, 2) == AbelianGroup::free(2));

  // Zero stalk on one factor leaves the pullback of the other.
  CellularSheaf zero(c2, Ring::integers());
  auto g = pullback_sum(constant_z(c1), zero);
  CHECK(h(g, 1) == AbelianGroup::free(2));
  CHECK(h(g, 2) == AbelianGroup::free(1));
}

TEST_CASE("automorphism actions") {
  auto x = share(cube_surface());
  auto f = constant_z(x);
  SheafAutomorphism antipode{cube_antipodal(*x), {}};
  for (std::size_t c = 0; c < x->size(); ++c) antipode.matrices.push_back(RationalMatrix::identity(1));
  Cohomology h2(f, 2);
  CHECK(automorphism_matrix(f, antipode, h2).matrix(0, 0) == -1);
  Cohomology h0(f, 0);
  CHECK(automorphism_matrix(f, antipode, h0).matrix(0, 0) == 1);

  auto t = share(grid_complex(3, 3, Wrap::Straight, Wrap::Straight));
  auto g = constant_z(t, 2);
  SheafAutomorphism neg;
  for (std::size_t c = 0; c < t->size(); ++c) {
    neg.cell_map.push_back(c);
    neg.matrices.push_back(testgen::scaled_identity(2, -1));
  }
  Cohomology g1(g, 1);
  CHECK(automorphism_matrix(g, neg, g1).matrix == testgen::scaled_identity(4, -1));
  CohomologyClass cls{&g, 1, g1.generators()[2]};
  CHECK(class_reduce(g1, automorphism_action(g, neg, cls)) == RationalVector{0, 0, -1, 0});

  SheafAutomorphism bad = neg;
  bad.matrices[0] = testgen::scaled_identity(2, 2);
  try {
    automorphism_matrix(g, bad, g1);
    FAIL("expected not-an-automorphism");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotAnAutomorphism);
  }

  RationalMatrix rot(2, 2);
  rot(0, 1) = -1;
  rot(1, 0) = 1;
  auto orbit = enumerate_orbit({rot}, RationalVector{1, 0}, {0, 0}, 6);
  CHECK(orbit.size() == 4);
  auto torsion = enumerate_orbit({testgen::scaled_identity(1, 2)}, RationalVector{1}, {5}, 6);
  CHECK(torsion.size() == 4);
}
