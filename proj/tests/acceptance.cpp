// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>

#include "generators.hpp"
#include "intaff/catalog.hpp"
#include "intaff/surfaces.hpp"

using namespace intaff;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }
};

std::string str(const AbelianGroup& g) { return g.to_string(); }

Integer gcd_of(const Integer& a, const Integer& b) {
  Integer g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

// 1. Torus base.
Outcome torus_base() {
  Outcome o;
  auto torus = std::make_shared<CellComplex>(grid_complex(3, 3, Wrap::Straight, Wrap::Straight));
  AbelianGroup h2 = Cohomology(CellularSheaf::constant(torus, Ring::integers(), 2), 2).group();
  o.require(h2 == AbelianGroup::free(2), "H^2(T^2, Z^2) = " + str(h2));
  AbelianGroup h2r = Cohomology(build_R_sheaf(flat_torus_surface(1)), 2).group();
  o.require(h2r == AbelianGroup::free(2), "H^2(O, R) = " + str(h2r));

  // H_1 of the total space, independent gcd oracle.
  for (long a = -10; a <= 10; ++a)
    for (long b = -10; b <= 10; ++b) {
      const long g = std::gcd(a, b);
      AbelianGroup expect = g == 0 ? AbelianGroup::free(4) : g == 1 ? AbelianGroup::free(3) : AbelianGroup{3, {g}};
      o.require(torus_bundle_h1(a, b) == expect, "torus_bundle_h1 at (" + std::to_string(a) + ", " +
                                                     std::to_string(b) + ")");
    }

  // Orbits of the class action on the box |c_i| <= 10: connected components
  // under the generators and their inverses, staying inside the box.
  auto actions = torus_class_actions();
  const std::size_t n = actions.size();
  for (std::size_t i = 0; i < n; ++i) actions.push_back(*inverse(actions[i]));
  const long B = 10, W = 2 * B + 1;
  std::vector<long> parent(W * W);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<long(long)> find = [&](long x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  auto index = [&](long a, long b) { return (a + B) * W + (b + B); };
  for (long a = -B; a <= B; ++a)
    for (long b = -B; b <= B; ++b)
      for (const auto& m : actions) {
        RationalVector w = m.apply(RationalVector{a, b});
        if (abs(w[0]) <= B && abs(w[1]) <= B)
          parent[find(index(a, b))] = find(index(w[0].get_num().get_si(), w[1].get_num().get_si()));
      }
  std::map<long, std::set<long>> gcds_of_component;
  for (long a = -B; a <= B; ++a)
    for (long b = -B; b <= B; ++b) gcds_of_component[find(index(a, b))].insert(std::gcd(a, b));
  std::set<long> gcds;
  for (const auto& [root, gs] : gcds_of_component) {
    o.require(gs.size() == 1, "an orbit mixes gcd values");
    gcds.insert(*gs.begin());
  }
  o.require(gcds_of_component.size() == gcds.size() && gcds.size() == static_cast<std::size_t>(B + 1),
            "orbits in the box: " + std::to_string(gcds_of_component.size()));
  for (long g = 1; g <= 4; ++g)
    for (const auto& c : chern_orbit({g, 0}, 6))
      o.require(gcd_of(c[0].get_num(), c[1].get_num()) == g, "chern_orbit leaves gcd " + std::to_string(g));
  if (o.pass) o.detail = "H^2 = Z^2; H_1 = Z^3 + Z/gcd on 441 classes; 11 orbits <-> gcd 0..10";
  return o;
}

// 2. Symplectic moduli.
Outcome moduli() {
  Outcome o;
  ModuliPair t = lagrangian_moduli(flat_torus_surface(1));
  ModuliPair c = lagrangian_moduli(cp2_triangle_surface());
  o.require(t == ModuliPair{1, 1}, "flat torus: " + describe(t));
  o.require(c == ModuliPair{0, 0}, "cp2 triangle: " + describe(c));
  if (o.pass) o.detail = "flat_torus " + describe(t) + "; cp2_triangle " + describe(c);
  return o;
}

// 3. Klein bottle.
Outcome klein() {
  Outcome o;
  AffineSurface k = klein_surface();
  AbelianGroup h2 = Cohomology(CellularSheaf::constant(k.base, Ring::integers(), 1), 2).group();
  o.require(h2 == AbelianGroup{0, {2}}, "H^2(K, Z) = " + str(h2));
  GroupPresentation p{{"a", "b"}, {{{0, 1}, {1, 1}, {0, 1}, {1, -1}}}};
  AbelianGroup ab = p.abelianization();
  o.require(ab == AbelianGroup{1, {2}}, "abab^-1 abelianization " + str(ab));
  AbelianGroup cellular = pi1_presentation(*k.base, k.base->cells_of_dim(0).front()).abelianization();
  o.require(cellular == AbelianGroup{1, {2}}, "cellular pi_1 abelianization " + str(cellular));
  if (o.pass) o.detail = "H^2 = " + str(h2) + "; pi_1^ab = " + str(ab);
  return o;
}

// 4. Fake base space.
Outcome fake_base() {
  Outcome o;
  FakeBaseSpace f = fake_base_space();
  o.require(validate_sheaf(*f.sheaf).ok(), "sheaf on O is invalid");
  o.require(validate_gluing(f.pieces).ok(), "pieces do not glue");
  CellularSheaf o0 = overlap_sheaf(f.pieces);
  auto kind = classify_surface(o0.base(), 0).kind;
  o.require(kind == SurfaceType::KleinBottle, std::string("overlap is ") + to_string(kind));
  GluingObstruction ob = gluing_obstruction(f.pieces, f.c_minus, f.c_plus);
  const bool has_two = std::count(ob.overlap_group.invariant_factors.begin(), ob.overlap_group.invariant_factors.end(),
                                  Integer(2)) > 0;
  o.require(has_two, "H^2(O0, R) = " + str(ob.overlap_group));
  o.require(!ob.vanishes && ob.element_order() == 2, "obstruction element has order " + ob.element_order().get_str());
  o.require(ob.verdict().rfind("non-realizable", 0) == 0, ob.verdict());
  if (o.pass)
    o.detail = "H^2(O0) = " + str(ob.overlap_group) + ", quotient " + str(ob.quotient) + ": " + ob.verdict() +
               " (restricted classes are inputs)";
  return o;
}

// 5. Sphere with 24 focus-focus points.
Outcome k3() {
  Outcome o;
  AffineSurface s = sphere_24ff_surface();
  Report r = validate_affine(s);
  o.require(r.ok(), r.ok() ? "" : r.violations.front());
  const auto ff = s.focus_focus_vertices();
  o.require(ff.size() == 24, std::to_string(ff.size()) + " focus-focus vertices");
  auto kind = classify_surface(*s.base, ff.size()).kind;
  o.require(kind == SurfaceType::Sphere, std::string("classified as ") + to_string(kind));
  MonodromyRep rep = monodromy_rep(s);
  const std::size_t first = rep.images.size() - rep.vertex_loop_vertex.size();
  std::size_t standard = 0;
  for (std::size_t i = first; i < rep.images.size(); ++i) {
    const std::size_t v = rep.vertex_loop_vertex[i - first];
    if (s.marks[v].kind != MarkKind::FocusFocus) {
      o.require(rep.images[i] == IntegerMatrix::identity(2), "regular vertex with monodromy");
      continue;
    }
    auto k = unipotent_power(rep.images[i]);
    if (k && *k == 1) ++standard;
  }
  o.require(standard == 24, std::to_string(standard) + " vertex loops conjugate to [[1,1],[0,1]]");
  o.require(rep.relations_hold, "loop relations fail");
  o.require(dual_loops(*s.base, rep.basepoint).vertex_product_trivial, "vertex loop product not trivial");
  if (o.pass) o.detail = "24 focus-focus, sphere, 24 x [[1,1],[0,1]], loop product trivial";
  return o;
}

// 6. Twisted products.
Outcome twisted() {
  Outcome o;
  AbelianGroup h2 = Cohomology(twisted_product_base(), 2).group();
  o.require(h2 == AbelianGroup::free(4), "H^2 = " + str(h2));
  if (o.pass) o.detail = "H^2 = " + str(h2);
  return o;
}

// 7. Delzant.
Outcome delzant() {
  Outcome o;
  LatticePolytope cp2 = cp2_polytope();
  o.require(delzant_check(cp2).pass, "cp2 triangle fails");
  DelzantResult bad = delzant_check(skew_triangle_polytope());
  o.require(!bad.pass && bad.vertex == RationalVector{0, 0}, "skew triangle: " + bad.describe());
  LatticePolytope blown = vertex_blowup(cp2, {0, 0}, Rational(1, 2));
  o.require(delzant_check(blown).pass, "blowup fails: " + delzant_check(blown).describe());
  o.require(blown.halfspaces.size() == cp2.halfspaces.size() + 1, "blowup facet count");
  if (o.pass) o.detail = "cp2 pass; skew " + bad.describe() + "; blowup pass with 4 facets";
  return o;
}

// 8a.
Outcome normal_forms() {
  Outcome o;
  std::mt19937 rng(8001);
  int n = 0;
  for (; n < 500; ++n) {
    const std::size_t r = testgen::uniform(rng, 1, 7), c = testgen::uniform(rng, 1, 7);
    IntegerMatrix m = testgen::random_matrix(rng, r, c, 12);
    auto s = snf(m);
    bool ok = s.U * m * s.V == s.D && is_unimodular(s.U) && is_unimodular(s.V);
    auto d = s.diagonal();
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j)
        if (i != j && s.D(i, j) != 0) ok = false;
    for (std::size_t i = 0; i + 1 < d.size(); ++i)
      if (d[i] < 0 || (d[i] != 0 && !mpz_divisible_p(d[i + 1].get_mpz_t(), d[i].get_mpz_t())) ||
          (d[i] == 0 && d[i + 1] != 0))
        ok = false;
    auto h = hnf(m);
    ok = ok && h.U * m == h.H && is_unimodular(h.U);
    // Row echelon with positive pivots and reduced entries above them.
    std::size_t col = 0;
    for (std::size_t i = 0; i < r && ok; ++i) {
      while (col < c && h.H(i, col) == 0) {
        for (std::size_t k = i; k < r; ++k)
          if (h.H(k, col) != 0) ok = false;
        ++col;
      }
      if (col == c) {
        for (std::size_t j = 0; j < c; ++j)
          if (h.H(i, j) != 0) ok = false;
        continue;
      }
      if (h.H(i, col) <= 0) ok = false;
      for (std::size_t k = 0; k < i; ++k)
        if (h.H(k, col) < 0 || h.H(k, col) >= h.H(i, col)) ok = false;
      for (std::size_t k = i + 1; k < r; ++k)
        if (h.H(k, col) != 0) ok = false;
      ++col;
    }
    // Cokernel is unchanged by unimodular changes of basis.
    IntegerMatrix p = testgen::random_unimodular(rng, r), q = testgen::random_unimodular(rng, c);
    ok = ok && cokernel(p * m * q) == cokernel(m);
    o.require(ok, "matrix " + std::to_string(n));
  }
  if (o.pass) o.detail = std::to_string(n) + " random matrices";
  return o;
}

// 8b, 8c.
Outcome long_exact_sequences(bool lifts) {
  Outcome o;
  std::mt19937 rng(lifts ? 8003 : 8002);
  int cases = 0, torsion_checked = 0, lift_cases = 0;
  for (; cases < (lifts ? 60 : 100); ++cases) {
    auto sc = testgen::random_sequence(rng);
    o.require(validate_exact(sc.s).ok(), "generated sequence is not exact");
    const int top = sc.b->base().dimension();
    if (lifts) {
      for (int k = 0; k < top; ++k) {
        Cohomology hc(*sc.c, k), ha(*sc.a, k + 1);
        o.require(connecting_map(sc.s, hc, ha).matrix == connecting_map(sc.s, hc, ha, &rng).matrix,
                  "connecting map depends on the lift");
        for (const auto& z : hc.generators()) {
          auto a = ha.reduce(connecting_cocycle(sc.s, k, z, &rng));
          auto b = ha.reduce(connecting_cocycle(sc.s, k, z, &rng));
          o.require(a == b, "connecting class depends on the lift");
        }
        ++lift_cases;
      }
      continue;
    }
    auto groups = testgen::long_sequence_groups(sc);
    std::vector<InducedMap> maps;
    for (int k = 0; k <= top; ++k) {
      maps.push_back(induced_map(sc.s.inclusion, groups[3 * k], groups[3 * k + 1]));
      maps.push_back(induced_map(sc.s.projection, groups[3 * k + 1], groups[3 * k + 2]));
      if (k < top) maps.push_back(connecting_map(sc.s, groups[3 * k + 2], groups[3 * k + 3]));
    }
    const bool small = sc.b->base().size() <= 30;
    for (std::size_t i = 0; i + 1 < maps.size(); ++i) {
      o.require(rank_exact_at(maps[i], maps[i + 1]), sc.kind + ": rank exactness fails");
      if (small) o.require(exact_at(maps[i], maps[i + 1]), sc.kind + ": torsion exactness fails");
    }
    if (small) {
      ++torsion_checked;
      o.require(testgen::long_sequence_exact(sc), sc.kind + ": end terms");
    }
  }
  if (o.pass)
    o.detail = lifts ? std::to_string(lift_cases) + " (sequence, degree) cases"
                     : std::to_string(cases) + " sequences, torsion-checked " + std::to_string(torsion_checked);
  if (lifts) o.require(lift_cases >= 50, "only " + std::to_string(lift_cases) + " cases");
  return o;
}

// 8d. Pairwise comparison classes of three systems over the same base.
Outcome additivity() {
  Outcome o;
  CellularSheaf r = build_R_sheaf(flat_torus_surface(0));
  Cohomology h2(r, 2);
  const RationalMatrix d1 = r.coboundary(1);
  std::mt19937 rng(8004);
  auto gauge = [&](const RationalVector& c) {
    // A representative of c shifted by a random coboundary: each pair of
    // systems is compared in its own choice of local sections.
    RationalVector z = h2.representative(c), y(r.cochain_dim(1));
    for (auto& x : y) x = testgen::uniform(rng, -3, 3);
    RationalVector dy = d1.apply(y);
    for (std::size_t i = 0; i < z.size(); ++i) z[i] += dy[i];
    return z;
  };
  std::vector<std::array<RationalVector, 3>> triples{{RationalVector{1, 0}, {0, 1}, {-1, -1}}};
  for (int t = 0; t < 20; ++t) {
    std::array<RationalVector, 3> c;
    for (auto& v : c) v = {testgen::uniform(rng, -5, 5), testgen::uniform(rng, -5, 5)};
    triples.push_back(c);
  }
  for (const auto& c : triples) {
    std::array<CohomologyClass, 3> mu;
    for (int i = 0; i < 3; ++i) {
      const int j = (i + 1) % 3;
      RationalVector zi = gauge(c[i]), zj = gauge(c[j]);
      for (std::size_t k = 0; k < zi.size(); ++k) zi[k] -= zj[k];
      mu[i] = {&r, 2, zi};
      const RationalVector expect{c[i][0] - c[j][0], c[i][1] - c[j][1]};
      o.require(class_reduce(h2, mu[i]) == expect, "comparison class has the wrong coordinates");
    }
    CohomologyClass total = class_add(class_add(mu[0], mu[1]), mu[2]);
    o.require(class_reduce(h2, total) == RationalVector{0, 0}, "mu12 + mu23 + mu31 is not zero");
  }
  if (o.pass) o.detail = std::to_string(triples.size()) + " triples, including (1,0), (0,1), (-1,-1)";
  return o;
}

// 8e.
Outcome dehn() {
  Outcome o;
  std::mt19937 rng(8005);
  int cases = 0;
  for (int trial = 0; trial < 40; ++trial) {
    AffineSurface s = flat_torus_surface(testgen::uniform(rng, -3, 3));
    const CellComplex& x = *s.base;
    std::vector<std::size_t> region;
    for (auto f : x.cells_of_dim(2))
      if (testgen::uniform(rng, 0, 2) == 0) region.push_back(f);
    if (region.empty() || region.size() == x.count(2)) continue;
    std::map<std::size_t, IntegerVector> tw, untw;
    for (auto e : cut_edges(s, region)) {
      IntegerVector w{testgen::uniform(rng, -2, 2), testgen::uniform(rng, -2, 2)};
      tw[e] = w;
      untw[e] = {-w[0], -w[1]};
    }
    Cohomology h2(build_R_sheaf(s), 2);
    AffineSurface back = dehn_reglue(dehn_reglue(s, region, tw), region, untw);
    o.require(h2.reduce(*back.chern) == h2.reduce(*s.chern), "class changed after twist and untwist");
    o.require(validate_affine(back).ok(), "reglued surface invalid");
    ++cases;
  }
  if (o.pass) o.detail = std::to_string(cases) + " random regions and twists";
  return o;
}

// 8f. Overlaps that retract onto a circle.
std::vector<std::size_t> grid_rows(const CellComplex& x, long lo, long hi) {
  std::vector<std::size_t> out;
  for (auto f : x.cells_of_dim(2)) {
    const std::string& id = x.id(f);
    const long j = std::stol(id.substr(id.find(',') + 1));
    if (lo <= j && j <= hi) out.push_back(f);
  }
  return x.closure(out);
}

Outcome strips() {
  Outcome o;
  std::mt19937 rng(8006);
  int cases = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const long nx = testgen::uniform(rng, 3, 5), ny = testgen::uniform(rng, 3, 5);
    const bool torus = trial % 2 == 0;
    AffineSurface s = torus ? flat_torus_surface(testgen::uniform(rng, -3, 3)) : klein_surface(nx, ny);
    const long rows = torus ? 3 : ny;
    CellularSheaf r = build_R_sheaf(s);
    const long cut = testgen::uniform(rng, 0, rows - 2), thick = testgen::uniform(rng, 0, 1);
    GluingSpec spec = split_sheaf(r, grid_rows(*s.base, 0, cut + thick), grid_rows(*s.base, cut, rows - 1));
    CellularSheaf f0 = overlap_sheaf(spec);
    RationalVector a(f0.cochain_dim(2)), b(f0.cochain_dim(2));
    for (auto& v : a) v = testgen::uniform(rng, -3, 3);
    for (auto& v : b) v = testgen::uniform(rng, -3, 3);
    auto ob = gluing_obstruction(spec, a, b);
    o.require(ob.vanishes, "obstruction survives on a strip overlap");
    ++cases;
  }
  o.require(cases >= 50, "too few cases");
  if (o.pass) o.detail = std::to_string(cases) + " torus and Klein strip decompositions";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 torus base", torus_base},
      {"2 symplectic moduli", moduli},
      {"3 klein bottle", klein},
      {"4 fake base space", fake_base},
      {"5 sphere with 24 focus-focus points", k3},
      {"6 twisted products", twisted},
      {"7 delzant", delzant},
      {"8a normal forms", normal_forms},
      {"8b long exact sequences", [] { return long_exact_sequences(false); }},
      {"8c connecting map lifts", [] { return long_exact_sequences(true); }},
      {"8d class additivity", additivity},
      {"8e dehn twist and untwist", dehn},
      {"8f strip obstructions", strips},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::ostringstream line;
    line.precision(2);
    line << std::fixed << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << " [" << secs << "s]";
    std::cout << line.str() << std::endl;
    if (!o.pass) ++failed;
  }
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : std::string("all criteria pass")) << "\n";
  return failed ? 1 : 0;
}
