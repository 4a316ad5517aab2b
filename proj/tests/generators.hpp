#pragma once

// Random inputs shared by the unit suites and the acceptance binary.

#include <memory>
#include <random>
#include <set>

#include "intaff/cellsheaf.hpp"

namespace intaff::testgen {

inline int uniform(std::mt19937& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline IntegerMatrix random_matrix(std::mt19937& rng, std::size_t r, std::size_t c, int bound) {
  IntegerMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = uniform(rng, -bound, bound);
  return m;
}

// Product of random elementary matrices.
inline IntegerMatrix random_unimodular(std::mt19937& rng, std::size_t n, int steps = 6) {
  IntegerMatrix m = IntegerMatrix::identity(n);
  if (n < 2) {
    if (n == 1 && uniform(rng, 0, 1)) m(0, 0) = -1;
    return m;
  }
  for (int s = 0; s < steps; ++s) {
    std::size_t i = uniform(rng, 0, n - 1), j = uniform(rng, 0, n - 2);
    if (j >= i) ++j;
    const int k = uniform(rng, -2, 2);
    for (std::size_t c = 0; c < n; ++c) m(i, c) += k * m(j, c);
  }
  if (uniform(rng, 0, 1))
    for (std::size_t c = 0; c < n; ++c) m(0, c) = -m(0, c);
  return m;
}

inline std::shared_ptr<const CellComplex> random_base(std::mt19937& rng) {
  switch (uniform(rng, 0, 5)) {
    case 0: return std::make_shared<CellComplex>(circle_complex(uniform(rng, 3, 5)));
    case 1: return std::make_shared<CellComplex>(grid_complex(3, 3, Wrap::Straight, Wrap::Straight));
    case 2: return std::make_shared<CellComplex>(grid_complex(3, 3, Wrap::Straight, Wrap::Flipped));
    case 3: return std::make_shared<CellComplex>(grid_complex(2, 2, Wrap::None, Wrap::None));
    case 4: return std::make_shared<CellComplex>(cube_surface());
    default: return std::make_shared<CellComplex>(grid_complex(3, 2, Wrap::Flipped, Wrap::None));
  }
}

inline std::shared_ptr<const CellComplex> random_graph(std::mt19937& rng) {
  if (uniform(rng, 0, 1)) return std::make_shared<CellComplex>(circle_complex(uniform(rng, 3, 6)));
  auto g = std::make_shared<CellComplex>();
  const int n = uniform(rng, 2, 5);
  for (int i = 0; i < n; ++i) g->add_cell("v" + std::to_string(i), 0);
  int edges = 0;
  for (int i = 1; i < n; ++i)
    add_edge(*g, "e" + std::to_string(edges++), uniform(rng, 0, i - 1), i);
  for (int extra = uniform(rng, 0, 2); extra > 0; --extra) {
    const int a = uniform(rng, 0, n - 2), b = uniform(rng, a + 1, n - 1);
    add_edge(*g, "e" + std::to_string(edges++), a, b);
  }
  return g;
}

// Each cell carries a subset S(c) of {0..n-1} containing the subsets of its
// faces; restrictions are coordinate inclusions, conjugated by a random
// unimodular basis per cell.
inline CellularSheaf random_sheaf(std::mt19937& rng, std::shared_ptr<const CellComplex> base,
                                  std::size_t n) {
  const CellComplex& x = *base;
  std::vector<std::vector<std::size_t>> subset(x.size());
  for (int k = 0; k <= x.dimension(); ++k)
    for (auto c : x.cells_of_dim(k)) {
      std::set<std::size_t> s;
      for (const auto& f : x.faces(c)) s.insert(subset[f.cell].begin(), subset[f.cell].end());
      for (std::size_t i = 0; i < n; ++i)
        if (uniform(rng, 0, 3) == 0) s.insert(i);
      subset[c].assign(s.begin(), s.end());
    }
  std::vector<IntegerMatrix> basis(x.size()), inverse(x.size());
  CellularSheaf f(base, Ring::integers());
  for (std::size_t c = 0; c < x.size(); ++c) {
    f.set_stalk(c, subset[c].size());
    basis[c] = random_unimodular(rng, subset[c].size());
    inverse[c] = *unimodular_inverse(basis[c]);
  }
  for (std::size_t t = 0; t < x.size(); ++t)
    for (const auto& s : x.faces(t)) {
      IntegerMatrix inc(subset[t].size(), subset[s.cell].size());
      for (std::size_t j = 0; j < subset[s.cell].size(); ++j) {
        auto pos = std::find(subset[t].begin(), subset[t].end(), subset[s.cell][j]) - subset[t].begin();
        inc(pos, j) = 1;
      }
      f.set_restriction(s.cell, t, to_rational(basis[t] * inc * inverse[s.cell]));
    }
  return f;
}

// Holder keeping the three sheaves of a sequence alive.
struct SequenceCase {
  std::unique_ptr<CellularSheaf> a, b, c;
  ShortExactSequence s;
  std::string kind;
};

inline RationalMatrix scaled_identity(std::size_t n, long k) {
  RationalMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = k;
  return m;
}

// 0 -> F -p-> F -> F (x) F_p -> 0.
inline SequenceCase bockstein_case(const CellularSheaf& f, long p) {
  SequenceCase out;
  out.kind = "bockstein";
  out.a = std::make_unique<CellularSheaf>(f);
  out.b = std::make_unique<CellularSheaf>(f);
  out.c = std::make_unique<CellularSheaf>(f.base_ptr(), Ring::prime_field(p));
  const CellComplex& x = f.base();
  for (std::size_t c = 0; c < x.size(); ++c) out.c->set_stalk(c, f.stalk(c));
  for (const auto& [key, m] : f.restrictions()) out.c->set_restriction(key.first, key.second, m);
  out.s.inclusion = SheafMap{out.a.get(), out.b.get(), {}};
  out.s.projection = SheafMap{out.b.get(), out.c.get(), {}};
  for (std::size_t c = 0; c < x.size(); ++c) {
    out.s.inclusion.components.push_back(scaled_identity(f.stalk(c), p));
    out.s.projection.components.push_back(RationalMatrix::identity(f.stalk(c)));
  }
  return out;
}

// Upper triangular extension 0 -> A -> A + C -> C -> 0 on a graph, with a
// random off-diagonal block.
inline SequenceCase unipotent_case(std::mt19937& rng, const CellularSheaf& a, const CellularSheaf& c) {
  SequenceCase out;
  out.kind = "extension";
  out.a = std::make_unique<CellularSheaf>(a);
  out.c = std::make_unique<CellularSheaf>(c);
  out.b = std::make_unique<CellularSheaf>(a.base_ptr(), Ring::integers());
  const CellComplex& x = a.base();
  for (std::size_t i = 0; i < x.size(); ++i) out.b->set_stalk(i, a.stalk(i) + c.stalk(i));
  for (std::size_t t = 0; t < x.size(); ++t)
    for (const auto& s : x.faces(t)) {
      const std::size_t ra = a.stalk(t), rc = c.stalk(t), sa = a.stalk(s.cell), sc = c.stalk(s.cell);
      RationalMatrix m(ra + rc, sa + sc);
      RationalMatrix ma = a.restriction(s.cell, t), mc = c.restriction(s.cell, t);
      for (std::size_t i = 0; i < ra; ++i)
        for (std::size_t j = 0; j < sa; ++j) m(i, j) = ma(i, j);
      for (std::size_t i = 0; i < rc; ++i)
        for (std::size_t j = 0; j < sc; ++j) m(ra + i, sa + j) = mc(i, j);
      for (std::size_t i = 0; i < ra; ++i)
        for (std::size_t j = 0; j < sc; ++j) m(i, sa + j) = uniform(rng, -2, 2);
      out.b->set_restriction(s.cell, t, m);
    }
  out.s.inclusion = SheafMap{out.a.get(), out.b.get(), {}};
  out.s.projection = SheafMap{out.b.get(), out.c.get(), {}};
  for (std::size_t i = 0; i < x.size(); ++i) {
    const std::size_t ra = a.stalk(i), rc = c.stalk(i);
    RationalMatrix inc(ra + rc, ra), proj(rc, ra + rc);
    for (std::size_t j = 0; j < ra; ++j) inc(j, j) = 1;
    for (std::size_t j = 0; j < rc; ++j) proj(j, ra + j) = 1;
    out.s.inclusion.components.push_back(inc);
    out.s.projection.components.push_back(proj);
  }
  return out;
}

inline SequenceCase random_sequence(std::mt19937& rng) {
  if (uniform(rng, 0, 1)) {
    const long primes[] = {2, 3, 5};
    return bockstein_case(random_sheaf(rng, random_base(rng), uniform(rng, 1, 2)), primes[uniform(rng, 0, 2)]);
  }
  auto g = random_graph(rng);
  return unipotent_case(rng, random_sheaf(rng, g, uniform(rng, 1, 2)), random_sheaf(rng, g, uniform(rng, 1, 2)));
}

// Cohomology groups of the long exact sequence in order
// H^0 A, H^0 B, H^0 C, H^1 A, ...
inline std::vector<Cohomology> long_sequence_groups(const SequenceCase& sc) {
  std::vector<Cohomology> out;
  const int top = sc.b->base().dimension();
  for (int k = 0; k <= top; ++k) {
    out.emplace_back(*sc.a, k);
    out.emplace_back(*sc.b, k);
    out.emplace_back(*sc.c, k);
  }
  return out;
}

// Exactness of the long exact sequence at every interior spot. Torsion-aware
// when all rings are Z or the C ring is F_p (its groups are then finite
// Z-modules in generator coordinates).
inline bool long_sequence_exact(const SequenceCase& sc, std::mt19937* rng = nullptr) {
  auto groups = long_sequence_groups(sc);
  std::vector<InducedMap> maps;
  const int top = sc.b->base().dimension();
  for (int k = 0; k <= top; ++k) {
    const auto& ha = groups[3 * k];
    const auto& hb = groups[3 * k + 1];
    const auto& hc = groups[3 * k + 2];
    maps.push_back(induced_map(sc.s.inclusion, ha, hb));
    maps.push_back(induced_map(sc.s.projection, hb, hc));
    if (k < top) maps.push_back(connecting_map(sc.s, hc, groups[3 * k + 3], rng));
  }
  for (std::size_t i = 0; i + 1 < maps.size(); ++i)
    if (!exact_at(maps[i], maps[i + 1])) return false;
  // Ends: H^0 A injects, H^top C is hit.
  InducedMap zero_in{AbelianGroup{}, maps.front().source, {}, maps.front().source_orders,
                     RationalMatrix(maps.front().source_orders.size(), 0)};
  if (!exact_at(zero_in, maps.front())) return false;
  InducedMap zero_out{maps.back().target, AbelianGroup{}, maps.back().target_orders, {},
                      RationalMatrix(0, maps.back().target_orders.size())};
  return exact_at(maps.back(), zero_out);
}

}  // namespace intaff::testgen
