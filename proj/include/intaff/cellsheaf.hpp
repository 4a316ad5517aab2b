#pragma once

// Cellular sheaves and their cohomology.
//
// Restrictions run from a cell to its cofaces (open-star convention):
// restriction(sigma, tau) : F(sigma) -> F(tau) for sigma a face of tau.
// The differential is d(x)_tau = sum_sigma [tau:sigma] F(sigma <= tau) x_sigma.
// Cochains of degree k are concatenated stalk vectors of the k-cells, in
// cells_of_dim(k) order.

#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "intaff/cellcomplex.hpp"

namespace intaff {

class CellularSheaf {
 public:
  CellularSheaf(std::shared_ptr<const CellComplex> base, Ring ring);
  // Constant sheaf ring^rank with identity restrictions.
  static CellularSheaf constant(std::shared_ptr<const CellComplex> base, Ring ring,
                                std::size_t rank);

  const CellComplex& base() const { return *base_; }
  std::shared_ptr<const CellComplex> base_ptr() const { return base_; }
  const Ring& ring() const { return ring_; }

  void set_stalk(std::size_t cell, std::size_t rank);
  std::size_t stalk(std::size_t cell) const { return stalks_[cell]; }
  // Matrix of shape stalk(tau) x stalk(sigma).
  void set_restriction(std::size_t sigma, std::size_t tau, RationalMatrix m);
  bool has_restriction(std::size_t sigma, std::size_t tau) const;
  // Zero matrix of the right shape when unset.
  RationalMatrix restriction(std::size_t sigma, std::size_t tau) const;
  const std::map<std::pair<std::size_t, std::size_t>, RationalMatrix>& restrictions() const {
    return restrictions_;
  }

  std::size_t cochain_dim(int k) const;
  // Offset of each cell's block inside C^dim(cell).
  std::size_t offset(std::size_t cell) const;
  RationalMatrix coboundary(int k) const;  // d^k : C^k -> C^{k+1}
  // Block of a cochain belonging to one cell.
  RationalVector block(const RationalVector& cochain, std::size_t cell) const;

 private:
  void refresh_offsets() const;

  std::shared_ptr<const CellComplex> base_;
  Ring ring_;
  std::vector<std::size_t> stalks_;
  std::map<std::pair<std::size_t, std::size_t>, RationalMatrix> restrictions_;
  mutable std::vector<std::size_t> offsets_;
  mutable std::vector<std::size_t> dims_;
  mutable bool offsets_valid_ = false;
};

Report validate_sheaf(const CellularSheaf& f);

// H^k(F) with a fixed generating set of representative cocycles.
class Cohomology {
 public:
  Cohomology(const CellularSheaf& f, int k);

  int degree() const { return k_; }
  const Ring& ring() const { return ring_; }
  const AbelianGroup& group() const { return group_; }
  std::size_t generator_count() const { return orders_.size(); }
  // 0 for free and Q directions, d for Z/d, p for F_p directions.
  const std::vector<Integer>& orders() const { return orders_; }
  const std::vector<RationalVector>& generators() const { return generators_; }
  std::size_t cochain_dim() const { return n_; }

  bool is_cocycle(const RationalVector& z) const;
  // Coordinates of [z]; throws NotACocycle.
  RationalVector reduce(const RationalVector& z) const;
  // Cocycle representing the given coordinates.
  RationalVector representative(const RationalVector& coords) const;

 private:
  Ring ring_;
  int k_;
  std::size_t n_ = 0;
  RationalMatrix d_;
  AbelianGroup group_;
  std::vector<Integer> orders_;
  std::vector<RationalVector> generators_;
  std::optional<QuotientModule> quotient_;
  // Z: kernel coordinates are rows rank.. of V^{-1} z; fields: free columns.
  std::size_t rank_ = 0;
  IntegerMatrix V_, V_inverse_;
  std::vector<std::size_t> free_columns_;
  RationalMatrix field_kernel_;
};

struct CohomologyClass {
  const CellularSheaf* sheaf = nullptr;
  int degree = 0;
  RationalVector cocycle;
};

RationalVector class_reduce(const Cohomology& h, const CohomologyClass& c);
CohomologyClass class_add(const CohomologyClass& a, const CohomologyClass& b);
CohomologyClass class_negate(const CohomologyClass& a);
bool class_equal(const Cohomology& h, const CohomologyClass& a, const CohomologyClass& b);

// A homomorphism between computed cohomology groups, in their generator
// coordinates: column j is the image of source generator j.
struct InducedMap {
  AbelianGroup source;
  AbelianGroup target;
  std::vector<Integer> source_orders;
  std::vector<Integer> target_orders;
  RationalMatrix matrix;
};

// Per-cell matrices stalk_G(c) x stalk_F(c) between sheaves on one base.
struct SheafMap {
  const CellularSheaf* source;
  const CellularSheaf* target;
  std::vector<RationalMatrix> components;

  RationalVector apply(const RationalVector& cochain, int k) const;
};

SheafMap identity_map(const CellularSheaf& source, const CellularSheaf& target);
Report validate_sheaf_map(const SheafMap& m);
InducedMap induced_map(const SheafMap& m, const Cohomology& source, const Cohomology& target);

struct ShortExactSequence {
  SheafMap inclusion;   // A -> B
  SheafMap projection;  // B -> C
};

// Stalkwise injectivity, surjectivity and exactness in the middle.
Report validate_exact(const ShortExactSequence& s);

// Image of a degree-k C-cocycle as a degree-(k+1) A-cocycle (zig-zag). With
// rng, every cellwise lift is perturbed by a random element of the kernel.
RationalVector connecting_cocycle(const ShortExactSequence& s, int k, const RationalVector& z,
                                  std::mt19937* rng = nullptr);
// Throws SequenceNotExact.
InducedMap connecting_map(const ShortExactSequence& s, int k, std::mt19937* rng = nullptr);
InducedMap connecting_map(const ShortExactSequence& s, const Cohomology& hc,
                          const Cohomology& ha, std::mt19937* rng = nullptr);

struct Subcomplex {
  std::shared_ptr<const CellComplex> complex;
  std::vector<std::size_t> cells;  // sub index -> base index
  std::vector<std::optional<std::size_t>> index;  // base index -> sub index
};

// Throws NotASubcomplex when cells are not closed under faces.
Subcomplex make_subcomplex(const CellComplex& x, const std::vector<std::size_t>& cells);
CellularSheaf restrict_sheaf(const CellularSheaf& f, const Subcomplex& sub);
RationalVector restrict_cochain(const CellularSheaf& f, const Subcomplex& sub, int k,
                                const RationalVector& cochain);
InducedMap restriction_on_cohomology(const CellularSheaf& f, const Subcomplex& sub, int k);

// Sheaf on product(base1, base2) with stalk F1(a) + F2(b).
CellularSheaf pullback_sum(const CellularSheaf& f1, const CellularSheaf& f2);

// Cellular bijection with a stalk isomorphism M_c : F(c) -> F(phi(c)).
struct SheafAutomorphism {
  std::vector<std::size_t> cell_map;
  std::vector<RationalMatrix> matrices;
};

// Automorphism of pullback_sum(f1, f2) acting factorwise.
SheafAutomorphism product_automorphism(const CellularSheaf& f1, const SheafAutomorphism& phi1,
                                       const CellularSheaf& f2, const SheafAutomorphism& phi2);

// Sheaf on q.complex (passed as `base`) whose sections are the
// sigma-invariant sections of f. sigma must be the free involution behind q.
// Throws NotAnAutomorphism.
CellularSheaf quotient_sheaf(const CellularSheaf& f, const SheafAutomorphism& sigma,
                             const Quotient& q, std::shared_ptr<const CellComplex> base);

// Throws NotAnAutomorphism.
CohomologyClass automorphism_action(const CellularSheaf& f, const SheafAutomorphism& phi,
                                    const CohomologyClass& c);
InducedMap automorphism_matrix(const CellularSheaf& f, const SheafAutomorphism& phi,
                               const Cohomology& h);

// Orbit of class coordinates under integer coordinate actions, enumerating
// words of length <= max_length. Torsion coordinates are reduced by orders.
std::set<RationalVector> enumerate_orbit(const std::vector<RationalMatrix>& actions,
                                         const RationalVector& start,
                                         const std::vector<Integer>& orders, int max_length);

// Exactness of G -f-> H -g-> K at H for groups in generator coordinates
// (Z-modules only): im f == ker g as subgroups.
bool exact_at(const InducedMap& f, const InducedMap& g);
// Same over Q: rank(f) == free rank of H minus rank(g), and g f = 0.
bool rank_exact_at(const InducedMap& f, const InducedMap& g);

}  // namespace intaff
