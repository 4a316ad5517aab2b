#include "intaff/catalog.hpp"

#include <functional>
#include <set>
#include <sstream>

#include "intaff/surfaces.hpp"

namespace intaff {

namespace {

const char* const kPublished = "published";
const char* const kElementary = "elementary";
const char* const kComputed = "computed";

std::string group_string(const AbelianGroup& g) { return g.to_string(); }

std::string matrix_string(const IntegerMatrix& m) {
  std::ostringstream os;
  os << m;
  return os.str();
}

std::size_t focus_focus_count(const AffineSurface& s) { return s.focus_focus_vertices().size(); }

// Parses "name(p)" or "name:p".
std::pair<std::string, std::optional<long>> split_name(const std::string& full) {
  auto open = full.find('(');
  auto colon = full.find(':');
  std::string base = full, arg;
  if (open != std::string::npos && full.back() == ')') {
    base = full.substr(0, open);
    arg = full.substr(open + 1, full.size() - open - 2);
  } else if (colon != std::string::npos) {
    base = full.substr(0, colon);
    arg = full.substr(colon + 1);
  }
  if (arg.empty()) return {base, std::nullopt};
  try {
    std::size_t used = 0;
    long v = std::stol(arg, &used);
    if (used != arg.size()) throw std::invalid_argument(arg);
    return {base, v};
  } catch (const std::exception&) {
    throw Error(ErrorCode::UnknownName, "bad parameter '" + arg + "' in catalog name '" + full + "'");
  }
}

std::string names_listing() {
  std::string out;
  for (const auto& n : catalog_names()) out += (out.empty() ? "" : ", ") + n;
  return out;
}

CatalogEntry surface_entry(std::string name, std::string description, AffineSurface s) {
  CatalogEntry e;
  e.name = std::move(name);
  e.description = std::move(description);
  e.surface = std::move(s);
  e.expected.push_back({"valid", "yes", kElementary});
  return e;
}

CatalogEntry flat_torus_entry(const std::string& name, long m) {
  CatalogEntry e = surface_entry(name, "Torus base with constant monodromy; the Chern cocycle has coordinate m.",
                                 flat_torus_surface(m));
  e.classes["chern"] = {"R", 2, *e.surface->chern};
  const long g = std::abs(m);
  e.expected.push_back({"surface_type", "torus", kElementary});
  e.expected.push_back({"h2_R", "Z^2", kPublished});
  e.expected.push_back({"h1_total", g == 0 ? "Z^4" : g == 1 ? "Z^3" : "Z^3 ⊕ Z/" + std::to_string(g),
                        g == 0 ? kElementary : kPublished});
  e.expected.push_back({"chern_orbit", "gcd " + std::to_string(g), kPublished});
  e.expected.push_back({"moduli", "(dim 1, lattice rank 1) ≅ R/Z", kPublished});
  e.expected.push_back({"realizability", "realizable", kPublished});
  return e;
}

}  // namespace

std::shared_ptr<const CellComplex> CatalogEntry::base() const {
  if (surface) return surface->base;
  if (!sheaves.empty()) return sheaves.begin()->second->base_ptr();
  if (gluing) return gluing->first->base_ptr();
  return nullptr;
}

LatticePolytope cp2_polytope() { return make_polytope(2, {{{-1, 0}, 0}, {{0, -1}, 0}, {{1, 1}, 1}}); }

LatticePolytope skew_triangle_polytope() { return make_polytope(2, {{{0, -1}, 0}, {{1, 0}, 1}, {{-2, 1}, 0}}); }

CellularSheaf torus_morse_graph() {
  auto g = std::make_shared<CellComplex>();
  const auto mn = g->add_cell("min", 0), s1 = g->add_cell("s1", 0), s2 = g->add_cell("s2", 0),
             mx = g->add_cell("max", 0);
  add_edge(*g, "e1", mn, s1);
  add_edge(*g, "e2", s1, s2);
  add_edge(*g, "e3", s1, s2);
  add_edge(*g, "e4", s2, mx);
  CellularSheaf f(g, Ring::integers());
  // Extrema are elliptic (rank 1), saddles hyperbolic (rank 0).
  for (std::size_t c = 0; c < g->size(); ++c) f.set_stalk(c, c == s1 || c == s2 ? 0 : 1);
  for (auto e : g->cells_of_dim(1))
    for (const auto& v : g->faces(e))
      f.set_restriction(v.cell, e, f.stalk(v.cell) ? RationalMatrix{{1}} : RationalMatrix(1, 0));
  return f;
}

CellularSheaf twisted_product_base() {
  CellularSheaf g = torus_morse_graph();
  return pullback_sum(g, g);
}

FakeBaseSpace fake_base_space() {
  // The Reeb graph G of a sphere with two maxima, two minima and saddles at
  // +-1/2, with a vertex z on the middle edge at level 0.
  auto g = std::make_shared<CellComplex>();
  const auto M1 = g->add_cell("M1", 0), M2 = g->add_cell("M2", 0), sp = g->add_cell("s+", 0),
             z = g->add_cell("z", 0), sm = g->add_cell("s-", 0), m1 = g->add_cell("m1", 0),
             m2 = g->add_cell("m2", 0);
  const auto u1 = add_edge(*g, "u1", sp, M1), u2 = add_edge(*g, "u2", sp, M2);
  const auto cp = add_edge(*g, "c+", z, sp), cm = add_edge(*g, "c-", sm, z);
  const auto l1 = add_edge(*g, "l1", sm, m1), l2 = add_edge(*g, "l2", sm, m2);
  CellularSheaf rg(g, Ring::integers());
  for (std::size_t c = 0; c < g->size(); ++c) rg.set_stalk(c, c == sp || c == sm ? 0 : 1);
  for (auto e : g->cells_of_dim(1))
    for (const auto& v : g->faces(e))
      rg.set_restriction(v.cell, e, rg.stalk(v.cell) ? RationalMatrix{{1}} : RationalMatrix(1, 0));
  // sigma swaps the upper edges and fixes the rest.
  SheafAutomorphism sg;
  for (std::size_t c = 0; c < g->size(); ++c) {
    sg.cell_map.push_back(c);
    sg.matrices.push_back(RationalMatrix::identity(rg.stalk(c)));
  }
  std::swap(sg.cell_map[M1], sg.cell_map[M2]);
  std::swap(sg.cell_map[u1], sg.cell_map[u2]);

  AffineCover cover = klein_double_cover();
  CellularSheaf rk = build_R_sheaf(cover.surface);
  SheafAutomorphism deck = affine_automorphism(cover.surface, cover.deck, cover.deck_charts);
  CellularSheaf product_sheaf = pullback_sum(rk, rg);
  SheafAutomorphism sigma = product_automorphism(rk, deck, rg, sg);
  Quotient q = quotient_by_free_involution(product_sheaf.base(), sigma.cell_map);
  auto base = std::make_shared<CellComplex>(q.complex);

  FakeBaseSpace out;
  out.sheaf = std::make_shared<CellularSheaf>(quotient_sheaf(product_sheaf, sigma, q, base));
  const std::set<std::size_t> lower{z, sm, m1, m2, cm, l1, l2}, upper{M1, M2, sp, z, u1, u2, cp};
  std::vector<std::size_t> minus, plus;
  const std::size_t ny = g->size();
  for (std::size_t c = 0; c < product_sheaf.base().size(); ++c) {
    if (c > sigma.cell_map[c]) continue;
    if (lower.count(c % ny)) minus.push_back(q.cell_map[c]);
    if (upper.count(c % ny)) plus.push_back(q.cell_map[c]);
  }
  out.pieces = split_sheaf(*out.sheaf, minus, plus);

  // Restricted Chern classes: trivial under rho from O-, the generator of
  // H^2(K^2, Z) = Z/2 in the G-coordinate from O+.
  CellularSheaf overlap = overlap_sheaf(out.pieces);
  out.c_minus.assign(overlap.cochain_dim(2), Rational(0));
  out.c_plus = out.c_minus;
  const std::size_t face = overlap.base().cells_of_dim(2).front();
  out.c_plus[overlap.offset(face) + overlap.stalk(face) - 1] = 1;
  return out;
}

std::vector<std::string> catalog_names() {
  return {"flat_torus(m)", "kodaira_thurston", "cp2_triangle", "cp2_blowup",   "skew_triangle",
          "ff_disk(k)",    "sphere_24ff",      "rp2_12ff",     "klein_affine", "fake_base_space",
          "torus_morse_graph", "twisted_product_base"};
}

CatalogEntry build_entry(const std::string& full) {
  auto [name, param] = split_name(full);
  auto no_param = [&, &param = param] {
    if (param) throw Error(ErrorCode::UnknownName, "catalog entry '" + name + "' takes no parameter");
  };
  if (name == "flat_torus") {
    const long m = param.value_or(1);
    return flat_torus_entry("flat_torus(" + std::to_string(m) + ")", m);
  }
  if (name == "kodaira_thurston") {
    no_param();
    CatalogEntry e = flat_torus_entry(name, 1);
    e.description = "The Kodaira-Thurston manifold as the torus bundle with Chern coordinate 1.";
    return e;
  }
  if (name == "cp2_triangle") {
    no_param();
    CatalogEntry e = surface_entry(name, "Delzant triangle (0,0), (1,0), (0,1) with elliptic boundary.",
                                   cp2_triangle_surface());
    e.polytope = cp2_polytope();
    e.expected.push_back({"delzant", "pass", kElementary});
    e.expected.push_back({"h0_R", "Z^2", kComputed});
    e.expected.push_back({"h1_R", "0", kComputed});
    e.expected.push_back({"h2_R", "0", kPublished});
    e.expected.push_back({"moduli", "(dim 0, lattice rank 0) = 0", kComputed});
    e.expected.push_back({"area", "1/2", kElementary});
    e.expected.push_back({"realizability", "realizable", kPublished});
    return e;
  }
  if (name == "cp2_blowup") {
    no_param();
    CatalogEntry e;
    e.name = name;
    e.description = "The triangle blown up at the origin with cut size 1/2.";
    e.polytope = vertex_blowup(cp2_polytope(), {0, 0}, Rational(1, 2));
    e.expected.push_back({"valid", "yes", kElementary});
    e.expected.push_back({"delzant", "pass", kComputed});
    e.expected.push_back({"facets", "4", kComputed});
    return e;
  }
  if (name == "skew_triangle") {
    no_param();
    CatalogEntry e;
    e.name = name;
    e.description = "Triangle (0,0), (1,0), (1,2): the origin has edge directions (1,0) and (1,2).";
    e.polytope = skew_triangle_polytope();
    e.expected.push_back({"valid", "yes", kElementary});
    e.expected.push_back({"delzant", "fail at vertex (0, 0): edges (1, 0) (1, 2), det 2", kElementary});
    return e;
  }
  if (name == "ff_disk") {
    const long k = param.value_or(1);
    if (k < 1) throw Error(ErrorCode::UnknownName, "ff_disk needs k >= 1");
    CatalogEntry e = surface_entry("ff_disk(" + std::to_string(k) + ")",
                                   "Four triangles around one focus-focus vertex of multiplicity k.",
                                   ff_disk_surface(static_cast<int>(k)));
    e.expected.push_back({"focus_focus", "1", kElementary});
    e.expected.push_back({"vertex_monodromy", "1 x [[1," + std::to_string(k) + "],[0,1]]", kComputed});
    e.expected.push_back({"h0_R", "Z", kComputed});
    e.expected.push_back({"h1_R", "0", kComputed});
    e.expected.push_back({"h2_R", "0", kComputed});
    e.expected.push_back({"surface_type", "disk", kElementary});
    return e;
  }
  if (name == "sphere_24ff") {
    no_param();
    CatalogEntry e = surface_entry(
        name,
        "Eight triangles of side 8, each with its three corners cut at 1/4 of the edge and the small edge "
        "pairs glued, glued along an octahedron. Three focus-focus points per triangle.",
        sphere_24ff_surface());
    e.expected.push_back({"focus_focus", "24", kPublished});
    e.expected.push_back({"surface_type", "sphere", kPublished});
    e.expected.push_back({"singular_fibers", "24 of type I+", kPublished});
    e.expected.push_back({"vertex_monodromy", "24 x [[1,1],[0,1]]", kComputed});
    e.expected.push_back({"loop_product", "trivial", kComputed});
    e.expected.push_back({"h1_R", "Z^20", kComputed});
    e.expected.push_back({"h2_R", "0", kComputed});
    e.expected.push_back({"realizability", "realizable", kPublished});
    return e;
  }
  if (name == "rp2_12ff") {
    no_param();
    CatalogEntry e = surface_entry(name, "Quotient of sphere_24ff by the antipodal map of the octahedron.",
                                   rp2_12ff_surface());
    e.expected.push_back({"focus_focus", "12", kPublished});
    e.expected.push_back({"surface_type", "projective_plane", kPublished});
    e.expected.push_back({"h1_R", "Z^10", kComputed});
    e.expected.push_back({"realizability", "realizable", kPublished});
    return e;
  }
  if (name == "klein_affine") {
    no_param();
    CatalogEntry e = surface_entry(name, "3 x 3 grid Klein bottle whose y-seam reverses x.", klein_surface());
    e.expected.push_back({"surface_type", "klein_bottle", kElementary});
    e.expected.push_back({"h2_Z", "Z/2", kPublished});
    e.expected.push_back({"pi1_ab", "Z ⊕ Z/2", kPublished});
    e.expected.push_back({"h2_R", "Z ⊕ Z/2", kComputed});
    e.expected.push_back({"realizability", "realizable", kPublished});
    return e;
  }
  if (name == "fake_base_space") {
    no_param();
    FakeBaseSpace f = fake_base_space();
    CatalogEntry e;
    e.name = name;
    e.description =
        "O = (K x G)/sigma for the Klein double cover K and the Reeb graph G; pieces O- and O+ meet in O0 = K^2. "
        "The restricted classes c_minus and c_plus are inputs: rho(c_minus) = 0, rho(c_plus) = 1.";
    e.sheaves["R"] = f.sheaf;
    e.gluing = f.pieces;
    e.classes["c_minus"] = {"overlap", 2, f.c_minus};
    e.classes["c_plus"] = {"overlap", 2, f.c_plus};
    e.expected.push_back({"valid", "yes", kElementary});
    e.expected.push_back({"overlap_h2", "Z ⊕ Z/2 ⊕ Z/2", kComputed});
    e.expected.push_back({"obstruction", "non-realizable: obstruction Z/2 nonzero", kPublished});
    e.expected.push_back({"realizability", "undecided", kComputed});
    return e;
  }
  if (name == "torus_morse_graph") {
    no_param();
    CatalogEntry e;
    e.name = name;
    e.description = "Reeb graph of a height function on the torus: min - s1 = s2 - max.";
    e.sheaves["R"] = std::make_shared<CellularSheaf>(torus_morse_graph());
    e.expected.push_back({"valid", "yes", kElementary});
    e.expected.push_back({"stalk_ranks", "vertices 1 0 0 1; edges 1 1 1 1", kPublished});
    e.expected.push_back({"h0_R", "0", kComputed});
    e.expected.push_back({"h1_R", "Z^2", kComputed});
    return e;
  }
  if (name == "twisted_product_base") {
    no_param();
    CatalogEntry e;
    e.name = name;
    e.description = "Product of two torus Morse graphs with the sum of the pulled back sheaves.";
    e.sheaves["R"] = std::make_shared<CellularSheaf>(twisted_product_base());
    e.expected.push_back({"valid", "yes", kElementary});
    e.expected.push_back({"h2_R", "Z^4", kPublished});
    return e;
  }
  throw Error(ErrorCode::UnknownName, "unknown catalog entry '" + full + "'; available: " + names_listing());
}

std::string compute_invariant(const CatalogEntry& e, const std::string& invariant) {
  auto need_surface = [&]() -> const AffineSurface& {
    if (!e.surface) throw Error(ErrorCode::UnknownName, "'" + invariant + "' needs an affine surface");
    return *e.surface;
  };
  auto r_sheaf = [&]() -> CellularSheaf {
    if (e.surface) return build_R_sheaf(*e.surface);
    auto it = e.sheaves.find("R");
    if (it == e.sheaves.end()) throw Error(ErrorCode::UnknownName, "'" + invariant + "' needs a sheaf R");
    return *it->second;
  };
  auto need_polytope = [&]() -> const LatticePolytope& {
    if (!e.polytope) throw Error(ErrorCode::UnknownName, "'" + invariant + "' needs a polytope");
    return *e.polytope;
  };

  if (invariant == "valid") {
    Report r;
    if (e.surface) r.merge(validate_affine(*e.surface));
    for (const auto& [name, f] : e.sheaves) r.merge(validate_sheaf(*f), name + ": ");
    if (e.polytope) r.merge(validate_polytope(*e.polytope));
    if (e.gluing) r.merge(validate_gluing(*e.gluing));
    return r.ok() ? "yes" : "no: " + r.violations.front();
  }
  if (invariant.size() == 4 && invariant[0] == 'h' && invariant.substr(2) == "_R" && std::isdigit(invariant[1]))
    return group_string(Cohomology(r_sheaf(), invariant[1] - '0').group());
  if (invariant == "h2_Z") {
    auto base = e.base();
    return group_string(Cohomology(CellularSheaf::constant(base, Ring::integers(), 1), 2).group());
  }
  if (invariant == "pi1_ab") return group_string(pi1_presentation(*e.base(), 0).abelianization());
  if (invariant == "surface_type") {
    const std::size_t ff = e.surface ? focus_focus_count(*e.surface) : 0;
    return to_string(classify_surface(*e.base(), ff).kind);
  }
  if (invariant == "focus_focus") return std::to_string(focus_focus_count(need_surface()));
  if (invariant == "singular_fibers") {
    const AffineSurface& s = need_surface();
    std::map<int, std::size_t> by_k;
    for (auto v : s.focus_focus_vertices()) ++by_k[s.marks[v].multiplicity];
    std::string out;
    for (const auto& [k, n] : by_k)
      out += (out.empty() ? "" : "; ") + std::to_string(n) + " of type I" + (k == 1 ? "" : std::to_string(k)) + "+";
    return out.empty() ? "none" : out;
  }
  if (invariant == "vertex_monodromy" || invariant == "loop_product") {
    auto rep = monodromy_rep(need_surface());
    if (invariant == "loop_product") return rep.relations_hold ? "trivial" : "nontrivial";
    std::map<std::string, std::size_t> classes;
    const std::size_t first = rep.images.size() - rep.vertex_loop_vertex.size();
    for (std::size_t i = first; i < rep.images.size(); ++i)
      if (rep.images[i] != IntegerMatrix::identity(2)) ++classes[matrix_string(conjugacy_representative(rep.images[i]))];
    std::string out;
    for (const auto& [m, n] : classes) out += (out.empty() ? "" : "; ") + std::to_string(n) + " x " + m;
    return out.empty() ? "trivial" : out;
  }
  if (invariant == "moduli") return describe(lagrangian_moduli(need_surface()));
  if (invariant == "h1_total" || invariant == "chern_orbit") {
    const AffineSurface& s = need_surface();
    if (!s.chern) throw Error(ErrorCode::UnknownName, "entry has no Chern cocycle");
    CellularSheaf r = build_R_sheaf(s);
    RationalVector c = Cohomology(r, 2).reduce(*s.chern);
    if (c.size() != 2) throw Error(ErrorCode::InvalidInput, "Chern class is not in a rank-2 group");
    if (invariant == "h1_total") return group_string(torus_bundle_h1(c[0].get_num(), c[1].get_num()));
    return "gcd " + Integer(gcd(c[0].get_num(), c[1].get_num())).get_str();
  }
  if (invariant == "area") return to_string(affine_area(need_surface()));
  if (invariant == "delzant") return delzant_check(need_polytope()).describe();
  if (invariant == "facets") return std::to_string(need_polytope().halfspaces.size());
  if (invariant == "realizability") {
    if (e.surface) return realizability_report_2d(*e.surface).verdict;
    return realizability_report(r_sheaf()).verdict;
  }
  if (invariant == "obstruction" || invariant == "overlap_h2") {
    if (!e.gluing) throw Error(ErrorCode::UnknownName, "'" + invariant + "' needs gluing data");
    if (invariant == "overlap_h2") return group_string(Cohomology(overlap_sheaf(*e.gluing), 2).group());
    auto a = e.classes.find("c_minus"), b = e.classes.find("c_plus");
    if (a == e.classes.end() || b == e.classes.end())
      throw Error(ErrorCode::UnknownName, "obstruction needs classes c_minus and c_plus");
    return gluing_obstruction(*e.gluing, a->second.values, b->second.values, a->second.degree).verdict();
  }
  if (invariant == "stalk_ranks") {
    CellularSheaf r = r_sheaf();
    std::string out = "vertices";
    for (auto v : r.base().cells_of_dim(0)) out += " " + std::to_string(r.stalk(v));
    out += "; edges";
    for (auto v : r.base().cells_of_dim(1)) out += " " + std::to_string(r.stalk(v));
    return out;
  }
  throw Error(ErrorCode::UnknownName, "unknown invariant '" + invariant + "'");
}

bool VerifyReport::ok() const {
  return std::all_of(lines.begin(), lines.end(), [](const VerifyLine& l) { return l.pass; });
}

std::string VerifyReport::describe() const {
  std::ostringstream os;
  os << name << "\n";
  std::size_t failed = 0;
  for (const auto& l : lines) {
    if (l.pass) {
      os << "  PASS " << l.expectation.invariant << ": " << l.actual;
    } else {
      ++failed;
      os << "  FAIL " << l.expectation.invariant << ": expected " << l.expectation.expected << ", got " << l.actual;
    }
    os << " (" << l.expectation.source << ")\n";
  }
  if (failed == 0)
    os << "all " << lines.size() << " invariants pass";
  else
    os << failed << " of " << lines.size() << " invariants fail";
  return os.str();
}

VerifyReport verify(const CatalogEntry& e) {
  VerifyReport out{e.name, {}};
  for (const auto& x : e.expected) {
    VerifyLine line{x, "", false};
    try {
      line.actual = compute_invariant(e, x.invariant);
    } catch (const Error& err) {
      line.actual = std::string("error: ") + err.what();
    }
    line.pass = line.actual == x.expected;
    out.lines.push_back(std::move(line));
  }
  return out;
}

}  // namespace intaff
