#include "intaff/cellcomplex.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

namespace intaff {

std::size_t CellComplex::add_cell(const std::string& id, int dim) {
  if (dim < 0) throw Error(ErrorCode::InvalidInput, "cell '" + id + "' has negative dimension");
  if (index_.count(id)) throw Error(ErrorCode::InvalidInput, "duplicate cell id '" + id + "'");
  const std::size_t idx = ids_.size();
  ids_.push_back(id);
  dims_.push_back(dim);
  if (by_dim_.size() <= static_cast<std::size_t>(dim)) by_dim_.resize(dim + 1);
  position_.push_back(by_dim_[dim].size());
  by_dim_[dim].push_back(idx);
  faces_.emplace_back();
  cofaces_.emplace_back();
  index_.emplace(id, idx);
  return idx;
}

void CellComplex::set_incidence(std::size_t tau, std::size_t sigma, int coefficient) {
  if (tau >= size() || sigma >= size())
    throw Error(ErrorCode::InvalidInput, "incidence refers to a missing cell");
  if (dims_[tau] != dims_[sigma] + 1)
    throw Error(ErrorCode::InvalidInput, "incidence between '" + ids_[tau] + "' and '" +
                                             ids_[sigma] + "' does not drop dimension by one");
  auto upsert = [](std::vector<Incidence>& list, std::size_t cell, int c) {
    auto it = std::find_if(list.begin(), list.end(),
                           [&](const Incidence& i) { return i.cell == cell; });
    if (c == 0) {
      if (it != list.end()) list.erase(it);
    } else if (it != list.end()) {
      it->coefficient = c;
    } else {
      list.push_back({cell, c});
    }
  };
  upsert(faces_[tau], sigma, coefficient);
  upsert(cofaces_[sigma], tau, coefficient);
}

void CellComplex::set_boundary_word(std::size_t face, std::vector<SignedEdge> word) {
  if (face >= size() || dims_[face] != 2)
    throw Error(ErrorCode::InvalidInput, "boundary words are only defined for 2-cells");
  words_[face] = std::move(word);
}

int CellComplex::dimension() const { return static_cast<int>(by_dim_.size()) - 1; }

std::optional<std::size_t> CellComplex::find(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t CellComplex::index_of(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw Error(ErrorCode::UnknownName, "unknown cell '" + id + "'");
  return it->second;
}

const std::vector<std::size_t>& CellComplex::cells_of_dim(int k) const {
  static const std::vector<std::size_t> none;
  if (k < 0 || static_cast<std::size_t>(k) >= by_dim_.size()) return none;
  return by_dim_[k];
}

int CellComplex::incidence(std::size_t tau, std::size_t sigma) const {
  for (const auto& i : faces_[tau])
    if (i.cell == sigma) return i.coefficient;
  return 0;
}

const std::vector<SignedEdge>& CellComplex::boundary_word(std::size_t face) const {
  auto it = words_.find(face);
  if (it == words_.end())
    throw Error(ErrorCode::MissingBoundaryWords, "2-cell '" + ids_[face] + "' has no boundary word");
  return it->second;
}

std::size_t CellComplex::head(std::size_t edge) const {
  for (const auto& i : faces_[edge])
    if (i.coefficient == 1) return i.cell;
  throw Error(ErrorCode::InvalidInput, "edge '" + ids_[edge] + "' has no head vertex");
}

std::size_t CellComplex::tail(std::size_t edge) const {
  for (const auto& i : faces_[edge])
    if (i.coefficient == -1) return i.cell;
  throw Error(ErrorCode::InvalidInput, "edge '" + ids_[edge] + "' has no tail vertex");
}

IntegerMatrix CellComplex::coboundary_matrix(int k) const {
  const auto& rows = cells_of_dim(k);
  const auto& cols = cells_of_dim(k - 1);
  IntegerMatrix d(rows.size(), cols.size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (const auto& f : faces_[rows[r]]) d(r, position_[f.cell]) = f.coefficient;
  return d;
}

std::vector<std::size_t> CellComplex::closure(const std::vector<std::size_t>& cells) const {
  std::vector<bool> in(size(), false);
  std::vector<std::size_t> stack;
  for (auto c : cells) {
    if (c >= size()) throw Error(ErrorCode::InvalidInput, "cell index out of range");
    if (!in[c]) {
      in[c] = true;
      stack.push_back(c);
    }
  }
  while (!stack.empty()) {
    auto c = stack.back();
    stack.pop_back();
    for (const auto& f : faces_[c])
      if (!in[f.cell]) {
        in[f.cell] = true;
        stack.push_back(f.cell);
      }
  }
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < size(); ++c)
    if (in[c]) out.push_back(c);
  return out;
}

bool CellComplex::is_subcomplex(const std::vector<std::size_t>& cells) const {
  std::vector<bool> in(size(), false);
  for (auto c : cells) {
    if (c >= size()) return false;
    in[c] = true;
  }
  for (auto c : cells)
    for (const auto& f : faces_[c])
      if (!in[f.cell]) return false;
  return true;
}

Report validate(const CellComplex& x) {
  Report r;
  for (std::size_t c = 0; c < x.size(); ++c) {
    for (const auto& f : x.faces(c))
      if (f.coefficient != 1 && f.coefficient != -1)
        r.add("incidence [" + x.id(c) + ":" + x.id(f.cell) + "] = " +
              std::to_string(f.coefficient) + " is not +-1");
    if (x.dim(c) >= 1 && x.faces(c).empty())
      r.add("cell '" + x.id(c) + "' has empty boundary");
    if (x.dim(c) == 1) {
      int plus = 0, minus = 0;
      for (const auto& f : x.faces(c)) (f.coefficient > 0 ? plus : minus)++;
      if (x.faces(c).size() != 2 || plus != 1 || minus != 1)
        r.add("edge '" + x.id(c) + "' does not have one head and one tail vertex");
    }
    if (x.dim(c) >= 2) {
      std::map<std::size_t, long> dd;
      for (const auto& t : x.faces(c))
        for (const auto& s : x.faces(t.cell)) dd[s.cell] += long(t.coefficient) * s.coefficient;
      for (const auto& [s, v] : dd)
        if (v != 0)
          r.add("boundary of boundary nonzero at (" + x.id(c) + ", " + x.id(s) + ")");
    }
  }
  for (const auto& [face, word] : x.boundary_words()) {
    const std::string name = "boundary word of '" + x.id(face) + "'";
    bool shape_ok = !word.empty();
    std::map<std::size_t, int> count;
    for (const auto& l : word) {
      if (l.edge >= x.size() || x.dim(l.edge) != 1 || (l.sign != 1 && l.sign != -1)) {
        shape_ok = false;
        break;
      }
      count[l.edge] += l.sign;
    }
    if (!shape_ok) {
      r.add(name + " is malformed");
      continue;
    }
    bool matches = count.size() == x.faces(face).size();
    for (const auto& f : x.faces(face)) {
      auto it = count.find(f.cell);
      if (it == count.end() || it->second != f.coefficient) matches = false;
    }
    if (!matches) r.add(name + " disagrees with incidence coefficients");
    try {
      for (std::size_t i = 0; i < word.size(); ++i) {
        const auto& a = word[i];
        const auto& b = word[(i + 1) % word.size()];
        std::size_t end = a.sign > 0 ? x.head(a.edge) : x.tail(a.edge);
        std::size_t start = b.sign > 0 ? x.tail(b.edge) : x.head(b.edge);
        if (end != start) {
          r.add(name + " is not a closed edge path");
          break;
        }
      }
    } catch (const Error&) {
      r.add(name + " uses an edge without two endpoints");
    }
  }
  return r;
}

Integer euler_characteristic(const CellComplex& x) {
  Integer chi = 0;
  for (int k = 0; k <= x.dimension(); ++k)
    chi += (k % 2 == 0 ? 1 : -1) * static_cast<long>(x.count(k));
  return chi;
}

namespace {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[b] = a;
    return true;
  }
};

}  // namespace

std::vector<std::vector<std::size_t>> connected_components(const CellComplex& x) {
  UnionFind uf(x.size());
  for (std::size_t c = 0; c < x.size(); ++c)
    for (const auto& f : x.faces(c)) uf.unite(c, f.cell);
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t c = 0; c < x.size(); ++c) groups[uf.find(c)].push_back(c);
  std::vector<std::vector<std::size_t>> out;
  for (auto& [root, cells] : groups) out.push_back(std::move(cells));
  std::sort(out.begin(), out.end());
  return out;
}

const char* to_string(SurfaceType t) {
  switch (t) {
    case SurfaceType::Annulus: return "annulus";
    case SurfaceType::MobiusBand: return "mobius_band";
    case SurfaceType::KleinBottle: return "klein_bottle";
    case SurfaceType::Torus: return "torus";
    case SurfaceType::Disk: return "disk";
    case SurfaceType::ProjectivePlane: return "projective_plane";
    case SurfaceType::Sphere: return "sphere";
  }
  return "unknown";
}

namespace {

// The two edges of face f incident to vertex v.
std::pair<std::size_t, std::size_t> edges_at(const CellComplex& x, std::size_t f, std::size_t v) {
  std::vector<std::size_t> found;
  for (const auto& e : x.faces(f))
    if (x.incidence(e.cell, v) != 0) found.push_back(e.cell);
  if (found.size() != 2)
    throw Error(ErrorCode::NotASurface,
                "face '" + x.id(f) + "' does not meet vertex '" + x.id(v) + "' in two edges");
  return {found[0], found[1]};
}

std::size_t across(const CellComplex& x, std::size_t e, std::size_t f) {
  for (const auto& g : x.cofaces(e))
    if (g.cell != f) return g.cell;
  throw Error(ErrorCode::NotASurface, "edge '" + x.id(e) + "' has no second face");
}

}  // namespace

SurfaceData analyze_surface(const CellComplex& x) {
  if (x.dimension() != 2)
    throw Error(ErrorCode::NotASurface, "surface complexes must be 2-dimensional");
  if (connected_components(x).size() != 1)
    throw Error(ErrorCode::Disconnected, "surface complex is not connected");
  SurfaceData s;
  s.interior_vertex.assign(x.size(), false);
  s.face_orientation.assign(x.size(), 0);
  for (auto e : x.cells_of_dim(1)) {
    const auto n = x.cofaces(e).size();
    if (n == 0 || n > 2)
      throw Error(ErrorCode::NotASurface,
                  "edge '" + x.id(e) + "' has " + std::to_string(n) + " incident faces");
    if (n == 1) s.boundary_edges.push_back(e);
  }
  // Vertex links must be a single path or cycle.
  for (auto v : x.cells_of_dim(0)) {
    const auto& star = x.cofaces(v);
    if (star.empty()) throw Error(ErrorCode::NotASurface, "isolated vertex '" + x.id(v) + "'");
    UnionFind uf(x.size());
    std::set<std::size_t> faces_at;
    for (const auto& e : star)
      for (const auto& f : x.cofaces(e.cell)) faces_at.insert(f.cell);
    for (auto f : faces_at) {
      auto [a, b] = edges_at(x, f, v);
      uf.unite(a, b);
    }
    bool interior = true;
    for (const auto& e : star) {
      if (uf.find(e.cell) != uf.find(star[0].cell))
        throw Error(ErrorCode::NotASurface, "link of vertex '" + x.id(v) + "' is disconnected");
      if (x.cofaces(e.cell).size() != 2) interior = false;
    }
    s.interior_vertex[v] = interior;
  }
  // Orientation propagation across interior edges.
  const auto& faces = x.cells_of_dim(2);
  std::deque<std::size_t> queue{faces[0]};
  s.face_orientation[faces[0]] = 1;
  while (!queue.empty()) {
    auto f = queue.front();
    queue.pop_front();
    for (const auto& e : x.faces(f)) {
      if (x.cofaces(e.cell).size() != 2) continue;
      auto g = across(x, e.cell, f);
      int want = -s.face_orientation[f] * e.coefficient * x.incidence(g, e.cell);
      if (s.face_orientation[g] == 0) {
        s.face_orientation[g] = want;
        queue.push_back(g);
      } else if (s.face_orientation[g] != want) {
        s.orientable = false;
      }
    }
  }
  UnionFind uf(x.size());
  std::set<std::size_t> bverts;
  for (auto e : s.boundary_edges) {
    uf.unite(x.head(e), x.tail(e));
    bverts.insert(x.head(e));
    bverts.insert(x.tail(e));
  }
  std::set<std::size_t> roots;
  for (auto v : bverts) roots.insert(uf.find(v));
  s.boundary_components = roots.size();
  return s;
}

SurfaceClassification classify_surface(const CellComplex& x, std::size_t focus_focus_count) {
  SurfaceData s = analyze_surface(x);
  SurfaceClassification c{SurfaceType::Sphere, euler_characteristic(x), s.orientable,
                          s.boundary_components, false, {}};
  const long chi = c.euler.get_si();
  const std::size_t b = s.boundary_components;
  if (s.orientable) {
    if (chi == 2 && b == 0) c.kind = SurfaceType::Sphere;
    else if (chi == 1 && b == 1) c.kind = SurfaceType::Disk;
    else if (chi == 0 && b == 2) c.kind = SurfaceType::Annulus;
    else if (chi == 0 && b == 0) c.kind = SurfaceType::Torus;
    else throw Error(ErrorCode::NotASurface, "orientable surface with chi " + std::to_string(chi) +
                                                 " and " + std::to_string(b) +
                                                 " boundary components is not a possible 2-stratum");
  } else {
    if (chi == 1 && b == 0) c.kind = SurfaceType::ProjectivePlane;
    else if (chi == 0 && b == 1) c.kind = SurfaceType::MobiusBand;
    else if (chi == 0 && b == 0) c.kind = SurfaceType::KleinBottle;
    else throw Error(ErrorCode::NotASurface, "nonorientable surface with chi " + std::to_string(chi) +
                                                 " and " + std::to_string(b) +
                                                 " boundary components is not a possible 2-stratum");
  }
  if ((c.kind == SurfaceType::Sphere || c.kind == SurfaceType::ProjectivePlane) &&
      focus_focus_count == 0) {
    c.constraint_violation = true;
    c.note = std::string("a ") + to_string(c.kind) + " base must contain focus-focus points";
  }
  return c;
}

CellComplex product(const CellComplex& x, const CellComplex& y) {
  CellComplex p;
  const std::size_t ny = y.size();
  for (std::size_t a = 0; a < x.size(); ++a)
    for (std::size_t b = 0; b < ny; ++b) p.add_cell(x.id(a) + "*" + y.id(b), x.dim(a) + y.dim(b));
  for (std::size_t a = 0; a < x.size(); ++a)
    for (std::size_t b = 0; b < ny; ++b) {
      const std::size_t c = a * ny + b;
      for (const auto& f : x.faces(a)) p.set_incidence(c, f.cell * ny + b, f.coefficient);
      const int sign = x.dim(a) % 2 == 0 ? 1 : -1;
      for (const auto& f : y.faces(b)) p.set_incidence(c, a * ny + f.cell, sign * f.coefficient);
    }
  for (std::size_t a = 0; a < x.size(); ++a)
    for (std::size_t b = 0; b < ny; ++b) {
      const std::size_t c = a * ny + b;
      if (x.dim(a) == 1 && y.dim(b) == 1) {
        const std::size_t u0 = x.tail(a), u1 = x.head(a), v0 = y.tail(b), v1 = y.head(b);
        p.set_boundary_word(c, {{a * ny + v0, 1}, {u1 * ny + b, 1}, {a * ny + v1, -1},
                                {u0 * ny + b, -1}});
      } else if (x.dim(a) == 2 && y.dim(b) == 0 && x.has_boundary_word(a)) {
        std::vector<SignedEdge> w;
        for (const auto& l : x.boundary_word(a)) w.push_back({l.edge * ny + b, l.sign});
        p.set_boundary_word(c, w);
      } else if (x.dim(a) == 0 && y.dim(b) == 2 && y.has_boundary_word(b)) {
        std::vector<SignedEdge> w;
        for (const auto& l : y.boundary_word(b)) w.push_back({a * ny + l.edge, l.sign});
        p.set_boundary_word(c, w);
      }
    }
  return p;
}

CellComplex disjoint_union(const CellComplex& x, const CellComplex& y,
                           const std::string& left_prefix, const std::string& right_prefix) {
  CellComplex u;
  for (std::size_t c = 0; c < x.size(); ++c) u.add_cell(left_prefix + x.id(c), x.dim(c));
  for (std::size_t c = 0; c < y.size(); ++c) u.add_cell(right_prefix + y.id(c), y.dim(c));
  const std::size_t off = x.size();
  for (std::size_t c = 0; c < x.size(); ++c)
    for (const auto& f : x.faces(c)) u.set_incidence(c, f.cell, f.coefficient);
  for (std::size_t c = 0; c < y.size(); ++c)
    for (const auto& f : y.faces(c)) u.set_incidence(off + c, off + f.cell, f.coefficient);
  for (const auto& [f, w] : x.boundary_words()) u.set_boundary_word(f, w);
  for (const auto& [f, w] : y.boundary_words()) {
    std::vector<SignedEdge> shifted;
    for (const auto& l : w) shifted.push_back({off + l.edge, l.sign});
    u.set_boundary_word(off + f, shifted);
  }
  return u;
}

Quotient quotient_by_free_involution(const CellComplex& x, const std::vector<std::size_t>& sigma) {
  const std::size_t n = x.size();
  if (sigma.size() != n)
    throw Error(ErrorCode::DimensionMismatch, "involution must map every cell");
  for (std::size_t c = 0; c < n; ++c) {
    if (sigma[c] >= n || sigma[sigma[c]] != c)
      throw Error(ErrorCode::InvalidInput, "map is not an involution at cell '" + x.id(c) + "'");
    if (sigma[c] == c) throw Error(ErrorCode::FixedCell, "cell '" + x.id(c) + "' is fixed");
    if (x.dim(sigma[c]) != x.dim(c))
      throw Error(ErrorCode::InvalidInput, "involution changes the dimension of '" + x.id(c) + "'");
  }
  // Chain-map signs: sigma_#(c) = eps(c) * sigma(c).
  std::vector<int> eps(n, 0);
  for (int k = 0; k <= x.dimension(); ++k)
    for (auto c : x.cells_of_dim(k)) {
      if (k == 0) {
        eps[c] = 1;
        continue;
      }
      if (x.faces(c).size() != x.faces(sigma[c]).size())
        throw Error(ErrorCode::InvalidInput, "involution does not preserve the boundary of '" + x.id(c) + "'");
      for (const auto& f : x.faces(c)) {
        const int image = x.incidence(sigma[c], sigma[f.cell]);
        if (image == 0)
          throw Error(ErrorCode::InvalidInput, "involution does not preserve the boundary of '" + x.id(c) + "'");
        const int e = image * eps[f.cell] * f.coefficient;
        if (eps[c] == 0) eps[c] = e;
        if (eps[c] != e)
          throw Error(ErrorCode::InvalidInput, "involution does not commute with incidence at '" + x.id(c) + "'");
      }
    }
  Quotient q;
  q.cell_map.assign(n, 0);
  q.sign.assign(n, 1);
  for (std::size_t c = 0; c < n; ++c)
    if (c < sigma[c]) q.cell_map[c] = q.complex.add_cell(x.id(c), x.dim(c));
  for (std::size_t c = 0; c < n; ++c)
    if (c > sigma[c]) {
      if (eps[c] != eps[sigma[c]])
        throw Error(ErrorCode::InvalidInput, "involution signs are inconsistent at '" + x.id(c) + "'");
      q.cell_map[c] = q.cell_map[sigma[c]];
      q.sign[c] = eps[c];
    }
  for (std::size_t c = 0; c < n; ++c) {
    if (c > sigma[c]) continue;
    for (const auto& f : x.faces(c)) {
      const std::size_t tc = q.cell_map[c], tf = q.cell_map[f.cell];
      if (q.complex.incidence(tc, tf) != 0)
        throw Error(ErrorCode::InvalidInput, "quotient is not regular: '" + x.id(c) +
                                                 "' meets both '" + x.id(f.cell) + "' and its image");
      q.complex.set_incidence(tc, tf, f.coefficient * q.sign[f.cell]);
    }
  }
  for (const auto& [f, w] : x.boundary_words()) {
    if (f > sigma[f]) continue;
    std::vector<SignedEdge> img;
    for (const auto& l : w) img.push_back({q.cell_map[l.edge], l.sign * q.sign[l.edge]});
    q.complex.set_boundary_word(q.cell_map[f], img);
  }
  return q;
}

AbelianGroup GroupPresentation::abelianization() const {
  IntegerMatrix rel(relators.size(), generators.size());
  for (std::size_t r = 0; r < relators.size(); ++r)
    for (const auto& l : relators[r]) rel(r, l.generator) += l.power;
  return cokernel(rel);
}

std::string GroupPresentation::to_string() const {
  std::ostringstream os;
  os << '<';
  for (std::size_t i = 0; i < generators.size(); ++i) os << (i ? ", " : "") << generators[i];
  os << " | ";
  for (std::size_t r = 0; r < relators.size(); ++r) {
    if (r) os << ", ";
    if (relators[r].empty()) os << '1';
    for (std::size_t i = 0; i < relators[r].size(); ++i) {
      os << (i ? " " : "") << generators[relators[r][i].generator];
      if (relators[r][i].power < 0) os << "^-1";
    }
  }
  os << '>';
  return os.str();
}

GroupPresentation pi1_presentation(const CellComplex& x, std::size_t basepoint) {
  if (basepoint >= x.size() || x.dim(basepoint) != 0)
    throw Error(ErrorCode::InvalidInput, "basepoint must be a vertex");
  if (x.dimension() > 2) throw Error(ErrorCode::InvalidInput, "presentations need dimension <= 2");
  std::vector<bool> seen(x.size(), false), tree(x.size(), false);
  std::deque<std::size_t> queue{basepoint};
  seen[basepoint] = true;
  while (!queue.empty()) {
    auto v = queue.front();
    queue.pop_front();
    for (const auto& e : x.cofaces(v))
      for (const auto& w : x.faces(e.cell))
        if (!seen[w.cell]) {
          seen[w.cell] = true;
          tree[e.cell] = true;
          queue.push_back(w.cell);
        }
  }
  for (auto v : x.cells_of_dim(0))
    if (!seen[v]) throw Error(ErrorCode::Disconnected, "vertex '" + x.id(v) + "' is unreachable");
  GroupPresentation p;
  std::vector<std::size_t> gen(x.size(), 0);
  for (auto e : x.cells_of_dim(1))
    if (!tree[e]) {
      gen[e] = p.generators.size();
      p.generators.push_back(x.id(e));
    }
  for (auto f : x.cells_of_dim(2)) {
    std::vector<Letter> rel;
    for (const auto& l : x.boundary_word(f))
      if (!tree[l.edge]) rel.push_back({gen[l.edge], l.sign});
    p.relators.push_back(std::move(rel));
  }
  return p;
}

namespace {

struct LoopBuilder {
  const CellComplex& x;
  const SurfaceData& s;
  std::vector<bool> in_tree;     // primal tree edges
  std::vector<bool> in_cotree;   // dual tree edges
  std::vector<std::size_t> parent_face, parent_edge;
  std::size_t base;

  // Dual tree path from the basepoint face to f (faces, crossed edges).
  std::pair<std::vector<std::size_t>, std::vector<std::size_t>> path_to(std::size_t f) const {
    std::vector<std::size_t> faces{f}, edges;
    while (f != base) {
      edges.push_back(parent_edge[f]);
      f = parent_face[f];
      faces.push_back(f);
    }
    std::reverse(faces.begin(), faces.end());
    std::reverse(edges.begin(), edges.end());
    return {faces, edges};
  }

  // Edge of face f at vertex v that is crossed first when turning around v.
  std::size_t first_turn(std::size_t f, std::size_t v) const {
    auto [a, b] = edges_at(x, f, v);
    if (!s.orientable) return a;
    // Counterclockwise turn: cross the edge entering v along the positive
    // boundary of f.
    const int o = s.face_orientation[f];
    return o * x.incidence(f, a) * x.incidence(a, v) == 1 ? a : b;
  }

  // Full turn around an interior vertex starting in face f: (edge, next face).
  std::vector<std::pair<std::size_t, std::size_t>> circle(std::size_t v, std::size_t f) const {
    std::vector<std::pair<std::size_t, std::size_t>> steps;
    std::size_t e = first_turn(f, v), g = f;
    do {
      std::size_t h = across(x, e, g);
      steps.push_back({e, h});
      auto [a, b] = edges_at(x, h, v);
      e = a == e ? b : a;
      g = h;
    } while (g != f);
    return steps;
  }

  FaceLoop close(FaceLoop::Kind kind, std::vector<std::size_t> faces, std::vector<std::size_t> edges,
                 const std::vector<std::size_t>& prefix_faces,
                 const std::vector<std::size_t>& prefix_edges) const {
    FaceLoop l{kind, prefix_faces, prefix_edges, std::nullopt};
    l.faces.insert(l.faces.end(), faces.begin() + 1, faces.end());
    l.edges.insert(l.edges.end(), edges.begin(), edges.end());
    for (std::size_t i = prefix_edges.size(); i-- > 0;) {
      l.edges.push_back(prefix_edges[i]);
      l.faces.push_back(prefix_faces[i]);
    }
    return l;
  }
};

}  // namespace

LoopSet dual_loops(const CellComplex& x, std::size_t basepoint_face) {
  SurfaceData s = analyze_surface(x);
  if (basepoint_face >= x.size() || x.dim(basepoint_face) != 2)
    throw Error(ErrorCode::InvalidInput, "basepoint must be a 2-cell");
  LoopBuilder b{x, s, std::vector<bool>(x.size(), false), std::vector<bool>(x.size(), false),
                std::vector<std::size_t>(x.size(), 0), std::vector<std::size_t>(x.size(), 0),
                basepoint_face};
  std::vector<bool> is_boundary(x.size(), false);
  for (auto e : s.boundary_edges) is_boundary[e] = true;

  // Primal tree on the surface with each boundary component collapsed.
  UnionFind uf(x.size());
  for (auto e : s.boundary_edges) uf.unite(x.head(e), x.tail(e));
  UnionFind boundary_uf = uf;
  for (auto e : x.cells_of_dim(1))
    if (!is_boundary[e] && uf.unite(x.head(e), x.tail(e))) b.in_tree[e] = true;

  // Dual tree on the remaining interior edges.
  std::vector<bool> reached(x.size(), false);
  std::deque<std::size_t> queue{basepoint_face};
  reached[basepoint_face] = true;
  while (!queue.empty()) {
    auto f = queue.front();
    queue.pop_front();
    for (const auto& e : x.faces(f)) {
      if (is_boundary[e.cell] || b.in_tree[e.cell]) continue;
      auto g = across(x, e.cell, f);
      if (reached[g]) continue;
      reached[g] = true;
      b.in_cotree[e.cell] = true;
      b.parent_face[g] = f;
      b.parent_edge[g] = e.cell;
      queue.push_back(g);
    }
  }
  for (auto f : x.cells_of_dim(2))
    if (!reached[f]) throw Error(ErrorCode::NotASurface, "dual graph is disconnected");

  LoopSet out;
  out.basepoint_face = basepoint_face;
  for (auto e : x.cells_of_dim(1)) {
    if (is_boundary[e] || b.in_tree[e] || b.in_cotree[e]) continue;
    auto f = x.cofaces(e)[0].cell, g = x.cofaces(e)[1].cell;
    auto [pf, pe] = b.path_to(f);
    auto [qf, qe] = b.path_to(g);
    FaceLoop l{FaceLoop::Kind::Generator, pf, pe, std::nullopt};
    l.edges.push_back(e);
    for (std::size_t i = qf.size(); i-- > 0;) {
      l.faces.push_back(qf[i]);
      if (i > 0) l.edges.push_back(qe[i - 1]);
    }
    out.generators.push_back(std::move(l));
  }

  // Loops parallel to all boundary components but one.
  if (s.boundary_components > 1) {
    std::set<std::size_t> done_roots;
    for (auto start : s.boundary_edges) {
      const auto root = boundary_uf.find(x.head(start));
      if (done_roots.count(root)) continue;
      done_roots.insert(root);
      if (done_roots.size() == 1) continue;
      std::vector<std::size_t> faces{x.cofaces(start)[0].cell}, edges;
      std::size_t e = start, w = x.head(start);
      do {
        // Next boundary edge at w.
        std::size_t next = e;
        for (const auto& c : x.cofaces(w))
          if (is_boundary[c.cell] && c.cell != e) next = c.cell;
        std::size_t g = faces.back(), came = e;
        for (;;) {
          auto [a, bb] = edges_at(x, g, w);
          std::size_t other = a == came ? bb : a;
          if (other == next) break;
          g = across(x, other, g);
          edges.push_back(other);
          faces.push_back(g);
          came = other;
        }
        w = x.head(next) == w ? x.tail(next) : x.head(next);
        e = next;
      } while (e != start);
      auto [pf, pe] = b.path_to(faces.front());
      out.generators.push_back(b.close(FaceLoop::Kind::Generator, faces, edges, pf, pe));
    }
  }

  const bool closed = s.boundary_edges.empty();
  if (closed && s.orientable) {
    // Walk around the primal tree counterclockwise; each vertex loop is based
    // along the walk so far.
    std::vector<std::size_t> pf{basepoint_face}, pe;
    std::vector<FaceLoop> preorder;
    std::function<void(std::size_t, std::optional<std::size_t>)> visit =
        [&](std::size_t v, std::optional<std::size_t> parent) {
          const std::size_t arrival = pf.back();
          auto steps = b.circle(v, arrival);
          std::vector<std::size_t> cf{arrival}, ce;
          for (const auto& [e, h] : steps) {
            ce.push_back(e);
            cf.push_back(h);
          }
          FaceLoop l = b.close(FaceLoop::Kind::Vertex, cf, ce, pf, pe);
          l.vertex = v;
          preorder.push_back(std::move(l));
          for (const auto& [e, h] : steps) {
            if (parent && e == *parent) break;
            if (b.in_tree[e]) {
              visit(x.head(e) == v ? x.tail(e) : x.head(e), e);
              if (pf.back() != h)
                throw Error(ErrorCode::NotASurface, "inconsistent rotation at '" + x.id(v) + "'");
            } else {
              pe.push_back(e);
              pf.push_back(h);
            }
          }
        };
    visit(x.tail(x.faces(basepoint_face)[0].cell), std::nullopt);
    out.vertex_loops.assign(preorder.rbegin(), preorder.rend());
    out.vertex_product_trivial = euler_characteristic(x) == 2;
  } else {
    for (auto v : x.cells_of_dim(0)) {
      if (!s.interior_vertex[v]) continue;
      const std::size_t f = x.cofaces(x.cofaces(v)[0].cell)[0].cell;
      auto steps = b.circle(v, f);
      std::vector<std::size_t> cf{f}, ce;
      for (const auto& [e, h] : steps) {
        ce.push_back(e);
        cf.push_back(h);
      }
      auto [pf, pe] = b.path_to(f);
      FaceLoop l = b.close(FaceLoop::Kind::Vertex, cf, ce, pf, pe);
      l.vertex = v;
      out.vertex_loops.push_back(std::move(l));
    }
  }
  return out;
}

}  // namespace intaff

namespace intaff {

std::size_t add_edge(CellComplex& x, const std::string& id, std::size_t tail, std::size_t head) {
  if (tail == head) throw Error(ErrorCode::InvalidInput, "edge '" + id + "' is a loop");
  std::size_t e = x.add_cell(id, 1);
  x.set_incidence(e, head, 1);
  x.set_incidence(e, tail, -1);
  return e;
}

std::optional<std::size_t> edge_between(const CellComplex& x, std::size_t a, std::size_t b) {
  for (const auto& e : x.cofaces(a))
    if (x.dim(e.cell) == 1 && x.incidence(e.cell, b) != 0) return e.cell;
  return std::nullopt;
}

std::size_t add_polygon(CellComplex& x, const std::string& id,
                        const std::vector<std::size_t>& cycle) {
  std::vector<SignedEdge> word;
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    const std::size_t a = cycle[i], b = cycle[(i + 1) % cycle.size()];
    auto e = edge_between(x, a, b);
    if (!e)
      throw Error(ErrorCode::InvalidInput, "polygon '" + id + "' needs an edge between '" +
                                               x.id(a) + "' and '" + x.id(b) + "'");
    word.push_back({*e, x.head(*e) == b ? 1 : -1});
  }
  std::size_t f = x.add_cell(id, 2);
  for (const auto& l : word) x.set_incidence(f, l.edge, x.incidence(f, l.edge) + l.sign);
  x.set_boundary_word(f, std::move(word));
  return f;
}

CellComplex point_complex() {
  CellComplex x;
  x.add_cell("p", 0);
  return x;
}

CellComplex interval_complex() {
  CellComplex x;
  auto a = x.add_cell("a", 0);
  auto b = x.add_cell("b", 0);
  add_edge(x, "ab", a, b);
  return x;
}

CellComplex circle_complex(std::size_t n) {
  if (n < 3) throw Error(ErrorCode::InvalidInput, "a regular circle needs at least 3 vertices");
  CellComplex x;
  for (std::size_t i = 0; i < n; ++i) x.add_cell("c" + std::to_string(i), 0);
  for (std::size_t i = 0; i < n; ++i)
    add_edge(x, "e" + std::to_string(i), i, (i + 1) % n);
  return x;
}

namespace {

std::string sign_id(const std::array<int, 3>& p) {
  std::string s = "v";
  for (int c : p) s += c > 0 ? '+' : '-';
  return s;
}

}  // namespace

CellComplex cube_surface() {
  CellComplex x;
  for (int a : {-1, 1})
    for (int b : {-1, 1})
      for (int c : {-1, 1}) x.add_cell(sign_id({a, b, c}), 0);
  for (int axis = 0; axis < 3; ++axis)
    for (int s1 : {-1, 1})
      for (int s2 : {-1, 1}) {
        std::array<int, 3> lo{}, hi{};
        int k = 0;
        for (int d = 0; d < 3; ++d) {
          if (d == axis) {
            lo[d] = -1;
            hi[d] = 1;
          } else {
            lo[d] = hi[d] = (k++ == 0 ? s1 : s2);
          }
        }
        add_edge(x, "e" + sign_id(lo).substr(1) + sign_id(hi).substr(1),
                 x.index_of(sign_id(lo)), x.index_of(sign_id(hi)));
      }
  for (int axis = 0; axis < 3; ++axis)
    for (int s : {-1, 1}) {
      const int u = (axis + 1) % 3, w = (axis + 2) % 3;
      std::vector<std::size_t> cycle;
      for (auto [a, b] : {std::pair{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}) {
        std::array<int, 3> p{};
        p[axis] = s;
        p[u] = a;
        p[w] = b;
        cycle.push_back(x.index_of(sign_id(p)));
      }
      add_polygon(x, std::string("f") + "xyz"[axis] + (s > 0 ? '+' : '-'), cycle);
    }
  return x;
}

std::vector<std::size_t> cube_antipodal(const CellComplex& cube) {
  auto flip = [](std::string id) {
    for (auto& ch : id) ch = ch == '+' ? '-' : ch == '-' ? '+' : ch;
    return id;
  };
  std::vector<std::size_t> sigma(cube.size());
  for (std::size_t c = 0; c < cube.size(); ++c) {
    if (cube.dim(c) == 1) {
      // Edge ids list tail then head; the image runs between flipped endpoints.
      auto t = cube.tail(c), h = cube.head(c);
      sigma[c] = *edge_between(cube, cube.index_of(flip(cube.id(t))), cube.index_of(flip(cube.id(h))));
    } else {
      sigma[c] = cube.index_of(flip(cube.id(c)));
    }
  }
  return sigma;
}

CellComplex grid_complex(std::size_t nx, std::size_t ny, Wrap x_wrap, Wrap y_wrap) {
  if ((x_wrap != Wrap::None && nx < 3) || (y_wrap != Wrap::None && ny < 3) || nx == 0 || ny == 0)
    throw Error(ErrorCode::InvalidInput, "wrapped grid directions need at least 3 cells");
  auto canonical = [&](long i, long j) {
    for (int guard = 0; guard < 4; ++guard) {
      bool changed = false;
      if (x_wrap != Wrap::None && i == static_cast<long>(nx)) {
        i = 0;
        if (x_wrap == Wrap::Flipped) j = static_cast<long>(ny) - j;
        changed = true;
      }
      if (y_wrap != Wrap::None && j == static_cast<long>(ny)) {
        j = 0;
        if (y_wrap == Wrap::Flipped) i = (static_cast<long>(nx) - i) % static_cast<long>(nx);
        changed = true;
      }
      if (!changed) break;
    }
    return std::pair{i, j};
  };
  auto vid = [](long i, long j) { return "v" + std::to_string(i) + "," + std::to_string(j); };
  CellComplex x;
  for (std::size_t j = 0; j <= ny; ++j)
    for (std::size_t i = 0; i <= nx; ++i) {
      auto [ci, cj] = canonical(i, j);
      if (!x.find(vid(ci, cj))) x.add_cell(vid(ci, cj), 0);
    }
  auto vertex = [&](long i, long j) {
    auto [ci, cj] = canonical(i, j);
    return x.index_of(vid(ci, cj));
  };
  auto ensure_edge = [&](const std::string& id, std::size_t a, std::size_t b) {
    if (!edge_between(x, a, b)) add_edge(x, id, a, b);
  };
  for (std::size_t j = 0; j <= ny; ++j)
    for (std::size_t i = 0; i <= nx; ++i) {
      const std::string suffix = std::to_string(i) + "," + std::to_string(j);
      if (i < nx) ensure_edge("h" + suffix, vertex(i, j), vertex(i + 1, j));
      if (j < ny) ensure_edge("u" + suffix, vertex(i, j), vertex(i, j + 1));
    }
  for (std::size_t j = 0; j < ny; ++j)
    for (std::size_t i = 0; i < nx; ++i)
      add_polygon(x, "f" + std::to_string(i) + "," + std::to_string(j),
                  {vertex(i, j), vertex(i + 1, j), vertex(i + 1, j + 1), vertex(i, j + 1)});
  return x;
}

}  // namespace intaff
