#include "intaff/document.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace intaff {

namespace {

using Json = nlohmann::ordered_json;

// ---- writing ----

Json number(const Rational& q) { return to_string(q); }
Json number(const Integer& n) { return n.get_str(); }

template <typename T>
Json vector_json(const std::vector<T>& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(number(x));
  return out;
}

template <typename T>
Json matrix_json(const Matrix<T>& m) {
  Json out = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(number(m(r, c)));
    out.push_back(std::move(row));
  }
  return out;
}

Json complex_json(const CellComplex& x) {
  Json cells = Json::array(), incidence = Json::array();
  for (std::size_t c = 0; c < x.size(); ++c) cells.push_back(Json::array({x.id(c), x.dim(c)}));
  for (std::size_t c = 0; c < x.size(); ++c)
    for (const auto& f : x.faces(c)) incidence.push_back(Json::array({x.id(c), x.id(f.cell), f.coefficient}));
  Json out{{"cells", cells}, {"incidence", incidence}};
  if (!x.boundary_words().empty()) {
    Json words = Json::object();
    for (const auto& [face, word] : x.boundary_words()) {
      Json w = Json::array();
      for (const auto& l : word) w.push_back(Json::array({x.id(l.edge), l.sign}));
      words[x.id(face)] = w;
    }
    out["boundary_words"] = words;
  }
  return out;
}

Json sheaf_json(const CellularSheaf& f, bool embed_complex) {
  const CellComplex& x = f.base();
  Json out = Json::object();
  out["ring"] = f.ring().name();
  if (embed_complex) out["complex"] = complex_json(x);
  Json stalks = Json::object();
  for (std::size_t c = 0; c < x.size(); ++c) stalks[x.id(c)] = f.stalk(c);
  out["stalks"] = stalks;
  Json restrictions = Json::array();
  for (const auto& [key, m] : f.restrictions())
    restrictions.push_back({{"from", x.id(key.first)}, {"to", x.id(key.second)}, {"matrix", matrix_json(m)}});
  out["restrictions"] = restrictions;
  return out;
}

Json affine_json(const AffineSurface& s) {
  const CellComplex& x = *s.base;
  Json charts = Json::object();
  for (const auto& [face, coords] : s.charts) {
    Json c = Json::object();
    for (const auto& [v, p] : coords) c[x.id(v)] = vector_json(p);
    charts[x.id(face)] = c;
  }
  Json transitions = Json::object();
  for (const auto& [edge, t] : s.transitions)
    transitions[x.id(edge)] = {
        {"from", x.id(t.from)}, {"to", x.id(t.to)}, {"A", matrix_json(t.map.A)}, {"t", vector_json(t.map.t)}};
  Json marks = Json::object();
  for (std::size_t c = 0; c < x.size(); ++c) {
    const SingularityMark& m = s.marks[c];
    if (m.kind == MarkKind::Regular) continue;
    Json j{{"kind", to_string(m.kind)}};
    if (m.kind == MarkKind::FocusFocus) j["multiplicity"] = m.multiplicity;
    if (m.covector) j["covector"] = vector_json(*m.covector);
    marks[x.id(c)] = j;
  }
  Json out{{"charts", charts}, {"transitions", transitions}, {"markings", marks}};
  if (s.chern) out["chern"] = vector_json(*s.chern);
  return out;
}

// ---- reading ----

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw Error(ErrorCode::Parse, (path.empty() ? "/" : path) + ": " + msg);
}

std::string child(const std::string& path, const std::string& key) {
  std::string escaped;
  for (char ch : key) {
    if (ch == '~') escaped += "~0";
    else if (ch == '/') escaped += "~1";
    else escaped += ch;
  }
  return path + "/" + escaped;
}
std::string child(const std::string& path, std::size_t i) { return path + "/" + std::to_string(i); }

const Json& field(const Json& j, const std::string& path, const std::string& key) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(path, "missing \"" + key + "\"");
  return *it;
}

const Json* optional_field(const Json& j, const std::string& path, const std::string& key) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

const Json& array(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
  return j;
}

const Json& object(const Json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  return j;
}

std::string text(const Json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

long count(const Json& j, const std::string& path, long lo, long hi) {
  if (!j.is_number_integer()) fail(path, "expected a whole number");
  const long v = j.get<long>();
  if (v < lo || v > hi) fail(path, "value " + std::to_string(v) + " out of range");
  return v;
}

std::string numeric_text(const Json& j, const std::string& path) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return j.dump();
  fail(path, "expected a decimal string such as \"3\" or \"-1/2\"");
}

Rational rational(const Json& j, const std::string& path) {
  try {
    return parse_rational(numeric_text(j, path));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Parse && std::string(e.what()).rfind(path, 0) == 0) throw;
    fail(path, e.what());
  }
}

Integer integer(const Json& j, const std::string& path) {
  try {
    return parse_integer(numeric_text(j, path));
  } catch (const Error& e) {
    if (std::string(e.what()).rfind(path, 0) == 0) throw;
    fail(path, e.what());
  }
}

RationalVector rational_vector(const Json& j, const std::string& path) {
  RationalVector out;
  for (std::size_t i = 0; i < array(j, path).size(); ++i) out.push_back(rational(j[i], child(path, i)));
  return out;
}

IntegerVector integer_vector(const Json& j, const std::string& path) {
  IntegerVector out;
  for (std::size_t i = 0; i < array(j, path).size(); ++i) out.push_back(integer(j[i], child(path, i)));
  return out;
}

template <typename T, typename Entry>
Matrix<T> matrix(const Json& j, const std::string& path, std::size_t rows, std::size_t cols, Entry entry) {
  if (array(j, path).size() != rows)
    fail(path, "expected " + std::to_string(rows) + " rows, got " + std::to_string(j.size()));
  Matrix<T> m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::string rp = child(path, r);
    if (array(j[r], rp).size() != cols)
      fail(rp, "expected " + std::to_string(cols) + " entries, got " + std::to_string(j[r].size()));
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = entry(j[r][c], child(rp, c));
  }
  return m;
}

RationalMatrix rational_matrix(const Json& j, const std::string& path, std::size_t rows, std::size_t cols) {
  return matrix<Rational>(j, path, rows, cols, rational);
}
IntegerMatrix integer_matrix(const Json& j, const std::string& path, std::size_t rows, std::size_t cols) {
  return matrix<Integer>(j, path, rows, cols, integer);
}

std::size_t cell(const CellComplex& x, const Json& j, const std::string& path) {
  const std::string id = text(j, path);
  auto c = x.find(id);
  if (!c) fail(path, "unknown cell '" + id + "'");
  return *c;
}

std::size_t cell_key(const CellComplex& x, const std::string& id, const std::string& path) {
  auto c = x.find(id);
  if (!c) fail(path, "unknown cell '" + id + "'");
  return *c;
}

std::shared_ptr<CellComplex> parse_complex(const Json& j, const std::string& path) {
  auto x = std::make_shared<CellComplex>();
  const std::string cp = child(path, "cells");
  const Json& cells = array(field(j, path, "cells"), cp);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const std::string p = child(cp, i);
    if (!cells[i].is_array() || cells[i].size() != 2) fail(p, "expected [id, dimension]");
    const std::string id = text(cells[i][0], child(p, 0));
    if (x->find(id)) fail(p, "duplicate cell id '" + id + "'");
    x->add_cell(id, static_cast<int>(count(cells[i][1], child(p, 1), 0, 64)));
  }
  if (const Json* inc = optional_field(j, path, "incidence")) {
    const std::string ip = child(path, "incidence");
    for (std::size_t i = 0; i < array(*inc, ip).size(); ++i) {
      const std::string p = child(ip, i);
      const Json& row = (*inc)[i];
      if (!row.is_array() || row.size() != 3) fail(p, "expected [cell, face, coefficient]");
      const auto tau = cell(*x, row[0], child(p, 0)), sigma = cell(*x, row[1], child(p, 1));
      const long c = count(row[2], child(p, 2), -1, 1);
      if (c == 0) fail(child(p, 2), "coefficient must be -1 or +1");
      try {
        x->set_incidence(tau, sigma, static_cast<int>(c));
      } catch (const Error& e) {
        fail(p, e.what());
      }
    }
  }
  if (const Json* words = optional_field(j, path, "boundary_words")) {
    const std::string wp = child(path, "boundary_words");
    for (const auto& [id, word] : object(*words, wp).items()) {
      const std::string p = child(wp, id);
      const std::size_t face = cell_key(*x, id, p);
      if (x->dim(face) != 2) fail(p, "boundary words are only defined for 2-cells");
      std::vector<SignedEdge> w;
      for (std::size_t i = 0; i < array(word, p).size(); ++i) {
        const std::string lp = child(p, i);
        if (!word[i].is_array() || word[i].size() != 2) fail(lp, "expected [edge, sign]");
        const std::size_t e = cell(*x, word[i][0], child(lp, 0));
        if (x->dim(e) != 1) fail(child(lp, 0), "'" + x->id(e) + "' is not an edge");
        const long s = count(word[i][1], child(lp, 1), -1, 1);
        if (s == 0) fail(child(lp, 1), "sign must be -1 or +1");
        w.push_back({e, static_cast<int>(s)});
      }
      x->set_boundary_word(face, std::move(w));
    }
  }
  return x;
}

Ring parse_ring(const Json& j, const std::string& path) {
  const std::string r = text(j, path);
  if (r == "Z") return Ring::integers();
  if (r == "Q") return Ring::rationals();
  if (r.rfind("Z/", 0) == 0) {
    try {
      return Ring::prime_field(parse_integer(r.substr(2)));
    } catch (const Error& e) {
      fail(path, e.what());
    }
  }
  fail(path, "unknown ring '" + r + "' (expected Z, Q or Z/p)");
}

std::shared_ptr<CellularSheaf> parse_sheaf(const Json& j, const std::string& path,
                                           std::shared_ptr<const CellComplex> top) {
  object(j, path);
  std::shared_ptr<const CellComplex> base = top;
  if (const Json* c = optional_field(j, path, "complex")) base = parse_complex(*c, child(path, "complex"));
  if (!base) fail(path, "no \"complex\" section for this sheaf");
  auto f = std::make_shared<CellularSheaf>(base, parse_ring(field(j, path, "ring"), child(path, "ring")));
  const std::string sp = child(path, "stalks");
  for (const auto& [id, rank] : object(field(j, path, "stalks"), sp).items()) {
    const std::string p = child(sp, id);
    f->set_stalk(cell_key(*base, id, p), static_cast<std::size_t>(count(rank, p, 0, 1 << 20)));
  }
  if (const Json* rs = optional_field(j, path, "restrictions")) {
    const std::string rp = child(path, "restrictions");
    for (std::size_t i = 0; i < array(*rs, rp).size(); ++i) {
      const std::string p = child(rp, i);
      const Json& r = object((*rs)[i], p);
      const auto sigma = cell(*base, field(r, p, "from"), child(p, "from"));
      const auto tau = cell(*base, field(r, p, "to"), child(p, "to"));
      RationalMatrix m = rational_matrix(field(r, p, "matrix"), child(p, "matrix"), f->stalk(tau), f->stalk(sigma));
      try {
        f->set_restriction(sigma, tau, std::move(m));
      } catch (const Error& e) {
        fail(p, e.what());
      }
    }
  }
  return f;
}

AffineSurface parse_affine(const Json& j, const std::string& path, std::shared_ptr<const CellComplex> base) {
  object(j, path);
  if (!base) fail(path, "the affine section needs a \"complex\" section");
  AffineSurface s(base);
  const CellComplex& x = *base;
  if (const Json* charts = optional_field(j, path, "charts")) {
    const std::string cp = child(path, "charts");
    for (const auto& [fid, coords] : object(*charts, cp).items()) {
      const std::string fp = child(cp, fid);
      const std::size_t face = cell_key(x, fid, fp);
      if (x.dim(face) != 2) fail(fp, "charts are attached to 2-cells");
      auto& chart = s.charts[face];
      for (const auto& [vid, p] : object(coords, fp).items()) {
        const std::string vp = child(fp, vid);
        const std::size_t v = cell_key(x, vid, vp);
        RationalVector point = rational_vector(p, vp);
        if (point.size() != 2) fail(vp, "expected 2 coordinates");
        chart[v] = point;
      }
    }
  }
  if (const Json* ts = optional_field(j, path, "transitions")) {
    const std::string tp = child(path, "transitions");
    for (const auto& [eid, t] : object(*ts, tp).items()) {
      const std::string p = child(tp, eid);
      const std::size_t edge = cell_key(x, eid, p);
      const auto from = cell(x, field(t, p, "from"), child(p, "from"));
      const auto to = cell(x, field(t, p, "to"), child(p, "to"));
      AffineMap m;
      m.A = integer_matrix(field(t, p, "A"), child(p, "A"), 2, 2);
      m.t = rational_vector(field(t, p, "t"), child(p, "t"));
      if (m.t.size() != 2) fail(child(p, "t"), "expected 2 coordinates");
      s.set_transition(edge, from, to, std::move(m));
    }
  }
  if (const Json* ms = optional_field(j, path, "markings")) {
    const std::string mp = child(path, "markings");
    for (const auto& [cid, m] : object(*ms, mp).items()) {
      const std::string p = child(mp, cid);
      const std::size_t c = cell_key(x, cid, p);
      SingularityMark mark;
      const std::string kind = text(field(m, p, "kind"), child(p, "kind"));
      auto k = parse_mark_kind(kind);
      if (!k) fail(child(p, "kind"), "unknown marking '" + kind + "'");
      mark.kind = *k;
      if (const Json* mult = optional_field(m, p, "multiplicity"))
        mark.multiplicity = static_cast<int>(count(*mult, child(p, "multiplicity"), 1, 1 << 20));
      if (const Json* cov = optional_field(m, p, "covector")) {
        mark.covector = integer_vector(*cov, child(p, "covector"));
        if (mark.covector->size() != 2) fail(child(p, "covector"), "expected 2 coordinates");
      }
      s.marks[c] = mark;
    }
  }
  if (const Json* c = optional_field(j, path, "chern")) s.chern = rational_vector(*c, child(path, "chern"));
  return s;
}

LatticePolytope parse_polytope(const Json& j, const std::string& path) {
  LatticePolytope p;
  p.dimension = static_cast<std::size_t>(count(field(j, path, "dimension"), child(path, "dimension"), 1, 64));
  const std::string hp = child(path, "halfspaces");
  const Json& hs = array(field(j, path, "halfspaces"), hp);
  for (std::size_t i = 0; i < hs.size(); ++i) {
    const std::string ip = child(hp, i);
    Halfspace h{integer_vector(field(hs[i], ip, "a"), child(ip, "a")), rational(field(hs[i], ip, "b"), child(ip, "b"))};
    if (h.a.size() != p.dimension)
      fail(child(ip, "a"), "expected " + std::to_string(p.dimension) + " coordinates");
    p.halfspaces.push_back(std::move(h));
  }
  return p;
}

GluingSpec parse_gluing(const Json& j, const std::string& path) {
  GluingSpec g;
  g.first = parse_sheaf(field(j, path, "first"), child(path, "first"), nullptr);
  g.second = parse_sheaf(field(j, path, "second"), child(path, "second"), nullptr);
  const std::string op = child(path, "overlap");
  const Json& pairs = array(field(j, path, "overlap"), op);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const std::string p = child(op, i);
    if (!pairs[i].is_array() || pairs[i].size() != 2) fail(p, "expected [first cell, second cell]");
    g.overlap_first.push_back(cell(g.first->base(), pairs[i][0], child(p, 0)));
    g.overlap_second.push_back(cell(g.second->base(), pairs[i][1], child(p, 1)));
  }
  if (const Json* maps = optional_field(j, path, "stalk_maps")) {
    const std::string mp = child(path, "stalk_maps");
    if (array(*maps, mp).size() != pairs.size()) fail(mp, "expected one matrix per overlap pair");
    for (std::size_t i = 0; i < maps->size(); ++i)
      g.stalk_maps.push_back(rational_matrix((*maps)[i], child(mp, i), g.second->stalk(g.overlap_second[i]),
                                             g.first->stalk(g.overlap_first[i])));
  }
  return g;
}

std::string line_column(const std::string& input, std::size_t byte) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i + 1 < byte && i < input.size(); ++i) {
    if (input[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

}  // namespace

std::string serialize_document(const CatalogEntry& e) {
  Json doc = Json::object();
  doc["format"] = "intaff";
  doc["version"] = 1;
  doc["name"] = e.name;
  if (!e.description.empty()) doc["description"] = e.description;
  auto top = e.base();
  if (top) doc["complex"] = complex_json(*top);
  if (!e.sheaves.empty()) {
    Json sheaves = Json::object();
    for (const auto& [name, f] : e.sheaves) sheaves[name] = sheaf_json(*f, f->base_ptr() != top);
    doc["sheaf"] = sheaves;
  }
  if (e.surface) doc["affine"] = affine_json(*e.surface);
  if (e.polytope) {
    Json hs = Json::array();
    for (const auto& h : e.polytope->halfspaces) hs.push_back({{"a", vector_json(h.a)}, {"b", number(h.b)}});
    doc["polytope"] = {{"dimension", e.polytope->dimension}, {"halfspaces", hs}};
  }
  if (e.gluing) {
    const GluingSpec& g = *e.gluing;
    Json overlap = Json::array();
    for (std::size_t i = 0; i < g.overlap_first.size(); ++i)
      overlap.push_back(Json::array({g.first->base().id(g.overlap_first[i]), g.second->base().id(g.overlap_second[i])}));
    Json gj{{"first", sheaf_json(*g.first, true)}, {"second", sheaf_json(*g.second, true)}, {"overlap", overlap}};
    if (!g.stalk_maps.empty()) {
      Json maps = Json::array();
      for (const auto& m : g.stalk_maps) maps.push_back(matrix_json(m));
      gj["stalk_maps"] = maps;
    }
    doc["gluing"] = gj;
  }
  if (!e.classes.empty()) {
    Json classes = Json::object();
    for (const auto& [name, c] : e.classes)
      classes[name] = {{"sheaf", c.sheaf}, {"degree", c.degree}, {"values", vector_json(c.values)}};
    doc["classes"] = classes;
  }
  if (!e.expected.empty()) {
    Json expected = Json::array();
    for (const auto& x : e.expected)
      expected.push_back({{"invariant", x.invariant}, {"expected", x.expected}, {"source", x.source}});
    doc["expected"] = expected;
  }
  return doc.dump(1) + "\n";
}

CatalogEntry parse_document(const std::string& input) {
  Json doc;
  try {
    doc = Json::parse(input);
  } catch (const nlohmann::json::parse_error& e) {
    std::string what = e.what();
    auto colon = what.find(": ", what.find("parse error"));
    std::string detail = colon == std::string::npos ? what : what.substr(colon + 2);
    throw Error(ErrorCode::Parse, line_column(input, e.byte) + ": " + detail);
  }
  object(doc, "");
  static const std::set<std::string> known{"format", "version", "name", "description", "complex", "sheaf",
                                           "affine", "polytope", "gluing", "classes", "expected"};
  for (const auto& [key, value] : doc.items())
    if (!known.count(key)) fail(child("", key), "unknown section");
  if (const Json* f = optional_field(doc, "", "format"))
    if (text(*f, "/format") != "intaff") fail("/format", "expected \"intaff\"");
  if (const Json* v = optional_field(doc, "", "version")) count(*v, "/version", 1, 1);

  CatalogEntry e;
  if (const Json* n = optional_field(doc, "", "name")) e.name = text(*n, "/name");
  if (const Json* d = optional_field(doc, "", "description")) e.description = text(*d, "/description");
  std::shared_ptr<const CellComplex> top;
  if (const Json* c = optional_field(doc, "", "complex")) top = parse_complex(*c, "/complex");
  if (const Json* s = optional_field(doc, "", "sheaf"))
    for (const auto& [name, f] : object(*s, "/sheaf").items())
      e.sheaves[name] = parse_sheaf(f, child("/sheaf", name), top);
  if (const Json* a = optional_field(doc, "", "affine")) e.surface = parse_affine(*a, "/affine", top);
  if (const Json* p = optional_field(doc, "", "polytope")) e.polytope = parse_polytope(*p, "/polytope");
  if (const Json* g = optional_field(doc, "", "gluing")) e.gluing = parse_gluing(*g, "/gluing");
  if (const Json* cs = optional_field(doc, "", "classes")) {
    for (const auto& [name, c] : object(*cs, "/classes").items()) {
      const std::string p = child("/classes", name);
      NamedCocycle nc;
      nc.sheaf = text(field(c, p, "sheaf"), child(p, "sheaf"));
      if (nc.sheaf != "overlap" && !e.sheaves.count(nc.sheaf) && !(nc.sheaf == "R" && e.surface))
        fail(child(p, "sheaf"), "no sheaf named '" + nc.sheaf + "'");
      nc.degree = static_cast<int>(count(field(c, p, "degree"), child(p, "degree"), 0, 64));
      nc.values = rational_vector(field(c, p, "values"), child(p, "values"));
      e.classes[name] = std::move(nc);
    }
  }
  if (const Json* xs = optional_field(doc, "", "expected")) {
    for (std::size_t i = 0; i < array(*xs, "/expected").size(); ++i) {
      const std::string p = child("/expected", i);
      const Json& x = (*xs)[i];
      e.expected.push_back({text(field(x, p, "invariant"), child(p, "invariant")),
                            text(field(x, p, "expected"), child(p, "expected")),
                            text(field(x, p, "source"), child(p, "source"))});
    }
  }
  if (!top && !e.polytope && !e.gluing) fail("", "document has no complex, polytope or gluing section");
  return e;
}

CatalogEntry read_document(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Parse, "cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_document(buf.str());
}

}  // namespace intaff
