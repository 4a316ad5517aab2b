#include "intaff/cli.hpp"

#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "intaff/catalog.hpp"
#include "intaff/document.hpp"
#include "json.hpp"

namespace intaff {

namespace {

using Json = nlohmann::ordered_json;

struct Options {
  bool json = false;
  bool verbose = false;
  std::string file;
  // cohomology
  std::string sheaf;
  std::optional<int> degree;
  bool derive_r = false;
  bool generators = false;
  // glue
  std::string first_class = "c_minus";
  std::string second_class = "c_plus";
  // catalog, glue
  std::string name;
  bool verify = false;
  std::string export_file;
};

std::string matrix_text(const IntegerMatrix& m) {
  std::ostringstream os;
  os << m;
  return os.str();
}

// Group in the ring's own notation: Z-modules as "Z^r ⊕ Z/d", vector spaces
// as "Q^r" or "(Z/p)^r".
std::string group_text(const Cohomology& h) {
  const Ring& r = h.ring();
  if (r.kind() == Ring::Kind::Integers) return h.group().to_string();
  const std::size_t n = h.generator_count();
  if (n == 0) return "0";
  const std::string base = r.kind() == Ring::Kind::Rationals ? "Q" : "(" + r.name() + ")";
  return n == 1 ? (r.kind() == Ring::Kind::Rationals ? "Q" : r.name()) : base + "^" + std::to_string(n);
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::InvalidInput, "cannot write '" + path + "'");
  f << content;
  if (!f) throw Error(ErrorCode::InvalidInput, "cannot write '" + path + "'");
}

void print_json(std::ostream& out, const Json& j) { out << j.dump(2) << "\n"; }

Json strings(const std::vector<std::string>& v) {
  Json a = Json::array();
  for (const auto& s : v) a.push_back(s);
  return a;
}

// ---- check ----

struct Section {
  std::string name;
  Report report;
};

std::vector<Section> check_document(const CatalogEntry& e) {
  std::vector<Section> out;
  if (auto top = e.base()) out.push_back({"complex", validate(*top)});
  for (const auto& [name, f] : e.sheaves) out.push_back({"sheaf " + name, validate_sheaf(*f)});
  if (e.surface) out.push_back({"affine", validate_affine(*e.surface)});
  if (e.polytope) out.push_back({"polytope", validate_polytope(*e.polytope)});
  if (e.gluing) out.push_back({"gluing", validate_gluing(*e.gluing)});
  bool clean = std::all_of(out.begin(), out.end(), [](const Section& s) { return s.report.ok(); });
  for (const auto& [name, c] : e.classes) {
    Section s{"class " + name, {}};
    if (!clean) {
      s.report.add("skipped: earlier sections are invalid");
    } else {
      try {
        std::optional<CellularSheaf> f;
        if (c.sheaf == "overlap") {
          if (!e.gluing) throw Error(ErrorCode::InvalidInput, "class on the overlap without a gluing section");
          f = overlap_sheaf(*e.gluing);
        } else if (e.sheaves.count(c.sheaf)) {
          f = *e.sheaves.at(c.sheaf);
        } else {
          f = build_R_sheaf(*e.surface);
        }
        if (c.values.size() != f->cochain_dim(c.degree))
          s.report.add("expected " + std::to_string(f->cochain_dim(c.degree)) + " values, got " +
                       std::to_string(c.values.size()));
        else if (!Cohomology(*f, c.degree).is_cocycle(c.values))
          s.report.add("not a cocycle");
      } catch (const Error& err) {
        s.report.add(err.what());
      }
    }
    out.push_back(std::move(s));
  }
  if (e.surface && e.surface->chern && clean) {
    Section s{"chern", {}};
    try {
      CellularSheaf r = build_R_sheaf(*e.surface);
      if (e.surface->chern->size() != r.cochain_dim(2) || !Cohomology(r, 2).is_cocycle(*e.surface->chern))
        s.report.add("Chern data is not a 2-cocycle of R");
    } catch (const Error& err) {
      s.report.add(err.what());
    }
    out.push_back(std::move(s));
  }
  return out;
}

int cmd_check(const Options& o, std::ostream& out) {
  CatalogEntry e = read_document(o.file);
  auto sections = check_document(e);
  bool ok = true;
  for (const auto& s : sections) ok = ok && s.report.ok();
  if (o.json) {
    Json j{{"file", o.file}, {"valid", ok}};
    Json secs = Json::array();
    for (const auto& s : sections)
      secs.push_back({{"section", s.name}, {"valid", s.report.ok()}, {"violations", strings(s.report.violations)}});
    j["sections"] = secs;
    print_json(out, j);
  } else {
    for (const auto& s : sections) {
      if (!s.report.ok() || o.verbose) out << s.name << ": " << (s.report.ok() ? "ok" : "invalid") << "\n";
      for (const auto& v : s.report.violations) out << "  violation: " << v << "\n";
    }
    out << (ok ? "valid" : "invalid") << "\n";
  }
  return ok ? kExitOk : kExitFailure;
}

// ---- cohomology ----

CellularSheaf select_sheaf(const CatalogEntry& e, const Options& o, std::string& label) {
  label = o.sheaf.empty() ? (e.sheaves.empty() ? "R" : e.sheaves.begin()->first) : o.sheaf;
  if (auto it = e.sheaves.find(label); it != e.sheaves.end()) return *it->second;
  if (label == "R" && e.surface) {
    if (!o.derive_r)
      throw Error(ErrorCode::UnknownName, "document has no sheaf 'R'; pass --derive-R to build it from the affine section");
    return build_R_sheaf(*e.surface);
  }
  auto base = e.base();
  if (base && (label == "Z" || label == "Q")) {
    return CellularSheaf::constant(base, label == "Z" ? Ring::integers() : Ring::rationals(), 1);
  }
  std::string available;
  for (const auto& [name, f] : e.sheaves) available += " " + name;
  if (e.surface) available += " R (with --derive-R)";
  throw Error(ErrorCode::UnknownName, "no sheaf '" + label + "'; available:" + available + " Z Q");
}

int cmd_cohomology(const Options& o, std::ostream& out) {
  CatalogEntry e = read_document(o.file);
  std::string label;
  CellularSheaf f = select_sheaf(e, o, label);
  Report r = validate_sheaf(f);
  if (!r.ok()) {
    for (const auto& v : r.violations) out << "violation: " << v << "\n";
    return kExitFailure;
  }
  std::vector<int> degrees;
  if (o.degree) {
    degrees.push_back(*o.degree);
  } else {
    for (int k = 0; k <= std::max(0, f.base().dimension()); ++k) degrees.push_back(k);
  }
  Json results = Json::array();
  for (int k : degrees) {
    Cohomology h(f, k);
    const std::string g = group_text(h);
    if (o.json) {
      Json j{{"degree", k}, {"group", g}};
      if (o.generators) {
        Json gens = Json::array();
        for (std::size_t i = 0; i < h.generator_count(); ++i) {
          Json v = Json::array();
          for (const auto& x : h.generators()[i]) v.push_back(to_string(x));
          gens.push_back({{"order", h.orders()[i].get_str()}, {"cocycle", v}});
        }
        j["generators"] = gens;
      }
      results.push_back(j);
    } else {
      out << "H^" << k << "(" << label << ") = " << g << "\n";
      if (o.verbose) out << "  cochains: " << h.cochain_dim() << ", ring " << h.ring().name() << "\n";
      if (o.generators)
        for (std::size_t i = 0; i < h.generator_count(); ++i)
          out << "  generator " << i + 1 << " (order " << (h.orders()[i] == 0 ? "inf" : h.orders()[i].get_str())
              << "): " << to_string(h.generators()[i]) << "\n";
    }
  }
  if (o.json) print_json(out, {{"sheaf", label}, {"ring", f.ring().name()}, {"cohomology", results}});
  return kExitOk;
}

// ---- monodromy, moduli ----

const AffineSurface& need_affine(const CatalogEntry& e) {
  if (!e.surface) throw Error(ErrorCode::InvalidInput, "document has no affine section");
  return *e.surface;
}

bool report_invalid(const Report& r, std::ostream& out) {
  for (const auto& v : r.violations) out << "violation: " << v << "\n";
  return !r.ok();
}

int cmd_monodromy(const Options& o, std::ostream& out) {
  CatalogEntry e = read_document(o.file);
  const AffineSurface& s = need_affine(e);
  if (report_invalid(validate_affine(s), out)) return kExitFailure;
  MonodromyRep rep = monodromy_rep(s);
  const CellComplex& x = *s.base;
  const std::size_t first_vertex = rep.images.size() - rep.vertex_loop_vertex.size();
  const std::string summary = compute_invariant(e, "vertex_monodromy");
  if (o.json) {
    Json gens = Json::array(), verts = Json::array();
    for (std::size_t i = 0; i < first_vertex; ++i) gens.push_back(matrix_text(rep.images[i]));
    for (std::size_t i = first_vertex; i < rep.images.size(); ++i)
      verts.push_back({{"vertex", x.id(rep.vertex_loop_vertex[i - first_vertex])},
                       {"image", matrix_text(rep.images[i])},
                       {"representative", matrix_text(conjugacy_representative(rep.images[i]))}});
    print_json(out, {{"basepoint", x.id(rep.basepoint)},
                     {"generator_loops", gens},
                     {"vertex_loops", verts},
                     {"relations_hold", rep.relations_hold},
                     {"summary", summary}});
    return kExitOk;
  }
  out << "basepoint face " << x.id(rep.basepoint) << "\n";
  if (o.verbose || first_vertex <= 8)
    for (std::size_t i = 0; i < first_vertex; ++i)
      out << "generator loop " << i + 1 << ": " << matrix_text(rep.images[i]) << "\n";
  for (std::size_t i = first_vertex; i < rep.images.size(); ++i) {
    const IntegerMatrix& m = rep.images[i];
    if (m == IntegerMatrix::identity(2) && !o.verbose) continue;
    out << "vertex " << x.id(rep.vertex_loop_vertex[i - first_vertex]) << ": " << matrix_text(m);
    const IntegerMatrix c = conjugacy_representative(m);
    if (c != m) out << " ~ " << matrix_text(c);
    out << "\n";
  }
  out << "relations: " << (rep.relations_hold ? "hold" : "fail") << "\n";
  out << "vertex monodromy: " << summary << "\n";
  return kExitOk;
}

int cmd_moduli(const Options& o, std::ostream& out) {
  CatalogEntry e = read_document(o.file);
  const AffineSurface& s = need_affine(e);
  if (report_invalid(validate_affine(s), out)) return kExitFailure;
  ModuliPair m = lagrangian_moduli(s);
  if (o.json)
    print_json(out, {{"dimension", m.dimension}, {"lattice_rank", m.lattice_rank}, {"description", describe(m)}});
  else
    out << describe(m) << "\n";
  return kExitOk;
}

// ---- delzant ----

int cmd_delzant(const Options& o, std::ostream& out) {
  CatalogEntry e = read_document(o.file);
  if (!e.polytope) throw Error(ErrorCode::InvalidInput, "document has no polytope section");
  if (report_invalid(validate_polytope(*e.polytope), out)) return kExitFailure;
  DelzantResult d = delzant_check(*e.polytope);
  if (o.json) {
    Json j{{"pass", d.pass}, {"description", d.describe()}};
    if (d.vertex) j["vertex"] = to_string(*d.vertex);
    if (!d.pass) {
      Json edges = Json::array();
      for (const auto& v : d.edges) edges.push_back(to_string(v));
      j["edges"] = edges;
      j["det"] = d.det.get_str();
    }
    print_json(out, j);
  } else {
    out << d.describe() << "\n";
    if (o.verbose)
      for (const auto& v : vertices(*e.polytope)) out << "  vertex " << to_string(v.point) << "\n";
  }
  return d.pass ? kExitOk : kExitFailure;
}

// ---- glue ----

int cmd_glue(const Options& o, std::ostream& out) {
  CatalogEntry e = read_document(o.file);
  if (!e.gluing) throw Error(ErrorCode::InvalidInput, "document has no gluing section");
  const GluingSpec& spec = *e.gluing;
  if (report_invalid(validate_gluing(spec), out)) return kExitFailure;
  GluedSheaf g = glue(spec);
  const CellComplex& x = *g.complex;
  Json j = Json::object();
  std::vector<std::string> counts;
  for (int k = 0; k <= x.dimension(); ++k) counts.push_back(std::to_string(x.count(k)));
  Json groups = Json::array();
  std::vector<std::string> group_lines;
  for (int k = 0; k <= std::max(0, x.dimension()); ++k) {
    Cohomology h(*g.sheaf, k);
    groups.push_back(group_text(h));
    group_lines.push_back("H^" + std::to_string(k) + " = " + group_text(h));
  }
  j["cells"] = strings(counts);
  j["cohomology"] = groups;
  if (!o.json) {
    out << "glued complex: " << x.size() << " cells";
    std::string sep = " (";
    for (int k = 0; k <= x.dimension(); ++k) {
      out << sep << counts[k] << " of dimension " << k;
      sep = ", ";
    }
    out << (x.dimension() >= 0 ? ")" : "") << "\n";
    for (const auto& l : group_lines) out << l << "\n";
  }

  int code = kExitOk;
  auto a = e.classes.find(o.first_class), b = e.classes.find(o.second_class);
  const bool have_classes = a != e.classes.end() && b != e.classes.end();
  if (have_classes) {
    if (a->second.degree != b->second.degree)
      throw Error(ErrorCode::MismatchedClasses, "classes '" + o.first_class + "' and '" + o.second_class +
                                                    "' have different degrees");
    GluingObstruction ob = gluing_obstruction(spec, a->second.values, b->second.values, a->second.degree);
    if (!ob.vanishes) code = kExitFailure;
    if (o.json) {
      j["obstruction"] = {{"degree", ob.degree},
                          {"overlap_group", ob.overlap_group.to_string()},
                          {"quotient", ob.quotient.to_string()},
                          {"element", to_string(ob.element)},
                          {"vanishes", ob.vanishes},
                          {"rational_vanishes", ob.rational_vanishes},
                          {"verdict", ob.verdict()}};
    } else {
      out << "H^" << ob.degree << "(overlap) = " << ob.overlap_group.to_string() << "\n";
      out << "obstruction group = " << ob.quotient.to_string() << "\n";
      if (o.verbose) out << "obstruction element = " << to_string(ob.element) << "\n";
      out << ob.verdict() << "\n";
    }
  } else if (!o.json) {
    out << "no classes '" << o.first_class << "' and '" << o.second_class << "'; obstruction not computed\n";
  }
  if (!o.export_file.empty()) {
    CatalogEntry glued;
    glued.name = (e.name.empty() ? std::string("document") : e.name) + " (glued)";
    glued.sheaves["R"] = std::make_shared<CellularSheaf>(*g.sheaf);
    write_file(o.export_file, serialize_document(glued));
  }
  if (o.json) print_json(out, j);
  return code;
}

// ---- catalog ----

int cmd_catalog(const Options& o, std::ostream& out) {
  if (o.name.empty()) {
    if (o.json)
      print_json(out, {{"entries", strings(catalog_names())}});
    else
      for (const auto& n : catalog_names()) out << n << "\n";
    return kExitOk;
  }
  CatalogEntry e = build_entry(o.name);
  if (!o.export_file.empty()) write_file(o.export_file, serialize_document(e));
  std::optional<VerifyReport> report;
  if (o.verify) report = verify(e);
  if (o.json) {
    Json j{{"name", e.name}, {"description", e.description}};
    Json payload = Json::array();
    if (e.surface) payload.push_back("affine");
    for (const auto& [name, f] : e.sheaves) payload.push_back("sheaf " + name);
    if (e.polytope) payload.push_back("polytope");
    if (e.gluing) payload.push_back("gluing");
    j["payload"] = payload;
    if (report) {
      Json lines = Json::array();
      for (const auto& l : report->lines)
        lines.push_back({{"invariant", l.expectation.invariant},
                         {"expected", l.expectation.expected},
                         {"actual", l.actual},
                         {"source", l.expectation.source},
                         {"pass", l.pass}});
      j["verify"] = lines;
      j["ok"] = report->ok();
    }
    print_json(out, j);
  } else {
    out << e.name << ": " << e.description << "\n";
    if (auto base = e.base(); base && o.verbose) out << "  base: " << base->size() << " cells\n";
    if (report) {
      std::string text = report->describe();
      out << text.substr(text.find('\n') + 1) << "\n";
    } else {
      for (const auto& x : e.expected) out << "  " << x.invariant << " = " << x.expected << " (" << x.source << ")\n";
    }
    if (!o.export_file.empty()) out << "exported to " << o.export_file << "\n";
  }
  return report && !report->ok() ? kExitFailure : kExitOk;
}

int exit_code_for(ErrorCode c) {
  return c == ErrorCode::Parse || c == ErrorCode::UnknownName ? kExitUsage : kExitFailure;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Integral affine base spaces of integrable systems", "intaff"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_flag("--json", o.json, "Machine-readable output");
  app.add_flag("--verbose", o.verbose, "More detail");

  auto* check = app.add_subcommand("check", "Validate every section of a document");
  check->add_option("file", o.file, "Document")->required();

  auto* coh = app.add_subcommand("cohomology", "Sheaf cohomology groups");
  coh->add_option("file", o.file, "Document")->required();
  coh->add_option("--sheaf", o.sheaf, "Sheaf name; Z and Q give constant sheaves");
  coh->add_option("--degree", o.degree, "Degree (default: all)")->check(CLI::NonNegativeNumber);
  coh->add_flag("--derive-R", o.derive_r, "Build R from the affine section");
  coh->add_flag("--generators", o.generators, "Print generator cocycles");

  auto* mono = app.add_subcommand("monodromy", "Monodromy of an affine surface");
  mono->add_option("file", o.file, "Document")->required();

  auto* delz = app.add_subcommand("delzant", "Delzant check of a polytope");
  delz->add_option("file", o.file, "Document")->required();

  auto* gl = app.add_subcommand("glue", "Glue two pieces and compute the class obstruction");
  gl->add_option("file", o.file, "Document")->required();
  gl->add_option("--first", o.first_class, "Class of the first piece (on the overlap)");
  gl->add_option("--second", o.second_class, "Class of the second piece (on the overlap)");
  gl->add_option("--export", o.export_file, "Write the glued sheaf as a document");

  auto* mod = app.add_subcommand("moduli", "Lagrangian moduli of an affine surface");
  mod->add_option("file", o.file, "Document")->required();

  auto* cat = app.add_subcommand("catalog", "Named examples");
  cat->add_option("name", o.name, "Entry name, e.g. flat_torus(2)");
  cat->add_flag("--verify", o.verify, "Recompute and compare the expected invariants");
  cat->add_option("--export", o.export_file, "Write the entry as a document");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*check) return cmd_check(o, out);
    if (*coh) return cmd_cohomology(o, out);
    if (*mono) return cmd_monodromy(o, out);
    if (*delz) return cmd_delzant(o, out);
    if (*gl) return cmd_glue(o, out);
    if (*mod) return cmd_moduli(o, out);
    if (*cat) return cmd_catalog(o, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  }
  return kExitUsage;
}

}  // namespace intaff
