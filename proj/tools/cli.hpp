#pragma once

#include <algorithm>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "avc/algebroid.hpp"
#include "avc/catalog.hpp"
#include "avc/courant.hpp"
#include "avc/dirac.hpp"
#include "avc/gcr.hpp"
#include "avc/schouten.hpp"
#include "definition.hpp"

namespace avc::cli {

using nlohmann::json;

struct Options {
  std::string defs = "-";
  std::string out;
  std::string gcr_file;
  std::string subbundle_file;
  std::string lambda;
  std::string e;
  std::string algebra;
  std::string entry;
  std::string e1;
  std::string e2;
  std::uint64_t seed = 0;
  int samples = 20;
  int k = 0;
};

/// Collects verdicts and the inputs that determine them.
class Report {
 public:
  explicit Report(std::string command) { body_["command"] = std::move(command); }

  void input(const std::string& key, const json& value) { inputs_[key] = value; }
  void set(const std::string& key, json value) { body_[key] = std::move(value); }
  void add(const Check& c) {
    verdicts_.push_back({{"name", c.name},
                         {"pass", c.pass},
                         {"checked", c.checked},
                         {"witness", c.witness},
                         {"residual", c.residual}});
    passed_ = passed_ && c.pass;
  }
  void add(const ValidationReport& r) {
    for (const auto& c : r.checks) add(c);
  }
  bool passed() const { return passed_; }

  json finish() const {
    json out = body_;
    out["inputs_digest"] = "fnv1a64:" + io::hex64(io::fnv1a(inputs_.dump()));
    auto v = verdicts_;
    std::stable_sort(v.begin(), v.end(), [](const json& a, const json& b) {
      return a["name"].get<std::string>() < b["name"].get<std::string>();
    });
    out["verdicts"] = v;
    out["passed"] = passed_;
    return out;
  }

 private:
  json body_;
  json inputs_ = json::object();
  std::vector<json> verdicts_;
  bool passed_ = true;
};

namespace detail {

inline std::string slurp(const std::string& path, std::istream& in) {
  if (path == "-") return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  std::ifstream f(path, std::ios::binary);
  if (!f) throw io::SchemaError(path, "cannot open file");
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

inline json inline_or_file(const std::string& text, std::istream& in) {
  auto first = text.find_first_not_of(" \t\n");
  if (first != std::string::npos && (text[first] == '[' || text[first] == '{')) return io::parse_text(text);
  return io::parse_text(slurp(text, in));
}

inline Check closed_check(const CourantPresentation& c) {
  Check chk("H closed");
  ++chk.checked;
  if (!c.closed()) chk.fail({}, to_string(c.dh()));
  return chk;
}

/// A section given as a 1-based frame index of A + (V x A*) or as a section object.
inline CourantSection section_arg(const io::Reader& rd, const CourantPresentation& c,
                                  const std::string& text, const std::string& flag) {
  json j = [&] {
    try {
      return json::parse(text);
    } catch (const json::parse_error& e) {
      throw io::SchemaError(flag + " byte " + std::to_string(e.byte), "malformed JSON");
    }
  }();
  if (j.is_number_integer()) return c.frame(io::Reader::index(j, flag, c.rank()));
  return rd.section(j, flag, c);
}

inline json triple_json(const SectionTriple& t) {
  json out = json::array();
  for (const auto& s : t) out.push_back(io::section_json(s));
  return out;
}

inline const catalog::PointAlgebra& point_algebra(const std::string& name) {
  static const auto all = catalog::point_algebras();
  for (const auto& p : all)
    if (p.name == name) return p;
  throw io::SchemaError("--algebra", "unknown algebra '" + name + "'");
}

}  // namespace detail

inline void cmd_validate(const Options& o, std::istream& in, Report& rep) {
  json defs = io::parse_text(detail::slurp(o.defs, in));
  rep.input("defs", defs);
  io::Reader rd(defs);
  CourantPresentation c = rd.presentation();
  rep.add(validate_algebroid(c.algebroid()));
  rep.add(validate_module(c.algebroid(), c.module()));
  rep.add(detail::closed_check(c));
}

inline void cmd_cohomology(const Options& o, std::istream& in, Report& rep) {
  rep.input("k", o.k);
  CohomologyResult res;
  if (!o.algebra.empty()) {
    rep.input("algebra", o.algebra);
    const auto& p = detail::point_algebra(o.algebra);
    res = cohomology_point(p.algebra, p.module, o.k);
  } else {
    json defs = io::parse_text(detail::slurp(o.defs, in));
    rep.input("defs", defs);
    io::Reader rd(defs);
    if (rd.ring()->num_coords() != 0) throw io::SchemaError("/ring/coords", "cohomology needs a point base");
    CourantPresentation c = rd.presentation();
    res = cohomology_point(c.algebroid(), c.module(), o.k);
  }
  rep.set("dim", res.dim);
  json cocycles = json::array();
  for (const auto& z : res.cocycles) cocycles.push_back(io::form_json(z));
  rep.set("cocycles", cocycles);
}

inline void cmd_bracket(const Options& o, std::istream& in, Report& rep) {
  json defs = io::parse_text(detail::slurp(o.defs, in));
  rep.input("defs", defs);
  rep.input("e1", o.e1);
  rep.input("e2", o.e2);
  io::Reader rd(defs);
  CourantPresentation c = rd.presentation();
  CourantSection a = detail::section_arg(rd, c, o.e1, "--e1");
  CourantSection b = detail::section_arg(rd, c, o.e2, "--e2");
  rep.set("bracket", io::section_json(courant_bracket(c, a, b)));
  rep.set("pairing", io::vec_json(pairing(c, a, b)));
}

inline void cmd_check_axioms(const Options& o, std::istream& in, Report& rep) {
  json defs = io::parse_text(detail::slurp(o.defs, in));
  rep.input("defs", defs);
  rep.input("seed", o.seed);
  rep.input("samples", o.samples);
  io::Reader rd(defs);
  CourantPresentation c = rd.presentation();
  auto samples = random_triples(c, o.samples, o.seed);
  AxiomReport ax = check_axioms(c, samples);
  rep.add(ax.report);
  rep.set("seed", o.seed);
  rep.set("frame_triples", ax.frame_triples);
  json js = json::array();
  for (const auto& t : samples) js.push_back(detail::triple_json(t));
  rep.set("samples", js);
}

inline void cmd_check_dirac(const Options& o, std::istream& in, Report& rep) {
  json defs = io::parse_text(detail::slurp(o.defs, in));
  rep.input("defs", defs);
  io::Reader rd(defs);
  CourantPresentation c = rd.presentation();
  Subbundle l;
  if (!o.subbundle_file.empty()) {
    json block = io::parse_text(detail::slurp(o.subbundle_file, in));
    rep.input("subbundle", block);
    l = rd.subbundle(block, "", c);
  } else {
    l = rd.subbundle(c);
  }
  if (c.rank_v() != 1) throw io::SchemaError("/module/rankV", "Dirac checks need V of rank one");
  DiracVerdict v = is_dirac(c, l);
  rep.add(v.report);
  rep.set("lagrangian", v.lagrangian);
  rep.set("involutive", v.involutive);
  rep.set("dirac", v.dirac());
  rep.set("intersect_with_A", intersect_with_a(c, l));
  rep.set("excluded", io::vec_json(v.excluded));
}

inline void cmd_check_gcr(const Options& o, std::istream& in, Report& rep) {
  json defs = io::parse_text(detail::slurp(o.defs, in));
  rep.input("defs", defs);
  io::Reader rd(defs);
  CourantPresentation c = rd.presentation();
  if (c.rank_v() != 1) throw io::SchemaError("/module/rankV", "GCR checks need V of rank one");
  json block;
  std::string path;
  if (!o.gcr_file.empty()) {
    block = io::parse_text(detail::slurp(o.gcr_file, in));
    rep.input("gcr", block);
    path = "/";
  } else {
    block = io::Reader::at(defs, "/", "gcr");
    path = "/gcr";
  }
  GCRStructure s = rd.gcr(block, path, c);
  GCRVerdict v = validate_gcr(s);
  rep.add(v.report);
  rep.set("valid", v.valid());
  rep.set("L", io::subbundle_json(v.l));
  try {
    Multivector p = extract_bivector(s);
    rep.set("P", io::tensor_json(p));
    if (auto t = rd.jacobi_index(block, path, c.rank_a())) {
      auto [lambda, e] = jacobi_decomposition(p, *t);
      rep.set("jacobi", {{"lambda", io::tensor_json(lambda)}, {"E", io::vec_json(vector_components(e))}});
    }
  } catch (const std::invalid_argument& e) {
    rep.set("P", nullptr);
    rep.set("P_error", e.what());
  }
}

inline void cmd_check_jacobi(const Options& o, std::istream& in, Report& rep) {
  json defs = io::parse_text(detail::slurp(o.defs, in));
  rep.input("defs", defs);
  io::Reader rd(defs);
  if (o.lambda.empty() != o.e.empty()) throw io::SchemaError("--lambda", "--lambda and --e go together");
  std::pair<Multivector, Multivector> pair;
  if (o.lambda.empty()) {
    pair = rd.jacobi();
  } else {
    json lj = detail::inline_or_file(o.lambda, in);
    json ej = detail::inline_or_file(o.e, in);
    rep.input("lambda", lj);
    rep.input("E", ej);
    pair = rd.jacobi(lj, "--lambda", ej, "--e");
  }
  const auto& [lambda, e] = pair;
  LieAlgebroid ta = LieAlgebroid::tangent(rd.ring());
  AModule tm(ta.rank(), 1, rd.ring());
  Cartan cart(ta, tm);
  const bool odd = ta.rank() % 2 == 1;
  JacobiVerdict v = check_jacobi_pair(cart, lambda, e, odd);
  rep.add(v.self);
  rep.add(v.with_e);
  if (odd) {
    Check nd("nondegenerate");
    ++nd.checked;
    if (!v.nondegenerate()) nd.fail({}, "Lambda^n ^ E = 0");
    rep.add(nd);
  }
}

inline void cmd_catalog_list(Report& rep) {
  json entries = json::array();
  for (const auto& name : catalog::names()) {
    catalog::Entry e = catalog::build(name);
    entries.push_back({{"name", e.name}, {"summary", e.summary}, {"expected", e.expected}});
  }
  rep.set("entries", entries);
}

inline void emit(const json& j, const Options& o, std::ostream& out) {
  std::string text = j.dump(2) + "\n";
  if (o.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw io::SchemaError(o.out, "cannot write file");
  f << text;
}

/// Exit codes: 0 all verdicts pass, 1 some verdict fails, 2 bad input.
inline int run(int argc, const char* const* argv, std::istream& in, std::ostream& out,
               std::ostream& err) {
  CLI::App app{"Checks for AV-Courant algebroids, Dirac and generalized CR structures", "avc"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* sc) {
    sc->add_option("--defs", o.defs, "definition file, - for standard input");
    sc->add_option("--out", o.out, "write the report to this file");
    sc->add_option("--seed", o.seed, "sampling seed");
    sc->add_option("--samples", o.samples, "number of random samples")->check(CLI::NonNegativeNumber);
  };
  auto* validate = app.add_subcommand("validate", "validate the algebroid, module and H");
  auto* cohomology = app.add_subcommand("cohomology", "cohomology of a Lie algebra with coefficients");
  auto* bracket = app.add_subcommand("bracket", "Courant bracket and pairing of two sections");
  auto* axioms = app.add_subcommand("check-axioms", "axioms AV-1..AV-4");
  auto* dirac = app.add_subcommand("check-dirac", "Lagrangian and involutivity of a subbundle");
  auto* gcr = app.add_subcommand("check-gcr", "generalized CR structure");
  auto* jacobi = app.add_subcommand("check-jacobi", "Jacobi pair on the tangent algebroid");
  auto* cat = app.add_subcommand("catalog", "built-in structures");
  for (auto* sc : {validate, cohomology, bracket, axioms, dirac, gcr, jacobi}) common(sc);
  cohomology->add_option("--algebra", o.algebra, "built-in Lie algebra over a point");
  cohomology->add_option("--k", o.k, "degree")->required()->check(CLI::NonNegativeNumber);
  bracket->add_option("--e1", o.e1, "frame index or section object")->required();
  bracket->add_option("--e2", o.e2, "frame index or section object")->required();
  gcr->add_option("--gcr", o.gcr_file, "file holding the gcr block");
  dirac->add_option("--subbundle", o.subbundle_file, "file holding the subbundle block");
  jacobi->add_option("--lambda", o.lambda, "bivector terms, inline JSON or a file");
  jacobi->add_option("--e", o.e, "vector components, inline JSON or a file");
  cat->require_subcommand(1);
  auto* list = cat->add_subcommand("list", "names and expected verdicts");
  auto* build = cat->add_subcommand("build", "definition file of an entry");
  build->add_option("name", o.entry, "entry name")->required();
  build->add_option("--out", o.out, "write the definition to this file");
  list->add_option("--out", o.out, "write the listing to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (build->parsed()) {
      emit(io::entry_json(catalog::build(o.entry)), o, out);
      return 0;
    }
    std::string name = app.get_subcommands().front()->get_name();
    if (list->parsed()) name = "catalog list";
    Report rep(name);
    if (validate->parsed()) cmd_validate(o, in, rep);
    if (cohomology->parsed()) cmd_cohomology(o, in, rep);
    if (bracket->parsed()) cmd_bracket(o, in, rep);
    if (axioms->parsed()) cmd_check_axioms(o, in, rep);
    if (dirac->parsed()) cmd_check_dirac(o, in, rep);
    if (gcr->parsed()) cmd_check_gcr(o, in, rep);
    if (jacobi->parsed()) cmd_check_jacobi(o, in, rep);
    if (list->parsed()) cmd_catalog_list(rep);
    emit(rep.finish(), o, out);
    return rep.passed() ? 0 : 1;
  } catch (const io::SchemaError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace avc::cli
