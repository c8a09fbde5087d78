#include "catch_amalgamated.hpp"

#include <sstream>
#include <string>
#include <vector>

#include "../tools/cli.hpp"

using namespace avc;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args, const std::string& stdin_text = "") {
  args.insert(args.begin(), "avc");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::istringstream in(stdin_text);
  std::ostringstream out, err;
  int code = cli::run(static_cast<int>(argv.size()), argv.data(), in, out, err);
  return {code, out.str(), err.str()};
}

std::string built(const std::string& name) {
  Run r = run({"catalog", "build", name});
  REQUIRE(r.code == 0);
  return r.out;
}

std::string replaced(std::string s, const std::string& from, const std::string& to) {
  auto at = s.find(from);
  REQUIRE(at != std::string::npos);
  return s.replace(at, from.size(), to);
}

const std::string kR2 = R"({"ring": {"coords": ["x", "y"]}, "rankA": 2,
  "anchor": [["1", "0"], ["0", "1"]], "module": {"rankV": 1}})";

}  // namespace

TEST_CASE("definition files round-trip", "[cli]") {
  for (const auto& name : catalog::names()) {
    DYNAMIC_SECTION(name) {
      catalog::Entry e = catalog::build(name);
      json j = io::entry_json(e);
      json reparsed = json::parse(j.dump());
      io::Reader rd(reparsed);
      CourantPresentation c = rd.presentation();
      CHECK(io::presentation_json(c) == io::presentation_json(e.presentation));
      CHECK(c.h() == e.presentation.h());
      if (e.subbundle) {
        Subbundle l = rd.subbundle(c);
        CHECK(io::subbundle_json(l) == io::subbundle_json(*e.subbundle));
      }
      if (e.gcr) {
        GCRStructure g = rd.gcr(reparsed["gcr"], "/gcr", c);
        CHECK(g.j == e.gcr->j);
        CHECK(io::gcr_json(g) == io::gcr_json(*e.gcr));
        CHECK(rd.jacobi_index(reparsed["gcr"], "/gcr", c.rank_a()) == e.jacobi_index);
      }
      if (e.jacobi) {
        auto [lambda, reeb] = rd.jacobi();
        CHECK(lambda == e.jacobi->first);
        CHECK(reeb == e.jacobi->second);
      }
    }
  }
}

TEST_CASE("catalog build piped into check-axioms", "[cli]") {
  Run r = run({"check-axioms"}, built("e1m-r2"));
  CHECK(r.code == 0);
  json rep = json::parse(r.out);
  CHECK(rep["command"] == "check-axioms");
  CHECK(rep["passed"] == true);
  CHECK(rep["samples"].size() == 20);
  CHECK(rep["frame_triples"] == 216);
  CHECK(rep["verdicts"].size() == 5);
}

TEST_CASE("cohomology of sl2", "[cli]") {
  Run r = run({"cohomology", "--algebra", "sl2", "--k", "3"});
  CHECK(r.code == 0);
  json rep = json::parse(r.out);
  CHECK(rep["dim"] == 1);
  CHECK(rep["cocycles"].size() == 1);
  CHECK(json::parse(run({"cohomology", "--algebra", "abelian2", "--k", "3"}).out)["dim"] == 0);
  CHECK(run({"cohomology", "--algebra", "nope", "--k", "3"}).code == 2);

  std::string point = R"({"ring": {"coords": []}, "rankA": 3,
    "structure": [{"i": 1, "j": 2, "k": 2, "c": 2}, {"i": 1, "j": 3, "k": 3, "c": -2},
                  {"i": 2, "j": 3, "k": 1, "c": 1}],
    "module": {"rankV": 1}})";
  CHECK(json::parse(run({"cohomology", "--k", "3"}, point).out)["dim"] == 1);
}

TEST_CASE("reports are byte-identical across runs", "[cli]") {
  std::string defs = built("standard-r3-h");
  Run a = run({"check-axioms", "--seed", "7", "--samples", "4"}, defs);
  Run b = run({"check-axioms", "--seed", "7", "--samples", "4"}, defs);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  Run c = run({"check-axioms", "--seed", "8", "--samples", "4"}, defs);
  CHECK(json::parse(a.out)["inputs_digest"] != json::parse(c.out)["inputs_digest"]);
  CHECK(json::parse(a.out)["samples"] != json::parse(c.out)["samples"]);

  CHECK(run({"catalog", "list"}).out == run({"catalog", "list"}).out);
}

TEST_CASE("bracket command", "[cli]") {
  std::string defs = built("standard-r3-h");
  Run r = run({"bracket", "--e1", "1", "--e2", "2"}, defs);
  REQUIRE(r.code == 0);
  json rep = json::parse(r.out);
  CHECK(rep["bracket"]["X"] == json({"0", "0", "0"}));
  CHECK(rep["bracket"]["xi"] == json::parse(R"([{"indices": [3], "values": ["-1"]}])"));
  CHECK(rep["pairing"] == json({"0"}));

  Run s = run({"bracket", "--e1", R"({"X": ["y", "0", "0"]})", "--e2", "4"}, defs);
  REQUIRE(s.code == 0);
  CHECK(json::parse(s.out)["pairing"] == json({"y"}));
  CHECK(run({"bracket", "--e1", "7", "--e2", "1"}, defs).code == 2);
}

TEST_CASE("failed verdicts exit with 1", "[cli]") {
  Run r = run({"check-dirac"}, built("lagrangian-z-r3"));
  CHECK(r.code == 1);
  json rep = json::parse(r.out);
  CHECK(rep["lagrangian"] == true);
  CHECK(rep["involutive"] == false);
  CHECK(rep["passed"] == false);

  Run g = run({"check-gcr"}, built("almost-complex-r4"));
  CHECK(g.code == 1);
  bool witnessed = false;
  json gcr_report = json::parse(g.out);
  for (const auto& v : gcr_report["verdicts"])
    if (v["name"] == "involutive") witnessed = v["pass"] == false && v["witness"] == json::parse("[1, 2]");
  CHECK(witnessed);

  // H = w dx^dy^dz on R^4 is not closed
  std::string r4 = R"({"ring": {"coords": ["x", "y", "z", "w"]}, "rankA": 4,
    "anchor": [["1","0","0","0"],["0","1","0","0"],["0","0","1","0"],["0","0","0","1"]],
    "module": {"rankV": 1}, "H": [{"indices": [1, 2, 3], "values": ["w"]}]})";
  CHECK(run({"validate"}, r4).code == 1);
  CHECK(run({"check-axioms", "--samples", "0"}, r4).code == 1);
}

TEST_CASE("bad input exits with 2 and a position", "[cli]") {
  Run syntax = run({"validate"}, "{\"ring\": ");
  CHECK(syntax.code == 2);
  CHECK(syntax.err.find("byte") != std::string::npos);

  std::string bad_anchor = replaced(kR2, R"(["0", "1"])", R"(["0"])");
  Run shape = run({"validate"}, bad_anchor);
  CHECK(shape.code == 2);
  CHECK(shape.err.find("/anchor/1") != std::string::npos);

  std::string bad_expr = replaced(kR2, R"(["1", "0"])", R"(["1", "x*/y"])");
  Run expr = run({"validate"}, bad_expr);
  CHECK(expr.code == 2);
  CHECK(expr.err.find("/anchor/0/1") != std::string::npos);
  CHECK(expr.err.find("position 2") != std::string::npos);

  // the imaginary unit needs complex scalars
  std::string imag = replaced(kR2, R"(["1", "0"])", R"(["1", "i*x"])");
  Run real = run({"validate"}, imag);
  CHECK(real.code == 2);
  CHECK(real.err.find("/anchor/0/1") != std::string::npos);
  std::string complex = replaced(imag, R"(["x", "y"]})", R"(["x", "y"], "scalars": "complex"})");
  CHECK(run({"validate"}, complex).code == 0);

  CHECK(run({"check-dirac"}, kR2).code == 2);
  CHECK(run({"no-such-command"}).code == 2);
  CHECK(run({"validate", "--defs", "/nonexistent/defs.json"}).code == 2);
}

TEST_CASE("subbundle and Jacobi pair from separate arguments", "[cli]") {
  std::string graph = built("dirac-graph-r2");
  json block = json::parse(graph)["subbundle"];
  json bare = json::parse(graph);
  bare.erase("subbundle");
  std::string path = "cli_subbundle_test.json";
  std::ofstream(path) << block.dump();
  Run d = run({"check-dirac", "--subbundle", path}, bare.dump());
  CHECK(d.code == 0);
  CHECK(json::parse(d.out)["dirac"] == true);
  CHECK(run({"check-dirac"}, bare.dump()).code == 2);
  std::remove(path.c_str());

  std::string r3 = R"({"ring": {"coords": ["x", "y", "z"]}, "rankA": 3,
    "anchor": [["1","0","0"],["0","1","0"],["0","0","1"]], "module": {"rankV": 1}})";
  std::string lambda = R"([{"indices": [1, 2], "value": "1"}, {"indices": [2, 3], "value": "-y"}])";
  Run j = run({"check-jacobi", "--lambda", lambda, "--e", R"(["0", "0", "1"])"}, r3);
  CHECK(j.code == 0);
  Run flipped = run({"check-jacobi", "--lambda", lambda, "--e", R"(["0", "0", "-1"])"}, r3);
  CHECK(flipped.code == 1);
  Run lone = run({"check-jacobi", "--lambda", lambda}, r3);
  CHECK(lone.code == 2);
  Run bad = run({"check-jacobi", "--lambda", lambda, "--e", R"(["0", "1"])"}, r3);
  CHECK(bad.code == 2);
  CHECK(bad.err.find("--e") != std::string::npos);
}

TEST_CASE("report lands in the --out file", "[cli]") {
  std::string path = "cli_out_test.json";
  Run r = run({"validate", "--out", path}, kR2);
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream f(path);
  json rep = json::parse(f);
  CHECK(rep["passed"] == true);
  std::remove(path.c_str());
}
