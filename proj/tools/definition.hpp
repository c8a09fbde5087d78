#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "avc/catalog.hpp"
#include "avc/courant.hpp"
#include "avc/dirac.hpp"
#include "avc/gcr.hpp"

namespace avc::io {

using nlohmann::json;

/// Bad input. `where` is a JSON pointer into the definition file, or a
/// byte offset for syntax errors.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string where, const std::string& msg)
      : std::runtime_error(where + ": " + msg), where_(std::move(where)) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

inline std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int k = 15; k >= 0; --k, v >>= 4) s[k] = digits[v & 15];
  return s;
}

inline json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError("byte " + std::to_string(e.byte), "malformed JSON");
  }
}

// ---- writing -------------------------------------------------------------

inline json indices_json(Mask m) {
  json out = json::array();
  for (int i : mask_indices(m)) out.push_back(i + 1);
  return out;
}

inline json vec_json(const RVec& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(x.str());
  return out;
}

inline json matrix_json(const RMatrix& m) {
  json out = json::array();
  for (const auto& row : m) out.push_back(vec_json(row));
  return out;
}

inline json form_json(const AForm& w) {
  json out = json::array();
  for (const auto& [m, c] : w.terms()) out.push_back({{"indices", indices_json(m)}, {"values", vec_json(c)}});
  return out;
}

template <bool Up>
json tensor_json(const GradedTensor<Up>& t) {
  json out = json::array();
  for (const auto& [m, c] : t.terms())
    for (const auto& [g, f] : c.parts())
      out.push_back({{"indices", indices_json(m)}, {"grade", g}, {"value", f.str()}});
  return out;
}

inline json section_json(const CourantSection& s) {
  return {{"X", vec_json(s.x)}, {"xi", form_json(s.xi)}};
}

inline json subbundle_json(const Subbundle& l) {
  json gens = json::array();
  for (const auto& g : l.generators) gens.push_back(section_json(g));
  return {{"generators", gens}, {"denominators", vec_json(l.denominators)}};
}

inline json ring_json(const RingSignature& r) {
  json exps = json::array();
  for (const auto& e : r.exps()) {
    json row = json::array();
    for (const auto& q : e.row) row.push_back(q.get_str());
    exps.push_back({{"name", e.name}, {"row", row}});
  }
  return {{"coords", r.coords()},
          {"exps", exps},
          {"scalars", r.mode() == ScalarMode::Rational ? "real" : "complex"}};
}

inline json presentation_json(const CourantPresentation& c) {
  const auto& a = c.algebroid();
  const auto& v = c.module();
  const int r = a.rank();
  json structure = json::array();
  for (int i = 0; i < r; ++i)
    for (int j = i + 1; j < r; ++j)
      for (int k = 0; k < r; ++k)
        if (!a.structure(i, j, k).is_zero())
          structure.push_back({{"i", i + 1}, {"j", j + 1}, {"k", k + 1}, {"c", a.structure(i, j, k).str()}});
  json action = json::array();
  for (int i = 0; i < r; ++i) {
    json mi = json::array();
    for (int b = 0; b < v.rank_v(); ++b) {
      json row = json::array();
      for (int s = 0; s < v.rank_v(); ++s) row.push_back(v.theta(i, b, s).with_ring(c.ring()).str());
      mi.push_back(row);
    }
    action.push_back(mi);
  }
  return {{"ring", ring_json(*c.ring())},
          {"rankA", r},
          {"anchor", matrix_json(a.anchor())},
          {"structure", structure},
          {"module", {{"rankV", v.rank_v()}, {"action", action}}},
          {"H", form_json(c.h())}};
}

inline json gcr_json(const GCRStructure& s) {
  const auto& d = s.bundle.distribution();
  return {{"frame", matrix_json(d.frame)},
          {"h", d.h},
          {"denominators", vec_json(d.denominators)},
          {"J", matrix_json(s.j)}};
}

inline json entry_json(const catalog::Entry& e) {
  json out = presentation_json(e.presentation);
  out["name"] = e.name;
  out["summary"] = e.summary;
  out["expected"] = e.expected;
  if (e.subbundle) out["subbundle"] = subbundle_json(*e.subbundle);
  if (e.gcr) {
    // the adapted frame must be given without the determinant the bundle appends
    GCRStructure g = *e.gcr;
    json gj = gcr_json(g);
    Distribution d = g.bundle.distribution();
    if (!g.bundle.scale().is_unit()) d.denominators.pop_back();
    gj["denominators"] = vec_json(d.denominators);
    if (e.jacobi_index) gj["jacobi_index"] = *e.jacobi_index + 1;
    out["gcr"] = gj;
  }
  if (e.jacobi) out["jacobi"] = {{"lambda", tensor_json(e.jacobi->first)},
                                 {"E", vec_json(vector_components(e.jacobi->second))}};
  return out;
}

// ---- reading -------------------------------------------------------------

class Reader {
 public:
  explicit Reader(const json& root) : root_(root) {
    if (!root_.is_object()) throw SchemaError("/", "definition must be a JSON object");
    ring_ = read_ring(at(root_, "/", "ring"), "/ring");
  }

  const RingPtr& ring() const { return ring_; }
  const json& root() const { return root_; }
  bool has(const char* key) const { return root_.contains(key); }

  CourantPresentation presentation() const {
    const json& jr = at(root_, "/", "rankA");
    if (!jr.is_number_integer()) throw SchemaError("/rankA", "expected an integer");
    const int r = jr.get<int>();
    if (r < 0 || r > kMaxRank) throw SchemaError("/rankA", "rank out of range");
    const int n = ring_->num_coords();

    RMatrix anchor;
    if (root_.contains("anchor")) {
      anchor = matrix(root_["anchor"], "/anchor", r, n);
    } else if (n == 0) {
      anchor.assign(r, RVec{});
    } else {
      throw SchemaError("/", "missing key 'anchor'");
    }
    LieAlgebroid a(ring_, r, anchor);
    std::vector<RVec> brackets(static_cast<std::size_t>(r) * r, RVec(r, RingElem(ring_, 0)));
    if (root_.contains("structure")) {
      const json& st = root_["structure"];
      if (!st.is_array()) throw SchemaError("/structure", "expected an array");
      for (std::size_t t = 0; t < st.size(); ++t) {
        std::string p = "/structure/" + std::to_string(t);
        int i = index(at(st[t], p, "i"), p + "/i", r);
        int j = index(at(st[t], p, "j"), p + "/j", r);
        int k = index(at(st[t], p, "k"), p + "/k", r);
        if (i >= j) throw SchemaError(p, "expected i < j");
        brackets[static_cast<std::size_t>(i) * r + j][k] += elem(at(st[t], p, "c"), p + "/c");
      }
    }
    for (int i = 0; i < r; ++i)
      for (int j = i + 1; j < r; ++j) a.set_bracket(i, j, brackets[static_cast<std::size_t>(i) * r + j]);

    const json& jm = at(root_, "/", "module");
    const json& jv = at(jm, "/module", "rankV");
    if (!jv.is_number_integer() || jv.get<int>() < 1) throw SchemaError("/module/rankV", "expected a positive integer");
    const int w = jv.get<int>();
    AModule v(r, w, ring_);
    if (jm.contains("action")) {
      const json& act = jm["action"];
      if (!act.is_array() || static_cast<int>(act.size()) != r)
        throw SchemaError("/module/action", "expected one matrix per frame element");
      for (int i = 0; i < r; ++i) {
        RMatrix th = matrix(act[i], "/module/action/" + std::to_string(i), w, w);
        for (int b = 0; b < w; ++b)
          for (int s = 0; s < w; ++s) v.set_theta(i, b, s, th[b][s]);
      }
    }
    AForm h(r, w);
    if (root_.contains("H")) {
      h = form(root_["H"], "/H", r, w);
      if (!h.is_homogeneous(3)) throw SchemaError("/H", "H must be a 3-form");
    }
    return CourantPresentation(std::move(a), std::move(v), std::move(h), true);
  }

  CourantSection section(const json& j, const std::string& p, const CourantPresentation& c) const {
    if (!j.is_object()) throw SchemaError(p, "expected a section object");
    CourantSection s = c.zero();
    if (j.contains("X")) s.x = vec(j["X"], p + "/X", c.rank_a());
    if (j.contains("xi")) {
      s.xi = form(j["xi"], p + "/xi", c.rank_a(), c.rank_v());
      if (!s.xi.is_homogeneous(1)) throw SchemaError(p + "/xi", "xi must be a 1-form");
    }
    return s;
  }

  Subbundle subbundle(const CourantPresentation& c) const {
    return subbundle(at(root_, "/", "subbundle"), "/subbundle", c);
  }

  Subbundle subbundle(const json& j, const std::string& p, const CourantPresentation& c) const {
    const json& gens = at(j, p, "generators");
    if (!gens.is_array()) throw SchemaError(p + "/generators", "expected an array");
    Subbundle l;
    for (std::size_t k = 0; k < gens.size(); ++k)
      l.generators.push_back(section(gens[k], p + "/generators/" + std::to_string(k), c));
    if (j.contains("denominators")) l.denominators = list(j["denominators"], p + "/denominators");
    return l;
  }

  /// The GCR block of `j` (the definition file itself or a separate --gcr file).
  GCRStructure gcr(const json& j, const std::string& p, const CourantPresentation& c) const {
    const int r = c.rank_a();
    Distribution d;
    d.frame = matrix(at(j, p, "frame"), p + "/frame", r, r);
    const json& jh = at(j, p, "h");
    if (!jh.is_number_integer() || jh.get<int>() < 0 || jh.get<int>() > r)
      throw SchemaError(p + "/h", "expected an integer between 0 and rankA");
    d.h = jh.get<int>();
    if (j.contains("denominators")) d.denominators = list(j["denominators"], p + "/denominators");
    try {
      HBundle b(c, d);
      RMatrix jm = matrix(at(j, p, "J"), p + "/J", b.rank(), b.rank());
      return {std::move(b), std::move(jm)};
    } catch (const std::invalid_argument& e) {
      throw SchemaError(p, e.what());
    }
  }

  std::optional<int> jacobi_index(const json& j, const std::string& p, int r) const {
    if (!j.contains("jacobi_index")) return std::nullopt;
    return index(j["jacobi_index"], p + "/jacobi_index", r);
  }

  /// (Lambda, E) on the tangent algebroid of the ring.
  std::pair<Multivector, Multivector> jacobi() const {
    const json& j = at(root_, "/", "jacobi");
    return jacobi(at(j, "/jacobi", "lambda"), "/jacobi/lambda", at(j, "/jacobi", "E"), "/jacobi/E");
  }

  std::pair<Multivector, Multivector> jacobi(const json& lambda_j, const std::string& lp, const json& e_j,
                                             const std::string& ep) const {
    const int n = ring_->num_coords();
    Multivector lambda = tensor(lambda_j, lp, n);
    if (!lambda.is_homogeneous(2)) throw SchemaError(lp, "expected a bivector");
    Multivector e = vector_field(vec(e_j, ep, n));
    return {lambda, e};
  }

  RingElem elem(const json& j, const std::string& p) const {
    if (j.is_number_integer()) return RingElem(ring_, Scalar(mpq_class(j.get<long>())));
    if (!j.is_string()) throw SchemaError(p, "expected a ring element string");
    try {
      return parse_ring_elem(ring_, j.get<std::string>());
    } catch (const ParseError& e) {
      throw SchemaError(p, e.what());
    }
  }

  RVec vec(const json& j, const std::string& p, int n) const {
    if (!j.is_array() || static_cast<int>(j.size()) != n)
      throw SchemaError(p, "expected an array of " + std::to_string(n) + " ring elements");
    RVec out;
    for (int i = 0; i < n; ++i) out.push_back(elem(j[i], p + "/" + std::to_string(i)));
    return out;
  }

  std::vector<RingElem> list(const json& j, const std::string& p) const {
    if (!j.is_array()) throw SchemaError(p, "expected an array");
    return vec(j, p, static_cast<int>(j.size()));
  }

  RMatrix matrix(const json& j, const std::string& p, int rows, int cols) const {
    if (!j.is_array() || static_cast<int>(j.size()) != rows)
      throw SchemaError(p, "expected " + std::to_string(rows) + " rows");
    RMatrix out;
    for (int i = 0; i < rows; ++i) out.push_back(vec(j[i], p + "/" + std::to_string(i), cols));
    return out;
  }

  Mask indices(const json& j, const std::string& p, int r) const {
    if (!j.is_array()) throw SchemaError(p, "expected an array of frame indices");
    Mask m = 0;
    int last = -1;
    for (std::size_t k = 0; k < j.size(); ++k) {
      int i = index(j[k], p + "/" + std::to_string(k), r);
      if (i <= last) throw SchemaError(p, "indices must be strictly increasing");
      last = i;
      m |= bit(i);
    }
    return m;
  }

  AForm form(const json& j, const std::string& p, int r, int w) const {
    if (!j.is_array()) throw SchemaError(p, "expected an array of form terms");
    AForm out(r, w);
    for (std::size_t t = 0; t < j.size(); ++t) {
      std::string q = p + "/" + std::to_string(t);
      Mask m = indices(at(j[t], q, "indices"), q + "/indices", r);
      out.add(m, vec(at(j[t], q, "values"), q + "/values", w));
    }
    return out;
  }

  Multivector tensor(const json& j, const std::string& p, int r) const {
    if (!j.is_array()) throw SchemaError(p, "expected an array of multivector terms");
    Multivector out(r);
    for (std::size_t t = 0; t < j.size(); ++t) {
      std::string q = p + "/" + std::to_string(t);
      Mask m = indices(at(j[t], q, "indices"), q + "/indices", r);
      int g = 0;
      if (j[t].contains("grade")) {
        if (!j[t]["grade"].is_number_integer()) throw SchemaError(q + "/grade", "expected an integer");
        g = j[t]["grade"].get<int>();
      }
      out.add(m, g, elem(at(j[t], q, "value"), q + "/value"));
    }
    return out;
  }

  static const json& at(const json& j, const std::string& p, const char* key) {
    if (!j.is_object()) throw SchemaError(p, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw SchemaError(p, std::string("missing key '") + key + "'");
    return *it;
  }

  static int index(const json& j, const std::string& p, int r) {
    if (!j.is_number_integer()) throw SchemaError(p, "expected an integer");
    int i = j.get<int>();
    if (i < 1 || i > r) throw SchemaError(p, "index out of range 1.." + std::to_string(r));
    return i - 1;
  }

 private:
  static RingPtr read_ring(const json& j, const std::string& p) {
    std::vector<std::string> coords;
    const json& jc = at(j, p, "coords");
    if (!jc.is_array()) throw SchemaError(p + "/coords", "expected an array of names");
    for (std::size_t k = 0; k < jc.size(); ++k) {
      if (!jc[k].is_string()) throw SchemaError(p + "/coords/" + std::to_string(k), "expected a name");
      coords.push_back(jc[k].get<std::string>());
    }
    std::vector<ExpGenerator> exps;
    if (j.contains("exps")) {
      const json& je = j["exps"];
      if (!je.is_array()) throw SchemaError(p + "/exps", "expected an array");
      for (std::size_t k = 0; k < je.size(); ++k) {
        std::string q = p + "/exps/" + std::to_string(k);
        const json& name = at(je[k], q, "name");
        const json& row = at(je[k], q, "row");
        if (!name.is_string()) throw SchemaError(q + "/name", "expected a name");
        if (!row.is_array()) throw SchemaError(q + "/row", "expected an array of rationals");
        ExpGenerator g{name.get<std::string>(), {}};
        for (std::size_t c = 0; c < row.size(); ++c) {
          std::string rp = q + "/row/" + std::to_string(c);
          try {
            if (row[c].is_number_integer()) {
              g.row.emplace_back(row[c].get<long>());
            } else if (row[c].is_string()) {
              mpq_class v(row[c].get<std::string>());
              v.canonicalize();
              g.row.push_back(v);
            } else {
              throw SchemaError(rp, "expected a rational");
            }
          } catch (const std::invalid_argument&) {
            throw SchemaError(rp, "expected a rational");
          }
        }
        exps.push_back(std::move(g));
      }
    }
    ScalarMode mode = ScalarMode::Rational;
    if (j.contains("scalars")) {
      const json& s = j["scalars"];
      if (s == "complex") {
        mode = ScalarMode::Gaussian;
      } else if (s != "real") {
        throw SchemaError(p + "/scalars", "expected \"real\" or \"complex\"");
      }
    }
    try {
      return make_ring(std::move(coords), std::move(exps), mode);
    } catch (const std::invalid_argument& e) {
      throw SchemaError(p, e.what());
    }
  }

  const json& root_;
  RingPtr ring_;
};

}  // namespace avc::io
