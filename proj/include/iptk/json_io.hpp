#pragma once
// JSON (de)serialization for formulas, substitutions and proof objects.
// Formulas travel as print/parse strings; circuits as explicit gate lists.

#include <fstream>
#include <json.hpp>
#include <string>

#include "calculus.hpp"
#include "circuit.hpp"
#include "formula.hpp"

namespace iptk {

using nlohmann::json;

inline json formula_to_json(Formula f) { return print(f); }
inline Formula formula_from_json(const json& j) {
  return parse(j.get<std::string>());
}

inline json subst_to_json(const Substitution& s) {
  json j = json::object();
  for (auto& [v, f] : s.map) j[v] = print(f);
  return j;
}
inline Substitution subst_from_json(const json& j) {
  Substitution s;
  for (auto it = j.begin(); it != j.end(); ++it)
    s.set(it.key(), parse(it.value().get<std::string>()));
  return s;
}

inline json circuit_to_json(const Circuit& c) {
  json gs = json::array();
  for (uint32_t i = 0; i < c.size(); ++i) {
    const Gate& g = c.gate(i);
    json e;
    e["k"] = (int)g.k;
    if (g.k == Conn::Var) e["name"] = g.name;
    if (g.k != Conn::Var && g.k != Conn::Bot) {
      e["a"] = g.a;
      e["b"] = g.b;
    }
    gs.push_back(std::move(e));
  }
  json j;
  j["gates"] = std::move(gs);
  j["root"] = c.root();
  return j;
}
inline Circuit circuit_from_json(const json& j) {
  Circuit c;
  for (auto& e : j.at("gates")) {
    Conn k = (Conn)e.at("k").get<int>();
    uint32_t g;
    switch (k) {
      case Conn::Var: g = c.add_var(e.at("name").get<std::string>()); break;
      case Conn::Bot: g = c.add_bot(); break;
      default:
        g = c.add_bin(k, e.at("a").get<uint32_t>(), e.at("b").get<uint32_t>());
    }
    // hash-consing must reproduce the original indices
    if (g + 1 != c.size())
      throw std::invalid_argument("circuit json: gate list not in arena order");
  }
  if (j.contains("root")) c.set_root(j.at("root").get<uint32_t>());
  return c;
}

inline json proof_to_json(const Proof& p) {
  json j;
  switch (p.kind) {
    case ProofKind::F: j["kind"] = "F"; break;
    case ProofKind::EF: j["kind"] = "EF"; break;
    case ProofKind::CF: j["kind"] = "CF"; break;
    case ProofKind::SF: j["kind"] = "SF"; break;
  }
  json hs = json::array();
  for (auto& h : p.hypotheses) hs.push_back(print(h));
  j["hypotheses"] = std::move(hs);
  if (p.kind == ProofKind::CF) {
    j["hyp_gates"] = p.hyp_gates;
    j["circuit"] = circuit_to_json(p.circuit);
  }
  json ls = json::array();
  for (auto& ln : p.lines) {
    json e;
    if (p.kind == ProofKind::CF) e["gate"] = ln.gate;
    else e["stmt"] = print(ln.stmt);
    const Just& js = ln.just;
    switch (js.k) {
      case Just::Ax_:
        e["just"] = "ax";
        e["ax"] = (int)js.ax;
        if (p.kind == ProofKind::CF) e["gsubst"] = js.gsubst;
        else if (!js.subst.empty()) e["subst"] = subst_to_json(js.subst);
        break;
      case Just::MP:
        e["just"] = "mp";
        e["i"] = js.i;
        e["j"] = js.j;
        break;
      case Just::Hyp:
        e["just"] = "hyp";
        e["i"] = js.i;
        break;
      case Just::Ext:
        e["just"] = "ext";
        e["var"] = js.ext_var;
        if (p.kind == ProofKind::CF) e["def_gate"] = js.ext_def_gate;
        else e["def"] = print(js.ext_def);
        e["fwd"] = js.ext_fwd;
        break;
      case Just::Subst:
        e["just"] = "subst";
        e["i"] = js.i;
        e["subst"] = subst_to_json(js.subst);
        break;
    }
    ls.push_back(std::move(e));
  }
  j["lines"] = std::move(ls);
  return j;
}

inline Proof proof_from_json(const json& j) {
  Proof p;
  std::string k = j.at("kind").get<std::string>();
  if (k == "F") p.kind = ProofKind::F;
  else if (k == "EF") p.kind = ProofKind::EF;
  else if (k == "CF") p.kind = ProofKind::CF;
  else if (k == "SF") p.kind = ProofKind::SF;
  else throw std::invalid_argument("proof json: bad kind " + k);
  for (auto& h : j.at("hypotheses")) p.hypotheses.push_back(parse(h.get<std::string>()));
  const bool cf = p.kind == ProofKind::CF;
  if (cf) {
    p.circuit = circuit_from_json(j.at("circuit"));
    p.hyp_gates = j.at("hyp_gates").get<std::vector<uint32_t>>();
  }
  for (auto& e : j.at("lines")) {
    Line ln;
    if (cf) ln.gate = e.at("gate").get<uint32_t>();
    else ln.stmt = parse(e.at("stmt").get<std::string>());
    std::string js = e.at("just").get<std::string>();
    if (js == "ax") {
      ln.just.k = Just::Ax_;
      ln.just.ax = (Ax)e.at("ax").get<int>();
      if (cf) {
        if (e.contains("gsubst"))
          ln.just.gsubst = e.at("gsubst").get<std::map<std::string, uint32_t>>();
      } else if (e.contains("subst")) {
        ln.just.subst = subst_from_json(e.at("subst"));
      }
    } else if (js == "mp") {
      ln.just.k = Just::MP;
      ln.just.i = e.at("i").get<int>();
      ln.just.j = e.at("j").get<int>();
    } else if (js == "hyp") {
      ln.just.k = Just::Hyp;
      ln.just.i = e.at("i").get<int>();
    } else if (js == "ext") {
      ln.just.k = Just::Ext;
      ln.just.ext_var = e.at("var").get<std::string>();
      if (cf) ln.just.ext_def_gate = e.at("def_gate").get<uint32_t>();
      else ln.just.ext_def = parse(e.at("def").get<std::string>());
      ln.just.ext_fwd = e.at("fwd").get<bool>();
    } else if (js == "subst") {
      ln.just.k = Just::Subst;
      ln.just.i = e.at("i").get<int>();
      ln.just.subst = subst_from_json(e.at("subst"));
    } else {
      throw std::invalid_argument("proof json: bad justification " + js);
    }
    p.lines.push_back(std::move(ln));
  }
  return p;
}

inline void save_json(const std::string& path, const json& j) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << j.dump(1) << '\n';
}
inline json load_json(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read " + path);
  json j;
  is >> j;
  return j;
}

}  // namespace iptk
