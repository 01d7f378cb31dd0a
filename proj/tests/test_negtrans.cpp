#include <catch2/catch_amalgamated.hpp>

#include "iptk/decision.hpp"
#include "iptk/negtrans.hpp"

using namespace iptk;

namespace {
Formula F(const std::string& s) { return parse(s); }

bool eval_cl(Formula f, const std::map<std::string, bool>& v) {
  switch (f.kind()) {
    case Conn::Bot: return false;
    case Conn::Var: {
      auto it = v.find(f.name());
      return it != v.end() && it->second;
    }
    case Conn::Impl: return !eval_cl(f.left(), v) || eval_cl(f.right(), v);
    case Conn::And: return eval_cl(f.left(), v) && eval_cl(f.right(), v);
    case Conn::Or: return eval_cl(f.left(), v) || eval_cl(f.right(), v);
  }
  return false;
}

// classically satisfiable over the formula set's variables?
std::optional<std::map<std::string, bool>> sat_cl(
    const std::vector<Formula>& fs) {
  std::set<std::string> vs;
  for (auto& f : fs)
    for (auto& x : vars_of(f)) vs.insert(x);
  std::vector<std::string> vv(vs.begin(), vs.end());
  for (uint64_t m = 0; m < (1ull << vv.size()); ++m) {
    std::map<std::string, bool> v;
    for (size_t i = 0; i < vv.size(); ++i) v[vv[i]] = (m >> i) & 1;
    bool all = true;
    for (auto& f : fs)
      if (!eval_cl(f, v)) {
        all = false;
        break;
      }
    if (all) return v;
  }
  return std::nullopt;
}

bool all_implicational(const Proof& p) {
  for (auto& l : p.lines)
    if (!is_implicational(l.stmt)) return false;
  return true;
}

// all negative formulas over vars with at most d antecedent nesting levels
std::vector<Formula> negatives(const std::vector<std::string>& vars, int d) {
  std::vector<Formula> out = {Formula::bot()};
  for (int lvl = 0; lvl < d; ++lvl) {
    std::vector<Formula> ants;
    for (auto& v : vars) ants.push_back(Formula::var(v));
    for (auto& f : out) ants.push_back(f);
    std::vector<Formula> next = {Formula::bot()};
    for (auto& a : ants)
      for (auto& f : out) next.push_back(Formula::imp(a, f));
    out = next;
  }
  return out;
}

std::vector<Formula> monotones(const std::vector<std::string>& vars,
                               int max_size, bool with_top) {
  std::map<int, std::vector<Formula>> by;
  by[1] = {Formula::bot()};
  for (auto& v : vars) by[1].push_back(Formula::var(v));
  if (with_top) by[1].push_back(mono_top());
  for (int s = 3; s <= max_size; s += 2)
    for (int sl = 1; sl <= s - 2; sl += 2)
      for (auto& a : by[sl])
        for (auto& b : by[s - 1 - sl]) {
          by[s].push_back(Formula::land(a, b));
          by[s].push_back(Formula::lor(a, b));
        }
  std::vector<Formula> out;
  for (auto& [s, fs] : by) out.insert(out.end(), fs.begin(), fs.end());
  return out;
}
}  // namespace

TEST_CASE("negative formulas") {
  CHECK(is_negative(F("F")));
  CHECK(is_negative(F("p->F")));
  CHECK(is_negative(F("(p->F)->F")));
  CHECK(is_negative(F("p->q->F")));
  CHECK(is_negative(F("((p->F)->q->F)->F")));
  CHECK_FALSE(is_negative(F("p")));
  CHECK_FALSE(is_negative(F("p->q")));
  CHECK_FALSE(is_negative(F("(p|q)->F")));
  CHECK_FALSE(is_negative(F("(p&q)->F")));
  CHECK_THROWS_AS(NegativeFormula(F("p->q")), std::invalid_argument);

  CHECK(nand_ants(F("p->q->F")) == std::vector<Formula>{F("p"), F("q")});
  CHECK(nand_ants(F("F")).empty());
  CHECK(nand_ants(F("(p->F)->F")) == std::vector<Formula>{F("p->F")});

  CHECK(to_u(F("p->F"), "u") == F("p->u"));
  CHECK(to_u(F("(p->F)->F"), "u") == F("(p->u)->u"));
  CHECK(to_u(F("F"), F("v->w")) == F("v->w"));
  CHECK(to_u(F("p->F"), F("v->w")) == F("p->v->w"));
  CHECK_THROWS_AS(to_u(F("p->q"), "u"), std::invalid_argument);
  CHECK_THROWS_AS(to_u(F("p->F"), "p"), std::invalid_argument);
  CHECK_THROWS_AS(to_u(F("p->F"), F("q->p")), std::invalid_argument);
}

TEST_CASE("monotone negation") {
  CHECK(nneg(F("p")) == F("p->F"));
  CHECK(nneg(F("p|q")) == F("((p->F)->(q->F)->F)->F"));
  CHECK(nneg(F("p&q")) == F("((p->F)->F)->((q->F)->F)->F"));
  CHECK(nneg(F("F")) == F("F->F"));
  CHECK(nneg(mono_top()) == F("F"));
  CHECK(to_u(nneg(F("p|q")), "u") == F("((p->u)->(q->u)->u)->u"));
  CHECK_THROWS_AS(nneg(F("p->q")), std::invalid_argument);

  SECTION("nneg is intuitionistically the negation") {
    size_t n = 0;
    for (auto& phi : monotones({"p", "q"}, 5, true)) {
      Formula m = phi;
      // compare against the plain negation with $top read as provable
      Substitution s;
      s.set("$top", F("F->F"));
      CHECK(equiv_ipc(nneg(phi), Formula::neg(substitute(s, m))));
      ++n;
    }
    CHECK(n > 50);
  }
}

TEST_CASE("NAND refutations and the implicational translation") {
  SECTION("a variable against its negation") {
    NandSequent s = {F("p"), F("p->F")};
    auto rho = refute_nand(s);
    std::string why;
    REQUIRE(check_refutation(rho, s, &why));
    Proof g = glivenko_impl(rho, "u");
    CHECK(check(RuleSet::ipc_imp(), g));
    CHECK(g.conclusion() == F("p->(p->u)->u"));
    CHECK(all_implicational(g));
    CHECK(g.kind == ProofKind::F);
  }
  SECTION("double negation against negation") {
    NandSequent s = {F("(p->F)->F"), F("p->F")};
    auto rho = refute_nand(s);
    REQUIRE(check_refutation(rho, s));
    Proof g = glivenko_impl(rho, "u");
    CHECK(check(RuleSet::ipc_imp(), g));
    CHECK(g.conclusion() == F("((p->u)->u)->(p->u)->u"));
  }
  SECTION("satisfiable sequents report an assignment") {
    CHECK_THROWS_AS(refute_nand({F("p")}), SatisfiableInput);
    try {
      refute_nand({F("p"), F("q->F")});
      FAIL("expected SatisfiableInput");
    } catch (const SatisfiableInput& e) {
      CHECK(e.assignment.at("p"));
      CHECK_FALSE(e.assignment.at("q"));
    }
  }
  SECTION("non-NAND members are rejected") {
    CHECK_THROWS_AS(refute_nand({F("p|q")}), std::invalid_argument);
    CHECK_THROWS_AS(refute_nand({F("p->q")}), std::invalid_argument);
    CHECK_THROWS_AS(refute_nand({}), std::invalid_argument);
  }
  SECTION("exhaustive over small negative sequents") {
    auto negs = negatives({"p", "q"}, 2);
    size_t refuted = 0, satisfiable = 0;
    auto run = [&](const NandSequent& s) {
      auto model = sat_cl(s);
      try {
        auto rho = refute_nand(s);
        REQUIRE(check_refutation(rho, s));
        CHECK(!model);
        Proof g = glivenko_impl(rho, "u");
        REQUIRE(check(RuleSet::ipc_imp(), g));
        std::vector<Formula> pre;
        for (auto& f : s) pre.push_back(f.is_var() ? f : to_u(f, "u"));
        CHECK(g.conclusion() == join(pre, F("u")));
        ++refuted;
      } catch (const SatisfiableInput& e) {
        REQUIRE(model);
        for (auto& f : s) CHECK(eval_cl(f, e.assignment));
        ++satisfiable;
      }
    };
    for (auto& f : negs) run({f});
    for (size_t i = 0; i < negs.size(); i += 3)
      for (size_t j = i + 1; j < negs.size(); j += 5) {
        run({negs[i], negs[j]});
        run({F("p"), negs[i], negs[j]});
        run({F("p"), F("q"), negs[i], negs[j]});
      }
    CHECK(refuted >= 20);
    CHECK(satisfiable >= 20);
  }
  SECTION("tampered refutations are rejected") {
    NandSequent s = {F("p"), F("p->F")};
    auto rho = refute_nand(s);
    CHECK_FALSE(check_refutation(rho, {F("p->F"), F("p")}));
    auto bad = rho;
    bad.steps[0].seq.push_back(F("q"));
    CHECK_FALSE(check_refutation(bad, s));
    bad = rho;
    bad.steps.pop_back();
    CHECK_FALSE(check_refutation(bad, s));
    CHECK_THROWS_AS(glivenko_impl(NandRefutation{}, "u"),
                    std::invalid_argument);
  }
  SECTION("the target variable must be fresh") {
    NandSequent s = {F("u"), F("u->F")};
    auto rho = refute_nand(s);
    CHECK_THROWS_AS(glivenko_impl(rho, "u"), std::invalid_argument);
    CHECK(check(RuleSet::ipc_imp(), glivenko_impl(rho, "w")));
  }
}

TEST_CASE("monotone negation lemma library") {
  auto rs = RuleSet::ipc_imp();
  auto shapes = [&](Formula phi, Formula psi) {
    auto lib = neg_mon_library(phi, psi, "u", "v");
    REQUIRE(lib.size() == 10);
    for (auto& [k, p] : lib) {
      INFO(k << " for " << print(phi) << ", " << print(psi));
      CHECK(check(rs, p));
      CHECK(all_implicational(p));
    }
    Formula U = F("u"), V = F("v");
    auto nu = [&](Formula f) { return to_u(nneg(f), U); };
    CHECK(lib["eq25_fwd"].conclusion() ==
          Formula::imp(Formula::imp(Formula::imp(nu(phi), U), U), nu(phi)));
    CHECK(lib["eq25_bwd"].conclusion() ==
          Formula::imp(nu(phi), Formula::imp(Formula::imp(nu(phi), U), U)));
    CHECK(lib["eq28_l"].conclusion() ==
          Formula::imp(nu(Formula::lor(phi, psi)), nu(phi)));
    CHECK(lib["eq28_r"].conclusion() ==
          Formula::imp(nu(Formula::lor(phi, psi)), nu(psi)));
    CHECK(lib["eq29"].conclusion() ==
          Formula::imp(nu(phi),
                       Formula::imp(nu(psi), nu(Formula::lor(phi, psi)))));
    CHECK(lib["eq26_l"].conclusion() ==
          Formula::imp(nu(phi), nu(Formula::land(phi, psi))));
    CHECK(lib["eq26_r"].conclusion() ==
          Formula::imp(nu(psi), nu(Formula::land(phi, psi))));
    Formula vu = Formula::imp(V, U);
    CHECK(lib["eq24_fwd"].conclusion() ==
          Formula::imp(to_u(nneg(phi), vu), Formula::imp(V, nu(phi))));
    CHECK(lib["eq24_bwd"].conclusion() ==
          Formula::imp(Formula::imp(V, nu(phi)), to_u(nneg(phi), vu)));
    CHECK(lib["eq22"].conclusion() ==
          Formula::imp(vu, Formula::imp(to_u(nneg(phi), V), nu(phi))));
  };
  shapes(F("p"), F("q"));
  shapes(F("p|q"), F("r"));
  shapes(F("p&q"), F("q|r"));
  shapes(Formula::land(F("p"), Formula::lor(mono_top(), F("q"))), F("F"));
  shapes(Formula::lor(Formula::land(F("p"), F("q")), F("F")), mono_top());
  shapes(F("(p0&q0)|(p1&q1)"), F("p0|F"));

  SECTION("eq22 at a variable is composition") {
    auto lib = neg_mon_library(F("p"), F("q"), "u", "v");
    CHECK(lib["eq22"].conclusion() == F("(v->u)->(p->v)->p->u"));
  }
  SECTION("validation") {
    CHECK_THROWS_AS(neg_mon_library(F("p->q"), F("r"), "u", "v"),
                    std::invalid_argument);
    CHECK_THROWS_AS(neg_mon_library(F("p"), F("q"), "u", "u"),
                    std::invalid_argument);
    CHECK_THROWS_AS(neg_mon_library(F("p"), F("q"), "p", "v"),
                    std::invalid_argument);
  }
}

TEST_CASE("separation proofs") {
  auto rs = RuleSet::ipc_imp();
  SECTION("core and target for n = 1") {
    auto [g, d] = sep_default_bodies(1);
    CHECK(g == F("p0 & (s0|ss0)"));
    CHECK(d == F("pp0 & (r0|rr0)"));
    auto core = sep_core(1, g, d);
    REQUIRE(core.size() == 5);
    CHECK(core[0] == Formula::neg(nneg(F("p0|pp0"))));
    CHECK(core[3] == nneg(g));
    CHECK(!sat_cl(core));
    Formula t = sep_target(1, g, d);
    CHECK(is_implicational(t));
    for (auto& x : {"u", "v", "w"}) CHECK(contains_var(t, x));
    auto rho = refute_nand(core);
    CHECK(check_refutation(rho, core));
  }
  SECTION("SF proofs for small n") {
    for (int n = 1; n <= 2; ++n) {
      auto [g, d] = sep_default_bodies(n);
      Proof p = sep_proof(n, g, d);
      CHECK(p.kind == ProofKind::SF);
      REQUIRE(check(rs, p));
      CHECK(p.conclusion() == sep_target(n, g, d));
      CHECK(all_implicational(p));
    }
  }
  SECTION("validation") {
    auto [g, d] = sep_default_bodies(1);
    CHECK_THROWS_AS(sep_proof(0, g, d), std::invalid_argument);
    CHECK_THROWS_AS(sep_core(1, F("x0"), d), std::invalid_argument);
    CHECK_THROWS_AS(sep_core(1, F("p0->p0"), d), std::invalid_argument);
    // a refutation of the wrong core is rejected
    auto rho1 = refute_nand(sep_core(1, g, d));
    auto [g2, d2] = sep_default_bodies(2);
    CHECK_THROWS_AS(sep_proof(2, g2, d2, rho1), std::invalid_argument);
  }
}
