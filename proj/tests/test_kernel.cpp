#include <catch2/catch_amalgamated.hpp>

#include "iptk/algebra.hpp"
#include "iptk/calculus.hpp"
#include "iptk/circuit.hpp"
#include "iptk/formula.hpp"
#include "iptk/kripke.hpp"
#include "iptk/nd.hpp"
#include "iptk/prover.hpp"

using namespace iptk;

TEST_CASE("parser and printer round-trip") {
  std::vector<std::string> cases = {
      "p",
      "F",
      "p -> q",
      "p -> q -> r",
      "(p -> q) -> r",
      "p & q | r",
      "p | q & r",
      "(p | q) & r",
      "p & (q | r)",
      "(p -> q) & r -> p | q",
      "((p -> F) -> F) -> p",
      "a' & b_1 | c2",
  };
  for (auto& s : cases) {
    Formula f = parse(s);
    CHECK(print(f) == s);
    CHECK(parse(print(f)) == f);
  }
}

TEST_CASE("parser accepts unicode aliases") {
  CHECK(parse("p → q ∧ r") == parse("p -> q & r"));
  CHECK(parse("p ∨ ⊥") == parse("p | F"));
}

TEST_CASE("parser rejects garbage") {
  CHECK_THROWS_AS(parse("p ->"), ParseError);
  CHECK_THROWS_AS(parse("(p"), ParseError);
  CHECK_THROWS_AS(parse("p q"), ParseError);
  CHECK_THROWS_AS(parse(""), ParseError);
}

TEST_CASE("implication is right associative, & binds tighter than |") {
  Formula f = parse("p -> q -> r");
  CHECK(f.right() == parse("q -> r"));
  Formula g = parse("p & q | r");
  CHECK(g.is_or());
  CHECK(g.left() == parse("p & q"));
}

TEST_CASE("head and join") {
  Formula f = parse("p -> q -> r | s");
  auto [prem, h] = head(f);
  REQUIRE(prem.size() == 2);
  CHECK(h == parse("r | s"));
  CHECK(join(prem, h) == f);
}

TEST_CASE("size and limd") {
  CHECK(size_polish(parse("p")) == 1);
  CHECK(size_polish(parse("p -> q & r")) == 5);
  CHECK(limd(parse("p -> q")) == 1);
  CHECK(limd(parse("(p -> q) -> r")) == 2);
  CHECK(limd(parse("((p -> q) -> r) -> s")) == 3);
  CHECK(limd(parse("p -> (q -> r)")) == 1);
  CHECK(limd(parse("(p -> q) & r")) == 1);
}

TEST_CASE("fragments") {
  Fragment fr = Fragment::parse("->,&");
  CHECK(fr.has_and);
  CHECK(!fr.has_or);
  CHECK(!fr.has_bot);
  CHECK(fr.str() == "->,&");
  CHECK(fr.allows(parse("p & q -> r")));
  CHECK(!fr.allows(parse("p | q")));
  CHECK(Fragment::parse("->,&,|,F") == Fragment::full());
  CHECK(top(Fragment::full()) == parse("F -> F"));
  CHECK(top(Fragment::imp_only()) == parse("x -> x"));
}

TEST_CASE("substitution and composition") {
  Substitution s1, s2;
  s1.set("p", parse("a -> b"));
  s2.set("a", parse("c"));
  Formula f = parse("p -> p & q");
  CHECK(substitute(s1, f) == parse("(a -> b) -> (a -> b) & q"));
  CHECK(substitute(compose(s2, s1), f) ==
        substitute(s2, substitute(s1, f)));
}

TEST_CASE("polarity map") {
  Formula f = parse("(p -> q) -> r");
  auto occ = polarity_map(f);
  // p is positive (double antecedent), q negative, r positive
  for (auto& o : occ) {
    if (o.sub == parse("p") && o.path.steps.size() == 2) CHECK(o.positive);
    if (o.sub == parse("q")) CHECK(!o.positive);
    if (o.sub == parse("r")) CHECK(o.positive);
  }
}

TEST_CASE("essential disjunctions") {
  // positive occurrence: inessential
  CHECK(essential_disjunctions(parse("p | q")).empty());
  // negative occurrence in plain antecedent position: inessential (skeleton)
  CHECK(essential_disjunctions(parse("(p | q) -> r")).empty());
  // under & within the antecedent: still skeleton
  CHECK(essential_disjunctions(parse("(p | q) & s -> r")).empty());
  // inside a negated subformula: inessential
  CHECK(essential_disjunctions(parse("(((p | q) -> s) -> F) -> r")).empty());
  // a positive occurrence nested inside an antecedent is also inessential
  CHECK(essential_disjunctions(parse("((p | q) -> s) -> r")).empty());
  // genuinely essential: negative, consequent of an implication in an antecedent
  auto e = essential_disjunctions(parse("(s -> p | q) -> r"));
  REQUIRE(e.size() == 1);
  CHECK(at_path(parse("(s -> p | q) -> r"), e[0]) == parse("p | q"));
}

TEST_CASE("conj-free decomposition") {
  auto d = conj_free_decompose(parse("p & q"));
  REQUIRE(d.size() == 2);
  CHECK(d[0] == parse("p"));
  CHECK(d[1] == parse("q"));
  auto e = conj_free_decompose(parse("p & q -> r & s"));
  REQUIRE(e.size() == 2);
  CHECK(e[0] == parse("p -> q -> r"));
  CHECK(e[1] == parse("p -> q -> s"));
  auto f = conj_free_decompose(parse("(p & q) | r"));
  REQUIRE(f.size() == 2);
  CHECK(f[0] == parse("p | r"));
  CHECK(f[1] == parse("q | r"));
  // results are ∧-free
  for (auto& x : f) CHECK(!contains_conn(x, Conn::And));
}

TEST_CASE("fresh generator guards its namespace") {
  FreshGen g(parse("p -> q"));
  CHECK(g.fresh() == Formula::var("_t0"));
  CHECK(g.fresh() == Formula::var("_t1"));
  CHECK_THROWS_AS(FreshGen(parse("_t3 -> p")), std::invalid_argument);
}

TEST_CASE("circuits: sharing and unfolding") {
  Circuit c;
  uint32_t p = c.add_var("p");
  uint32_t f = p;
  for (int i = 0; i < 40; ++i) f = c.add_and(f, f);
  c.set_root(f);
  CHECK(c.size() <= 42);
  CHECK(c.unfolded_size(f, 1000000) > 1000000);
  CHECK_THROWS_AS(to_formula(c, 1000000), BlowUp);
  Circuit c2 = from_formula(parse("p & q -> p"));
  CHECK(to_formula(c2, 100) == parse("p & q -> p"));
}

TEST_CASE("proof terms compile to checkable Frege proofs") {
  HypGen hg;
  Formula p = parse("p"), q = parse("q");

  SECTION("identity") {
    int id;
    Tm h = hg.fresh(p, id);
    Proof pf = to_proof(lam(h, h));
    CHECK(pf.conclusion() == parse("p -> p"));
    auto rep = check(RuleSet::ipc_imp(), pf);
    CHECK(rep.ok);
  }
  SECTION("flip") {
    int i1, i2, i3;
    Tm f = hg.fresh(parse("p -> q -> r"), i1);
    Tm b = hg.fresh(q, i2);
    Tm a = hg.fresh(p, i3);
    Proof pf = to_proof(lam(f, lam(b, lam(a, app(f, a, b)))));
    CHECK(pf.conclusion() == parse("(p -> q -> r) -> q -> p -> r"));
    CHECK(check(RuleSet::ipc_imp(), pf).ok);
    // purely implicational input stays in the -> fragment
    for (auto& ln : pf.lines) CHECK(is_implicational(ln.stmt));
  }
  SECTION("conjunction commutes") {
    int id;
    Tm h = hg.fresh(parse("p & q"), id);
    Proof pf = to_proof(lam(h, pair(snd(h), fst(h))));
    CHECK(pf.conclusion() == parse("p & q -> q & p"));
    CHECK(check(RuleSet::standard(Fragment::imp_and()), pf).ok);
  }
  SECTION("disjunction commutes") {
    int id;
    Tm h = hg.fresh(parse("p | q"), id);
    int ia, ib;
    Tm ha = hg.fresh(p, ia), hb = hg.fresh(q, ib);
    Proof pf = to_proof(
        lam(h, cases(h, lam(ha, inr(ha, q)), lam(hb, inl(hb, p)))));
    CHECK(pf.conclusion() == parse("p | q -> q | p"));
    CHECK(check(RuleSet::standard(Fragment::imp_or()), pf).ok);
  }
  SECTION("efq") {
    int id;
    Tm h = hg.fresh(Formula::bot(), id);
    Proof pf = to_proof(lam(h, abort(h, p)));
    CHECK(pf.conclusion() == parse("F -> p"));
    CHECK(check(RuleSet::standard(Fragment::imp_bot()), pf).ok);
  }
  SECTION("open hypotheses") {
    int i1, i2;
    Tm hf = hg.fresh(parse("p -> q"), i1);
    Tm hp = hg.fresh(p, i2);
    Proof pf = to_proof(app(hf, hp), ProofKind::F, {{i1, parse("p -> q")}, {i2, p}});
    REQUIRE(pf.hypotheses.size() == 2);
    CHECK(pf.conclusion() == q);
    CHECK(check(RuleSet::ipc_imp(), pf).ok);
  }
  SECTION("ill-typed application throws") {
    int i1, i2;
    Tm hf = hg.fresh(parse("p -> q"), i1);
    Tm hr = hg.fresh(parse("r"), i2);
    CHECK_THROWS_AS(app(hf, hr), std::invalid_argument);
  }
}

TEST_CASE("checker rejects corrupt proofs") {
  HypGen hg;
  int id;
  Tm h = hg.fresh(parse("p"), id);
  Proof pf = to_proof(lam(h, h));
  REQUIRE(check(RuleSet::ipc_imp(), pf).ok);
  SECTION("tampered statement") {
    Proof bad = pf;
    bad.lines.back().stmt = parse("p -> q");
    CHECK(!check(RuleSet::ipc_imp(), bad).ok);
  }
  SECTION("axiom not in rule set") {
    Proof bad;
    bad.lines.push_back(line_ax(Ax::Efq, [] {
      Substitution s;
      s.set("c", parse("p"));
      return s;
    }(), parse("F -> p")));
    CHECK(!check(RuleSet::ipc_imp(), bad).ok);
  }
  SECTION("purity violation") {
    Proof bad;
    Substitution s;
    s.set("a", parse("p & p"));
    s.set("b", parse("q"));
    bad.lines.push_back(
        line_ax(Ax::K, s, substitute(s, axiom_template(Ax::K))));
    auto rep = check(RuleSet::ipc_imp(), bad);
    CHECK(!rep.ok);
    CHECK(rep.reason == "line uses connective outside fragment");
    CheckOptions opt;
    opt.skip_purity = true;
    // still fails: K is fine but & axioms are absent — actually K instance
    // with & inside is a valid instance once purity is waived
    CHECK(check(RuleSet::ipc_imp(), bad, opt).ok);
  }
}

TEST_CASE("Kripke forcing") {
  // two-point model: root w0 <= w1, p true only at w1
  KripkeModel M;
  M.points = {"w0", "w1"};
  M.leq = {{true, true}, {false, true}};
  M.val["p"] = {false, true};
  REQUIRE(M.well_formed());
  CHECK(M.root() == 0);
  CHECK(!forces(M, 0, parse("p | (p -> F)")));
  CHECK(forces(M, 0, parse("(p -> F) -> F")));  // no successor forces p -> F
  CHECK(forces(M, 1, parse("p")));
  CHECK(valid_in(M, parse("((p -> F) -> F) -> ((p -> F) | ((p -> F) -> F))")));
}

TEST_CASE("decision procedure agrees with itself") {
  G4Prover pr;
  CounterModelBuilder cm;
  std::vector<std::string> provable = {
      "p -> p",
      "p -> q -> p",
      "(p -> q -> r) -> (p -> q) -> p -> r",
      "F -> p",
      "p & q -> q & p",
      "p | q -> q | p",
      "((p -> F) | q) -> p -> q",
      "((p -> q) -> p) -> ((p -> q) -> q)",
      "(p -> q) | (q -> p) -> ((p -> q) -> r) -> ((q -> p) -> r) -> r",
      "((p | (p -> F)) -> F) -> F",
  };
  std::vector<std::string> unprovable = {
      "p | (p -> F)",
      "((p -> q) -> p) -> p",
      "((p -> F) -> F) -> p",
      "(p -> q) | (q -> p)",
      "((p -> q) -> r) -> ((q -> p) -> r) -> r",
      "(p -> q | r) -> (p -> q) | (p -> r)",
  };
  for (auto& s : provable) {
    INFO(s);
    CHECK(pr.provable(parse(s)));
    CHECK(!cm.build({}, parse(s)).has_value());
    G4TermProver tp;
    auto t = tp.prove_term(parse(s));
    REQUIRE(t.has_value());
    Proof pf = to_proof(*t);
    CHECK(pf.conclusion() == parse(s));
    CHECK(check(RuleSet::ipc(), pf).ok);
  }
  for (auto& s : unprovable) {
    INFO(s);
    CHECK(!pr.provable(parse(s)));
    auto M = cm.build({}, parse(s));
    REQUIRE(M.has_value());
    std::string why;
    REQUIRE(M->well_formed(&why));
    int r = M->root();
    REQUIRE(r >= 0);
    CHECK(!forces(*M, r, parse(s)));
    auto S = shrink_countermodel(*M, {}, parse(s));
    REQUIRE(S.well_formed());
    CHECK(!forces(S, S.root(), parse(s)));
    CHECK(S.size() <= M->size());
  }
}

TEST_CASE("prover handles contexts") {
  G4Prover pr;
  CHECK(pr.provable_from({parse("p"), parse("p -> q")}, parse("q")));
  CHECK(!pr.provable_from({parse("p | q")}, parse("p")));
  CounterModelBuilder cm;
  auto M = cm.build({parse("p | q")}, parse("p"));
  REQUIRE(M.has_value());
  int r = M->root();
  CHECK(forces(*M, r, parse("p | q")));
  CHECK(!forces(*M, r, parse("p")));
}

TEST_CASE("frame validity under all valuations") {
  KripkeModel chain2;
  chain2.points = {"w0", "w1"};
  chain2.leq = {{true, true}, {false, true}};
  // weak excluded middle fails on the 2-chain? no: it holds on chains.
  CHECK(frame_valid_all_valuations(chain2, parse("(p -> F) | ((p -> F) -> F)"),
                                   {"p"}));
  CHECK(!frame_valid_all_valuations(chain2, parse("p | (p -> F)"), {"p"}));
}

TEST_CASE("finite algebras: laws, evaluation, characteristic formula") {
  auto shipped = shipped_counterexamples();
  REQUIRE(shipped.size() == 3);
  for (auto& sa : shipped) {
    sa.parent.validate_laws();
    sa.algebra.validate_laws();
    // parent validates all IPC theorems we care to check
    CHECK(validates(sa.parent, parse("p -> q -> p")));
    CHECK(validates(sa.parent, parse("(p -> q -> r) -> (p -> q) -> p -> r")));
    // quotients by principal filters stay legal
    for (size_t a = 0; a < sa.algebra.size(); ++a) {
      auto Q = quotient_by_principal_filter(sa.algebra, (int)a);
      Q.validate_laws();
    }
    auto o = sa.algebra.opremum();
    REQUIRE(o.has_value());
  }
  // the 5-element parent of (ii) refutes excluded middle
  CHECK(!validates(shipped[1].parent, parse("p | (p -> F)")));
}
