#include <catch2/catch_amalgamated.hpp>

#include "iptk/builders.hpp"
#include "iptk/decision.hpp"
#include "iptk/nd.hpp"

using namespace iptk;

namespace {
Formula F(const std::string& s) { return parse(s); }

// every line of a checked proof should be implicational when inputs are
bool all_implicational(const Proof& p) {
  for (auto& l : p.lines)
    if (!is_implicational(l.stmt)) return false;
  return true;
}
}  // namespace

TEST_CASE("struct_reorder") {
  auto rs = RuleSet::ipc_imp();

  SECTION("weakening") {
    Proof p = struct_reorder({F("p")}, {F("q"), F("p")}, F("r"));
    CHECK(check(rs, p));
    CHECK(p.conclusion() == F("(p->r) -> q -> p -> r"));
    CHECK(all_implicational(p));
  }
  SECTION("identity contexts") {
    std::vector<Formula> g = {F("p"), F("q")};
    Proof p = struct_reorder(g, g, F("r"));
    CHECK(check(rs, p));
    CHECK(p.conclusion() == F("(p->q->r) -> p -> q -> r"));
  }
  SECTION("contraction") {
    Proof p = struct_reorder({F("p"), F("p")}, {F("p")}, F("r"));
    CHECK(check(rs, p));
    CHECK(p.conclusion() == F("(p->p->r) -> p -> r"));
  }
  SECTION("exchange") {
    Proof p = struct_reorder({F("p"), F("q")}, {F("q"), F("p")}, F("r"));
    CHECK(check(rs, p));
    CHECK(p.conclusion() == F("(p->q->r) -> q -> p -> r"));
  }
  SECTION("precondition") {
    CHECK_THROWS_AS(struct_reorder({F("p")}, {F("q")}, F("r")),
                    std::invalid_argument);
  }
}

TEST_CASE("struct_compose") {
  auto rs = RuleSet::ipc_imp();

  SECTION("n = 0") {
    Proof p = struct_compose({F("a"), F("b")}, {}, F("c"));
    CHECK(check(rs, p));
    CHECK(p.conclusion() == F("c -> a -> b -> c"));
  }
  SECTION("n = 1 is the composition template") {
    Proof p = struct_compose({F("g")}, {F("s")}, F("f"));
    CHECK(check(rs, p));
    CHECK(p.conclusion() == F("(s->f) -> (g->s) -> g -> f"));
  }
  SECTION("empty Gamma") {
    Proof p = struct_compose({}, {F("p")}, F("q"));
    CHECK(check(rs, p));
    CHECK(p.conclusion() == F("(p->q) -> p -> q"));
  }
  SECTION("n = 2") {
    Proof p = struct_compose({F("x")}, {F("p"), F("q")}, F("r"));
    CHECK(check(rs, p));
    CHECK(p.conclusion() ==
          F("(p->q->r) -> (x->p) -> (x->q) -> x -> r"));
  }
}

TEST_CASE("deduction") {
  auto rs = RuleSet::ipc();

  SECTION("single hypothesis line") {
    Proof p;
    p.hypotheses = {F("p")};
    p.lines.push_back(line_hyp(0, F("p")));
    REQUIRE(check(rs, p));
    Proof d = deduction(rs, p);
    CHECK(d.hypotheses.empty());
    CHECK(check(rs, d));
    CHECK(d.conclusion() == F("p->p"));
  }
  SECTION("modus ponens derivation") {
    Proof p;
    p.hypotheses = {F("p"), F("p->q")};
    p.lines.push_back(line_hyp(0, F("p")));
    p.lines.push_back(line_hyp(1, F("p->q")));
    p.lines.push_back(line_mp(0, 1, F("q")));
    REQUIRE(check(rs, p));
    Proof d = deduction(rs, p);
    CHECK(d.hypotheses.empty());
    CHECK(check(rs, d));
    CHECK(d.conclusion() == F("p -> (p->q) -> q"));
    CHECK(decide_ipc(d.conclusion(), false).provable());
  }
  SECTION("extension axiom survives") {
    // p |- p->p via a detour through q := (p->p)
    Tm body = app(ext_ax("_t0", F("p->p"), true),
                  app(ext_ax("_t0", F("p->p"), false), combI(F("p"))));
    HypGen hg;
    int hid;
    Tm h = hg.fresh(F("p"), hid);
    (void)h;
    Proof p = to_proof(body, ProofKind::EF, {{hid, F("p")}});
    REQUIRE(check(rs, p));
    Proof d = deduction(rs, p);
    CHECK(d.kind == ProofKind::EF);
    CHECK(d.hypotheses.empty());
    CHECK(check(rs, d));
    CHECK(d.conclusion() == F("p -> p -> p"));
    int exts = 0;
    for (auto& l : d.lines) exts += l.just.k == Just::Ext;
    CHECK(exts == 2);
  }
  SECTION("SF rejected") {
    Proof p = to_proof(combI(F("p")), ProofKind::SF);
    CHECK_THROWS_AS(deduction(rs, p), std::invalid_argument);
  }
  SECTION("CF proofs") {
    Proof p;
    p.hypotheses = {F("p"), F("p->q")};
    p.lines.push_back(line_hyp(0, F("p")));
    p.lines.push_back(line_hyp(1, F("p->q")));
    p.lines.push_back(line_mp(0, 1, F("q")));
    Proof c = ef_to_cf(p);
    REQUIRE(check(rs, c));
    Proof d = deduction(rs, c);
    CHECK(d.kind == ProofKind::CF);
    CHECK(d.hyp_gates.empty());
    CHECK(check(rs, d));
    CHECK(d.circuit.to_formula(d.conclusion_gate(), 1000) ==
          F("p -> (p->q) -> q"));
  }
}

TEST_CASE("instantiate_template") {
  auto rs = RuleSet::ipc();

  SECTION("identity proof under a substitution") {
    Proof p = to_proof(combI(F("p")));
    Substitution s;
    s.set("p", F("q&r"));
    Proof q = instantiate_template(rs, p, s);
    CHECK(check(rs, q));
    CHECK(q.conclusion() == F("(q&r) -> q&r"));
  }
  SECTION("identity substitution") {
    Proof p = to_proof(combI(F("p")));
    Proof q = instantiate_template(rs, p, Substitution{});
    CHECK(q.num_lines() == p.num_lines());
    CHECK(q.conclusion() == p.conclusion());
  }
  SECTION("composition template instance") {
    Proof p = struct_compose({F("g")}, {F("s")}, F("f"));
    Substitution s;
    s.set("g", F("a|b"));
    s.set("s", F("a->a"));
    s.set("f", F("b"));
    Proof q = instantiate_template(rs, p, s);
    CHECK(check(rs, q));
    CHECK(q.conclusion() ==
          F("((a->a)->b) -> ((a|b)->a->a) -> (a|b) -> b"));
  }
  SECTION("SF appends a substitution line") {
    Proof p = to_proof(combI(F("p")), ProofKind::SF);
    REQUIRE(check(rs, p));
    Substitution s;
    s.set("p", F("q|r"));
    Proof q = instantiate_template(rs, p, s);
    CHECK(q.num_lines() == p.num_lines() + 1);
    CHECK(check(rs, q));
    CHECK(q.conclusion() == F("(q|r) -> q|r"));
  }
  SECTION("extension variable collisions rejected") {
    Tm body = app(ext_ax("_t0", F("p->p"), true),
                  app(ext_ax("_t0", F("p->p"), false), combI(F("p"))));
    Proof p = to_proof(body, ProofKind::EF);
    Substitution bad1;
    bad1.set("_t0", F("q"));
    CHECK_THROWS_AS(instantiate_template(rs, p, bad1), std::invalid_argument);
    Substitution bad2;
    bad2.set("p", F("_t0 -> q"));
    CHECK_THROWS_AS(instantiate_template(rs, p, bad2), std::invalid_argument);
    Substitution ok;
    ok.set("p", F("q&q"));
    Proof q = instantiate_template(rs, p, ok);
    CHECK(check(rs, q));
    CHECK(q.conclusion() == F("(q&q) -> q&q"));
  }
}

TEST_CASE("ef_to_cf and cf_to_ef") {
  auto rs = RuleSet::ipc();

  SECTION("extension axiom becomes a shared gate") {
    Tm body = app(ext_ax("_t0", F("p->p"), true),
                  app(ext_ax("_t0", F("p->p"), false), combI(F("p"))));
    Proof e = to_proof(body, ProofKind::EF);
    REQUIRE(check(rs, e));
    Proof c = ef_to_cf(e);
    CHECK(c.kind == ProofKind::CF);
    CHECK(check(rs, c));
    for (auto& l : c.lines) CHECK(l.just.k != Just::Ext);
    CHECK(c.circuit.to_formula(c.conclusion_gate(), 1000) == F("p->p"));
  }
  SECTION("tree-shaped circuit needs no extension axioms") {
    Proof c;
    c.kind = ProofKind::CF;
    uint32_t gp = c.circuit.add_var("p"), gq = c.circuit.add_var("q");
    uint32_t inst = c.circuit.add_imp(gp, c.circuit.add_imp(gq, gp));
    Line l;
    l.gate = inst;
    l.just.k = Just::Ax_;
    l.just.ax = Ax::K;
    l.just.gsubst = {{"a", gp}, {"b", gq}};
    c.lines.push_back(l);
    REQUIRE(check(rs, c));
    Proof e = cf_to_ef(c, rs);
    CHECK(e.kind == ProofKind::EF);
    CHECK(check(rs, e));
    for (auto& ln : e.lines) CHECK(ln.just.k != Just::Ext);
    CHECK(e.conclusion() == F("p -> q -> p"));
  }
  SECTION("round trip preserves the conclusion") {
    Formula phi = F("(p->q) -> p -> p & q");
    auto v = decide_ipc(phi);
    REQUIRE(v.provable());
    Proof c = ef_to_cf(*v.proof);
    REQUIRE(check(rs, c));
    Proof e = cf_to_ef(c, rs);
    CHECK(check(rs, e));
    CHECK(e.conclusion() == phi);
    // and back again
    Proof c2 = ef_to_cf(e);
    CHECK(check(rs, c2));
    CHECK(c2.circuit.to_formula(c2.conclusion_gate(), 10000) == phi);
  }
  SECTION("sharing produces extension variables") {
    // S/K derivation of p->p shares the gate for p->p heavily
    Proof c = ef_to_cf(to_proof(combI(F("p"))));
    REQUIRE(check(rs, c));
    Proof e = cf_to_ef(c, rs);
    CHECK(check(rs, e));
    CHECK(e.conclusion() == F("p->p"));
    int exts = 0;
    for (auto& l : e.lines) exts += l.just.k == Just::Ext;
    CHECK(exts > 0);
  }
  SECTION("hypotheses survive the round trip") {
    Proof p;
    p.hypotheses = {F("p"), F("p->q")};
    p.lines.push_back(line_hyp(0, F("p")));
    p.lines.push_back(line_hyp(1, F("p->q")));
    p.lines.push_back(line_mp(0, 1, F("q")));
    Proof c = ef_to_cf(p);
    REQUIRE(check(rs, c));
    CHECK(c.hyp_gates.size() == 2);
    Proof e = cf_to_ef(c, rs);
    CHECK(check(rs, e));
    CHECK(e.hypotheses == p.hypotheses);
    CHECK(e.conclusion() == F("q"));
  }
  SECTION("or and bot constructs translate") {
    Formula phi = F("p | (p -> F) -> (p -> F) | p");
    auto v = decide_ipc(phi);
    REQUIRE(v.provable());
    Proof c = ef_to_cf(*v.proof);
    REQUIRE(check(rs, c));
    Proof e = cf_to_ef(c, rs);
    CHECK(check(rs, e));
    CHECK(e.conclusion() == phi);
  }
}

TEST_CASE("soundness spot check") {
  // every line of small derived proofs is a consequence of the hypotheses
  auto rs = RuleSet::ipc();
  std::vector<Proof> corpus;
  corpus.push_back(struct_reorder({F("p")}, {F("q"), F("p")}, F("r")));
  corpus.push_back(struct_compose({F("g")}, {F("s")}, F("f")));
  {
    Proof p;
    p.hypotheses = {F("p"), F("p->q")};
    p.lines.push_back(line_hyp(0, F("p")));
    p.lines.push_back(line_hyp(1, F("p->q")));
    p.lines.push_back(line_mp(0, 1, F("q")));
    corpus.push_back(deduction(rs, p));
  }
  for (auto& p : corpus) {
    REQUIRE(check(rs, p));
    if (p.num_lines() > 40) continue;
    for (auto& l : p.lines) {
      Formula goal = join(p.hypotheses, l.stmt);
      CHECK(decide_ipc(goal, false).provable());
    }
  }
}
