#include <catch2/catch_amalgamated.hpp>

#include "iptk/decision.hpp"

using namespace iptk;

static const char* kLC =
    "((p -> q) -> r) -> ((q -> p) -> r) -> r";
static const char* kEq36 =
    "((p -> p' -> q) -> (p -> p' -> q') -> r) -> "
    "((q -> q' -> p) -> (q -> q' -> p') -> r) -> r";
static const char* kKC = "(p -> F) | ((p -> F) -> F)";

TEST_CASE("poset bank") {
  // rooted posets up to iso: 1, 1, 2, 5, 16 for 1..5 points
  auto bank = rooted_poset_bank(5);
  CHECK(bank.size() == 1 + 1 + 2 + 5 + 16);
  std::map<size_t, int> by_size;
  for (auto& f : bank) {
    CHECK(f.well_formed());
    CHECK(f.root() == 0);
    by_size[f.size()]++;
  }
  CHECK(by_size[1] == 1);
  CHECK(by_size[2] == 1);
  CHECK(by_size[3] == 2);
  CHECK(by_size[4] == 5);
  CHECK(by_size[5] == 16);
}

TEST_CASE("decide_ipc basics") {
  auto v = decide_ipc(parse("p -> p"));
  CHECK(v.provable());
  REQUIRE(v.proof.has_value());
  CHECK(check(RuleSet::ipc(), *v.proof).ok);

  auto w = decide_ipc(parse("((p -> q) -> p) -> p"));
  CHECK(w.refuted());
  REQUIRE(w.countermodel.has_value());
  CHECK(w.countermodel->size() == 2);
  CHECK(!valid_in(*w.countermodel, parse("((p -> q) -> p) -> p")));

  // (φ∨ψ→χ) ↔ (φ→χ)∧(ψ→χ)
  CHECK(decide_ipc(parse("((p | q -> r) -> (p -> r) & (q -> r)) & "
                         "((p -> r) & (q -> r) -> (p | q -> r))"),
                   false)
            .provable());
}

TEST_CASE("equiv_ipc") {
  CHECK(equiv_ipc(parse("p & q -> r"), parse("p -> q -> r")));
  CHECK(equiv_ipc(parse("p -> r"), parse("((p -> r) -> r) -> r")));
  CHECK(!equiv_ipc(parse("p"), parse("q")));
}

TEST_CASE("decide_ext proves the axiom itself") {
  Formula kc = parse(kKC);
  Effort e;
  auto v = decide_ext({kc}, kc, e);
  REQUIRE(v.provable());
  auto rs = RuleSet::standard(Fragment::full(), kc, "KC");
  CHECK(check(rs, *v.proof).ok);
}

TEST_CASE("decide_ext finds substitution instances") {
  // IPC + Peirce proves excluded middle
  Formula peirce = parse("((p -> q) -> p) -> p");
  Formula em = parse("p | (p -> F)");
  auto v = decide_ext({peirce}, em);
  REQUIRE(v.provable());
  auto rs = RuleSet::standard(Fragment::full(), peirce, "CPC");
  CHECK(check(rs, *v.proof).ok);
}

TEST_CASE("decide_ext chains the LC axiom") {
  Formula phi = parse(kLC);
  Formula goal = parse(kEq36);
  Effort e;
  e.depth = 4;
  auto v = decide_ext({phi}, goal, e);
  REQUIRE(v.provable());
  auto rs = RuleSet::standard(Fragment::imp_only(), phi, "LC");
  auto rep = check(rs, *v.proof);
  INFO(rep.reason);
  CHECK(rep.ok);
  CHECK(v.proof->conclusion() == goal);
  // the proof is purely implicational
  for (auto& ln : v.proof->lines) CHECK(is_implicational(ln.stmt));
}

TEST_CASE("decide_ext refutes with a Kripke frame") {
  // LC does not prove Peirce; the 2-chain validates the LC axiom
  auto v = decide_ext({parse(kLC)}, parse("((p -> q) -> p) -> p"));
  REQUIRE(v.refuted());
  REQUIRE(v.countermodel.has_value());
  CHECK(frame_valid_all_valuations(*v.countermodel, parse(kLC), {"p", "q", "r"}));
  CHECK(!valid_in(*v.countermodel, parse("((p -> q) -> p) -> p")));
}

TEST_CASE("decide_ext refutes via a finite algebra when frames cannot") {
  // psi proves phi with & or F available, but not in the {->,|} fragment
  Formula phi = parse("((x -> y) -> z) -> ((y -> x) -> z) -> z");
  Formula psi = parse(
      "(w -> x) -> (w -> y) -> ((x -> y) -> z) -> ((y -> x) -> z) -> z");
  // sanity: the two derivations via w := x&y and w := F
  {
    Substitution s;
    s.set("w", parse("x & y"));
    CHECK(provable_ipc(Formula::imp(substitute(s, psi), phi)));
    Substitution t;
    t.set("w", parse("F"));
    CHECK(provable_ipc(Formula::imp(substitute(t, psi), phi)));
  }
  auto shipped = shipped_counterexamples();
  // frozen facts: the 4-element {->,|} algebra validates psi but not phi
  CHECK(validates(shipped[1].algebra, psi));
  CHECK(!validates(shipped[1].algebra, phi));

  Effort e;
  e.depth = 1;
  e.max_frame_points = 4;
  for (auto& sa : shipped) e.algebras.push_back(sa.algebra);
  auto v = decide_ext({psi}, phi, e);
  REQUIRE(v.refuted());
  REQUIRE(v.algebra_countermodel.has_value());
  CHECK(validates(*v.algebra_countermodel, psi));
  CHECK(!validates(*v.algebra_countermodel, phi));
}

TEST_CASE("decide_ext reports Unknown at tiny effort") {
  Effort e;
  e.depth = 0;
  e.max_instances = 0;
  e.max_frame_points = 1;
  auto v = decide_ext({parse(kLC)}, parse("((p -> q) -> p) -> p"), e);
  CHECK(v.unknown());
}

TEST_CASE("decide_ipc agrees with exhaustive frame search on small formulas") {
  // all {->,|,F} formulas over p,q of size <= 5 in a crude enumeration
  std::vector<Formula> small = {
      parse("p"), parse("q"), parse("F"), parse("p -> q"), parse("q -> p"),
      parse("p | q"), parse("p -> p"), parse("F -> p"), parse("p -> F"),
      parse("p | (p -> F)"), parse("(p -> q) | (q -> p)"),
      parse("p -> q -> p"), parse("(p -> q) -> q"), parse("p & q -> p"),
      parse("((p -> F) -> F) -> p"), parse("p -> (p -> q) -> q")};
  auto bank = rooted_poset_bank(5);
  for (auto& f : small) {
    bool valid_everywhere = true;
    for (auto& frame : bank)
      if (!frame_valid_all_valuations(frame, f, vars_of(f))) {
        valid_everywhere = false;
        break;
      }
    INFO(print(f));
    CHECK(decide_ipc(f, false).provable() == valid_everywhere);
  }
}
