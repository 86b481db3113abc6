#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mllnet/correctness.hpp"
#include "mllnet/core.hpp"
#include "mllnet/logic.hpp"
#include "mllnet/rewrite.hpp"

using namespace mllnet;

TEST_CASE("switchings enumerate 2^#par normal forms") {
  CHECK(switchings(tensor_over_two_daimons()).size() == 1);
  CHECK(switchings(par_over_one_daimon()).size() == 2);

  // par over par: 4 switchings
  auto proof = proof_par(proof_par(proof_daimon({fvar("X"), fvar("Y"), fvar("Z")})));
  Net n = desequentialize(proof);
  CHECK(switchings(n).size() == 4);
  for (const auto& sw : switchings(n)) {
    CHECK(!sw.degenerate);
    CHECK(sw.net.count(LinkKind::Par) == 0);
    CHECK(sw.net.n_conclusions() == n.n_conclusions() + 2);
  }

  PosId a = fresh_pos(), b = fresh_pos();
  Net cutnet = Net::make(
      sum(mk_link(LinkKind::Daimon, {}, {a, b}), mk_link(LinkKind::Cut, {a, b}, {})), {});
  CHECK_THROWS_AS(switchings(cutnet), NetError);
}

TEST_CASE("partition orthogonality oracle values") {
  // {{1,2}} vs {{1},{2}}: path, orthogonal
  CHECK(partition_orthogonal({{1, 2}}, {{1}, {2}}));
  // {{1,2}} vs {{1,2}}: double edge, cycle
  CHECK(!partition_orthogonal({{1, 2}}, {{1, 2}}));
  // {{1}} vs {{1}}: single edge between two vertices
  CHECK(partition_orthogonal({{1}}, {{1}}));
  // disconnected: {{1},{2}} vs {{1},{2}}
  CHECK(!partition_orthogonal({{1}, {2}}, {{1}, {2}}));
  CHECK_THROWS_AS(partition_orthogonal({{1}}, {{1, 2}}), NetError);
}

TEST_CASE("up_initial per switching") {
  // par over one daimon, left choice: {{1},{2}}
  Net n = par_over_one_daimon();
  auto sws = switchings(n);
  REQUIRE(sws.size() == 2);
  for (const auto& sw : sws) {
    CHECK(up_initial(sw, n) == NaturalPartition{{1}, {2}});
  }
  // tensor net with two daimons has a single switching: {{1,2}}
  Net t = tensor_over_two_daimons();
  auto tsw = switchings(t);
  REQUIRE(tsw.size() == 1);
  CHECK(up_initial(tsw[0], t) == NaturalPartition{{1, 2}});
  // X2: {{1},{2}}
  Net x2 = daimon_net(2);
  CHECK(up_initial(switchings(x2)[0], x2) == NaturalPartition{{1}, {2}});
}

TEST_CASE("dr_check on the canonical examples") {
  // par over one daimon: correct
  CHECK(dr_check(par_over_one_daimon()).correct);
  CHECK(dr_check_partitions(par_over_one_daimon()));

  // tensor over one daimon: cycle through the daimon
  auto rep = dr_check(tensor_over_one_daimon());
  CHECK(!rep.correct);
  bool has_cycle = false;
  for (const auto& ev : rep.switchings)
    has_cycle |= ev.kind == SwitchingEvidence::Kind::Cyclic && !ev.cycle.empty();
  CHECK(has_cycle);
  CHECK(!dr_check_partitions(tensor_over_one_daimon()));

  // par over two daimons: disconnected under either switching
  auto rep2 = dr_check(par_over_two_daimons());
  CHECK(!rep2.correct);
  for (const auto& ev : rep2.switchings)
    CHECK(ev.kind == SwitchingEvidence::Kind::Disconnected);
  CHECK(!dr_check_partitions(par_over_two_daimons()));

  // tensor over two daimons: correct
  CHECK(dr_check(tensor_over_two_daimons()).correct);
  CHECK(dr_check_partitions(tensor_over_two_daimons()));

  // X2 and X0
  CHECK(dr_check(daimon_net(2)).correct);
  CHECK(dr_check(daimon_net(0)).correct);
  // X0 + X0 disconnected
  CHECK(!dr_check(parallel(daimon_net(0), daimon_net(0))).correct);
}

TEST_CASE("tests of a formula") {
  // tests(X tensor Y) = { dai<q1 q2> + par -> q }
  auto ts = tests(ftensor(fvar("X"), fvar("Y")));
  REQUIRE(ts.size() == 1);
  CHECK(iso_equal(ts[0], par_over_one_daimon()));

  // tests(X par Y) = { dai<q1>+dai<q2>+tensor -> q }
  auto tp = tests(fpar(fvar("X"), fvar("Y")));
  REQUIRE(tp.size() == 1);
  CHECK(iso_equal(tp[0], tensor_over_two_daimons()));

  // tests(X) = { X1 }
  auto tv = tests(fvar("X"));
  REQUIRE(tv.size() == 1);
  CHECK(iso_equal(tv[0], daimon_net(1)));

  // every test of a passes dr_check and is atomically testable by dual(a)
  FormulaPtr formulas[] = {
      ftensor(fvar("X"), fvar("Y")),
      fpar(fvar("X"), fvar("Y")),
      fpar(ftensor(fvar("X"), fvar("Y")), fvar("Z")),
      ftensor(ftensor(fvar("X"), fvar("Y")), fpar(fvar("Z"), fvar("W"))),
  };
  for (const auto& a : formulas) {
    for (const auto& t : tests(a)) {
      CHECK(dr_check(t).correct);
      CHECK(testable(t, {dual(a)}, true).has_value());
    }
  }
}

TEST_CASE("tests do not depend on the witness grouping") {
  // two structurally different witnesses of a = (X tensor Y) par Z
  FormulaPtr a = fpar(ftensor(fvar("X"), fvar("Y")), fvar("Z"));
  // witness 1: one daimon over all three leaves (the canonical one is used
  // by tests(a)); witness 2: the desequentialized proof with split daimons
  auto proof = proof_par(proof_exchange(
      1, proof_tensor(proof_daimon({fvar("X")}), proof_daimon({fvar("Y"), fvar("Z")}))));
  Net w2 = desequentialize(proof);
  auto t1 = tests(a);
  auto t2 = tests_from_witness(w2, a);
  REQUIRE(t1.size() == t2.size());
  for (std::size_t i = 0; i < t1.size(); ++i)
    CHECK(canonical_key(t1[i]) == canonical_key(t2[i]));
}

TEST_CASE("test_check decides correctness for atomic-testable nets") {
  // X2 vs X, Y: true (glueing reductions reach X0)
  CHECK(test_check(daimon_net(2), {fvar("X"), fvar("Y")}) == Verdict::True);
  // Xpar vs X par Y: false (the tensor test disconnects)
  CHECK(test_check(par_over_two_daimons(), {fpar(fvar("X"), fvar("Y"))}) == Verdict::False);
  // par over one daimon vs X par Y: true
  CHECK(test_check(par_over_one_daimon(), {fpar(fvar("X"), fvar("Y"))}) == Verdict::True);
  // tensor over one daimon vs X tensor Y: false (cycle)
  CHECK(test_check(tensor_over_one_daimon(), {ftensor(fvar("X"), fvar("Y"))}) ==
        Verdict::False);
  // not atomically testable: false
  CHECK(test_check(daimon_net(1), {ftensor(fvar("X"), fvar("Y"))}) == Verdict::False);
}

TEST_CASE("sequentialize") {
  // par over one daimon against X par X^: Daimon(X, X^); Par
  Sequent gp{fpar(fvar("X"), fvar("X", false))};
  auto p = sequentialize(par_over_one_daimon(), gp);
  REQUIRE(p.has_value());
  CHECK(check_proof(*p, ProofMode::MLLDai));
  CHECK(sequent_equal(conclusion(*p), gp));
  CHECK(iso_equal(desequentialize(*p), par_over_one_daimon()));

  // tensor over one daimon: none
  CHECK(!sequentialize(tensor_over_one_daimon(), {ftensor(fvar("X"), fvar("Y"))})
             .has_value());

  // X0 closes by the empty daimon rule
  auto p0 = sequentialize(daimon_net(0), {});
  REQUIRE(p0.has_value());
  CHECK(iso_equal(desequentialize(*p0), daimon_net(0)));

  // a two-conclusion net with a tensor split and an exchange-needing order
  auto proof = proof_exchange(
      1, proof_tensor(proof_daimon({fvar("X")}), proof_daimon({fvar("Y"), fvar("Z")})));
  Net n = desequentialize(proof);
  Sequent g = conclusion(proof);
  auto q = sequentialize(n, g);
  REQUIRE(q.has_value());
  CHECK(check_proof(*q, ProofMode::MLLDai));
  CHECK(sequent_equal(conclusion(*q), g));
  CHECK(canonical_key(desequentialize(*q)) == canonical_key(n));

  // desequentialize . sequentialize is the identity on a cut proof
  auto xy = ftensor(fvar("X"), fvar("Y"));
  auto withcut =
      proof_cut(xy, proof_tensor(proof_daimon({fvar("X")}), proof_daimon({fvar("Y")})),
                proof_daimon({dual(xy)}));
  Net cn = desequentialize(withcut);
  auto qc = sequentialize(cn, conclusion(withcut));
  REQUIRE(qc.has_value());
  CHECK(check_proof(*qc, ProofMode::MLLDai));
  CHECK(canonical_key(desequentialize(*qc)) == canonical_key(cn));

  // agreement with dr_check on the four basic one-conclusion nets
  struct Case {
    Net n;
    Sequent g;
  } cases[] = {
      {par_over_one_daimon(), {fpar(fvar("X"), fvar("Y"))}},
      {par_over_two_daimons(), {fpar(fvar("X"), fvar("Y"))}},
      {tensor_over_one_daimon(), {ftensor(fvar("X"), fvar("Y"))}},
      {tensor_over_two_daimons(), {ftensor(fvar("X"), fvar("Y"))}},
  };
  for (auto& c : cases)
    CHECK(sequentialize(c.n, c.g).has_value() == dr_check(c.n).correct);
}

TEST_CASE("classify_failure") {
  CHECK(classify_failure(daimon_net(0)).cls == FailureClass::SingleDaimonZero);

  auto two = parallel(daimon_net(0), daimon_net(0));
  auto c2 = classify_failure(two);
  CHECK(c2.cls == FailureClass::MultipleZeroDaimons);
  CHECK(c2.zero_daimons == 2);

  PosId a = fresh_pos(), b = fresh_pos();
  Net cyc = Net::make(
      sum(mk_link(LinkKind::Daimon, {}, {a, b}), mk_link(LinkKind::Cut, {a, b}, {})), {});
  CHECK(classify_failure(cyc).cls == FailureClass::CyclicCutStuck);

  Net clash = interaction(tensor_over_one_daimon(), tensor_over_one_daimon());
  CHECK(classify_failure(clash).cls == FailureClass::ClashStuck);
}

TEST_CASE("criterion equivalence on a handful of nets") {
  struct Case {
    Net n;
    Sequent g;
  } cases[] = {
      {daimon_net(2), {fvar("X"), fvar("Y")}},
      {parallel(daimon_net(1), daimon_net(1)), {fvar("X"), fvar("Y")}},
      {par_over_one_daimon(), {fpar(fvar("X"), fvar("Y"))}},
      {par_over_two_daimons(), {fpar(fvar("X"), fvar("Y"))}},
      {tensor_over_one_daimon(), {ftensor(fvar("X"), fvar("Y"))}},
      {tensor_over_two_daimons(), {ftensor(fvar("X"), fvar("Y"))}},
  };
  for (auto& c : cases) {
    bool dr3 = dr_check(c.n).correct;
    CHECK(dr3 == dr_check_partitions(c.n));
    CHECK(dr3 == sequentialize(c.n, c.g).has_value());
    CHECK(dr3 == (test_check(c.n, c.g) == Verdict::True));
  }
}
