#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>
#include <vector>

#include "fixtures.hpp"
#include "nexact/errors.hpp"
#include "nexact/structures.hpp"

using namespace nexact;

namespace {

std::vector<std::vector<int>> dim_vectors(const std::vector<CanonicalForm>& forms) {
    std::vector<std::vector<int>> out;
    for (const auto& cf : forms) out.push_back(cf.dims);
    return out;
}

bool holds(const std::vector<CanonicalForm>& forms, const std::vector<int>& dims) {
    for (const auto& cf : forms)
        if (cf.dims == dims) return true;
    return false;
}

}  // namespace

TEST_CASE("indecomposable enumeration matches the known lists") {
    auto a = fx::one_point();
    Enumeration ea = enumerate_indecomposables(*a, 3);
    CHECK(ea.indecs.size() == 1);
    CHECK(ea.complete);
    CHECK(ea.indecs[0].dims == std::vector<int>{1});

    auto b = fx::a2();
    Enumeration eb = enumerate_indecomposables(*b, 4);
    CHECK(eb.indecs.size() == 3);
    CHECK(eb.complete);
    CHECK(holds(eb.indecs, {1, 0}));
    CHECK(holds(eb.indecs, {0, 1}));
    CHECK(holds(eb.indecs, {1, 1}));

    auto c = fx::a3_zero_composite();
    Enumeration ec = enumerate_indecomposables(*c, 4);
    CHECK(ec.indecs.size() == 5);
    CHECK(ec.complete);
    CHECK(holds(ec.indecs, {1, 0, 0}));
    CHECK(holds(ec.indecs, {0, 1, 0}));
    CHECK(holds(ec.indecs, {0, 0, 1}));
    CHECK(holds(ec.indecs, {1, 1, 0}));
    CHECK(holds(ec.indecs, {0, 1, 1}));

    auto d = fx::dual_numbers();
    Enumeration ed = enumerate_indecomposables(*d, 4);
    CHECK(ed.indecs.size() == 2);
    CHECK(holds(ed.indecs, {1}));
    CHECK(holds(ed.indecs, {2}));
}

TEST_CASE("enumeration is level-complete and stable at larger bounds") {
    auto c = fx::a3_zero_composite();
    // Bound 1 sees only the simples; the projectives appear at their level.
    CHECK(enumerate_indecomposables(*c, 1).indecs.size() == 3);
    CHECK(enumerate_indecomposables(*c, 2).indecs.size() == 5);
    Enumeration big = enumerate_indecomposables(*c, 2 * c->dim());
    CHECK(big.indecs.size() == 5);
    CHECK(big.complete);

    auto e = fx::two_strands();
    Enumeration es = enumerate_indecomposables(*e, 3);
    CHECK(es.indecs.size() == 10);
    CHECK(es.complete);
    CHECK(holds(es.indecs, {1, 1, 0, 1, 0}));  // the projective at the fork
    CHECK(holds(es.indecs, {1, 1, 0, 0, 0}));
    CHECK(holds(es.indecs, {1, 0, 0, 1, 0}));

    // Reruns are bit-identical.
    Enumeration again = enumerate_indecomposables(*e, 3);
    REQUIRE(again.indecs.size() == es.indecs.size());
    for (size_t i = 0; i < es.indecs.size(); ++i)
        CHECK(again.indecs[i].fingerprint == es.indecs[i].fingerprint);

    CHECK_THROWS_AS(enumerate_indecomposables(*c, 0), InputError);
}

TEST_CASE("compute_exn filters the carrier to the known members") {
    auto a = fx::one_point();
    CHECK(compute_exn(*a, 1, 3).indecs.empty());

    auto b = fx::a2();
    CHECK(compute_exn(*b, 1, 6).indecs.empty());

    auto d = fx::dual_numbers();
    CHECK(compute_exn(*d, 1, 4).indecs.empty());

    auto c = fx::a3_zero_composite();
    StructureSet exc = compute_exn(*c, 1, 10);
    REQUIRE(exc.indecs.size() == 1);
    CHECK(exc.indecs[0].dims == std::vector<int>{1, 0, 0});
    CHECK(exc.extensionClosed);
    CHECK(exc.extensionBound == 0);
    CHECK(exc.complete);

    auto e = fx::two_strands();
    StructureSet exe = compute_exn(*e, 1, 4);
    REQUIRE(exe.indecs.size() == 2);
    CHECK(exe.indecs[0].dims == std::vector<int>{1, 0, 0, 1, 0});
    CHECK(exe.indecs[1].dims == std::vector<int>{1, 1, 0, 0, 0});

    // n past the global dimension leaves nothing.
    CHECK(compute_exn(*c, 5, 10).indecs.empty());
}

TEST_CASE("exn_rejection explains every gate failure") {
    auto c = fx::a3_zero_composite();
    Module s1 = simple_module(*c, 0);
    Module s2 = simple_module(*c, 1);
    Module p1 = c->projective(0);

    CHECK(exn_rejection(s1, 1).empty());
    CHECK(exn_rejection(zero_module(*c), 1).empty());
    CHECK(exn_rejection(s2, 1) == "pdim = 1 != 2");
    CHECK(exn_rejection(p1, 1) == "pdim = 0 != 2");
    CHECK(exn_rejection(direct_sum(s1, p1), 1) == "Hom into P_1 is nonzero");

    auto d = fx::dual_numbers();
    CHECK(exn_rejection(simple_module(*d, 0), 1) == "pdim >= 3 != 2");

    // Vanishing can fail in a positive Ext degree alone.
    auto e = fx::two_strands();
    CHECK(exn_rejection(simple_module(*e, 0), 1) == "Ext^1 into P_1 is nonzero");

    // The reasons agree with the boolean test.
    for (int v = 0; v < 3; ++v) {
        Module s = simple_module(*c, v);
        CHECK(exn_rejection(s, 1).empty() == is_exn_member(s, 1));
    }
}

TEST_CASE("membership decomposes and checks parts") {
    auto c = fx::a3_zero_composite();
    StructureSet s = compute_exn(*c, 1, 6);
    Module s1 = simple_module(*c, 0);

    CHECK(member_of(zero_module(*c), s) == Tri::Yes);
    CHECK(member_of(s1, s) == Tri::Yes);
    CHECK(member_of(direct_sum({s1, s1, s1}, *c), s) == Tri::Yes);
    CHECK(member_of(simple_module(*c, 1), s) == Tri::No);
    CHECK(member_of(direct_sum(s1, simple_module(*c, 1)), s) == Tri::No);
    CHECK(member_of(c->projective(0), s) == Tri::No);
}

TEST_CASE("pb_member scans the full submodule lattice") {
    auto c = fx::a3_zero_composite();
    StructureSet s = compute_exn(*c, 1, 6);
    PbVerdict ok = pb_member(simple_module(*c, 0), s);
    CHECK(ok.pass);
    CHECK(!ok.counterexample.has_value());

    // Zero is a member with only trivial lattice entries.
    CHECK(pb_member(zero_module(*c), s).pass);

    // Not a member at all: precondition violation.
    CHECK_THROWS_AS(pb_member(simple_module(*c, 1), s), InputError);

    auto e = fx::two_strands();
    StructureSet exe = compute_exn(*e, 1, 4);
    Module ma = exe.indecs[1].rep;  // dims (1,1,0,0,0)
    PbVerdict bad = pb_member(ma, exe);
    CHECK(!bad.pass);
    REQUIRE(bad.counterexample.has_value());
    CHECK(bad.counterexample->first.dims == std::vector<int>{0, 1, 0, 0, 0});
    CHECK(bad.counterexample->second.dims == std::vector<int>{1, 0, 0, 0, 0});
    CHECK(bad.note == "the submodule leaves the class");
}

TEST_CASE("pb_step keeps exactly the stable members") {
    auto c = fx::a3_zero_composite();
    StructureSet s = compute_exn(*c, 1, 6);
    StructureSet after = pb_step(s);
    CHECK(same_members(after, s));

    auto e = fx::two_strands();
    StructureSet exe = compute_exn(*e, 1, 4);
    StructureSet shrunk = pb_step(exe);
    CHECK(shrunk.indecs.empty());

    StructureSet empty = shrunk;
    CHECK(pb_step(empty).indecs.empty());

    StructureSet unflagged = s;
    unflagged.extensionClosed = false;
    CHECK_THROWS_WITH_AS(pb_step(unflagged), doctest::Contains("flag"), InputError);
}

TEST_CASE("po_step conjugates the pullback step by the transpose") {
    auto c = fx::a3_zero_composite();
    StructureSet s = compute_exn(*c, 1, 6);
    StructureSet after = po_step(s);
    CHECK(same_members(after, s));
    CHECK(after.alg == s.alg);

    StructureSet empty = s;
    empty.indecs.clear();
    CHECK(po_step(empty).indecs.empty());

    // Idempotent at the fixpoint.
    StructureSet twice = po_step(after);
    CHECK(same_members(twice, after));
}

TEST_CASE("max_n reaches the stable class and records removals") {
    auto c = fx::a3_zero_composite();
    MaxTrace trace;
    StructureSet mx = max_n(*c, 1, 10, {}, &trace);
    REQUIRE(mx.indecs.size() == 1);
    CHECK(mx.indecs[0].dims == std::vector<int>{1, 0, 0});
    CHECK(mx.pbStable);
    CHECK(mx.poStable);
    CHECK(mx.extensionClosed);
    CHECK(trace.steps.empty());  // already stable, nothing removed

    StructureSet again = max_n(*c, 1, 10);
    CHECK(same_members(again, mx));

    auto e = fx::two_strands();
    MaxTrace et;
    StructureSet me = max_n(*e, 1, 4, {}, &et);
    CHECK(me.indecs.empty());
    REQUIRE(et.steps.size() == 1);
    CHECK(et.steps[0].op == "pb");
    CHECK(et.steps[0].removed.size() == 2);

    auto a = fx::one_point();
    CHECK(max_n(*a, 1, 2).indecs.empty());
    auto b = fx::a2();
    CHECK(max_n(*b, 1, 6).indecs.empty());
    auto d = fx::dual_numbers();
    CHECK(max_n(*d, 1, 4).indecs.empty());
}

TEST_CASE("extension closure verdicts carry bounds and counterexamples") {
    auto c = fx::a3_zero_composite();
    StructureSet s = compute_exn(*c, 1, 6);
    ClosureVerdict ok = is_extension_closed(s, 2);
    CHECK(ok.pass);
    CHECK(ok.bound == 2);

    StructureSet empty = s;
    empty.indecs.clear();
    CHECK(is_extension_closed(empty, 2).pass);

    // A hand-built set with a glued pair whose middle escapes: S_2 and S_3
    // extend to the projective P_2.
    StructureSet leaky;
    leaky.alg = c.get();
    leaky.n = 1;
    leaky.dimBound = 6;
    leaky.indecs = {canonical_form(simple_module(*c, 1)), canonical_form(simple_module(*c, 2))};
    std::sort(leaky.indecs.begin(), leaky.indecs.end(), canonical_less);
    ClosureVerdict bad = is_extension_closed(leaky, 2);
    CHECK(!bad.pass);
    REQUIRE(bad.counterexample.has_value());
    CHECK((*bad.counterexample)[2].dims == std::vector<int>{0, 1, 1});

    CHECK_THROWS_AS(is_extension_closed(s, 0), InputError);
}

TEST_CASE("check_structure audits the axioms") {
    auto c = fx::a3_zero_composite();
    StructureSet mx = max_n(*c, 1, 10);
    AxiomReport rep = check_structure(mx);
    CHECK(rep.all_pass());
    CHECK(rep.ex0.kind == VerdictKind::Pass);
    CHECK(rep.ex2op.kind == VerdictKind::Pass);
    CHECK(rep.ex2.kind == VerdictKind::Pass);
    CHECK(rep.ex1op.kind == VerdictKind::PassUpToBound);
    CHECK(rep.ex1op.bound == 2);
    CHECK(rep.ex1.kind == VerdictKind::PassUpToBound);
    CHECK(rep.ex1op.note == std::string("deflations compose: extension closed (criterion valid "
                                        "given Ex2op); direct composition spot-check agreed"));

    StructureSet empty = mx;
    empty.indecs.clear();
    CHECK(check_structure(empty).all_pass());

    // A member that is not pullback stable: Ex2op fails with a replayable pair.
    auto e = fx::two_strands();
    StructureSet exe = compute_exn(*e, 1, 4);
    StructureSet sub = exe;
    sub.indecs = {exe.indecs[0]};  // dims (1,0,0,1,0)
    AxiomReport bad = check_structure(sub);
    CHECK(!bad.all_pass());
    CHECK(bad.ex2op.kind == VerdictKind::Fail);
    REQUIRE(bad.ex2op.modules.size() == 3);
    CHECK(bad.ex2op.modules[0].dims == std::vector<int>{1, 0, 0, 1, 0});
    CHECK(bad.ex2op.modules[1].dims == std::vector<int>{0, 0, 0, 1, 0});
    CHECK(bad.ex2op.modules[2].dims == std::vector<int>{1, 0, 0, 0, 0});

    // Pullback stable on its own side but pushout unstable: Ex2 fails.
    const Algebra& eop = opposite_algebra(*e);
    StructureSet opSide;
    opSide.alg = &eop;
    opSide.n = 1;
    opSide.dimBound = 4;
    opSide.indecs = {canonical_form(simple_module(eop, 2))};
    AxiomReport dual = check_structure(opSide);
    CHECK(dual.ex2op.kind == VerdictKind::Pass);
    CHECK(dual.ex2.kind == VerdictKind::Fail);

    // Gate: members must pass the ex_n test.
    StructureSet gate;
    gate.alg = c.get();
    gate.n = 1;
    gate.dimBound = 6;
    gate.indecs = {canonical_form(simple_module(*c, 1))};
    CHECK_THROWS_WITH_AS(check_structure(gate), doctest::Contains("pdim = 1 != 2"), InputError);
}

TEST_CASE("structure_set_from_modules gates and deduplicates") {
    auto c = fx::a3_zero_composite();
    Module s1 = simple_module(*c, 0);
    StructureSet s = structure_set_from_modules(*c, 1, 6, {s1, s1});
    CHECK(s.indecs.size() == 1);

    CHECK_THROWS_WITH_AS(structure_set_from_modules(*c, 1, 6, {simple_module(*c, 1)}),
                         doctest::Contains("pdim = 1 != 2"), InputError);
    CHECK_THROWS_WITH_AS(structure_set_from_modules(*c, 1, 6, {direct_sum(s1, s1)}),
                         doctest::Contains("decomposable"), InputError);
    CHECK_THROWS_WITH_AS(structure_set_from_modules(*c, 1, 6, {zero_module(*c)}),
                         doctest::Contains("zero"), InputError);
}

TEST_CASE("enumerate_structures lists every structure between split and maximal") {
    auto c = fx::a3_zero_composite();
    StructureEnumeration ec = enumerate_structures(*c, 1, 10);
    REQUIRE(ec.structures.size() == 2);
    CHECK(ec.structures[0].indecs.empty());
    CHECK(ec.structures[1].indecs.size() == 1);
    CHECK(same_members(ec.structures[1], ec.max));
    CHECK(ec.reports.size() == 2);
    CHECK(ec.reports[0].all_pass());
    CHECK(ec.reports[1].all_pass());

    auto a = fx::one_point();
    CHECK(enumerate_structures(*a, 1, 2).structures.size() == 1);
    auto b = fx::a2();
    CHECK(enumerate_structures(*b, 1, 6).structures.size() == 1);

    // Disjoint union doubles the members independently: four structures,
    // closed under intersection, sorted by size.
    auto g = fx::double_a3();
    StructureEnumeration eg = enumerate_structures(*g, 1, 4);
    REQUIRE(eg.structures.size() == 4);
    CHECK(eg.structures[0].indecs.empty());
    CHECK(eg.structures[1].indecs.size() == 1);
    CHECK(eg.structures[2].indecs.size() == 1);
    CHECK(eg.structures[3].indecs.size() == 2);
    CHECK(eg.max.indecs.size() == 2);

    // Degenerate n: everything projective, only the split structure.
    CHECK(enumerate_structures(*c, 5, 10).structures.size() == 1);

    CHECK_THROWS_AS(enumerate_structures(*c, 1, 10, 1), CapError);
}

TEST_CASE("quasi characterization compares the operators against the members") {
    auto a = fx::one_point();
    CHECK(is_quasi_n_abelian(*a, 1, 2));

    auto c = fx::a3_zero_composite();
    CHECK(is_quasi_n_abelian(*c, 1, 10));

    auto g = fx::double_a3();
    CHECK(is_quasi_n_abelian(*g, 1, 4));

    auto e = fx::two_strands();
    std::string why;
    CHECK(!is_quasi_n_abelian(*e, 1, 4, {}, &why));
    CHECK(why == std::string("the member with dimension vector (1,0,0,1,0) leaves the class "
                             "under the pullback step"));
}

TEST_CASE("structure sets stay deterministic across runs") {
    auto e = fx::two_strands();
    StructureSet x = compute_exn(*e, 1, 4);
    StructureSet y = compute_exn(*e, 1, 4);
    REQUIRE(x.indecs.size() == y.indecs.size());
    for (size_t i = 0; i < x.indecs.size(); ++i) {
        CHECK(x.indecs[i].fingerprint == y.indecs[i].fingerprint);
        CHECK(x.indecs[i].dims == y.indecs[i].dims);
    }

    auto c = fx::a3_zero_composite();
    StructureEnumeration e1 = enumerate_structures(*c, 1, 10);
    StructureEnumeration e2 = enumerate_structures(*c, 1, 10);
    REQUIRE(e1.structures.size() == e2.structures.size());
    for (size_t i = 0; i < e1.structures.size(); ++i)
        CHECK(same_members(e1.structures[i], e2.structures[i]));
}
