#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>
#include <vector>

#include "fixtures.hpp"
#include "nexact/errors.hpp"
#include "nexact/homology.hpp"
#include "nexact/io.hpp"

using namespace nexact;

namespace {

const char* kChainFile =
    "# three vertices in a row, composite vanishes\n"
    "field p=2\n"
    "vertex 1\n"
    "vertex 2\n"
    "vertex 3\n"
    "arrow a: 1 -> 2\n"
    "arrow b: 2 -> 3\n"
    "relation b*a\n"
    "n = 1\n";

}  // namespace

TEST_CASE("algebra files parse into the expected presentation") {
    AlgebraFile f = parse_algebra_file(kChainFile);
    const Algebra& a = *f.alg;
    CHECK(f.n == 1);
    CHECK(a.p == 2);
    CHECK(a.vertex_count() == 3);
    CHECK(a.arrow_count() == 2);
    CHECK(a.dim() == 5);
    CHECK(a.quiver.vertices[0] == "1");
    CHECK(a.quiver.arrows[1].name == "b");
    REQUIRE(a.relations.size() == 1);
    REQUIRE(a.relations[0].terms.size() == 1);
    // b*a applies a first.
    CHECK(a.relations[0].terms[0].arrows == std::vector<int>{0, 1});

    // Same algebra as the hand-built fixture: identical projectives.
    auto h = fx::a3_zero_composite();
    for (int v = 0; v < 3; ++v) CHECK(a.projective(v).dims == h->projective(v).dims);
}

TEST_CASE("algebra files support coefficients, signs, and loops") {
    AlgebraFile f = parse_algebra_file(
        "field p=3\n"
        "vertex v\n"
        "arrow x: v -> v\n"
        "relation x*x\n");
    CHECK(f.n == 1);  // defaulted
    CHECK(f.alg->p == 3);
    CHECK(f.alg->dim() == 2);

    // A commutativity-style relation with a sign: the square with d*c = b*a.
    AlgebraFile sq = parse_algebra_file(
        "field p=5\n"
        "vertex 1\nvertex 2\nvertex 3\nvertex 4\n"
        "arrow a: 1 -> 2\n"
        "arrow b: 2 -> 4\n"
        "arrow c: 1 -> 3\n"
        "arrow d: 3 -> 4\n"
        "relation b*a - d*c\n");
    const Algebra& s = *sq.alg;
    CHECK(s.dim() == 4 + 4 + 1);  // vertices, arrows, one surviving diagonal
    REQUIRE(s.relations[0].terms.size() == 2);
    CHECK(s.relations[0].terms[0].coeff == 1);
    CHECK(s.relations[0].terms[1].coeff == 4);  // -1 mod 5

    // Explicit coefficients stack onto the sign.
    AlgebraFile co = parse_algebra_file(
        "field p=5\n"
        "vertex 1\nvertex 2\nvertex 3\n"
        "arrow a: 1 -> 2\n"
        "arrow b: 2 -> 3\n"
        "relation 2*b*a\n");
    CHECK(co.alg->relations[0].terms[0].coeff == 2);
}

TEST_CASE("algebra parse errors name the offending line") {
    CHECK_THROWS_WITH_AS(parse_algebra_file("vertex 1\n"), doctest::Contains("field"),
                         InputError);
    CHECK_THROWS_WITH_AS(parse_algebra_file("field p=4\nvertex 1\n"),
                         doctest::Contains("line 1"), InputError);
    CHECK_THROWS_WITH_AS(parse_algebra_file("field p=2\n"),
                         doctest::Contains("at least one vertex"), InputError);
    CHECK_THROWS_WITH_AS(parse_algebra_file("field p=2\nvertex 1\nvertex 1\n"),
                         doctest::Contains("line 3"), InputError);
    CHECK_THROWS_WITH_AS(
        parse_algebra_file("field p=2\nvertex 1\narrow a: 1 -> 9\n"),
        doctest::Contains("unknown vertex '9'"), InputError);
    CHECK_THROWS_WITH_AS(
        parse_algebra_file("field p=2\nvertex 1\nvertex 2\narrow a: 1 -> 2\nrelation b*a\n"),
        doctest::Contains("line 5: unknown arrow 'b'"), InputError);
    CHECK_THROWS_WITH_AS(
        parse_algebra_file("field p=2\nvertex 1\nvertex 2\narrow a: 1 -> 2\nrelation a*a\n"),
        doctest::Contains("does not compose"), InputError);
    CHECK_THROWS_WITH_AS(parse_algebra_file(kChainFile + std::string("bogus line\n")),
                         doctest::Contains("line 10"), InputError);
    CHECK_THROWS_WITH_AS(parse_algebra_file(kChainFile + std::string("n = 0\n")),
                         doctest::Contains("positive"), InputError);
}

TEST_CASE("module files parse, default, and validate") {
    AlgebraFile f = parse_algebra_file(kChainFile);
    const Algebra& a = *f.alg;

    auto mods = parse_module_file(
        "# the three-dimensional faithful one and a simple\n"
        "module M over A\n"
        "dim 1 = 1\n"
        "dim 2 = 1\n"
        "dim 3 = 1\n"
        "map a = [[1]]\n"
        "map b = [[0]]\n"
        "\n"
        "module S2 over A\n"
        "dim 2 = 1\n",
        a);
    REQUIRE(mods.size() == 2);
    CHECK(mods[0].name == "M");
    CHECK(mods[0].mod.dims == std::vector<int>{1, 1, 1});
    CHECK(mods[0].mod.maps[0].at(0, 0) == 1);
    CHECK(mods[1].name == "S2");
    CHECK(mods[1].mod.dims == std::vector<int>{0, 1, 0});
    CHECK(mods[1].mod.alg == &a);

    // Entries reduce mod p; matrices for 0-dimensional ends may be omitted.
    auto neg = parse_module_file(
        "module N over A\ndim 1 = 1\ndim 2 = 1\nmap a = [[-1]]\n", a);
    CHECK(neg[0].mod.maps[0].at(0, 0) == 1);

    // Opposite-side modules resolve labels in the reversed quiver.
    auto ops = parse_module_file("module T over A^op\ndim 3 = 1\n", a);
    CHECK(ops[0].mod.alg == &opposite_algebra(a));
    CHECK(ops[0].mod.dims == std::vector<int>{0, 0, 1});
}

TEST_CASE("module parse errors carry lines and reasons") {
    AlgebraFile f = parse_algebra_file(kChainFile);
    const Algebra& a = *f.alg;

    CHECK_THROWS_WITH_AS(parse_module_file("dim 1 = 1\n", a),
                         doctest::Contains("before any module header"), InputError);
    CHECK_THROWS_WITH_AS(parse_module_file("module M over B\n", a),
                         doctest::Contains("side must be A or A^op"), InputError);
    CHECK_THROWS_WITH_AS(parse_module_file("module M over A\ndim 7 = 1\n", a),
                         doctest::Contains("unknown vertex '7'"), InputError);
    CHECK_THROWS_WITH_AS(parse_module_file("module M over A\nmap z = [[1]]\n", a),
                         doctest::Contains("unknown arrow 'z'"), InputError);
    CHECK_THROWS_WITH_AS(
        parse_module_file("module M over A\ndim 1 = 1\ndim 2 = 1\nmap a = [[1],[0]]\n", a),
        doctest::Contains("line 4"), InputError);
    CHECK_THROWS_WITH_AS(
        parse_module_file("module M over A\ndim 1 = 1\nmap a = [[oops]]\n", a),
        doctest::Contains("expected an integer"), InputError);
    CHECK_THROWS_WITH_AS(parse_module_file("module M over A\nmodule M over A\n", a),
                         doctest::Contains("duplicate module name"), InputError);

    // A map that violates the defining relation is rejected at the block level.
    CHECK_THROWS_WITH_AS(
        parse_module_file("module M over A\n"
                          "dim 1 = 1\ndim 2 = 1\ndim 3 = 1\n"
                          "map a = [[1]]\nmap b = [[1]]\n",
                          a),
        doctest::Contains("relation"), InputError);
}

TEST_CASE("structure files list names") {
    auto names = parse_structure_file("# candidates\nS1\nM\n");
    CHECK(names == std::vector<std::string>{"S1", "M"});
    CHECK(parse_structure_file("").empty());
    CHECK_THROWS_WITH_AS(parse_structure_file("two names\n"),
                         doctest::Contains("one module name per line"), InputError);
}

TEST_CASE("serialized modules replay through the parser") {
    auto c = fx::a3_zero_composite();
    Module p1 = c->projective(0);
    std::string text = module_file_text("P1", p1);
    auto back = parse_module_file(text, *c);
    REQUIRE(back.size() == 1);
    CHECK(back[0].name == "P1");
    CHECK(modules_equal(back[0].mod, p1));

    // Opposite-side round trip, e.g. for transposed modules.
    Module s1 = simple_module(*c, 0);
    Module tr = transpose(s1, 1);
    auto trBack = parse_module_file(module_file_text("TrS1", tr), *c);
    CHECK(modules_equal(trBack[0].mod, tr));

    Module z = zero_module(*c);
    auto zBack = parse_module_file(module_file_text("Z", z), *c);
    CHECK(zBack[0].mod.is_zero());

    CHECK(mat_text(Mat::identity(2, 3)) == "[[1,0],[0,1]]");
    CHECK(mat_text(Mat(0, 2, 3)) == "[]");
}
