#pragma once
#include <memory>
#include <vector>

#include "nexact/algebra.hpp"
#include "nexact/modcat.hpp"

// Shared desk-size algebras the suites exercise, built programmatically so the
// tests do not depend on the file parsers.

namespace fx {

using namespace nexact;

// Single vertex, no arrows: the ground field.
inline std::unique_ptr<Algebra> one_point() {
    Quiver q;
    q.vertices = {"1"};
    return build_algebra(q, {}, 2);
}

// 1 --a--> 2, no relations.
inline std::unique_ptr<Algebra> a2() {
    Quiver q;
    q.vertices = {"1", "2"};
    q.arrows = {{"a", 0, 1}};
    return build_algebra(q, {}, 2);
}

// 1 --a--> 2 --b--> 3 with b*a = 0.
inline std::unique_ptr<Algebra> a3_zero_composite() {
    Quiver q;
    q.vertices = {"1", "2", "3"};
    q.arrows = {{"a", 0, 1}, {"b", 1, 2}};
    Relation r;
    r.terms.push_back({1, {0, 1}});
    return build_algebra(q, {r}, 2);
}

// One loop x with x*x = 0: the dual numbers.
inline std::unique_ptr<Algebra> dual_numbers() {
    Quiver q;
    q.vertices = {"1"};
    q.arrows = {{"x", 0, 0}};
    Relation r;
    r.terms.push_back({1, {0, 0}});
    return build_algebra(q, {r}, 2);
}

// Two strands out of a common source, zero composite on each:
// 2 <--a-- 1 --c--> 4, 2 --b--> 3, 4 --d--> 5, with b*a = 0 and d*c = 0.
inline std::unique_ptr<Algebra> two_strands() {
    Quiver q;
    q.vertices = {"1", "2", "3", "4", "5"};
    q.arrows = {{"a", 0, 1}, {"b", 1, 2}, {"c", 0, 3}, {"d", 3, 4}};
    Relation ba, dc;
    ba.terms.push_back({1, {0, 1}});
    dc.terms.push_back({1, {2, 3}});
    return build_algebra(q, {ba, dc}, 2);
}

// Two disjoint copies of a3_zero_composite side by side:
// 1 --a--> 2 --b--> 3 and 4 --c--> 5 --d--> 6, with b*a = 0 and d*c = 0.
inline std::unique_ptr<Algebra> double_a3() {
    Quiver q;
    q.vertices = {"1", "2", "3", "4", "5", "6"};
    q.arrows = {{"a", 0, 1}, {"b", 1, 2}, {"c", 3, 4}, {"d", 4, 5}};
    Relation ba, dc;
    ba.terms.push_back({1, {0, 1}});
    dc.terms.push_back({1, {2, 3}});
    return build_algebra(q, {ba, dc}, 2);
}

// Convenience constructor from a dimension vector and row-major arrow
// matrices; validates before returning.
inline Module module_of(const Algebra& a, std::vector<int> dims,
                        std::vector<std::vector<uint32_t>> entries) {
    Module m;
    m.alg = &a;
    m.dims = std::move(dims);
    for (int ai = 0; ai < a.arrow_count(); ++ai) {
        const Arrow& ar = a.quiver.arrows[ai];
        Mat mat(m.dims[ar.tgt], m.dims[ar.src], a.p);
        const auto& e = entries[ai];
        for (int i = 0; i < mat.rows; ++i)
            for (int j = 0; j < mat.cols; ++j) mat.at(i, j) = e[i * mat.cols + j] % a.p;
        m.maps.push_back(std::move(mat));
    }
    validate_module(m);
    return m;
}

}  // namespace fx
