#include "eclkit/system.hpp"

#include "eclkit/errors.hpp"
#include "eclkit/eval.hpp"
#include "eclkit/syntax.hpp"

#include "generators.hpp"
#include "oracle.hpp"

#include <doctest.h>

using namespace eclkit;

namespace {

KhovanskiiSystem sys(const std::string& text) { return parse_system(text); }

// E(y) as a canonical polynomial in the augmented variable order (y = x1)
CanonicalPoly e_of_y() { return exp_atom(CanonicalPoly::variable(1)); }

std::vector<CanonicalPoly> random_equations(testgen::Rng& rng, int n) {
    std::vector<CanonicalPoly> eqs;
    for (int i = 0; i < n; ++i) {
        for (;;) {
            try {
                eqs.push_back(testgen::random_poly(rng, n, 2, 7));
                break;
            } catch (const ResourceLimitError&) {
            }
        }
    }
    return eqs;
}

} // namespace

TEST_CASE("jacobian_det: univariate and diagonal examples") {
    CHECK(sys("x1 - 5").jacobian_det() == CanonicalPoly::from_long(1));

    KhovanskiiSystem omega = sys("x1*E(x1) - 1");
    CHECK(omega.jacobian_det() == normalize(parse_term("E(x1) + x1*E(x1)")));

    KhovanskiiSystem diag = sys("vars: 2\nx1 - 3\nx2 - 4\n");
    CHECK(diag.jacobian_det() == CanonicalPoly::from_long(1));
}

TEST_CASE("systems validate squareness") {
    CHECK_THROWS_AS(KhovanskiiSystem({normalize(parse_term("x1 + x2"))}),
                    DomainError);
}

TEST_CASE("augment_log: spec examples") {
    // {x1 - E(1)} -> {E(y) - x1, x1 - E(1)} with det E(y)
    KhovanskiiSystem s = sys("x1 - E(1)");
    KhovanskiiSystem a = augment_log(s);
    CHECK(a.dimension() == 2);
    CHECK(a.equations()[0] == normalize(parse_term("E(y) - x1")));
    CHECK(a.equations()[1] == normalize(parse_term("x2 - E(1)")));
    CHECK(a.jacobian_det() == e_of_y());

    // {x1 E(x1) - 1}: det = E(y) (E(x1) + x1 E(x1)), shifted
    KhovanskiiSystem omega_aug = augment_log(sys("x1*E(x1) - 1"));
    CanonicalPoly expected =
        mul(e_of_y(), normalize(parse_term("E(x2) + x2*E(x2)")));
    CHECK(omega_aug.jacobian_det() == expected);

    // applying the identity twice stacks the factors
    KhovanskiiSystem twice = augment_log(augment_log(sys("x1 - E(1)")));
    CanonicalPoly ey1 = exp_atom(CanonicalPoly::variable(1));
    CanonicalPoly ey2 = exp_atom(CanonicalPoly::variable(2));
    CHECK(twice.jacobian_det() == mul(ey1, ey2));
}

TEST_CASE("augment identity det(augment(S)) = E(y) det(S) on random systems") {
    testgen::Rng rng(90210);
    int checked = 0;
    while (checked < 60) {
        int n = 1 + static_cast<int>(testgen::rand_long(rng, 0, 2));
        KhovanskiiSystem s{random_equations(rng, n)};
        KhovanskiiSystem a = augment_log(s);
        CanonicalPoly rhs = mul(e_of_y(), shift_variables(s.jacobian_det(), 1));
        CHECK(a.jacobian_det() == rhs);
        ++checked;
    }
}

TEST_CASE("combine: block determinant structure") {
    KhovanskiiSystem e_sys = sys("x1 - E(1)");
    KhovanskiiSystem omega = sys("x1*E(x1) - 1");

    SUBCASE("sum appends z - (u + v) with unit factor") {
        KhovanskiiSystem c = combine(e_sys, &omega, CombineOp::Sum);
        CHECK(c.dimension() == 3);
        CHECK(c.equations()[0] == normalize(parse_term("x1 - x2 - x3")));
        CanonicalPoly expected = mul(shift_variables(e_sys.jacobian_det(), 1),
                                     shift_variables(omega.jacobian_det(), 2));
        CHECK(c.jacobian_det() == expected);
    }
    SUBCASE("product appends z - u v") {
        KhovanskiiSystem c = combine(e_sys, &omega, CombineOp::Product);
        CHECK(c.equations()[0] == normalize(parse_term("x1 - x2*x3")));
        CanonicalPoly expected = mul(shift_variables(e_sys.jacobian_det(), 1),
                                     shift_variables(omega.jacobian_det(), 2));
        CHECK(c.jacobian_det() == expected);
    }
    SUBCASE("inverse appends z u - 1 and contributes the factor u") {
        KhovanskiiSystem c = combine(omega, nullptr, CombineOp::Inverse);
        CHECK(c.dimension() == 2);
        CHECK(c.equations()[0] == normalize(parse_term("x1*x2 - 1")));
        CanonicalPoly expected = mul(CanonicalPoly::variable(2),
                                     shift_variables(omega.jacobian_det(), 1));
        CHECK(c.jacobian_det() == expected);
    }
    SUBCASE("exp appends z - E(u) with unit factor") {
        KhovanskiiSystem c = combine(omega, nullptr, CombineOp::Exp);
        CHECK(c.equations()[0] == normalize(parse_term("x1 - E(x2)")));
        CHECK(c.jacobian_det() == shift_variables(omega.jacobian_det(), 1));
    }
    SUBCASE("binary ops require two systems") {
        CHECK_THROWS_AS(combine(e_sys, nullptr, CombineOp::Sum), DomainError);
    }
}

TEST_CASE("combine determinant factorization on random pairs") {
    testgen::Rng rng(1123);
    for (int i = 0; i < 40; ++i) {
        int na = 1 + static_cast<int>(testgen::rand_long(rng, 0, 1));
        int nb = 1 + static_cast<int>(testgen::rand_long(rng, 0, 1));
        KhovanskiiSystem a{random_equations(rng, na)};
        KhovanskiiSystem b{random_equations(rng, nb)};
        CanonicalPoly da = shift_variables(a.jacobian_det(), 1);
        CanonicalPoly db = shift_variables(b.jacobian_det(), na + 1);

        CHECK(combine(a, &b, CombineOp::Sum).jacobian_det() == mul(da, db));
        CHECK(combine(a, &b, CombineOp::Product).jacobian_det() == mul(da, db));
        CHECK(combine(a, nullptr, CombineOp::Inverse).jacobian_det() ==
              mul(CanonicalPoly::variable(2), da));
        CHECK(combine(a, nullptr, CombineOp::Exp).jacobian_det() == da);
    }
}

TEST_CASE("symbolic det agrees with the numeric determinant at random points") {
    testgen::Rng rng(7711);
    for (int i = 0; i < 25; ++i) {
        int n = 1 + static_cast<int>(testgen::rand_long(rng, 0, 1));
        KhovanskiiSystem s{random_equations(rng, n)};
        IntervalBox point;
        for (int v = 0; v < n; ++v) {
            mpq_class r = testgen::random_dyadic(rng, -1, 1, 8);
            point.push_back(oracle::to_interval({r, r}, 96));
        }
        Interval sym = eval_poly(s.jacobian_det(), point, 96);
        // cofactor expansion over interval-evaluated entries
        Interval num;
        if (n == 1) {
            num = eval_poly(s.jacobian()[0][0], point, 96);
        } else {
            Interval a = eval_poly(s.jacobian()[0][0], point, 96);
            Interval b = eval_poly(s.jacobian()[0][1], point, 96);
            Interval c = eval_poly(s.jacobian()[1][0], point, 96);
            Interval d = eval_poly(s.jacobian()[1][1], point, 96);
            num = sub(mul(a, d, 96), mul(b, c, 96), 96);
        }
        CHECK(sym.overlaps(num));
    }
}
