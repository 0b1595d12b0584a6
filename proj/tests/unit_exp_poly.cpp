#include "eclkit/poly.hpp"

#include "eclkit/errors.hpp"
#include "eclkit/eval.hpp"
#include "eclkit/syntax.hpp"

#include "generators.hpp"
#include "oracle.hpp"

#include <doctest.h>

#include <cmath>

using namespace eclkit;

namespace {

ExpTerm X(int i) { return ExpTerm::variable(i); }
ExpTerm C(long v) { return ExpTerm::constant(mpz_class(v)); }

CanonicalPoly N(const ExpTerm& t) { return normalize(t); }

} // namespace

TEST_CASE("normalize: ring-axiom examples") {
    // x1 + x1 -> 2 x1
    CanonicalPoly p = N(X(1) + X(1));
    CHECK(p == N(C(2) * X(1)));
    CHECK(print_poly(p) == "2*x1");

    // E(0) -> 1
    CHECK(N(ExpTerm::exp(C(0))) == CanonicalPoly::from_long(1));

    // x1 E(x2) - E(x2) x1 -> 0
    CHECK(N(X(1) * ExpTerm::exp(X(2)) - ExpTerm::exp(X(2)) * X(1)).is_zero());
}

TEST_CASE("normalize: power conventions") {
    CHECK(N(ExpTerm::power(X(1), 0)) == CanonicalPoly::from_long(1));
    CHECK(N(ExpTerm::power(X(1), 3)) == N(X(1) * X(1) * X(1)));
    CHECK(N(ExpTerm::power(C(-2), 3)) == CanonicalPoly::from_long(-8));
}

TEST_CASE("exp splitting over sums with positive integer parts") {
    // E(2 x1) = E(x1)^2
    CHECK(N(ExpTerm::exp(C(2) * X(1))) ==
          N(ExpTerm::exp(X(1)) * ExpTerm::exp(X(1))));
    // E(x1 + x2) = E(x1) E(x2)
    CHECK(N(ExpTerm::exp(X(1) + X(2))) ==
          N(ExpTerm::exp(X(1)) * ExpTerm::exp(X(2))));
    // E(3) = E(1)^3
    CHECK(N(ExpTerm::exp(C(3))) == N(ExpTerm::power(ExpTerm::exp(C(1)), 3)));
    // negative parts stay in a residual atom: E(-x1) is a single atom
    CanonicalPoly m = N(ExpTerm::exp(-X(1)));
    REQUIRE(m.monomials().size() == 1);
    CHECK(m.monomials()[0].atoms.size() == 1);
    // mixed: E(x1 - x2) = E(x1) E(-x2)
    CHECK(N(ExpTerm::exp(X(1) - X(2))) ==
          N(ExpTerm::exp(X(1)) * ExpTerm::exp(-X(2))));
    // structural coarseness: E(-2 x1) and E(-x1)^2 denote the same value but
    // normalize differently (no splitting on negative parts)
    CHECK(N(ExpTerm::exp(C(-2) * X(1))) !=
          N(ExpTerm::power(ExpTerm::exp(-X(1)), 2)));
}

TEST_CASE("add and mul: identity and absorbing elements") {
    testgen::Rng rng(1);
    CanonicalPoly p = testgen::random_poly(rng, 2, 1, 6);
    CHECK(mul(p, CanonicalPoly()) == CanonicalPoly());
    CHECK(add(CanonicalPoly::variable(1), CanonicalPoly()) ==
          CanonicalPoly::variable(1));
    CHECK(N(ExpTerm::exp(X(1)) * ExpTerm::exp(X(1))) ==
          N(ExpTerm::exp(C(2) * X(1))));
}

TEST_CASE("normalize is idempotent on random terms") {
    testgen::Rng rng(42);
    for (int i = 0; i < 200; ++i) {
        ExpTerm t = testgen::random_term(rng, 3, 2, 12);
        CanonicalPoly p;
        try {
            p = normalize(t);
        } catch (const ResourceLimitError&) {
            continue;
        }
        // re-normalizing through the printer round-trip must be a fixpoint
        CanonicalPoly q = normalize(parse_term(print_poly(p)));
        CHECK(p == q);
    }
}

TEST_CASE("ring axioms hold structurally on random canonical triples") {
    testgen::Rng rng(4242);
    for (int i = 0; i < 120; ++i) {
        CanonicalPoly a = testgen::random_poly(rng, 2, 2, 8);
        CanonicalPoly b = testgen::random_poly(rng, 2, 2, 8);
        CanonicalPoly c = testgen::random_poly(rng, 2, 2, 8);
        CHECK(add(a, b) == add(b, a));
        CHECK(mul(a, b) == mul(b, a));
        CHECK(add(add(a, b), c) == add(a, add(b, c)));
        CHECK(mul(mul(a, b), c) == mul(a, mul(b, c)));
        CHECK(mul(a, add(b, c)) == add(mul(a, b), mul(a, c)));
        CHECK(add(a, neg(a)).is_zero());
        CHECK(mul(a, CanonicalPoly::from_long(1)) == a);
    }
}

TEST_CASE("substitute: spec examples") {
    // substitute(x1 E(x1), {x1 -> 0}) = 0
    CanonicalPoly p = N(X(1) * ExpTerm::exp(X(1)));
    std::map<int, CanonicalPoly> to_zero{{1, CanonicalPoly()}};
    CHECK(substitute(p, to_zero).is_zero());

    // swap is an involution on x1 + x2
    std::map<int, CanonicalPoly> swap_vars{{1, CanonicalPoly::variable(2)},
                                           {2, CanonicalPoly::variable(1)}};
    CanonicalPoly s = N(X(1) + X(2));
    CHECK(substitute(s, swap_vars) == s);

    // substitute(E(x1), {x1 -> x2 + 1}) = normalize(E(x2 + 1))
    std::map<int, CanonicalPoly> shift{{1, N(X(2) + C(1))}};
    CHECK(substitute(N(ExpTerm::exp(X(1))), shift) ==
          N(ExpTerm::exp(X(2) + C(1))));

    // missing variable errors
    std::map<int, CanonicalPoly> empty;
    CHECK_THROWS_AS(substitute(p, empty), DomainError);
}

TEST_CASE("substitute distributes over add and mul") {
    testgen::Rng rng(99);
    for (int i = 0; i < 60; ++i) {
        CanonicalPoly a = testgen::random_poly(rng, 2, 1, 7);
        CanonicalPoly b = testgen::random_poly(rng, 2, 1, 7);
        std::map<int, CanonicalPoly> sigma{
            {1, testgen::random_poly(rng, 2, 1, 5)},
            {2, testgen::random_poly(rng, 2, 1, 5)},
        };
        try {
            CHECK(substitute(add(a, b), sigma) ==
                  add(substitute(a, sigma), substitute(b, sigma)));
            CHECK(substitute(mul(a, b), sigma) ==
                  mul(substitute(a, sigma), substitute(b, sigma)));
        } catch (const ResourceLimitError&) {
            continue;
        }
    }
}

TEST_CASE("partial_derivative: spec examples") {
    // d/dx1 E(x1) = E(x1)
    CanonicalPoly e1 = N(ExpTerm::exp(X(1)));
    CHECK(partial_derivative(e1, 1) == e1);

    // d/dx1 of x1 E(x1 x2) = E(x1 x2) + x1 x2 E(x1 x2)
    CanonicalPoly p = N(X(1) * ExpTerm::exp(X(1) * X(2)));
    CanonicalPoly expected =
        N(ExpTerm::exp(X(1) * X(2)) + X(1) * X(2) * ExpTerm::exp(X(1) * X(2)));
    CHECK(partial_derivative(p, 1) == expected);

    // d/dx2 E(x1) = 0
    CHECK(partial_derivative(e1, 2).is_zero());
}

TEST_CASE("derivative satisfies linearity and the product rule structurally") {
    testgen::Rng rng(31337);
    for (int i = 0; i < 80; ++i) {
        CanonicalPoly a = testgen::random_poly(rng, 2, 2, 8);
        CanonicalPoly b = testgen::random_poly(rng, 2, 2, 8);
        for (int v = 1; v <= 2; ++v) {
            CHECK(partial_derivative(add(a, b), v) ==
                  add(partial_derivative(a, v), partial_derivative(b, v)));
            CHECK(partial_derivative(mul(a, b), v) ==
                  add(mul(partial_derivative(a, v), b),
                      mul(a, partial_derivative(b, v))));
        }
    }
}

TEST_CASE("symbolic derivative matches central finite differences") {
    testgen::Rng rng(2025);
    const mpq_class h(1, 10000000); // 1e-7
    int accepted = 0, attempts = 0;
    while (accepted < 30 && attempts < 600) {
        ++attempts;
        ExpTerm t = testgen::random_term(rng, 2, 2, 9);
        CanonicalPoly p;
        try {
            p = normalize(t);
        } catch (const ResourceLimitError&) {
            continue;
        }
        int var = 1 + static_cast<int>(testgen::rand_long(rng, 0, 1));
        CanonicalPoly dp = partial_derivative(p, var);
        std::map<int, mpq_class> point{
            {1, testgen::random_dyadic(rng, -1, 1, 8)},
            {2, testgen::random_dyadic(rng, -1, 1, 8)},
        };
        oracle::RatInterval fplus, fminus;
        try {
            auto shifted = point;
            shifted[var] = point[var] + h;
            fplus = oracle::eval_term(t, shifted, 256);
            shifted[var] = point[var] - h;
            fminus = oracle::eval_term(t, shifted, 256);
        } catch (const std::invalid_argument&) {
            continue;
        }
        oracle::RatInterval fd = oracle::rat_mul(
            oracle::rat_sub(fplus, fminus),
            oracle::RatInterval{mpq_class(1) / (2 * h), mpq_class(1) / (2 * h)});

        IntervalBox at;
        at.push_back(oracle::to_interval({point[1], point[1]}, 128));
        at.push_back(oracle::to_interval({point[2], point[2]}, 128));
        Interval sym = eval_poly(dp, at, 128);
        double sym_mid = sym.midpoint(64).to_double();
        if (std::abs(sym_mid) <= 1e-3) continue; // tiny derivatives filtered
        ++accepted;
        double fd_mid = oracle::mid(fd).get_d();
        CHECK(std::abs(sym_mid - fd_mid) / std::abs(sym_mid) < 1e-6);
    }
    CHECK(accepted == 30);
}

TEST_CASE("E(a+b) and E(a)E(b) agree denotationally at random points") {
    testgen::Rng rng(555);
    for (int i = 0; i < 40; ++i) {
        CanonicalPoly a = testgen::random_poly(rng, 2, 1, 6);
        CanonicalPoly b = testgen::random_poly(rng, 2, 1, 6);
        CanonicalPoly lhs, rhs;
        try {
            lhs = exp_atom(add(a, b));
            rhs = mul(exp_atom(a), exp_atom(b));
        } catch (const ResourceLimitError&) {
            continue;
        }
        IntervalBox box{
            oracle::to_interval({mpq_class(-1, 3), mpq_class(-1, 3)}, 96),
            oracle::to_interval({mpq_class(1, 7), mpq_class(1, 7)}, 96),
        };
        Interval vl = eval_poly(lhs, box, 96);
        Interval vr = eval_poly(rhs, box, 96);
        CHECK(vl.overlaps(vr));
    }
}

TEST_CASE("complexity measures") {
    auto c0 = CanonicalPoly().complexity();
    CHECK(c0.tower_height == 0);
    CHECK(c0.monomial_count == 0);
    CHECK(c0.coeff_bits == 0);

    auto c2 = N(ExpTerm::exp(ExpTerm::exp(X(1)))).complexity();
    CHECK(c2.tower_height == 2);

    auto c3 = N(C(3) * ExpTerm::power(X(1), 2)).complexity();
    CHECK(c3.tower_height == 0);
    CHECK(c3.monomial_count == 1);
    CHECK(c3.coeff_bits == 2);
}

TEST_CASE("resource limits signal exhaustion, not wrong answers") {
    Limits tight;
    tight.max_depth = 1;
    CHECK_THROWS_AS(normalize(ExpTerm::exp(ExpTerm::exp(X(1))), tight),
                    ResourceLimitError);

    Limits tiny;
    tiny.max_monomials = 3;
    ExpTerm big = (X(1) + X(2) + C(1)) * (X(1) + X(2) + C(2));
    CHECK_THROWS_AS(normalize(big, tiny), ResourceLimitError);
}

TEST_CASE("huge power exponents only for atom products") {
    // E(x1)^(2^70) is representable via multiplicity scaling
    ExpTerm huge_exp = ExpTerm::power(ExpTerm::exp(X(1)), mpz_class(1) << 70);
    CanonicalPoly p = normalize(huge_exp);
    REQUIRE(p.monomials().size() == 1);
    CHECK(p.monomials()[0].atoms[0].mult == mpz_class(1) << 70);
    // but a general base overflows the budget
    CHECK_THROWS_AS(normalize(ExpTerm::power(X(1) + C(1), mpz_class(1) << 70)),
                    ResourceLimitError);
}
