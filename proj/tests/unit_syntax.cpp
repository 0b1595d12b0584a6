#include "eclkit/syntax.hpp"

#include "eclkit/errors.hpp"

#include "generators.hpp"

#include <doctest.h>

#include <string>

using namespace eclkit;

TEST_CASE("parse_term: grammar examples") {
    // "x1*E(x1) - 1" is a sum with a product/exp on the left
    ExpTerm t = parse_term("x1*E(x1) - 1");
    CHECK(t.kind() == ExpTerm::Kind::Sum);
    CHECK(normalize(t) ==
          normalize(ExpTerm::variable(1) * ExpTerm::exp(ExpTerm::variable(1)) -
                    ExpTerm::constant(1)));

    ExpTerm nested = parse_term("E(E(0))");
    CHECK(nested.kind() == ExpTerm::Kind::Exp);
    CHECK(nested.children()[0].kind() == ExpTerm::Kind::Exp);
    CHECK(nested.tower_height() == 2);

    // powers bind tighter than '*'
    CHECK(normalize(parse_term("2*x1^3")) ==
          normalize(ExpTerm::constant(2) *
                    ExpTerm::power(ExpTerm::variable(1), 3)));

    // unary minus
    CHECK(normalize(parse_term("-x1 + 1")) ==
          normalize(ExpTerm::constant(1) - ExpTerm::variable(1)));
}

TEST_CASE("parse_term: y maps to index 1 and shifts the x variables") {
    VarNaming naming = VarNaming::XNumbered;
    ExpTerm t = parse_term("E(y) - x1", &naming);
    CHECK(naming == VarNaming::YFirst);
    CHECK(t.max_variable() == 2);
    CHECK(normalize(t) ==
          normalize(ExpTerm::exp(ExpTerm::variable(1)) - ExpTerm::variable(2)));
    // without y, x1 is index 1
    ExpTerm u = parse_term("x1 + x2", &naming);
    CHECK(naming == VarNaming::XNumbered);
    CHECK(u.max_variable() == 2);
}

TEST_CASE("parse errors carry positions and expectations") {
    try {
        parse_term("x1 + * 2");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 1);
        CHECK(e.column() == 6);
        CHECK(std::string(e.what()).find("expected") != std::string::npos);
    }
    try {
        parse_term("E(x1");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("')'") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_term("x"), ParseError);
    CHECK_THROWS_AS(parse_term("3 @ 4"), ParseError);
    CHECK_THROWS_AS(parse_term(""), ParseError);
    CHECK_THROWS_AS(parse_term("x0"), ParseError);
}

TEST_CASE("parse_system: shapes and arity checking") {
    KhovanskiiSystem one = parse_system("x1*E(x1) - 1");
    CHECK(one.dimension() == 1);

    KhovanskiiSystem two = parse_system("vars: 2\nE(x1) - x2\nx2 - 5\n");
    CHECK(two.dimension() == 2);

    // inline with ';', with the y convention
    VarNaming naming;
    KhovanskiiSystem aug = parse_system("E(y)-x1; x1*E(x1)-1", &naming);
    CHECK(naming == VarNaming::YFirst);
    CHECK(aug.dimension() == 2);

    // comments and blank lines are fine
    KhovanskiiSystem c = parse_system("# the Omega system\nx1*E(x1) - 1  # root\n");
    CHECK(c.dimension() == 1);

    // arity mismatch: 1 equation, 2 variables
    CHECK_THROWS_AS(parse_system("x1 + x2"), ParseError);
    // declared count beats inference
    CHECK_THROWS_AS(parse_system("vars: 3\nx1 - 1\n"), ParseError);
    CHECK_THROWS_AS(parse_system(""), ParseError);
}

TEST_CASE("parse_formula: connectives, precedence, relation sugar") {
    ConstraintFormula f = parse_formula("x1 < E(x2) & !(x1 = 0)");
    CHECK(f.kind() == ConstraintFormula::Kind::And);
    CHECK(f.left().kind() == ConstraintFormula::Kind::Atom);
    CHECK(f.left().relation() == Relation::Lt);
    CHECK(f.right().kind() == ConstraintFormula::Kind::Not);

    // '>' swaps sides into '<'
    ConstraintFormula g = parse_formula("c1 > 2");
    CHECK(g.kind() == ConstraintFormula::Kind::Atom);
    CHECK(g.relation() == Relation::Lt);
    CHECK(normalize(g.lhs()) == CanonicalPoly::from_long(2));

    // '&' binds tighter than '|'
    ConstraintFormula h = parse_formula("c1 = 1 | c1 = 2 & c2 = 3");
    CHECK(h.kind() == ConstraintFormula::Kind::Or);

    // parenthesized formula vs parenthesized term
    ConstraintFormula p1 = parse_formula("(c1 + 1) < 2");
    CHECK(p1.kind() == ConstraintFormula::Kind::Atom);
    ConstraintFormula p2 = parse_formula("(c1 < 2 | c2 < 1) & c1 != 0");
    CHECK(p2.kind() == ConstraintFormula::Kind::And);
}

TEST_CASE("print/parse round-trip on random canonical values") {
    testgen::Rng rng(808);
    int done = 0;
    for (int i = 0; i < 300 && done < 250; ++i) {
        CanonicalPoly p;
        try {
            p = testgen::random_poly(rng, 3, 2, 10);
        } catch (const ResourceLimitError&) {
            continue;
        }
        std::string text = print_poly(p);
        CanonicalPoly q = normalize(parse_term(text));
        CHECK(p == q);
        ++done;
    }
    CHECK(done == 250);
}

TEST_CASE("print uses the requested naming convention") {
    // canonical order puts the grade-1 monomial first
    CanonicalPoly p = normalize(parse_term("E(y) - x1"));
    CHECK(print_poly(p, VarNaming::YFirst) == "-x1 + E(y)");
    CHECK(print_poly(p, VarNaming::XNumbered) == "-x2 + E(x1)");
    CHECK(print_poly(CanonicalPoly::variable(2), VarNaming::CNumbered) == "c2");
}

TEST_CASE("formula printing reparses to the same formula") {
    for (const char* text : {
             "c1 > 2",
             "c2 < 1 & c2*E(c2) = 1",
             "!(c1 = c2) | c1 <= 0",
             "c1 != 3 & (c2 < 1 | c1 < 1)",
         }) {
        ConstraintFormula f = parse_formula(text);
        std::string printed = print_formula(f);
        ConstraintFormula g = parse_formula(printed);
        CHECK(print_formula(g) == printed);
    }
}

TEST_CASE("parser never crashes on fuzzed input") {
    testgen::Rng rng(161803);
    const std::string alphabet = "x1234 ()+-*^E&|!<=>;.yc\n\t\"@";
    int parsed = 0, rejected = 0;
    for (int i = 0; i < 4000; ++i) {
        std::string s;
        int len = static_cast<int>(testgen::rand_long(rng, 0, 40));
        for (int j = 0; j < len; ++j) {
            s += alphabet[static_cast<size_t>(testgen::rand_long(
                rng, 0, static_cast<long>(alphabet.size()) - 1))];
        }
        try {
            parse_term(s);
            ++parsed;
        } catch (const ParseError&) {
            ++rejected;
        }
        try {
            parse_formula(s);
        } catch (const ParseError&) {
        }
        try {
            parse_system(s);
        } catch (const ParseError&) {
        }
    }
    CHECK(parsed + rejected == 4000);
    CHECK(rejected > 0); // the alphabet makes some rejections certain
}

TEST_CASE("box parsing") {
    IntervalBox b = parse_box("[0, 1]; [-3, 3]", 64);
    REQUIRE(b.size() == 2);
    CHECK(b[0].contains(Real::from_double(0.5, 64)));
    CHECK(b[1].contains(Real::from_double(-2.5, 64)));
    CHECK_THROWS_AS(parse_box("", 64), DomainError);
    CHECK_THROWS_AS(parse_box("[1, 0]", 64), DomainError);
    CHECK_THROWS_AS(parse_box("[a, b]", 64), DomainError);
}
