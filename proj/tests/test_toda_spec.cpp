#include <catch2/catch_amalgamated.hpp>
#include <set>
#include <sstream>

#include "toda/toda_spec.hpp"

using namespace toda;

TEST_CASE("A1 preset", "[spec]") {
    TodaSpec s = make_preset(Algebra::A1);
    REQUIRE(s.lattice->rank() == 1);
    REQUIRE(s.terms.size() == 2);
    REQUIRE(s.terms[0].weight == Weight{1});
    REQUIRE(s.terms[0].coeff == Rat(2));
    REQUIRE(s.terms[0].q_power == 0);
    REQUIRE(s.terms[1].weight == Weight{-1});
    REQUIRE(s.terms[1].q_power == 1);
    REQUIRE(s.grading_h == 2);
    REQUIRE_FALSE(s.is_uniform());
}

TEST_CASE("A2 preset", "[spec]") {
    TodaSpec s = make_preset(Algebra::A2);
    REQUIRE(s.terms.size() == 3);
    REQUIRE(s.grading_h == 3);
    Weight total = zero_weight(2);
    for (const auto& t : s.terms) total = total + t.weight;
    REQUIRE(total.is_zero());
    for (const auto& t : s.terms) REQUIRE(pairing(*s.lattice, t.weight, t.weight) == Rat(2));
}

TEST_CASE("degenerate custom Gram is rejected", "[spec]") {
    REQUIRE_THROWS_AS(make_lattice(1, {{Rat(0)}}), LatticeError);
}

TEST_CASE("term weights sum to zero against the marks", "[spec]") {
    for (Algebra alg : {Algebra::A1, Algebra::A2, Algebra::A3}) {
        TodaSpec s = make_preset(alg);
        Weight total = zero_weight(s.lattice->rank());
        for (const auto& t : s.terms) total = total + t.weight;  // all marks are 1 in type A
        REQUIRE(total.is_zero());
    }
}

TEST_CASE("cone validation accepts the presets", "[spec][cone]") {
    for (Algebra alg : {Algebra::A1, Algebra::A2, Algebra::A3}) {
        ConeReport rep = validate_cone(make_preset(alg));
        REQUIRE(rep.ok);
    }
}

TEST_CASE("cone validation rejects weight zero and outside terms", "[spec][cone]") {
    TodaSpec s = make_preset(Algebra::A1);
    SECTION("classical term at weight zero") {
        s.terms.push_back({Weight{0}, Rat(1), 0});
        ConeReport rep = validate_cone(s);
        REQUIRE_FALSE(rep.ok);
        REQUIRE_FALSE(rep.diagnostics.empty());
    }
    SECTION("classical term outside the cone") {
        s.terms.push_back({Weight{-1}, Rat(1), 0});
        ConeReport rep = validate_cone(s);
        REQUIRE_FALSE(rep.ok);
    }
    SECTION("missing cone data") {
        s.cone.clear();
        REQUIRE_FALSE(validate_cone(s).ok);
    }
}

TEST_CASE("change of variables makes the coupling uniform", "[spec][uniform]") {
    SECTION("A1: Q = q^2") {
        TodaSpec u = change_of_variables(make_preset(Algebra::A1));
        REQUIRE(u.is_uniform());
        REQUIRE(u.grading_h == 2);
        REQUIRE(u.terms[0].weight == Weight{1});
        REQUIRE(u.terms[1].weight == Weight{-1});
    }
    SECTION("A2: Q = q^3") {
        TodaSpec u = change_of_variables(make_preset(Algebra::A2));
        REQUIRE(u.is_uniform());
        REQUIRE(u.grading_h == 3);
        REQUIRE(u.terms.size() == 3);
    }
    SECTION("already uniform is the identity") {
        TodaSpec u = change_of_variables(make_preset(Algebra::A2));
        TodaSpec v = change_of_variables(u);
        REQUIRE(v.is_uniform());
        REQUIRE(v.grading_h == u.grading_h);
        REQUIRE(v.terms.size() == u.terms.size());
    }
}

TEST_CASE("change of variables preserves the norm multiset", "[spec][uniform]") {
    for (Algebra alg : {Algebra::A1, Algebra::A2, Algebra::A3}) {
        TodaSpec s = make_preset(alg);
        TodaSpec u = change_of_variables(s);
        std::multiset<Rat> before, after;
        for (const auto& t : s.terms) before.insert(pairing(*s.lattice, t.weight, t.weight));
        for (const auto& t : u.terms) after.insert(pairing(*u.lattice, t.weight, t.weight));
        REQUIRE(before == after);
    }
}

TEST_CASE("no consistent shift vector exists for broken term lists", "[spec][uniform]") {
    TodaSpec s = make_preset(Algebra::A2);
    s.terms.push_back({Weight{1, 1}, Rat(1), 0});  // second relation appears
    REQUIRE_THROWS_AS(change_of_variables(s), PreconditionError);
}

TEST_CASE("uniform potential assembles the term list", "[spec]") {
    TodaSpec u = change_of_variables(make_preset(Algebra::A1));
    TrigPoly pot = uniform_potential(u);
    REQUIRE(pot.term_count() == 2);
    REQUIRE(pot.coeff(Weight{1}) == RatFn(Rat(2)));
    REQUIRE(pot.coeff(Weight{-1}) == RatFn(Rat(2)));
    REQUIRE_THROWS_AS(uniform_potential(make_preset(Algebra::A1)), PreconditionError);
}

TEST_CASE("algebra files load and validate", "[spec][io]") {
    std::istringstream in(R"(# sl3 in simple-root coordinates
rank 2
gram 2 -1
gram -1 2
term 1 0 : 2 : 0
term 0 1 : 2 : 0
term -1 -1 : 2 : 1
cone 1 0
cone 0 1
)");
    TodaSpec s = load_toda_file(in, "<test>");
    REQUIRE(s.lattice->rank() == 2);
    REQUIRE(s.terms.size() == 3);
    REQUIRE(s.grading_h == 3);  // computed from the affine relation
    REQUIRE(validate_cone(s).ok);

    TodaSpec preset = make_preset(Algebra::A2);
    REQUIRE(*s.lattice == *preset.lattice);
}

TEST_CASE("malformed algebra files are rejected", "[spec][io]") {
    auto load = [](const std::string& text) {
        std::istringstream in(text);
        return load_toda_file(in, "<test>");
    };
    REQUIRE_THROWS_AS(load("gram 1\n"), ParseError);
    REQUIRE_THROWS_AS(load("rank 1\ngram 1\nterm 1 : x : 0\n"), ParseError);
    REQUIRE_THROWS_AS(load("rank 1\ngram 1\n"), ParseError);
    REQUIRE_THROWS_AS(load("rank 1\ngram 1\nfoo\n"), ParseError);
    REQUIRE_THROWS_AS(load("rank 1\ngram 0\nterm 1 : 2 : 0\n"), LatticeError);
}
