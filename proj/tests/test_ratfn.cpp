#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "toda/ratfn.hpp"

using namespace toda;

namespace {

const MPoly A = MPoly::variable(Var::a1);
const MPoly H = MPoly::variable(Var::hbar);
const MPoly K = MPoly::variable(Var::kappa);

RatFn random_ratfn(std::mt19937& rng) {
    std::uniform_int_distribution<int> coeffd(-3, 3);
    std::uniform_int_distribution<int> expd(0, 2);
    auto poly = [&](bool nonzero) {
        MPoly p;
        for (int i = 0; i < 2; ++i) {
            int c = coeffd(rng);
            if (c == 0) continue;
            Monomial m;
            m.set_exp(Var::a1, static_cast<uint16_t>(expd(rng)));
            m.set_exp(Var::hbar, static_cast<uint16_t>(expd(rng)));
            p.add_term(m, Rat(c));
        }
        if (nonzero && p.is_zero()) p = MPoly(Rat(1)) + MPoly::variable(Var::a1);
        return p;
    };
    return RatFn(poly(false), poly(true));
}

}  // namespace

TEST_CASE("common denominator identity", "[ratfn]") {
    RatFn x(MPoly(Rat(1)), A - H);
    RatFn y(MPoly(Rat(1)), A + H);
    RatFn expected(A * Rat(2), A * A - H * H);
    REQUIRE(x + y == expected);
}

TEST_CASE("gcd cancellation happens on construction", "[ratfn]") {
    RatFn f(A * A - H * H, A + H);
    REQUIRE(f == RatFn(A - H));
    REQUIRE(f.is_polynomial());
}

TEST_CASE("absorbing zero and division errors", "[ratfn]") {
    std::mt19937 rng(7);
    RatFn x = random_ratfn(rng);
    REQUIRE((x * RatFn()).is_zero());
    REQUIRE_THROWS_AS(x / RatFn(), ArithmeticError);
    REQUIRE_THROWS_AS(RatFn(A, MPoly()), ArithmeticError);
}

TEST_CASE("canonical form is deterministic and content-free", "[ratfn]") {
    RatFn f(A * Rat(2), H * Rat(4));
    REQUIRE(f.num() == A);
    REQUIRE(f.den() == H * Rat(2));
    RatFn g = RatFn(A) * rat(1, 2);
    REQUIRE(g == RatFn(A, MPoly(Rat(2))));
    // den leading coefficient positive
    RatFn h(MPoly(Rat(1)), H - A);
    REQUIRE(sgn(h.den().leading_coeff()) > 0);
    REQUIRE(h.num() == MPoly(Rat(-1)));
}

TEST_CASE("specialization at hbar = 0", "[ratfn][substitute]") {
    RatFn f(MPoly(Rat(8)), A * A * Rat(4) - H * H);
    RatFn g = substitute(f, Var::hbar, Rat(0));
    REQUIRE(g == RatFn(MPoly(Rat(2)), A * A));

    REQUIRE(substitute(RatFn(A + H), Var::hbar, Rat(0)) == RatFn(A));

    RatFn pole(MPoly(Rat(1)), H);
    REQUIRE_THROWS_AS(substitute(pole, Var::hbar, Rat(0)), PoleError);
    try {
        substitute(pole, Var::hbar, Rat(0));
    } catch (const PoleError& e) {
        REQUIRE(e.factor == "hbar");
    }
}

TEST_CASE("kappa Laurent split", "[ratfn][laurent]") {
    // f = c/(-2 kappa) + regular, c free of kappa
    RatFn c(A, H + A);
    RatFn f = c / RatFn(K * Rat(-2)) + RatFn(MPoly(Rat(1)), K + MPoly(Rat(1)));
    LaurentParts parts = laurent_at_kappa(f, 1);
    REQUIRE(parts.principal.size() == 1);
    REQUIRE(parts.principal[0] == c * rat(-1, 2));
    REQUIRE(parts.regular == RatFn(MPoly(Rat(1)), K + MPoly(Rat(1))));

    SECTION("regular functions have zero principal part") {
        RatFn reg(A, K + H);
        LaurentParts p2 = laurent_at_kappa(reg, 1);
        REQUIRE(p2.principal[0].is_zero());
        REQUIRE(p2.regular == reg);
    }

    SECTION("pole deeper than allowed is an error") {
        RatFn deep(MPoly(Rat(1)), K * K);
        REQUIRE_THROWS_AS(laurent_at_kappa(deep, 1), ExcessPoleError);
    }

    SECTION("reassembly reproduces the input") {
        RatFn g = RatFn(A + H, K * K) + RatFn(MPoly(Rat(3)), K) + RatFn(H, K + H);
        LaurentParts p3 = laurent_at_kappa(g, 2);
        RatFn back = p3.regular;
        RatFn kinv = RatFn(MPoly(Rat(1)), K);
        back += p3.principal[1] * kinv;
        back += p3.principal[0] * kinv * kinv;
        REQUIRE(back == g);
    }
}

TEST_CASE("field axioms on random triples", "[ratfn][property]") {
    std::mt19937 rng(20240902);
    for (int trial = 0; trial < 25; ++trial) {
        RatFn x = random_ratfn(rng);
        RatFn y = random_ratfn(rng);
        RatFn z = random_ratfn(rng);
        REQUIRE((x + y) + z == x + (y + z));
        REQUIRE((x * y) * z == x * (y * z));
        REQUIRE(x * (y + z) == x * y + x * z);
        REQUIRE((x + y) - y == x);
        if (!y.is_zero()) REQUIRE((x / y) * y == x);
        REQUIRE(x + (-x) == RatFn());
    }
}

TEST_CASE("specialization commutes with arithmetic", "[ratfn][property]") {
    std::mt19937 rng(20240903);
    for (int trial = 0; trial < 25; ++trial) {
        RatFn x = random_ratfn(rng);
        RatFn y = random_ratfn(rng);
        try {
            RatFn lhs = substitute(x + y, Var::hbar, Rat(0));
            RatFn rhs = substitute(x, Var::hbar, Rat(0)) + substitute(y, Var::hbar, Rat(0));
            REQUIRE(lhs == rhs);
            RatFn lhm = substitute(x * y, Var::hbar, Rat(0));
            RatFn rhm = substitute(x, Var::hbar, Rat(0)) * substitute(y, Var::hbar, Rat(0));
            REQUIRE(lhm == rhm);
        } catch (const PoleError&) {
            // undefined on one side; the contract only covers defined cases
        }
    }
}
