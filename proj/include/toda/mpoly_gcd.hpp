#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "toda/mpoly.hpp"

namespace toda {

/*
 * Multivariate gcd.
 *
 * Strategy: rational content is split off first, the primitive-part gcd
 * is computed by the subresultant PRS with a content/primitive recursion
 * over a chosen main variable.  Two shortcuts keep the common cases
 * cheap: a modular evaluation pretest detects coprime primitive parts
 * (the usual case for numerator/denominator pairs) without running the
 * PRS, and a trial division catches the divides-the-other case (the
 * usual one for denominator towers).
 *
 * Unit convention: mpoly_gcd(p, q) carries the gcd of the rational
 * contents and a primitive polynomial part with positive leading
 * coefficient, so mpoly_gcd(4*a, 6*hbar) = 2 and mpoly_gcd(p, 0) is p
 * normalized to positive leading coefficient.
 */

inline Rat rat_content(const MPoly& p) {
    bool all_integer = true;
    for (const auto& [m, coeff] : p.terms())
        if (coeff.get_den() != 1) {
            all_integer = false;
            break;
        }
    Rat c(0);
    if (all_integer) {
        // Integer coefficients: the content is an integer gcd and the
        // fold can stop at 1.
        Int g(0);
        for (const auto& [m, coeff] : p.terms()) {
            g = gcd(g, coeff.get_num());
            if (g == 1) break;
        }
        return Rat(g);
    }
    // With rational coefficients the content can shrink below 1
    // (rat_gcd(1, 1/2) = 1/2), so every term must be folded.
    for (const auto& [m, coeff] : p.terms()) c = rat_gcd(c, coeff);
    return c;
}

/// Multiply by -1 if the leading coefficient is negative.
inline MPoly sign_normalized(const MPoly& p) {
    if (p.is_zero() || sgn(p.leading_coeff()) > 0) return p;
    return -p;
}

/// p / content(p), normalized to positive leading coefficient.
inline MPoly primitive_part(const MPoly& p) {
    if (p.is_zero()) return p;
    Rat c = rat_content(p);
    if (sgn(p.leading_coeff()) < 0) c = -c;
    return p / c;
}

namespace gcd_detail {

// --- univariate view in a main variable over MPoly coefficients ---

struct UView {
    std::vector<MPoly> c;  // c[k] = coefficient of x^k

    int deg() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }
    void trim() {
        while (!c.empty() && c.back().is_zero()) c.pop_back();
    }
    const MPoly& lc() const { return c.back(); }
};

inline UView to_uview(const MPoly& p, Var x) {
    UView v;
    v.c.resize(p.degree_in(x) + 1);
    for (const auto& [m, coeff] : p.terms()) {
        Monomial rest = m;
        uint16_t k = m.exp(x);
        rest.set_exp(x, 0);
        v.c[k].add_term(rest, coeff);
    }
    v.trim();
    return v;
}

inline MPoly from_uview(const UView& v, Var x) {
    MPoly p;
    for (size_t k = 0; k < v.c.size(); ++k) {
        if (v.c[k].is_zero()) continue;
        p += v.c[k] * MPoly::variable(x, static_cast<uint16_t>(k));
    }
    return p;
}

inline UView scale(const UView& v, const MPoly& f) {
    UView r;
    r.c.reserve(v.c.size());
    for (const auto& ci : v.c) r.c.push_back(ci * f);
    r.trim();
    return r;
}

/// r = lb*r - s*x^shift*b, the single step of pseudo-division.
inline void reduce_step(UView& r, const MPoly& lb, const UView& b, int shift) {
    MPoly s = r.lc();
    UView out;
    out.c.resize(std::max(r.c.size() - 1, b.c.size() - 1 + shift));
    for (size_t k = 0; k + 1 < r.c.size(); ++k) out.c[k] = r.c[k] * lb;
    for (size_t k = 0; k + 1 < b.c.size(); ++k) out.c[k + shift] -= b.c[k] * s;
    out.trim();
    r = std::move(out);
}

/// Pseudo-remainder: prem(a, b) with the classical lc(b)^(deg a - deg b + 1)
/// scaling, so all divisions in the subresultant chain stay exact.
inline UView prem(UView a, const UView& b) {
    int d = b.deg();
    const MPoly& lb = b.lc();
    int e = a.deg() - d + 1;
    while (!a.is_zero() && a.deg() >= d) {
        reduce_step(a, lb, b, a.deg() - d);
        --e;
    }
    if (e > 0) a = scale(a, pow(lb, static_cast<unsigned>(e)));
    return a;
}

inline UView divide_exact(const UView& v, const MPoly& f) {
    UView r;
    r.c.reserve(v.c.size());
    for (const auto& ci : v.c) {
        auto q = ci.divide_exact(f);
        if (!q) throw StructuralError("inexact division inside subresultant chain");
        r.c.push_back(std::move(*q));
    }
    r.trim();
    return r;
}

// --- modular pretest ---

inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline constexpr uint64_t kPretestPrime = 2147483647ULL;  // 2^31 - 1

inline uint64_t mulmod(uint64_t a, uint64_t b) { return (a * b) % kPretestPrime; }

inline uint64_t powmod(uint64_t base, uint64_t e) {
    uint64_t r = 1;
    base %= kPretestPrime;
    while (e) {
        if (e & 1) r = mulmod(r, base);
        base = mulmod(base, base);
        e >>= 1;
    }
    return r;
}

inline uint64_t invmod(uint64_t a) { return powmod(a, kPretestPrime - 2); }

/// Image of p mod kPretestPrime as a univariate polynomial in x, with the
/// other variables evaluated at the supplied points (power tables cached
/// per variable).  Fails when a coefficient denominator vanishes mod p.
inline bool modular_image(const MPoly& p, Var x,
                          const std::array<uint64_t, kVarCount>& point,
                          std::vector<uint64_t>& out) {
    std::array<std::vector<uint64_t>, kVarCount> pows;
    for (int i = 0; i < kVarCount; ++i) {
        Var v = static_cast<Var>(i);
        if (v == x) continue;
        int d = p.degree_in(v);
        if (d == 0) continue;
        auto& t = pows[i];
        t.resize(d + 1);
        t[0] = 1;
        for (int k = 1; k <= d; ++k) t[k] = mulmod(t[k - 1], point[i]);
    }
    out.assign(p.degree_in(x) + 1, 0);
    for (const auto& [m, coeff] : p.terms()) {
        uint64_t num = mpz_fdiv_ui(coeff.get_num().get_mpz_t(), kPretestPrime);
        uint64_t den = mpz_fdiv_ui(coeff.get_den().get_mpz_t(), kPretestPrime);
        if (den == 0) return false;
        uint64_t val = den == 1 ? num : mulmod(num, invmod(den));
        for (int i = 0; i < kVarCount; ++i) {
            Var v = static_cast<Var>(i);
            uint16_t e = m.exp(v);
            if (v == x || e == 0) continue;
            val = mulmod(val, pows[i][e]);
        }
        uint16_t k = m.exp(x);
        out[k] = (out[k] + val) % kPretestPrime;
    }
    while (!out.empty() && out.back() == 0) out.pop_back();
    return true;
}

inline int univariate_gcd_degree(std::vector<uint64_t> a, std::vector<uint64_t> b) {
    auto deg = [](const std::vector<uint64_t>& v) { return static_cast<int>(v.size()) - 1; };
    while (!b.empty()) {
        // a mod b
        uint64_t inv_lb = invmod(b.back());
        while (deg(a) >= deg(b) && !a.empty()) {
            uint64_t f = mulmod(a.back(), inv_lb);
            int shift = deg(a) - deg(b);
            for (size_t i = 0; i < b.size(); ++i) {
                uint64_t& t = a[i + shift];
                t = (t + kPretestPrime - mulmod(f, b[i])) % kPretestPrime;
            }
            while (!a.empty() && a.back() == 0) a.pop_back();
        }
        std::swap(a, b);
    }
    return deg(a);
}

/// Upper bound for deg_x gcd(p, q) via one modular evaluation; -1 when the
/// evaluation is unusable (leading coefficient vanished etc).  A result of
/// 0 is a proof of coprime primitive parts in x.
inline int modular_gcd_degree_bound(const MPoly& p, const MPoly& q, Var x) {
    uint64_t seed = 0x51b0a9e4c1d3f2b7ULL;
    for (int attempt = 0; attempt < 4; ++attempt) {
        std::array<uint64_t, kVarCount> point{};
        for (auto& v : point) v = 1 + splitmix64(seed) % (kPretestPrime - 1);
        std::vector<uint64_t> pa, pb;
        if (!modular_image(p, x, point, pa)) return -1;
        if (!modular_image(q, x, point, pb)) return -1;
        if (static_cast<int>(pa.size()) - 1 != p.degree_in(x)) continue;
        if (static_cast<int>(pb.size()) - 1 != q.degree_in(x)) continue;
        return univariate_gcd_degree(std::move(pa), std::move(pb));
    }
    return -1;
}

}  // namespace gcd_detail

MPoly mpoly_gcd(const MPoly& p, const MPoly& q);

namespace gcd_detail {

inline Monomial min_exponents(const MPoly& p) {
    Monomial m = p.terms().begin()->first;
    for (const auto& [mm, c] : p.terms()) m = monomial_gcd(m, mm);
    return m;
}

/// gcd of x-contents: fold mpoly_gcd over the coefficients of the
/// univariate view.  Only called on integer polynomials, where the fold
/// can stop once the gcd collapses to 1.
inline MPoly content_in(const MPoly& p, Var x) {
    UView v = to_uview(p, x);
    MPoly g;
    for (const auto& ci : v.c) {
        if (ci.is_zero()) continue;
        g = g.is_zero() ? sign_normalized(ci) : mpoly_gcd(g, ci);
        if (g.is_constant() && g.constant_value() == 1) break;
    }
    return g;
}

/// Subresultant PRS on primitive inputs; returns the last nonzero
/// remainder (whose primitive part in x is the gcd), or a constant when
/// the inputs are coprime in x.
inline MPoly prs_gcd(const MPoly& pp, const MPoly& qq, Var x) {
    UView A = to_uview(pp, x);
    UView B = to_uview(qq, x);
    if (A.deg() < B.deg()) std::swap(A, B);
    MPoly g(Rat(1)), h(Rat(1));
    for (;;) {
        int delta = A.deg() - B.deg();
        UView R = prem(A, B);
        if (R.is_zero()) return from_uview(B, x);
        if (R.deg() == 0) return MPoly(Rat(1));
        A = std::move(B);
        B = divide_exact(R, g * pow(h, static_cast<unsigned>(delta)));
        g = A.lc();
        if (delta == 1) {
            h = g;
        } else if (delta > 1) {
            auto nh = pow(g, static_cast<unsigned>(delta)).divide_exact(pow(h, static_cast<unsigned>(delta - 1)));
            if (!nh) throw StructuralError("inexact division in subresultant h-update");
            h = std::move(*nh);
        }
    }
}

/// gcd of integer-primitive, sign-normalized, non-constant inputs.
inline MPoly gcd_primitive(const MPoly& P, const MPoly& Q) {
    if (P == Q) return P;

    // Split off the common monomial factor.
    Monomial mp = min_exponents(P);
    Monomial mq = min_exponents(Q);
    Monomial mg = monomial_gcd(mp, mq);
    MPoly Ps = P, Qs = Q;
    if (mp.deg() > 0) {
        auto d = P.divide_exact(MPoly::term(Rat(1), mp));
        Ps = std::move(*d);
    }
    if (mq.deg() > 0) {
        auto d = Q.divide_exact(MPoly::term(Rat(1), mq));
        Qs = std::move(*d);
    }
    MPoly mono = MPoly::term(Rat(1), mg);
    if (Ps.is_constant() || Qs.is_constant()) return mono;

    // Any variable shared by both; gcd cannot involve the others.
    Var x = Var::a1;
    int best = -1;
    for (int i = 0; i < kVarCount; ++i) {
        Var v = static_cast<Var>(i);
        int dp = Ps.degree_in(v), dq = Qs.degree_in(v);
        if (dp == 0 || dq == 0) continue;
        int score = std::min(dp, dq);
        if (best < 0 || score < best) {
            best = score;
            x = v;
        }
    }
    if (best < 0) return mono;  // disjoint variable supports

    int bound = modular_gcd_degree_bound(Ps, Qs, x);
    if (bound == 0) {
        // Coprime in x: only the x-contents can share factors.
        MPoly g = mpoly_gcd(content_in(Ps, x), content_in(Qs, x));
        return mono * g;
    }

    // Divides-the-other shortcut, guided by the modular degree bound.
    const MPoly& big = Ps.degree_in(x) >= Qs.degree_in(x) ? Ps : Qs;
    const MPoly& small = Ps.degree_in(x) >= Qs.degree_in(x) ? Qs : Ps;
    if (bound == small.degree_in(x) && big.divisible_by(small)) return mono * small;

    MPoly contP = content_in(Ps, x);
    MPoly contQ = content_in(Qs, x);
    MPoly cg = mpoly_gcd(contP, contQ);
    MPoly primP = Ps, primQ = Qs;
    if (!contP.is_constant() || contP.constant_value() != 1)
        primP = *Ps.divide_exact(contP);
    if (!contQ.is_constant() || contQ.constant_value() != 1)
        primQ = *Qs.divide_exact(contQ);

    MPoly G = prs_gcd(primP, primQ, x);
    if (G.is_constant()) return mono * cg;
    MPoly Gc = content_in(G, x);
    if (!Gc.is_constant() || Gc.constant_value() != 1) G = *G.divide_exact(Gc);
    return mono * cg * primitive_part(G);
}

}  // namespace gcd_detail

inline MPoly mpoly_gcd(const MPoly& p, const MPoly& q) {
    if (p.is_zero()) return sign_normalized(q);
    if (q.is_zero()) return sign_normalized(p);
    Rat cp = rat_content(p);
    Rat cq = rat_content(q);
    Rat c = rat_gcd(cp, cq);
    MPoly P = sign_normalized(p / cp);
    MPoly Q = sign_normalized(q / cq);
    if (P.is_constant() || Q.is_constant()) return MPoly(c);
    return gcd_detail::gcd_primitive(P, Q) * c;
}

inline MPoly mpoly_lcm(const MPoly& p, const MPoly& q) {
    if (p.is_zero() || q.is_zero()) return MPoly();
    MPoly g = mpoly_gcd(p, q);
    return *(p * q).divide_exact(g);
}

}  // namespace toda
