#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "toda/errors.hpp"

namespace toda {

/*
 * Global variable registry.
 *
 * Every polynomial in the library lives in one fixed ambient ring
 *
 *     Q[a1..a8, hbar, kappa, u, a0, w, eps1, eps2]
 *
 * so arithmetic never has to align variable lists.  a1..a8 are the
 * symbolic spectral parameters (lattice rank <= 8), hbar and kappa the
 * two deformation parameters, u and a0 the spectral-curve symbols
 * (a0^2 = u on the chosen branch), w the curve coordinate, eps1/eps2
 * the equivariant weights of the instanton sum.
 */
enum class Var : int {
    a1 = 0, a2, a3, a4, a5, a6, a7, a8,
    hbar,
    kappa,
    u,
    a0,
    w,
    eps1,
    eps2,
};

inline constexpr int kVarCount = 15;
inline constexpr int kMaxRank = 8;

inline Var a_var(int i) {
    if (i < 0 || i >= kMaxRank)
        throw Error("spectral variable index out of range: a" + std::to_string(i + 1));
    return static_cast<Var>(i);
}

inline const char* var_name(Var v) {
    static constexpr const char* names[kVarCount] = {
        "a1", "a2", "a3", "a4", "a5", "a6", "a7", "a8",
        "hbar", "kappa", "u", "a0", "w", "eps1", "eps2",
    };
    return names[static_cast<int>(v)];
}

inline const char* var_latex(Var v) {
    static constexpr const char* names[kVarCount] = {
        "a_1", "a_2", "a_3", "a_4", "a_5", "a_6", "a_7", "a_8",
        "\\hbar", "\\kappa", "u", "a_0", "w", "\\epsilon_1", "\\epsilon_2",
    };
    return names[static_cast<int>(v)];
}

/*
 * Monomial = exponent vector with cached total degree, packed into four
 * 64-bit words of 16-bit fields.  The total degree occupies the most
 * significant field and the variable exponents follow in priority order
 * (a1 first), so plain lexicographic comparison of the words is exactly
 * the canonical graded-lex order: lower total degree first, ties broken
 * by the exponent of a1, then a2, and so on.  Multiplication is word
 * addition (no field overflows for the degrees this library meets).
 */
struct Monomial {
    // field layout: word 0 = [deg | e0 | e1 | e2], word 1 = [e3..e6], ...
    std::array<uint64_t, 4> words{};

    static constexpr int field_word(int i) { return (i + 1) / 4; }
    static constexpr int field_shift(int i) { return 48 - 16 * ((i + 1) % 4); }

    uint16_t exp(Var v) const {
        int i = static_cast<int>(v);
        return static_cast<uint16_t>(words[field_word(i)] >> field_shift(i));
    }

    uint32_t deg() const { return static_cast<uint32_t>(words[0] >> 48); }

    void set_exp(Var v, uint16_t k) {
        int i = static_cast<int>(v);
        uint16_t old = exp(v);
        words[field_word(i)] &= ~(uint64_t{0xffff} << field_shift(i));
        words[field_word(i)] |= uint64_t{k} << field_shift(i);
        uint32_t d = deg() - old + k;
        words[0] = (words[0] & ~(uint64_t{0xffff} << 48)) | (uint64_t{d} << 48);
    }

    bool is_constant() const { return deg() == 0; }

    friend Monomial operator*(const Monomial& x, const Monomial& y) {
        Monomial r;
        for (int w = 0; w < 4; ++w) r.words[w] = x.words[w] + y.words[w];
        return r;
    }

    /// Exact monomial quotient; returns false when y does not divide x.
    bool divide(const Monomial& y, Monomial& out) const {
        for (int i = 0; i < kVarCount; ++i)
            if (exp(static_cast<Var>(i)) < y.exp(static_cast<Var>(i))) return false;
        for (int w = 0; w < 4; ++w) out.words[w] = words[w] - y.words[w];
        return true;
    }

    friend bool operator==(const Monomial& x, const Monomial& y) { return x.words == y.words; }
    friend bool operator!=(const Monomial& x, const Monomial& y) { return !(x == y); }
    friend bool operator<(const Monomial& x, const Monomial& y) { return x.words < y.words; }
};

struct GrlexLess {
    bool operator()(const Monomial& x, const Monomial& y) const { return x.words < y.words; }
};

inline Monomial monomial_of(Var v, uint16_t k = 1) {
    Monomial m;
    m.set_exp(v, k);
    return m;
}

inline Monomial monomial_gcd(const Monomial& x, const Monomial& y) {
    Monomial r;
    for (int i = 0; i < kVarCount; ++i) {
        Var v = static_cast<Var>(i);
        r.set_exp(v, std::min(x.exp(v), y.exp(v)));
    }
    return r;
}

}  // namespace toda
