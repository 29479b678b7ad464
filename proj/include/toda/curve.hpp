#pragma once

#include <map>

#include "toda/spectral.hpp"

namespace toda {

/*
 * Rank-one spectral-curve checks.  The curve z^2 + q P(w) = u lives over
 * the w-line; per q-order every integrand is a Laurent polynomial in w,
 * and the normalized contour integral over the unit circle is exactly
 * the w^0 coefficient, so periods are evaluated formally and exactly.
 */

/// Laurent polynomial in the curve coordinate w with RatFn coefficients.
class LaurentPoly {
  public:
    using TermMap = std::map<int, RatFn>;

    LaurentPoly() = default;

    static LaurentPoly monomial(int power, RatFn c) {
        LaurentPoly p;
        if (!c.is_zero()) p.terms_[power] = std::move(c);
        return p;
    }

    static LaurentPoly constant(RatFn c) { return monomial(0, std::move(c)); }

    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    RatFn coeff(int power) const {
        auto it = terms_.find(power);
        return it == terms_.end() ? RatFn() : it->second;
    }

    void add_term(int power, const RatFn& c) {
        if (c.is_zero()) return;
        auto [it, inserted] = terms_.emplace(power, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    friend LaurentPoly operator+(const LaurentPoly& x, const LaurentPoly& y) {
        LaurentPoly r = x;
        for (const auto& [p, c] : y.terms_) r.add_term(p, c);
        return r;
    }

    friend LaurentPoly operator-(const LaurentPoly& x, const LaurentPoly& y) {
        LaurentPoly r = x;
        for (const auto& [p, c] : y.terms_) r.add_term(p, RatFn() - c);
        return r;
    }

    friend LaurentPoly operator*(const LaurentPoly& x, const LaurentPoly& y) {
        LaurentPoly r;
        for (const auto& [px, cx] : x.terms_)
            for (const auto& [py, cy] : y.terms_) r.add_term(px + py, cx * cy);
        return r;
    }

    LaurentPoly operator*(const RatFn& c) const {
        LaurentPoly r;
        if (c.is_zero()) return r;
        for (const auto& [p, coeff] : terms_) r.terms_[p] = coeff * c;
        return r;
    }

    LaurentPoly operator*(const Rat& c) const { return *this * RatFn(c); }

    friend bool operator==(const LaurentPoly& x, const LaurentPoly& y) {
        return x.terms_ == y.terms_;
    }
    friend bool operator!=(const LaurentPoly& x, const LaurentPoly& y) { return !(x == y); }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [p, c] : terms_) {
            if (!first) os << " + ";
            first = false;
            os << "(" << c.str() << ")";
            if (p != 0) os << "*w^" << p;
        }
        return os.str();
    }

  private:
    TermMap terms_;
};

inline bool is_one(const LaurentPoly& p) {
    return p.terms().size() == 1 && p.terms().begin()->first == 0 &&
           is_one(p.terms().begin()->second);
}

inline LaurentPoly one_like(const LaurentPoly&) {
    return LaurentPoly::constant(RatFn(Rat(1)));
}

/// The classical potential P(w) of a rank-one uniform spec under w = e^x.
inline LaurentPoly curve_potential(const TodaSpec& spec) {
    if (spec.lattice->rank() != 1)
        throw PreconditionError("the spectral curve machinery is rank-one only");
    if (!spec.is_uniform())
        throw PreconditionError("curve potential needs the uniform-q form");
    LaurentPoly p;
    for (const auto& t : spec.terms) p.add_term(t.weight.coords[0], RatFn(t.coeff));
    return p;
}

/// d(phi)/dx of a rank-one trigonometric polynomial, as a Laurent
/// polynomial in w = e^x.
inline LaurentPoly rank1_derivative(const TrigPoly& phi) {
    LaurentPoly r;
    for (const auto& [mu, c] : phi.terms()) r.add_term(mu.coords[0], c * Rat(mu.coords[0]));
    return r;
}

namespace curve_detail {

/// sqrt(a^2 + v - qP) as a q-series of Laurent polynomials, branch with
/// value a at q = 0 (so the momentum sqrt(...) - a vanishes at q = 0).
inline QSeries<LaurentPoly> sqrt_a2_plus(const QSeries<RatFn>& v, const LaurentPoly& P, int N) {
    if (!v.coeff(0).is_zero())
        throw PreconditionError("curve series need v with zero constant coefficient");
    if (v.order() < N)
        throw PreconditionError("curve series need v through order " + std::to_string(N));
    RatFn a(MPoly::variable(Var::a1));
    RatFn inv_a2(MPoly(Rat(1)), MPoly::variable(Var::a1, 2));
    QSeries<LaurentPoly> X(N);
    for (int m = 1; m <= N; ++m) X.coeff(m) = LaurentPoly::constant(v.coeff(m) * inv_a2);
    if (N >= 1) X.coeff(1) = X.coeff(1) - P * inv_a2;
    QSeries<LaurentPoly> one_plus = X;
    one_plus.coeff(0) = one_like(LaurentPoly());
    QSeries<LaurentPoly> root = series_sqrt(one_plus);
    return root.scaled(a);
}

}  // namespace curve_detail

/// The classical momentum -a + sqrt(a^2 + v - qP), order by order.
inline QSeries<LaurentPoly> classical_momentum(const QSeries<RatFn>& v, const LaurentPoly& P,
                                               int N) {
    QSeries<LaurentPoly> root = curve_detail::sqrt_a2_plus(v, P, N);
    root.coeff(0) = root.coeff(0) - LaurentPoly::constant(RatFn(MPoly::variable(Var::a1)));
    return root;
}

/*
 * The cycle-A period identity: since the classical phase is a
 * trigonometric polynomial, the contour integral of its derivative
 * vanishes, which pins the w^0 coefficient of sqrt(a^2 + v - qP) to a at
 * order zero and to 0 at every positive order.
 */
struct ResidueReport {
    bool ok = true;
    int first_failure = -1;
    std::string detail;
};

inline ResidueReport residue_identity_check(const QSeries<RatFn>& v, const LaurentPoly& P, int N) {
    ResidueReport rep;
    QSeries<LaurentPoly> root = curve_detail::sqrt_a2_plus(v, P, N);
    RatFn a(MPoly::variable(Var::a1));
    for (int m = 0; m <= N; ++m) {
        RatFn r = root.coeff(m).coeff(0);
        RatFn expected = m == 0 ? a : RatFn();
        if (r != expected) {
            rep.ok = false;
            rep.first_failure = m;
            rep.detail = "period residue differs from " + expected.str() + " at order " +
                         std::to_string(m) + ": " + r.str();
            return rep;
        }
    }
    return rep;
}

/*
 * The branch field Q(u)[a0]/(a0^2 - u).  Elements are kept as reduced
 * rational functions whose numerator has a0-degree at most one and whose
 * denominator is a0-free: the rewriting rule a0^2 -> u flattens powers
 * and multiplying by the a0-conjugate rationalizes denominators.
 */
class BranchFn {
  public:
    BranchFn() = default;
    BranchFn(const Rat& c) : f_(c) {}  // NOLINT
    explicit BranchFn(RatFn raw) : f_(std::move(raw)) { normalize(); }

    static BranchFn a0_symbol() { return BranchFn(RatFn(MPoly::variable(Var::a0))); }
    static BranchFn u_symbol() { return BranchFn(RatFn(MPoly::variable(Var::u))); }

    const RatFn& ratfn() const { return f_; }
    bool is_zero() const { return f_.is_zero(); }

    friend BranchFn operator+(const BranchFn& x, const BranchFn& y) {
        return BranchFn(x.f_ + y.f_);
    }
    friend BranchFn operator-(const BranchFn& x, const BranchFn& y) {
        return BranchFn(x.f_ - y.f_);
    }
    friend BranchFn operator-(const BranchFn& x) { return BranchFn(RatFn() - x.f_); }
    friend BranchFn operator*(const BranchFn& x, const BranchFn& y) {
        return BranchFn(x.f_ * y.f_);
    }
    friend BranchFn operator/(const BranchFn& x, const BranchFn& y) {
        if (y.is_zero()) throw ArithmeticError("branch-field division by zero");
        return BranchFn(x.f_ / y.f_);
    }

    BranchFn operator*(const Rat& c) const { return BranchFn(f_ * c); }

    friend bool operator==(const BranchFn& x, const BranchFn& y) { return x.f_ == y.f_; }
    friend bool operator!=(const BranchFn& x, const BranchFn& y) { return !(x == y); }

    std::string str() const { return f_.str(); }

  private:
    static MPoly flatten(const MPoly& p) {
        MPoly::TermList raw;
        raw.reserve(p.terms().size());
        for (const auto& [m, c] : p.terms()) {
            uint16_t e = m.exp(Var::a0);
            Monomial mm = m;
            if (e >= 2) {
                mm.set_exp(Var::a0, e % 2);
                mm.set_exp(Var::u, static_cast<uint16_t>(mm.exp(Var::u) + e / 2));
            }
            raw.emplace_back(mm, c);
        }
        return MPoly::from_terms(std::move(raw));
    }

    void normalize() {
        for (int i = 0; i < kVarCount; ++i) {
            Var v = static_cast<Var>(i);
            if (v == Var::u || v == Var::a0) continue;
            if (f_.depends_on(v))
                throw PreconditionError("branch-field element depends on a foreign variable: " +
                                        std::string(var_name(v)));
        }
        MPoly num = flatten(f_.num());
        MPoly den = flatten(f_.den());
        if (den.depends_on(Var::a0)) {
            MPoly conj = den.substituted(Var::a0, MPoly() - MPoly::variable(Var::a0));
            num = flatten(num * conj);
            den = flatten(den * conj);
        }
        f_ = RatFn(std::move(num), std::move(den));
    }

    RatFn f_;
};

inline bool is_one(const BranchFn& f) { return is_one(f.ratfn()); }
inline BranchFn one_like(const BranchFn&) { return BranchFn(Rat(1)); }

namespace curve_detail {

/// p(x(q)) for a univariate polynomial p in a1, by Horner over the series.
inline QSeries<BranchFn> eval_poly_at(const MPoly& p, const QSeries<BranchFn>& x) {
    for (int i = 0; i < kVarCount; ++i)
        if (static_cast<Var>(i) != Var::a1 && p.depends_on(static_cast<Var>(i)))
            throw PreconditionError("curve inversion needs data in the single variable a1");
    int d = p.degree_in(Var::a1);
    std::vector<Rat> coeffs(d + 1, Rat(0));
    for (const auto& [m, c] : p.terms()) coeffs[m.exp(Var::a1)] += c;
    QSeries<BranchFn> acc(x.order());
    acc.coeff(0) = BranchFn(coeffs[d]);
    for (int k = d - 1; k >= 0; --k) {
        acc = acc * x;
        acc.coeff(0) = acc.coeff(0) + BranchFn(coeffs[k]);
    }
    return acc;
}

/// v(x(q), q) with v's coefficients rational in a1.
inline QSeries<BranchFn> eval_v_at(const QSeries<RatFn>& v, const QSeries<BranchFn>& x, int N) {
    QSeries<BranchFn> out(N);
    for (int m = 1; m <= std::min(N, v.order()); ++m) {
        const RatFn& vm = v.coeff(m);
        if (vm.is_zero()) continue;
        int room = N - m;
        QSeries<BranchFn> xt = x.truncated(room);
        QSeries<BranchFn> val =
            series_div(eval_poly_at(vm.num(), xt), eval_poly_at(vm.den(), xt));
        for (int k = 0; k <= room; ++k) out.coeff(m + k) = out.coeff(m + k) + val.coeff(k);
    }
    return out;
}

}  // namespace curve_detail

/*
 * Local inversion a = a(u, q) of u = a^2 + v(a, q) on the branch
 * a(u, 0) = a0: write a = a0 + sum a_k q^k and solve order by order; the
 * defect at order k is removed by the Newton step a_k = -G_k / (2 a0).
 */
inline QSeries<BranchFn> invert_a_of_u(const QSeries<RatFn>& v, int N) {
    if (!v.coeff(0).is_zero())
        throw PreconditionError("curve inversion needs v with zero constant coefficient");
    QSeries<BranchFn> a(N);
    a.coeff(0) = BranchFn::a0_symbol();
    BranchFn u = BranchFn::u_symbol();
    BranchFn two_a0 = BranchFn::a0_symbol() * Rat(2);
    for (int k = 1; k <= N; ++k) {
        QSeries<BranchFn> G = a * a + curve_detail::eval_v_at(v, a, N);
        G.coeff(0) = G.coeff(0) - u;
        BranchFn defect = G.coeff(k);
        if (!defect.is_zero()) a.coeff(k) = BranchFn() - defect / two_a0;
    }
    return a;
}

/// Re-substitution check: a(u,q)^2 + v(a(u,q), q) = u through order N.
inline CheckReport verify_branch_inversion(const QSeries<RatFn>& v, const QSeries<BranchFn>& a) {
    CheckReport rep;
    int N = a.order();
    QSeries<BranchFn> G = a * a + curve_detail::eval_v_at(v, a, N);
    G.coeff(0) = G.coeff(0) - BranchFn::u_symbol();
    for (int k = 0; k <= N; ++k) {
        if (!G.coeff(k).is_zero()) {
            rep.ok = false;
            rep.failed_order = k;
            rep.detail = "u = a^2 + v fails at order " + std::to_string(k) + ": " +
                         G.coeff(k).str();
            return rep;
        }
    }
    return rep;
}

}  // namespace toda
