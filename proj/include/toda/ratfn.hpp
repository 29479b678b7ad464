#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "toda/mpoly_gcd.hpp"

namespace toda {

/*
 * Reduced rational function num/den over the global polynomial ring.
 *
 * Canonical form: integer-coefficient num and den with
 * gcd(num, den) = 1 (content included) and positive leading coefficient
 * of den.  Zero is 0/1.  Keeping every value reduced is what makes the
 * specialization and Laurent operations meaningful: pole detection
 * happens on reduced denominators only.
 *
 * Representation note: the denominator is stored as a positive integer
 * content times a multiset of primitive polynomial factors.  The series
 * recursions only ever multiply denominators (diagonal eigenvalue
 * factors), so common-denominator arithmetic reduces to multiset
 * bookkeeping, and the expensive polynomial gcds run against single
 * small factors instead of fully expanded products.  den() expands on
 * demand; the canonical num/den pair visible outside is exactly the
 * gcd-reduced form.
 */
class RatFn {
    using FactorMap = std::map<MPoly, int>;  // primitive, positive-leading, non-constant keys

  public:
    RatFn() : num_(), den_content_(1) {}
    RatFn(const Rat& c) : num_(Rat(c.get_num())), den_content_(c.get_den()) {}  // NOLINT
    RatFn(long c) : num_(Rat(c)), den_content_(1) {}                           // NOLINT
    RatFn(const MPoly& p) : num_(p), den_content_(1) { reduce_content_only(); }  // NOLINT
    RatFn(MPoly num, MPoly den) : num_(std::move(num)), den_content_(1) {
        if (den.is_zero()) throw ArithmeticError("rational function with zero denominator");
        push_den(std::move(den));
        reduce();
    }

    static RatFn variable(Var v) { return RatFn(MPoly::variable(v)); }

    const MPoly& num() const { return num_; }

    /// Expanded denominator in canonical form (cached).
    const MPoly& den() const {
        if (!den_cache_) {
            MPoly d{Rat(den_content_)};
            for (const auto& [f, e] : den_factors_)
                for (int i = 0; i < e; ++i) d *= f;
            den_cache_ = std::make_shared<const MPoly>(std::move(d));
        }
        return *den_cache_;
    }

    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_factors_.empty() && den_content_ == 1; }
    bool is_constant() const { return num_.is_constant() && den_factors_.empty(); }

    Rat constant_value() const { return num_.constant_value() / Rat(den_content_); }

    bool depends_on(Var v) const {
        if (num_.depends_on(v)) return true;
        for (const auto& [f, e] : den_factors_)
            if (f.depends_on(v)) return true;
        return false;
    }

    /// Order of vanishing of the denominator at v = 0 (the v-adic
    /// valuation of den as a monomial factor).
    int den_valuation(Var v) const {
        int k = 0;
        for (const auto& [f, e] : den_factors_) {
            uint16_t m = 0xffff;
            for (const auto& [mono, c] : f.terms()) m = std::min(m, mono.exp(v));
            k += e * m;
        }
        return k;
    }

    friend RatFn operator+(const RatFn& x, const RatFn& y) {
        if (x.is_zero()) return y;
        if (y.is_zero()) return x;
        RatFn r;
        // lcm of denominators by factor multiset; reduce() strips overshoot.
        r.den_factors_ = x.den_factors_;
        for (const auto& [f, e] : y.den_factors_) {
            auto it = r.den_factors_.find(f);
            if (it == r.den_factors_.end())
                r.den_factors_[f] = e;
            else
                it->second = std::max(it->second, e);
        }
        r.den_content_ = lcm(x.den_content_, y.den_content_);
        MPoly mx(Rat(r.den_content_ / x.den_content_));
        MPoly my(Rat(r.den_content_ / y.den_content_));
        for (const auto& [f, e] : r.den_factors_) {
            int ex = e - multiplicity(x.den_factors_, f);
            int ey = e - multiplicity(y.den_factors_, f);
            for (int i = 0; i < ex; ++i) mx *= f;
            for (int i = 0; i < ey; ++i) my *= f;
        }
        r.num_ = x.num_ * mx + y.num_ * my;
        r.reduce();
        return r;
    }

    friend RatFn operator-(const RatFn& x) {
        RatFn r = x;  // the denominator (and its cache) is unchanged
        r.num_ = -r.num_;
        return r;
    }

    friend RatFn operator-(const RatFn& x, const RatFn& y) { return x + (-y); }

    friend RatFn operator*(const RatFn& x, const RatFn& y) {
        if (x.is_zero() || y.is_zero()) return RatFn();
        RatFn r;
        r.num_ = x.num_ * y.num_;
        r.den_factors_ = x.den_factors_;
        for (const auto& [f, e] : y.den_factors_) r.den_factors_[f] += e;
        r.den_content_ = x.den_content_ * y.den_content_;
        r.reduce();
        return r;
    }

    friend RatFn operator/(const RatFn& x, const RatFn& y) {
        if (y.is_zero()) throw ArithmeticError("rational function division by zero");
        if (x.is_zero()) return RatFn();
        RatFn r;
        r.num_ = x.num_ * Rat(y.den_content_);
        for (const auto& [f, e] : y.den_factors_)
            r.num_ *= pow(f, static_cast<unsigned>(e));
        r.den_factors_ = x.den_factors_;
        r.den_content_ = x.den_content_;
        r.push_den(y.num_);
        r.reduce();
        return r;
    }

    RatFn& operator+=(const RatFn& o) { return *this = *this + o; }
    RatFn& operator-=(const RatFn& o) { return *this = *this - o; }
    RatFn& operator*=(const RatFn& o) { return *this = *this * o; }
    RatFn& operator/=(const RatFn& o) { return *this = *this / o; }

    RatFn& operator*=(const Rat& c) { return *this = *this * RatFn(c); }
    friend RatFn operator*(RatFn x, const Rat& c) { return x *= c; }
    friend RatFn operator*(const Rat& c, RatFn x) { return x *= c; }

    friend bool operator==(const RatFn& x, const RatFn& y) {
        if (x.num_ != y.num_) return false;
        if (x.den_content_ != y.den_content_) return false;
        if (x.den_factors_ == y.den_factors_) return true;
        return x.den() == y.den();  // same product, different splits
    }
    friend bool operator!=(const RatFn& x, const RatFn& y) { return !(x == y); }

    std::string str() const {
        if (is_polynomial()) return num_.str();
        return "(" + num_.str() + ")/(" + den().str() + ")";
    }

    std::string latex() const {
        if (is_polynomial()) return num_.latex();
        return "\\frac{" + num_.latex() + "}{" + den().latex() + "}";
    }

    /// Exact specialization; PoleError carries the vanishing factor.
    friend RatFn substituted(const RatFn& f, Var v, const MPoly& value) {
        RatFn r;
        r.num_ = f.num_.substituted(v, value);
        r.den_content_ = f.den_content_;
        for (const auto& [fac, e] : f.den_factors_) {
            if (!fac.depends_on(v)) {
                r.den_factors_[fac] += e;
                continue;
            }
            MPoly fs = fac.substituted(v, value);
            if (fs.is_zero())
                throw PoleError("pole at specialization " + std::string(var_name(v)) + " -> " +
                                    value.str(),
                                fac.str());
            for (int i = 0; i < e; ++i) r.push_den(fs);
        }
        r.reduce();
        return r;
    }

  private:
    static int multiplicity(const FactorMap& m, const MPoly& f) {
        auto it = m.find(f);
        return it == m.end() ? 0 : it->second;
    }

    /// Fold a nonzero polynomial into the denominator: contents go to
    /// den_content_/num_, the primitive part becomes a factor key.
    void push_den(MPoly d) {
        Rat c = rat_content(d);
        if (sgn(d.leading_coeff()) < 0) c = -c;
        // num/(c*prim) with prim positive-leading; c = cn/cd moves cd to
        // the numerator and |cn| to the content, sign to the numerator.
        num_ *= Rat(c.get_den());
        Int cn = c.get_num();
        if (sgn(cn) < 0) {
            num_ = -num_;
            cn = -cn;
        }
        den_content_ *= cn;
        MPoly prim = d / c;
        if (!prim.is_constant()) den_factors_[std::move(prim)] += 1;
        den_cache_.reset();
    }

    /// Restore canonical form: strip factors sharing anything with num,
    /// then match contents.  Most factors share nothing, so they are
    /// screened first by a modular coprimality test that evaluates num
    /// only once per main variable; the full gcd runs on survivors only.
    void reduce() {
        den_cache_.reset();
        if (num_.is_zero()) {
            den_factors_.clear();
            den_content_ = 1;
            return;
        }
        FactorMap kept;
        std::vector<std::pair<MPoly, int>> work;
        screen_factors(kept, work);
        den_factors_.clear();
        for (size_t i = 0; i < work.size(); ++i) {  // emplace_back below may reallocate
            MPoly f = std::move(work[i].first);
            int e = work[i].second;
            while (e > 0 && !num_.is_constant()) {
                MPoly g = mpoly_gcd(num_, f);
                if (g.is_constant()) break;
                num_ = *num_.divide_exact(g);
                --e;
                MPoly rem = *f.divide_exact(g);
                if (!rem.is_constant()) work.emplace_back(std::move(rem), 1);
            }
            if (e > 0) kept[std::move(f)] += e;
        }
        den_factors_ = std::move(kept);
        reduce_content_only();
    }

    /// Split factors into provably-coprime-with-num (kept) and the rest
    /// (work).  A factor whose x-content is constant and whose modular
    /// univariate image in x is coprime to num's image cannot share a
    /// divisor with num.
    void screen_factors(FactorMap& kept, std::vector<std::pair<MPoly, int>>& work) {
        if (num_.is_constant()) {
            kept = std::move(den_factors_);
            return;
        }
        std::array<uint64_t, kVarCount> point{};
        uint64_t seed = 0x6d34a1f20c9b5e83ULL;
        for (auto& v : point)
            v = 1 + gcd_detail::splitmix64(seed) % (gcd_detail::kPretestPrime - 1);
        std::array<std::vector<uint64_t>, kVarCount> num_image;
        std::array<int, kVarCount> image_state{};  // 0 unknown, 1 usable, -1 unusable

        for (auto& [f, e] : den_factors_) {
            Var x = Var::a1;
            int best = -1;
            for (int i = 0; i < kVarCount; ++i) {
                Var v = static_cast<Var>(i);
                int df = f.degree_in(v);
                if (df == 0 || !num_.depends_on(v)) continue;
                int score = std::min(df, num_.degree_in(v));
                if (best < 0 || score < best) {
                    best = score;
                    x = v;
                }
            }
            if (best < 0) {  // disjoint variable supports
                kept[f] += e;
                continue;
            }
            bool screened = false;
            if (gcd_detail::content_in(f, x).is_constant()) {
                int xi = static_cast<int>(x);
                if (image_state[xi] == 0) {
                    bool ok = gcd_detail::modular_image(num_, x, point, num_image[xi]) &&
                              static_cast<int>(num_image[xi].size()) - 1 == num_.degree_in(x);
                    image_state[xi] = ok ? 1 : -1;
                }
                std::vector<uint64_t> fi;
                if (image_state[xi] == 1 && gcd_detail::modular_image(f, x, point, fi) &&
                    static_cast<int>(fi.size()) - 1 == f.degree_in(x) &&
                    gcd_detail::univariate_gcd_degree(num_image[xi], fi) == 0) {
                    kept[f] += e;
                    screened = true;
                }
            }
            if (!screened) work.emplace_back(f, e);
        }
        den_factors_.clear();
    }

    void reduce_content_only() {
        den_cache_.reset();
        if (num_.is_zero()) {
            den_factors_.clear();
            den_content_ = 1;
            return;
        }
        Rat s = rat_content(num_);  // positive
        Rat ratio = s / Rat(den_content_);
        num_ = (num_ / s) * Rat(ratio.get_num());
        den_content_ = ratio.get_den();
    }

    MPoly num_;
    FactorMap den_factors_;
    Int den_content_;  // positive integer
    mutable std::shared_ptr<const MPoly> den_cache_;
};

inline bool is_one(const RatFn& f) { return f.is_polynomial() && f.num() == MPoly(Rat(1)); }

inline RatFn one_like(const RatFn&) { return RatFn(Rat(1)); }

inline RatFn pow(const RatFn& f, int k) {
    if (k < 0) return RatFn(Rat(1)) / pow(f, -k);
    RatFn r(Rat(1));
    RatFn base = f;
    unsigned e = static_cast<unsigned>(k);
    while (e) {
        if (e & 1) r *= base;
        base *= base;
        e >>= 1;
    }
    return r;
}

inline RatFn substitute(const RatFn& f, Var v, const MPoly& value) {
    return substituted(f, v, value);
}

inline RatFn substitute(const RatFn& f, Var v, const Rat& value) {
    return substituted(f, v, MPoly(value));
}

/// Laurent data of f at v = 0: f = sum principal[i] * v^(i - max_pole) + regular,
/// where the principal coefficients do not involve v and the regular part
/// has a denominator nonvanishing at v = 0.
struct LaurentParts {
    std::vector<RatFn> principal;  // principal[i] multiplies v^(i - max_pole)
    RatFn regular;
};

/// Laurent expansion of f at v = 0 with pole order at most max_pole.
/// Throws ExcessPoleError when the reduced denominator vanishes deeper.
inline LaurentParts laurent_at(const RatFn& f, Var v, int max_pole) {
    LaurentParts out;
    out.principal.assign(max_pole, RatFn());
    int k = f.den_valuation(v);
    if (k > max_pole)
        throw ExcessPoleError("pole of order " + std::to_string(k) + " at " + var_name(v) +
                              " = 0 exceeds allowed order " + std::to_string(max_pole));
    RatFn g = f * RatFn(MPoly::variable(v, static_cast<uint16_t>(k)));  // v-regular now
    RatFn inv_v(MPoly(Rat(1)), MPoly::variable(v));
    for (int i = 0; i < k; ++i) {
        RatFn ci = substitute(g, v, Rat(0));
        out.principal[max_pole - k + i] = ci;
        g = (g - ci) * inv_v;
    }
    out.regular = g;
    return out;
}

/// Kappa-Laurent coefficients, as used on the log of the flow solution.
inline LaurentParts laurent_at_kappa(const RatFn& f, int max_pole) {
    return laurent_at(f, Var::kappa, max_pole);
}

}  // namespace toda
