#pragma once

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "toda/rational.hpp"
#include "toda/variables.hpp"

namespace toda {

/*
 * Sparse multivariate polynomial over Rat in the global variable ring.
 *
 * Terms are kept as a vector sorted ascending in the canonical
 * graded-lex order with no zero coefficients, so the leading term is the
 * last entry and the zero polynomial is the empty vector.  Addition is a
 * linear merge, multiplication collects-and-sorts; both avoid node-based
 * containers on the hot paths.
 */
class MPoly {
  public:
    using Term = std::pair<Monomial, Rat>;
    using TermList = std::vector<Term>;

    MPoly() = default;
    MPoly(const Rat& c) {  // NOLINT: implicit by design
        if (c != 0) terms_.emplace_back(Monomial{}, c);
    }
    MPoly(long c) : MPoly(Rat(c)) {}  // NOLINT

    static MPoly variable(Var v, uint16_t power = 1) {
        if (power == 0) return MPoly(Rat(1));
        MPoly p;
        p.terms_.emplace_back(monomial_of(v, power), Rat(1));
        return p;
    }

    static MPoly term(const Rat& c, const Monomial& m) {
        MPoly p;
        if (c != 0) p.terms_.emplace_back(m, c);
        return p;
    }

    /// Sort-and-coalesce raw terms into canonical form.
    static MPoly from_terms(TermList raw) {
        MPoly p;
        p.terms_ = std::move(raw);
        p.normalize();
        return p;
    }

    const TermList& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_.front().first.is_constant());
    }

    /// Constant value; requires is_constant().
    Rat constant_value() const {
        if (terms_.empty()) return Rat(0);
        if (!is_constant()) throw ArithmeticError("polynomial is not constant");
        return terms_.front().second;
    }

    size_t term_count() const { return terms_.size(); }

    uint32_t total_degree() const { return terms_.empty() ? 0 : terms_.back().first.deg(); }

    int degree_in(Var v) const {
        int d = 0;
        for (const auto& [m, c] : terms_) d = std::max<int>(d, m.exp(v));
        return d;
    }

    bool depends_on(Var v) const {
        for (const auto& [m, c] : terms_)
            if (m.exp(v) > 0) return true;
        return false;
    }

    std::vector<Var> variables() const {
        std::vector<Var> out;
        for (int i = 0; i < kVarCount; ++i) {
            Var v = static_cast<Var>(i);
            if (depends_on(v)) out.push_back(v);
        }
        return out;
    }

    const Monomial& leading_monomial() const {
        if (terms_.empty()) throw ArithmeticError("leading term of zero polynomial");
        return terms_.back().first;
    }

    const Rat& leading_coeff() const {
        if (terms_.empty()) throw ArithmeticError("leading term of zero polynomial");
        return terms_.back().second;
    }

    /// Insert-or-accumulate a single term (O(n); fine off the hot path).
    void add_term(const Monomial& m, const Rat& c) {
        if (c == 0) return;
        auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                                   [](const Term& t, const Monomial& key) { return t.first < key; });
        if (it != terms_.end() && it->first == m) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        } else {
            terms_.insert(it, Term{m, c});
        }
    }

    MPoly& operator+=(const MPoly& o) { return *this = merged(*this, o, false); }
    MPoly& operator-=(const MPoly& o) { return *this = merged(*this, o, true); }

    friend MPoly operator+(const MPoly& x, const MPoly& y) { return merged(x, y, false); }
    friend MPoly operator-(const MPoly& x, const MPoly& y) { return merged(x, y, true); }

    friend MPoly operator-(const MPoly& x) {
        MPoly r = x;
        for (auto& [m, c] : r.terms_) c = -c;
        return r;
    }

    friend MPoly operator*(const MPoly& x, const MPoly& y) {
        if (x.is_zero() || y.is_zero()) return MPoly();
        if (x.terms_.size() == 1) return y.scaled_by_term(x.terms_.front());
        if (y.terms_.size() == 1) return x.scaled_by_term(y.terms_.front());
        TermList raw;
        raw.reserve(x.terms_.size() * y.terms_.size());
        for (const auto& [mx, cx] : x.terms_)
            for (const auto& [my, cy] : y.terms_) raw.emplace_back(mx * my, cx * cy);
        MPoly r;
        r.terms_ = std::move(raw);
        r.normalize();
        return r;
    }

    MPoly& operator*=(const MPoly& o) { return *this = *this * o; }

    MPoly& operator*=(const Rat& c) {
        if (c == 0) {
            terms_.clear();
        } else {
            for (auto& [m, coeff] : terms_) coeff *= c;
        }
        return *this;
    }

    friend MPoly operator*(MPoly x, const Rat& c) { return x *= c; }
    friend MPoly operator*(const Rat& c, MPoly x) { return x *= c; }

    MPoly& operator/=(const Rat& c) {
        if (c == 0) throw ArithmeticError("polynomial division by zero scalar");
        for (auto& [m, coeff] : terms_) coeff /= c;
        return *this;
    }

    friend MPoly operator/(MPoly x, const Rat& c) { return x /= c; }

    friend bool operator==(const MPoly& x, const MPoly& y) { return x.terms_ == y.terms_; }
    friend bool operator!=(const MPoly& x, const MPoly& y) { return !(x == y); }

    /// Arbitrary but deterministic total order (used as map key).
    friend bool operator<(const MPoly& x, const MPoly& y) {
        auto xi = x.terms_.begin();
        auto yi = y.terms_.begin();
        for (; xi != x.terms_.end() && yi != y.terms_.end(); ++xi, ++yi) {
            if (xi->first < yi->first) return true;
            if (yi->first < xi->first) return false;
            int c = cmp(xi->second, yi->second);
            if (c != 0) return c < 0;
        }
        return xi == x.terms_.end() && yi != y.terms_.end();
    }

    /// Exact division: returns the quotient when `d` divides exactly,
    /// std::nullopt otherwise.  Greedy leading-term elimination; for an
    /// exact quotient this terminates without remainder in any monomial
    /// order.
    std::optional<MPoly> divide_exact(const MPoly& d) const {
        if (d.is_zero()) throw ArithmeticError("polynomial division by zero");
        MPoly q;
        MPoly r = *this;
        const Monomial& dm = d.leading_monomial();
        const Rat& dc = d.leading_coeff();
        TermList qterms;  // built in descending order
        while (!r.is_zero()) {
            Monomial t;
            if (!r.leading_monomial().divide(dm, t)) return std::nullopt;
            Rat c = r.leading_coeff() / dc;
            qterms.emplace_back(t, c);
            r -= d.scaled_by_term({t, c});
        }
        std::reverse(qterms.begin(), qterms.end());
        q.terms_ = std::move(qterms);
        return q;
    }

    bool divisible_by(const MPoly& d) const { return divide_exact(d).has_value(); }

    /// Substitute value for var; plain polynomial composition.
    MPoly substituted(Var v, const MPoly& value) const {
        MPoly out;
        std::vector<MPoly> powers = {MPoly(Rat(1))};
        for (const auto& [m, c] : terms_) {
            uint16_t k = m.exp(v);
            while (powers.size() <= k) powers.push_back(powers.back() * value);
            Monomial rest = m;
            rest.set_exp(v, 0);
            out += MPoly::term(c, rest) * powers[k];
        }
        return out;
    }

    MPoly substituted(Var v, const Rat& value) const {
        TermList raw;
        raw.reserve(terms_.size());
        std::vector<Rat> powers = {Rat(1)};
        for (const auto& [m, c] : terms_) {
            uint16_t k = m.exp(v);
            while (powers.size() <= k) powers.push_back(powers.back() * value);
            if (powers[k] == 0) continue;
            Monomial rest = m;
            rest.set_exp(v, 0);
            raw.emplace_back(rest, c * powers[k]);
        }
        MPoly out;
        out.terms_ = std::move(raw);
        out.normalize();
        return out;
    }

    std::string str() const;
    std::string latex() const;

  private:
    void normalize() {
        std::sort(terms_.begin(), terms_.end(),
                  [](const Term& a, const Term& b) { return a.first < b.first; });
        size_t out = 0;
        for (size_t i = 0; i < terms_.size();) {
            Monomial m = terms_[i].first;
            Rat c = std::move(terms_[i].second);
            for (++i; i < terms_.size() && terms_[i].first == m; ++i) c += terms_[i].second;
            if (c != 0) terms_[out++] = Term{m, std::move(c)};
        }
        terms_.resize(out);
    }

    MPoly scaled_by_term(const Term& t) const {
        MPoly r;
        r.terms_.reserve(terms_.size());
        for (const auto& [m, c] : terms_) {
            Rat nc = c * t.second;
            if (nc != 0) r.terms_.emplace_back(m * t.first, std::move(nc));
        }
        return r;  // order is preserved by monomial translation
    }

    static MPoly merged(const MPoly& x, const MPoly& y, bool subtract) {
        MPoly r;
        r.terms_.reserve(x.terms_.size() + y.terms_.size());
        auto xi = x.terms_.begin();
        auto yi = y.terms_.begin();
        while (xi != x.terms_.end() && yi != y.terms_.end()) {
            if (xi->first < yi->first) {
                r.terms_.push_back(*xi++);
            } else if (yi->first < xi->first) {
                r.terms_.push_back(*yi);
                if (subtract) r.terms_.back().second = -r.terms_.back().second;
                ++yi;
            } else {
                Rat c = subtract ? Rat(xi->second - yi->second) : Rat(xi->second + yi->second);
                if (c != 0) r.terms_.emplace_back(xi->first, std::move(c));
                ++xi;
                ++yi;
            }
        }
        for (; xi != x.terms_.end(); ++xi) r.terms_.push_back(*xi);
        for (; yi != y.terms_.end(); ++yi) {
            r.terms_.push_back(*yi);
            if (subtract) r.terms_.back().second = -r.terms_.back().second;
        }
        return r;
    }

    TermList terms_;
};

inline MPoly var_poly(Var v) { return MPoly::variable(v); }
inline MPoly a_poly(int i) { return MPoly::variable(a_var(i)); }

inline MPoly pow(const MPoly& p, unsigned k) {
    MPoly r(Rat(1));
    MPoly base = p;
    while (k > 0) {
        if (k & 1) r *= base;
        base *= base;
        k >>= 1;
    }
    return r;
}

namespace detail {

inline void append_monomial(std::ostream& os, const Monomial& m, bool tex) {
    bool first = true;
    for (int i = 0; i < kVarCount; ++i) {
        uint16_t k = m.exp(static_cast<Var>(i));
        if (k == 0) continue;
        if (!first) os << (tex ? " " : "*");
        first = false;
        os << (tex ? var_latex(static_cast<Var>(i)) : var_name(static_cast<Var>(i)));
        if (k > 1) {
            if (tex)
                os << "^{" << k << "}";
            else
                os << "^" << k;
        }
    }
}

inline std::string poly_str(const MPoly& p, bool tex) {
    if (p.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    // Leading term first: iterate the canonical order backwards.
    for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
        const auto& [m, c] = *it;
        Rat ac = abs(c);
        if (first) {
            if (sgn(c) < 0) os << "-";
            first = false;
        } else {
            os << (sgn(c) < 0 ? " - " : " + ");
        }
        if (m.is_constant()) {
            os << ac.get_str();
        } else {
            if (ac != 1) os << ac.get_str() << (tex ? " " : "*");
            append_monomial(os, m, tex);
        }
    }
    return os.str();
}

}  // namespace detail

inline std::string MPoly::str() const { return detail::poly_str(*this, false); }
inline std::string MPoly::latex() const { return detail::poly_str(*this, true); }

}  // namespace toda
