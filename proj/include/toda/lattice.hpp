#pragma once

#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "toda/qseries.hpp"
#include "toda/ratfn.hpp"

namespace toda {

/*
 * Exponent lattice with its bilinear form.
 *
 * The Gram matrix must be symmetric, integer valued (the form takes
 * integral values on the lattice) and positive definite, so every
 * nonzero weight has <mu,mu> > 0 and the diagonal operators below are
 * invertible away from weight zero.
 */
class LatticeData {
  public:
    LatticeData(int rank, std::vector<std::vector<Rat>> gram)
        : rank_(rank), gram_(std::move(gram)) {
        if (rank_ < 1 || rank_ > kMaxRank)
            throw LatticeError("lattice rank must be between 1 and " + std::to_string(kMaxRank));
        if (static_cast<int>(gram_.size()) != rank_)
            throw LatticeError("Gram matrix size does not match rank");
        for (const auto& row : gram_)
            if (static_cast<int>(row.size()) != rank_)
                throw LatticeError("Gram matrix is not square");
        for (int i = 0; i < rank_; ++i)
            for (int j = 0; j < rank_; ++j) {
                if (gram_[i][j] != gram_[j][i]) throw LatticeError("Gram matrix is not symmetric");
                if (!is_integer(gram_[i][j]))
                    throw LatticeError("Gram matrix must take integer values on the lattice");
            }
        check_positive_definite();
    }

    int rank() const { return rank_; }
    const Rat& gram(int i, int j) const { return gram_[i][j]; }

    friend bool operator==(const LatticeData& x, const LatticeData& y) {
        return x.rank_ == y.rank_ && x.gram_ == y.gram_;
    }

  private:
    // Sylvester: all leading principal minors positive.
    void check_positive_definite() const {
        std::vector<std::vector<Rat>> m = gram_;
        for (int k = 0; k < rank_; ++k) {
            if (m[k][k] <= 0) throw LatticeError("Gram matrix is not positive definite");
            for (int i = k + 1; i < rank_; ++i) {
                Rat f = m[i][k] / m[k][k];
                for (int j = k; j < rank_; ++j) m[i][j] -= f * m[k][j];
            }
        }
    }

    int rank_;
    std::vector<std::vector<Rat>> gram_;
};

using LatticePtr = std::shared_ptr<const LatticeData>;

inline LatticePtr make_lattice(int rank, std::vector<std::vector<Rat>> gram) {
    return std::make_shared<const LatticeData>(rank, std::move(gram));
}

inline LatticePtr rank_one_lattice(const Rat& norm = Rat(1)) {
    return make_lattice(1, {{norm}});
}

/// Weight = integer coordinate vector in the fixed lattice basis.
struct Weight {
    std::vector<int> coords;

    Weight() = default;
    Weight(std::initializer_list<int> c) : coords(c) {}
    explicit Weight(std::vector<int> c) : coords(std::move(c)) {}

    int rank() const { return static_cast<int>(coords.size()); }
    bool is_zero() const {
        for (int c : coords)
            if (c != 0) return false;
        return true;
    }

    friend Weight operator+(const Weight& x, const Weight& y) {
        Weight r = x;
        for (size_t i = 0; i < r.coords.size(); ++i) r.coords[i] += y.coords[i];
        return r;
    }

    friend Weight operator-(const Weight& x) {
        Weight r = x;
        for (auto& c : r.coords) c = -c;
        return r;
    }

    friend bool operator==(const Weight& x, const Weight& y) { return x.coords == y.coords; }
    friend bool operator<(const Weight& x, const Weight& y) { return x.coords < y.coords; }

    std::string str() const {
        std::ostringstream os;
        os << "[";
        for (size_t i = 0; i < coords.size(); ++i) {
            if (i) os << ",";
            os << coords[i];
        }
        os << "]";
        return os.str();
    }
};

inline Weight zero_weight(int rank) { return Weight(std::vector<int>(rank, 0)); }

/// <mu, nu> through the Gram matrix.
inline Rat pairing(const LatticeData& lat, const Weight& mu, const Weight& nu) {
    Rat s(0);
    for (int i = 0; i < lat.rank(); ++i)
        for (int j = 0; j < lat.rank(); ++j)
            if (mu.coords[i] != 0 && nu.coords[j] != 0)
                s += lat.gram(i, j) * mu.coords[i] * nu.coords[j];
    return s;
}

/// <mu, a> as a linear form in the symbolic a-variables: a is expanded in
/// the same lattice basis, so the pairing goes through the Gram matrix.
inline MPoly pairing_with_a(const LatticeData& lat, const Weight& mu) {
    MPoly form;
    for (int j = 0; j < lat.rank(); ++j) {
        Rat c(0);
        for (int i = 0; i < lat.rank(); ++i)
            if (mu.coords[i] != 0) c += lat.gram(i, j) * mu.coords[i];
        if (c != 0) form += MPoly::variable(a_var(j)) * c;
    }
    return form;
}

/// <a, a> as a quadratic form in the symbolic a-variables.
inline MPoly a_norm_squared(const LatticeData& lat) {
    MPoly q;
    for (int i = 0; i < lat.rank(); ++i)
        for (int j = 0; j < lat.rank(); ++j)
            if (lat.gram(i, j) != 0)
                q += MPoly::variable(a_var(i)) * MPoly::variable(a_var(j)) * lat.gram(i, j);
    return q;
}

/*
 * Finite linear combination of lattice exponentials e^{<mu,x>} with
 * rational-function coefficients.  Immutable in spirit: all operations
 * return new values.  A default-constructed TrigPoly is the zero element
 * with no lattice attached; it is compatible with any lattice.
 */
class TrigPoly {
  public:
    using TermMap = std::map<Weight, RatFn>;

    TrigPoly() = default;
    explicit TrigPoly(LatticePtr lat) : lattice_(std::move(lat)) {}

    static TrigPoly one(LatticePtr lat) {
        TrigPoly t(lat);
        t.terms_[zero_weight(lat->rank())] = RatFn(Rat(1));
        return t;
    }

    static TrigPoly monomial(LatticePtr lat, const Weight& mu, RatFn coeff) {
        TrigPoly t(std::move(lat));
        if (!coeff.is_zero()) t.terms_[mu] = std::move(coeff);
        return t;
    }

    const LatticePtr& lattice() const { return lattice_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    size_t term_count() const { return terms_.size(); }

    RatFn coeff(const Weight& mu) const {
        auto it = terms_.find(mu);
        return it == terms_.end() ? RatFn() : it->second;
    }

    void add_term(const Weight& mu, const RatFn& c) {
        if (c.is_zero()) return;
        auto [it, inserted] = terms_.emplace(mu, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    friend TrigPoly operator+(const TrigPoly& x, const TrigPoly& y) {
        TrigPoly r(common_lattice(x, y));
        r.terms_ = x.terms_;
        for (const auto& [m, c] : y.terms_) r.add_term(m, c);
        return r;
    }

    friend TrigPoly operator-(const TrigPoly& x, const TrigPoly& y) {
        TrigPoly r(common_lattice(x, y));
        r.terms_ = x.terms_;
        for (const auto& [m, c] : y.terms_) r.add_term(m, RatFn() - c);
        return r;
    }

    friend TrigPoly operator-(const TrigPoly& x) { return TrigPoly() - x; }

    /// Product: convolution of exponents, exact coefficient arithmetic.
    friend TrigPoly operator*(const TrigPoly& x, const TrigPoly& y) {
        TrigPoly r(common_lattice(x, y));
        for (const auto& [mx, cx] : x.terms_)
            for (const auto& [my, cy] : y.terms_) r.add_term(mx + my, cx * cy);
        return r;
    }

    TrigPoly operator*(const RatFn& c) const {
        TrigPoly r(lattice_);
        if (c.is_zero()) return r;
        for (const auto& [m, coeff] : terms_) r.terms_[m] = coeff * c;
        return r;
    }

    TrigPoly operator*(const Rat& c) const { return *this * RatFn(c); }

    friend bool operator==(const TrigPoly& x, const TrigPoly& y) {
        return x.terms_ == y.terms_;  // zero compares equal across lattices
    }
    friend bool operator!=(const TrigPoly& x, const TrigPoly& y) { return !(x == y); }

    /// Coefficient of weight 0 ("constant term" always means this, never
    /// the q^0 coefficient of a series).
    RatFn constant_term() const {
        if (terms_.empty()) return RatFn();
        return coeff(zero_weight(terms_.begin()->first.rank()));
    }

    TrigPoly without_constant_term() const {
        TrigPoly r = *this;
        if (!r.terms_.empty()) r.terms_.erase(zero_weight(r.terms_.begin()->first.rank()));
        return r;
    }

    /// Rebuild with coefficient function of (weight, coeff); drops zeros.
    template <class F>
    TrigPoly map_coeffs(F&& f) const {
        TrigPoly r(lattice_);
        for (const auto& [m, c] : terms_) {
            RatFn nc = f(m, c);
            if (!nc.is_zero()) r.terms_[m] = std::move(nc);
        }
        return r;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [m, c] : terms_) {
            if (!first) os << " + ";
            first = false;
            os << c.str() << "*E" << m.str();
        }
        return os.str();
    }

    static LatticePtr common_lattice(const TrigPoly& x, const TrigPoly& y) {
        if (!x.lattice_) return y.lattice_;
        if (!y.lattice_) return x.lattice_;
        if (!(*x.lattice_ == *y.lattice_)) throw LatticeError("lattice mismatch between operands");
        return x.lattice_;
    }

    const LatticeData& lattice_ref() const {
        if (!lattice_) throw LatticeError("operation needs a lattice-attached value");
        return *lattice_;
    }

  private:
    LatticePtr lattice_;
    TermMap terms_;
};

inline bool is_one(const TrigPoly& t) {
    return t.term_count() == 1 && t.terms().begin()->first.is_zero() &&
           is_one(t.terms().begin()->second);
}

inline TrigPoly one_like(const TrigPoly& proto) {
    if (!proto.lattice()) throw LatticeError("cannot build 1 without a lattice");
    return TrigPoly::one(proto.lattice());
}

inline RatFn constant_term(const TrigPoly& f) { return f.constant_term(); }

inline TrigPoly trig_mul(const TrigPoly& f, const TrigPoly& g) { return f * g; }

/*
 * Diagonal operators.  D_n acts on e^{<mu,x>} by the scalar
 *
 *     hbar^2 <mu,mu> + 2 hbar <mu,a> - n*kappa_eff
 *
 * which is the Laplacian for the Gram form plus the drift 2 hbar <grad, a>
 * shifted by the flow eigenvalue.  kappa_eff is kappa itself or
 * hbar*kappa depending on the flow scaling; the plain spectral problem
 * uses n = 0.
 */
inline MPoly d_eigenvalue(const LatticeData& lat, const Weight& mu, int kappa_shift,
                          const MPoly& kappa_eff) {
    MPoly hbar = MPoly::variable(Var::hbar);
    MPoly ev = hbar * hbar * pairing(lat, mu, mu) + hbar * pairing_with_a(lat, mu) * Rat(2);
    if (kappa_shift != 0) ev -= kappa_eff * Rat(kappa_shift);
    return ev;
}

inline TrigPoly apply_D(const TrigPoly& f, int kappa_shift,
                        const MPoly& kappa_eff = MPoly::variable(Var::kappa)) {
    if (f.is_zero()) return f;
    const LatticeData& lat = f.lattice_ref();
    return f.map_coeffs([&](const Weight& mu, const RatFn& c) {
        return c * RatFn(d_eigenvalue(lat, mu, kappa_shift, kappa_eff));
    });
}

/// Unique preimage under apply_D(., kappa_shift).  For kappa_shift = 0 the
/// input must have zero constant term (the image of D) and the result is
/// normalized to zero constant term, which pins it uniquely.
inline TrigPoly invert_D(const TrigPoly& f, int kappa_shift,
                         const MPoly& kappa_eff = MPoly::variable(Var::kappa)) {
    if (f.is_zero()) return f;
    const LatticeData& lat = f.lattice_ref();
    if (kappa_shift == 0 && !f.constant_term().is_zero())
        throw PreconditionError("not in image of D: nonzero constant term");
    return f.map_coeffs([&](const Weight& mu, const RatFn& c) {
        MPoly ev = d_eigenvalue(lat, mu, kappa_shift, kappa_eff);
        if (ev.is_zero()) throw StructuralError("vanishing diagonal eigenvalue");
        return c / RatFn(ev);
    });
}

/// <grad f, grad g>: bilinear extension of (mu, nu) -> <mu,nu> e^{<mu+nu,x>}.
inline TrigPoly gradient_pairing(const TrigPoly& f, const TrigPoly& g) {
    TrigPoly r(TrigPoly::common_lattice(f, g));
    if (f.is_zero() || g.is_zero()) return r;
    const LatticeData& lat = f.lattice() ? *f.lattice() : g.lattice_ref();
    for (const auto& [mu, cf] : f.terms())
        for (const auto& [nu, cg] : g.terms()) {
            Rat p = pairing(lat, mu, nu);
            if (p == 0) continue;
            r.add_term(mu + nu, cf * cg * RatFn(p));
        }
    return r;
}

/// Directional derivative along a lattice vector: e^{<mu,x>} -> <mu,lambda> e^{<mu,x>}.
inline TrigPoly directional_derivative(const TrigPoly& f, const Weight& lambda) {
    if (f.is_zero()) return f;
    const LatticeData& lat = f.lattice_ref();
    return f.map_coeffs([&](const Weight& mu, const RatFn& c) {
        return c * RatFn(pairing(lat, mu, lambda));
    });
}

}  // namespace toda
