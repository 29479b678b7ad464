#pragma once

#include <string>

#include "toda/toda_spec.hpp"

namespace toda {

/*
 * Stationary eigenproblem for T^a = hbar^2 Lap + 2 hbar <grad, a> + qU
 * on a uniform-q Toda potential, solved order by order in q.
 *
 * At order n the equation reads
 *
 *     D psi_n = -U psi_{n-1} + sum_{i<n} b_{n-i} psi_i + b_n
 *
 * with D invertible exactly on trigonometric polynomials of zero
 * constant term; b_n is the unique eigenvalue coefficient killing the
 * constant term of the right-hand side, and psi_n is pinned by the zero
 * constant term normalization.
 */

struct StationaryResult {
    QSeries<TrigPoly> psi;  // psi_0 = 1, constant_term(psi_n) = 0 for n >= 1
    QSeries<RatFn> b;       // b_0 = 0, coefficients in C(a, hbar)
    TodaSpec spec;          // the uniform-q spec that was solved
};

struct LogQuantumResult {
    QSeries<TrigPoly> phi;  // phi = hbar log psi, zero constant terms
    QSeries<RatFn> b;
};

struct ClassicalResult {
    QSeries<TrigPoly> phi;  // classical phase, coefficients in C(a)
    QSeries<RatFn> v;       // classical eigenvalue, v_0 = 0
};

struct CheckReport {
    bool ok = true;
    int failed_order = -1;
    std::string detail;
};

namespace spectral_detail {

/// Solve diag_op(x) = f for the trig poly x with zero constant term,
/// where diag_op scales weight mu by eigen(mu).  Requires ct(f) = 0.
template <class EigenFn>
TrigPoly diagonal_solve(const TrigPoly& f, EigenFn&& eigen, const char* what) {
    if (!f.constant_term().is_zero())
        throw PreconditionError(std::string(what) + ": right-hand side has nonzero constant term");
    return f.map_coeffs([&](const Weight& mu, const RatFn& c) {
        MPoly ev = eigen(mu);
        if (ev.is_zero())
            throw StructuralError(std::string(what) + ": vanishing eigenvalue at weight " + mu.str());
        return c / RatFn(ev);
    });
}

inline const TodaSpec& require_uniform(const TodaSpec& spec) {
    if (!spec.is_uniform())
        throw PreconditionError("solver needs the uniform-q form; apply change_of_variables first");
    return spec;
}

}  // namespace spectral_detail

inline StationaryResult solve_stationary_quantum(const TodaSpec& spec_in, int N) {
    const TodaSpec& spec = spectral_detail::require_uniform(spec_in);
    TrigPoly U = uniform_potential(spec);
    LatticePtr lat = spec.lattice;

    QSeries<TrigPoly> psi(N);
    QSeries<RatFn> b(N);
    psi.coeff(0) = TrigPoly::one(lat);
    for (int n = 1; n <= N; ++n) {
        TrigPoly rhs = TrigPoly() - U * psi.coeff(n - 1);
        for (int i = 1; i < n; ++i) {
            if (b.coeff(n - i).is_zero()) continue;
            rhs = rhs + psi.coeff(i) * b.coeff(n - i);
        }
        RatFn bn = RatFn() - rhs.constant_term();
        b.coeff(n) = bn;
        rhs = rhs + TrigPoly::one(lat) * bn;
        psi.coeff(n) = invert_D(rhs, 0);
    }
    return {std::move(psi), std::move(b), spec};
}

/// Same eigenvalue through the log-derivative system: phi = hbar log psi
/// satisfies (hbar Lap + 2 <grad, a>) phi_n = b_n - sum <grad phi_i, grad phi_{n-i}>
/// (minus U itself at n = 1), and b_n is again fixed by the constant term.
inline LogQuantumResult solve_log_quantum(const TodaSpec& spec_in, int N) {
    const TodaSpec& spec = spectral_detail::require_uniform(spec_in);
    TrigPoly U = uniform_potential(spec);
    LatticePtr lat = spec.lattice;
    const LatticeData& ld = *lat;
    MPoly hbar = MPoly::variable(Var::hbar);

    auto eigen = [&](const Weight& mu) {
        return hbar * pairing(ld, mu, mu) + pairing_with_a(ld, mu) * Rat(2);
    };

    QSeries<TrigPoly> phi(N);
    QSeries<RatFn> b(N);
    phi.coeff(0) = TrigPoly(lat);
    for (int n = 1; n <= N; ++n) {
        TrigPoly data = n == 1 ? U : TrigPoly(lat);
        for (int i = 1; i < n; ++i)
            data = data + gradient_pairing(phi.coeff(i), phi.coeff(n - i));
        RatFn bn = data.constant_term();
        b.coeff(n) = bn;
        TrigPoly rhs = TrigPoly::one(lat) * bn - data;
        phi.coeff(n) = spectral_detail::diagonal_solve(rhs, eigen, "log-derivative step");
    }
    return {std::move(phi), std::move(b)};
}

/// Classical limit: (grad phi)^2 + 2 <a, grad phi> = v - qU solved order
/// by order, all coefficients in C(a).
inline ClassicalResult solve_classical(const TodaSpec& spec_in, int N) {
    const TodaSpec& spec = spectral_detail::require_uniform(spec_in);
    TrigPoly U = uniform_potential(spec);
    LatticePtr lat = spec.lattice;
    const LatticeData& ld = *lat;

    auto eigen = [&](const Weight& mu) { return pairing_with_a(ld, mu) * Rat(2); };

    QSeries<TrigPoly> phi(N);
    QSeries<RatFn> v(N);
    phi.coeff(0) = TrigPoly(lat);
    for (int n = 1; n <= N; ++n) {
        TrigPoly data = n == 1 ? U : TrigPoly(lat);
        for (int i = 1; i < n; ++i)
            data = data + gradient_pairing(phi.coeff(i), phi.coeff(n - i));
        RatFn vn = data.constant_term();
        v.coeff(n) = vn;
        TrigPoly rhs = TrigPoly::one(lat) * vn - data;
        phi.coeff(n) = spectral_detail::diagonal_solve(rhs, eigen, "classical step");
    }
    return {std::move(phi), std::move(v)};
}

/// lim_{hbar->0} b = v, checked exactly per order on reduced forms.
inline CheckReport classical_limit_check(const StationaryResult& sr, const ClassicalResult& cr) {
    CheckReport rep;
    int N = std::min(sr.b.order(), cr.v.order());
    for (int n = 0; n <= N; ++n) {
        try {
            RatFn lim = substitute(sr.b.coeff(n), Var::hbar, Rat(0));
            if (lim != cr.v.coeff(n)) {
                rep.ok = false;
                rep.failed_order = n;
                rep.detail = "limit of b differs from v at order " + std::to_string(n);
                return rep;
            }
        } catch (const PoleError& e) {
            rep.ok = false;
            rep.failed_order = n;
            rep.detail = "b has a pole at hbar = 0 at order " + std::to_string(n) + ": " + e.what();
            return rep;
        }
    }
    return rep;
}

inline CheckReport classical_limit_check(const StationaryResult& sr) {
    return classical_limit_check(sr, solve_classical(sr.spec, sr.b.order()));
}

/// Residual of the eigenequation: T^a psi - b psi must vanish identically
/// through the truncation order.
inline CheckReport eigen_residual_check(const StationaryResult& sr) {
    CheckReport rep;
    TrigPoly U = uniform_potential(sr.spec);
    for (int n = 0; n <= sr.psi.order(); ++n) {
        TrigPoly r = apply_D(sr.psi.coeff(n), 0);
        if (n >= 1) r = r + U * sr.psi.coeff(n - 1);
        for (int i = 0; i < n; ++i) {
            if (sr.b.coeff(n - i).is_zero()) continue;
            r = r - sr.psi.coeff(i) * sr.b.coeff(n - i);
        }
        if (!r.is_zero()) {
            rep.ok = false;
            rep.failed_order = n;
            rep.detail = "eigenequation residual nonzero at order " + std::to_string(n);
            return rep;
        }
    }
    return rep;
}

/// v must be supported on multiples of the grading exponent.
inline CheckReport check_h_grading(const QSeries<RatFn>& v, int h) {
    CheckReport rep;
    for (int n = 0; n <= v.order(); ++n) {
        if (n % h != 0 && !v.coeff(n).is_zero()) {
            rep.ok = false;
            rep.failed_order = n;
            rep.detail = "nonzero coefficient at order " + std::to_string(n) +
                         " violates the grading h = " + std::to_string(h);
            return rep;
        }
    }
    return rep;
}

enum class Convention { q, Q };

/*
 * Instanton prepotential from the classical eigenvalue: the renormalization
 * identity (coupling) d F / d (coupling) = v integrated termwise.
 *
 * Convention q keeps the series in the uniform coupling: F_m = v_m / m.
 * Convention Q reindexes to Q = q^h, which requires v to respect the
 * grading: the Q-coefficient at order d is v_{hd} / d.
 */
inline QSeries<RatFn> prepotential(const QSeries<RatFn>& v, int h, Convention conv) {
    if (!v.coeff(0).is_zero())
        throw PreconditionError("prepotential needs v with zero constant coefficient");
    if (conv == Convention::q) {
        QSeries<RatFn> F(v.order());
        for (int m = 1; m <= v.order(); ++m) F.coeff(m) = v.coeff(m) * rat(1, m);
        return F;
    }
    for (int m = 1; m <= v.order(); ++m)
        if (m % h != 0 && !v.coeff(m).is_zero())
            throw GradingError("grading violation: v has a nonzero coefficient at q^" +
                               std::to_string(m) + " with h = " + std::to_string(h));
    QSeries<RatFn> F(v.order() / h);
    for (int d = 1; d <= F.order(); ++d) F.coeff(d) = v.coeff(h * d) * rat(1, d);
    return F;
}

/*
 * Full prepotential a^2 ln(coupling) + F_inst, kept as a structured pair
 * since the log term is not a power series.  Its defining property is
 * (coupling) d/d(coupling) of the pair = <a,a> + v.
 */
struct FullPrepotential {
    RatFn log_coeff;      // <a,a>, the coefficient of ln(coupling)
    QSeries<RatFn> inst;  // the instanton series in the stated convention
    Convention conv;
    int grading_h;

    /// u = <a,a> + (coupling) d F_inst / d(coupling); free term is <a,a>.
    QSeries<RatFn> u_series() const {
        QSeries<RatFn> u = q_d_dq(inst);
        u.coeff(0) = log_coeff;
        return u;
    }
};

inline FullPrepotential full_prepotential(const TodaSpec& spec, QSeries<RatFn> F_inst,
                                          Convention conv) {
    return {RatFn(a_norm_squared(*spec.lattice)), std::move(F_inst), conv, spec.grading_h};
}

}  // namespace toda
