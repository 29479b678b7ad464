#pragma once

#include "toda/spectral.hpp"

namespace toda {

/*
 * Non-stationary flow problem: the unique series solution of
 *
 *     (hbar^2 Lap + 2 hbar <grad, a> + qU - kappa_eff q d/dq) Psi = 0,
 *     Psi = 1 + O(q),
 *
 * solved by diagonal inversion at every order, and the extraction of the
 * simple kappa-pole of log Psi.
 *
 * Two scalings of the flow term coexist in the literature; both are
 * supported.  operator_scale uses kappa_eff = kappa and satisfies
 * q dPhi/dq = b and F_inst = Phi|_{hbar=0}; paper_scale uses
 * kappa_eff = hbar*kappa and satisfies hbar q dPhi/dq = b and
 * F_inst = (hbar Phi)|_{hbar=0}.  The two solutions are related by
 * kappa -> hbar kappa, hence Phi_operator = hbar * Phi_paper.
 */

enum class KappaScale { operator_scale, paper_scale };

inline MPoly kappa_effective(KappaScale ks) {
    MPoly k = MPoly::variable(Var::kappa);
    if (ks == KappaScale::paper_scale) k *= MPoly::variable(Var::hbar);
    return k;
}

inline QSeries<TrigPoly> solve_nonstationary(const TodaSpec& spec_in, int N,
                                             KappaScale ks = KappaScale::operator_scale) {
    const TodaSpec& spec = spectral_detail::require_uniform(spec_in);
    TrigPoly U = uniform_potential(spec);
    MPoly keff = kappa_effective(ks);

    QSeries<TrigPoly> Psi(N);
    Psi.coeff(0) = TrigPoly::one(spec.lattice);
    for (int n = 1; n <= N; ++n)
        Psi.coeff(n) = invert_D(TrigPoly() - U * Psi.coeff(n - 1), n, keff);
    return Psi;
}

struct PhiExtraction {
    QSeries<RatFn> phi;          // kappa^{-1} coefficient of log Psi, x-independent
    QSeries<TrigPoly> g_regular; // kappa-regular remainder of log Psi
};

/*
 * log Psi must have kappa-pole order <= 1 in every q-coefficient, and the
 * residue must be independent of x (supported at weight zero).  Both are
 * theorems for this flow; a violation is reported as a StructuralError
 * because it would falsify the construction, not the input.
 *
 * On reduced coefficients the pole order is the kappa-valuation of the
 * denominator, so the checks and the residue come straight off the
 * factored form; materializing the regular remainder costs a large
 * polynomial subtraction per order and is skipped when not asked for.
 */
namespace whittaker_detail {

inline PhiExtraction extract(const QSeries<TrigPoly>& Psi, bool with_regular) {
    QSeries<TrigPoly> F = series_log(Psi);
    int N = F.order();
    QSeries<RatFn> phi(N);
    QSeries<TrigPoly> g(N);
    RatFn kappa(MPoly::variable(Var::kappa));
    RatFn inv_kappa(MPoly(Rat(1)), MPoly::variable(Var::kappa));
    for (int n = 0; n <= N; ++n) {
        TrigPoly gn(Psi.coeff(0).lattice());
        for (const auto& [mu, c] : F.coeff(n).terms()) {
            int k = c.den_valuation(Var::kappa);
            if (k > 1)
                throw StructuralError("log of the flow solution has a kappa-pole of order " +
                                      std::to_string(k) + " at q^" + std::to_string(n) +
                                      ", weight " + mu.str());
            if (k == 1 && !mu.is_zero())
                throw StructuralError("kappa-residue of log Psi depends on x at q^" +
                                      std::to_string(n) + ", weight " + mu.str());
            if (k == 0) {
                if (with_regular) gn.add_term(mu, c);
                continue;
            }
            RatFn residue = substitute(c * kappa, Var::kappa, Rat(0));
            phi.coeff(n) = residue;
            if (with_regular) gn.add_term(mu, c - residue * inv_kappa);
        }
        if (with_regular) g.coeff(n) = gn;
    }
    return {std::move(phi), std::move(g)};
}

}  // namespace whittaker_detail

inline PhiExtraction extract_Phi(const QSeries<TrigPoly>& Psi) {
    return whittaker_detail::extract(Psi, /*with_regular=*/true);
}

/// Phi and the structural checks only; the regular remainder is skipped.
inline QSeries<RatFn> extract_phi_series(const QSeries<TrigPoly>& Psi) {
    return whittaker_detail::extract(Psi, /*with_regular=*/false).phi;
}

/// q dPhi/dq = b (operator scale) or hbar q dPhi/dq = b (paper scale).
inline CheckReport verify_b_relation(const QSeries<RatFn>& phi, const QSeries<RatFn>& b,
                                     KappaScale ks) {
    CheckReport rep;
    QSeries<RatFn> lhs = q_d_dq(phi);
    if (ks == KappaScale::paper_scale) lhs.scale(RatFn(MPoly::variable(Var::hbar)));
    int N = std::min(lhs.order(), b.order());
    for (int n = 0; n <= N; ++n) {
        if (lhs.coeff(n) != b.coeff(n)) {
            rep.ok = false;
            rep.failed_order = n;
            rep.detail = "flow/eigenvalue relation fails at order " + std::to_string(n);
            return rep;
        }
    }
    return rep;
}

/// The instanton prepotential as the hbar -> 0 limit of (the suitably
/// scaled) Phi; specialization poles are reported with their order.
inline QSeries<RatFn> instanton_from_whittaker(const QSeries<RatFn>& phi, KappaScale ks) {
    QSeries<RatFn> F(phi.order());
    RatFn hbar(MPoly::variable(Var::hbar));
    for (int n = 0; n <= phi.order(); ++n) {
        RatFn value = ks == KappaScale::paper_scale ? phi.coeff(n) * hbar : phi.coeff(n);
        try {
            F.coeff(n) = substitute(value, Var::hbar, Rat(0));
        } catch (const PoleError& e) {
            throw PoleError("Phi has a pole at hbar = 0 at order " + std::to_string(n) + ": " + e.what(),
                            e.factor);
        }
    }
    return F;
}

struct WhittakerResult {
    QSeries<TrigPoly> Psi;
    QSeries<RatFn> Phi;
    QSeries<TrigPoly> g_regular;  // empty unless requested
    KappaScale scale;
};

inline WhittakerResult solve_whittaker(const TodaSpec& spec, int N,
                                       KappaScale ks = KappaScale::operator_scale,
                                       bool with_regular = false) {
    QSeries<TrigPoly> Psi = solve_nonstationary(spec, N, ks);
    PhiExtraction ex = whittaker_detail::extract(Psi, with_regular);
    return {std::move(Psi), std::move(ex.phi), std::move(ex.g_regular), ks};
}

/// Residual of the flow equation applied to Psi, order by order.
inline CheckReport nonstationary_residual_check(const TodaSpec& spec_in,
                                                const QSeries<TrigPoly>& Psi, KappaScale ks) {
    CheckReport rep;
    const TodaSpec& spec = spectral_detail::require_uniform(spec_in);
    TrigPoly U = uniform_potential(spec);
    MPoly keff = kappa_effective(ks);
    for (int n = 0; n <= Psi.order(); ++n) {
        TrigPoly r = apply_D(Psi.coeff(n), n, keff);
        if (n >= 1) r = r + U * Psi.coeff(n - 1);
        if (!r.is_zero()) {
            rep.ok = false;
            rep.failed_order = n;
            rep.detail = "flow equation residual nonzero at order " + std::to_string(n);
            return rep;
        }
    }
    return rep;
}

}  // namespace toda
