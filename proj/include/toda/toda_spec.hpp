#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "toda/lattice.hpp"

namespace toda {

struct TodaTerm {
    Weight weight;
    Rat coeff;
    int q_power = 0;  // power of q carried by the term (0 = classical term)
};

/*
 * An affine Toda potential: a lattice with its form, a finite list of
 * exponential terms, the grading exponent h relating the two coupling
 * normalizations (Q = q^h), and the positivity cone used to validate the
 * classical terms.  In uniform-q form every term carries q^1; the
 * pre-change form keeps the classical terms at q^0 and the affine term(s)
 * at q^1 (in Q-units).
 */
struct TodaSpec {
    std::string name;
    LatticePtr lattice;
    std::vector<TodaTerm> terms;
    int grading_h = 1;
    std::vector<std::vector<int>> cone;  // rows of integer functionals, cone = {mu : row.mu >= 0}

    bool is_uniform() const {
        for (const auto& t : terms)
            if (t.q_power != 1) return false;
        return true;
    }
};

enum class Algebra { A1, A2, A3 };

inline std::optional<Algebra> algebra_from_name(const std::string& s) {
    if (s == "A1" || s == "a1") return Algebra::A1;
    if (s == "A2" || s == "a2") return Algebra::A2;
    if (s == "A3" || s == "a3") return Algebra::A3;
    return std::nullopt;
}

/*
 * Built-in presets.
 *
 * A1 lives on the rank-one lattice with <1,1> = 1, matching the
 * one-dimensional operator hbar^2 d^2/dx^2 + 2 hbar a d/dx + qU and its
 * eigenvalue data (the golden value b_2 = 8/(4a^2-hbar^2) is stated in
 * that normalization).  A2/A3 use simple-root coordinates with the
 * Cartan Gram matrix; their checks are normalization-independent
 * identities.
 */
inline TodaSpec make_preset(Algebra alg, const Rat& coeff = Rat(2)) {
    TodaSpec spec;
    switch (alg) {
        case Algebra::A1: {
            spec.name = "A1";
            spec.lattice = rank_one_lattice();
            spec.terms = {{Weight{1}, coeff, 0}, {Weight{-1}, coeff, 1}};
            spec.grading_h = 2;
            spec.cone = {{1}};
            break;
        }
        case Algebra::A2: {
            spec.name = "A2";
            spec.lattice = make_lattice(2, {{Rat(2), Rat(-1)}, {Rat(-1), Rat(2)}});
            spec.terms = {{Weight{1, 0}, coeff, 0},
                          {Weight{0, 1}, coeff, 0},
                          {Weight{-1, -1}, coeff, 1}};
            spec.grading_h = 3;
            spec.cone = {{1, 0}, {0, 1}};
            break;
        }
        case Algebra::A3: {
            spec.name = "A3";
            spec.lattice = make_lattice(
                3, {{Rat(2), Rat(-1), Rat(0)}, {Rat(-1), Rat(2), Rat(-1)}, {Rat(0), Rat(-1), Rat(2)}});
            spec.terms = {{Weight{1, 0, 0}, coeff, 0},
                          {Weight{0, 1, 0}, coeff, 0},
                          {Weight{0, 0, 1}, coeff, 0},
                          {Weight{-1, -1, -1}, coeff, 1}};
            spec.grading_h = 4;
            spec.cone = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
            break;
        }
    }
    return spec;
}

struct ConeReport {
    bool ok = true;
    std::vector<std::string> diagnostics;
};

/// Checks that every q^0 term has a nonzero weight inside the cone.
/// The answer depends only on the q^0 terms; extra findings (no cone
/// rows, cone not pointed) are reported as diagnostics.
inline ConeReport validate_cone(const TodaSpec& spec) {
    ConeReport rep;
    bool has_classical = false;
    for (const auto& t : spec.terms)
        if (t.q_power == 0) has_classical = true;
    if (!has_classical) return rep;  // vacuously fine (uniform form)

    if (spec.cone.empty()) {
        rep.ok = false;
        rep.diagnostics.push_back("no cone functionals given, cannot certify positivity");
        return rep;
    }
    for (const auto& t : spec.terms) {
        if (t.q_power != 0) continue;
        if (t.weight.is_zero()) {
            rep.ok = false;
            rep.diagnostics.push_back("classical term at weight 0: " + t.weight.str());
            continue;
        }
        for (const auto& row : spec.cone) {
            long v = 0;
            for (int i = 0; i < t.weight.rank(); ++i) v += static_cast<long>(row[i]) * t.weight.coords[i];
            if (v < 0) {
                rep.ok = false;
                rep.diagnostics.push_back("classical term outside cone: " + t.weight.str());
                break;
            }
        }
    }
    // Pointedness is a property of the cone itself; report, don't fail.
    if (rep.ok) {
        int r = spec.lattice->rank();
        std::vector<std::vector<Rat>> m;
        for (const auto& row : spec.cone) {
            std::vector<Rat> rr;
            for (int i = 0; i < r; ++i) rr.push_back(Rat(row[i]));
            m.push_back(std::move(rr));
        }
        int rank = 0;
        for (int col = 0; col < r && rank < static_cast<int>(m.size()); ++col) {
            int piv = -1;
            for (int i = rank; i < static_cast<int>(m.size()); ++i)
                if (m[i][col] != 0) {
                    piv = i;
                    break;
                }
            if (piv < 0) continue;
            std::swap(m[rank], m[piv]);
            for (int i = 0; i < static_cast<int>(m.size()); ++i) {
                if (i == rank || m[i][col] == 0) continue;
                Rat f = m[i][col] / m[rank][col];
                for (int j = col; j < r; ++j) m[i][j] -= f * m[rank][j];
            }
            ++rank;
        }
        if (rank < r)
            rep.diagnostics.push_back("cone functionals do not pin 0 as an extremal point (rank " +
                                      std::to_string(rank) + " < " + std::to_string(r) + ")");
    }
    return rep;
}

namespace spec_detail {

/// One-dimensional positive kernel of the weight matrix: the affine
/// relation sum m_i * weight_i = 0 with primitive positive integer marks.
inline std::vector<Rat> affine_marks(const TodaSpec& spec) {
    int r = spec.lattice->rank();
    int t = static_cast<int>(spec.terms.size());
    // Row-reduce the r x t matrix whose columns are the weights.
    std::vector<std::vector<Rat>> m(r, std::vector<Rat>(t, Rat(0)));
    for (int j = 0; j < t; ++j)
        for (int i = 0; i < r; ++i) m[i][j] = Rat(spec.terms[j].weight.coords[i]);
    std::vector<int> pivot_col;
    int row = 0;
    for (int col = 0; col < t && row < r; ++col) {
        int piv = -1;
        for (int i = row; i < r; ++i)
            if (m[i][col] != 0) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        std::swap(m[row], m[piv]);
        for (int i = 0; i < r; ++i) {
            if (i == row || m[i][col] == 0) continue;
            Rat f = m[i][col] / m[row][col];
            for (int j = col; j < t; ++j) m[i][j] -= f * m[row][j];
        }
        pivot_col.push_back(col);
        ++row;
    }
    int kernel_dim = t - static_cast<int>(pivot_col.size());
    if (kernel_dim != 1)
        throw PreconditionError("term weights must satisfy exactly one affine relation (kernel dimension " +
                                std::to_string(kernel_dim) + ")");
    // Back-substitute with the single free column set to 1.
    std::vector<bool> is_pivot(t, false);
    for (int c : pivot_col) is_pivot[c] = true;
    int free_col = 0;
    while (is_pivot[free_col]) ++free_col;
    std::vector<Rat> marks(t, Rat(0));
    marks[free_col] = 1;
    for (int k = static_cast<int>(pivot_col.size()) - 1; k >= 0; --k) {
        int c = pivot_col[k];
        Rat s(0);
        for (int j = c + 1; j < t; ++j) s += m[k][j] * marks[j];
        marks[c] = -s / m[k][c];
    }
    // Scale to primitive positive integers.
    Int lcm_den(1);
    for (const auto& v : marks) lcm_den = lcm(lcm_den, v.get_den());
    Int g(0);
    for (auto& v : marks) {
        v *= Rat(lcm_den);
        g = gcd(g, v.get_num());
    }
    for (auto& v : marks) v /= Rat(g);
    int negs = 0, pos = 0;
    for (const auto& v : marks) (v < 0 ? negs : pos)++;
    if (negs == static_cast<int>(marks.size()))
        for (auto& v : marks) v = -v;
    for (const auto& v : marks)
        if (v <= 0) throw PreconditionError("affine relation does not have positive marks");
    return marks;
}

}  // namespace spec_detail

/*
 * Change of variables to the uniform-q form: a shift x -> x + ln(q) xi
 * rescales each term e^{<mu,x>} q^{h d_mu} by q^{<mu,xi>}, and the marks
 * relation fixes the unique grading exponent h = (sum m_i)/(sum m_i d_i)
 * for which all shifted terms carry q^1.  The operator is unchanged, so
 * eigenvalue data is too; only the bookkeeping Q = q^h moves.
 */
inline TodaSpec change_of_variables(const TodaSpec& spec) {
    if (spec.is_uniform()) return spec;
    auto marks = spec_detail::affine_marks(spec);
    Rat num(0), den(0);
    for (size_t i = 0; i < spec.terms.size(); ++i) {
        num += marks[i];
        den += marks[i] * spec.terms[i].q_power;
    }
    if (den == 0) throw PreconditionError("no term carries the coupling; grading undefined");
    Rat h = num / den;
    if (!is_integer(h) || h <= 0)
        throw PreconditionError("grading exponent is not a positive integer: " + h.get_str());
    int hi = static_cast<int>(h.get_num().get_si());

    // Solve <mu_i, xi> = 1 - h*d_i for the shift vector; consistency of
    // this system is exactly the existence of the change of variables.
    int r = spec.lattice->rank();
    int t = static_cast<int>(spec.terms.size());
    std::vector<std::vector<Rat>> aug(t, std::vector<Rat>(r + 1, Rat(0)));
    for (int i = 0; i < t; ++i) {
        const Weight& mu = spec.terms[i].weight;
        for (int j = 0; j < r; ++j) {
            Rat c(0);
            for (int k = 0; k < r; ++k)
                if (mu.coords[k] != 0) c += spec.lattice->gram(k, j) * mu.coords[k];
            aug[i][j] = c;
        }
        aug[i][r] = Rat(1) - h * spec.terms[i].q_power;
    }
    int row = 0;
    for (int col = 0; col < r && row < t; ++col) {
        int piv = -1;
        for (int i = row; i < t; ++i)
            if (aug[i][col] != 0) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        std::swap(aug[row], aug[piv]);
        for (int i = 0; i < t; ++i) {
            if (i == row || aug[i][col] == 0) continue;
            Rat f = aug[i][col] / aug[row][col];
            for (int j = col; j <= r; ++j) aug[i][j] -= f * aug[row][j];
        }
        ++row;
    }
    for (int i = row; i < t; ++i)
        if (aug[i][r] != 0)
            throw PreconditionError("no consistent shift vector exists for this term list");

    TodaSpec out = spec;
    out.grading_h = hi;
    for (auto& term : out.terms) term.q_power = 1;
    return out;
}

/// The potential U(x) of a uniform-q spec as a trigonometric polynomial
/// (the common q^1 factor is handled by the series recursions).
inline TrigPoly uniform_potential(const TodaSpec& spec) {
    if (!spec.is_uniform())
        throw PreconditionError("potential requested for a non-uniform spec; convert first");
    TrigPoly u(spec.lattice);
    for (const auto& t : spec.terms) u.add_term(t.weight, RatFn(t.coeff));
    return u;
}

/*
 * Declarative algebra files: one directive per line, '#' comments.
 *
 *     rank 2
 *     gram 2 -1
 *     gram -1 2
 *     term 1 0 : 2 : 0        weight, coefficient, q-power
 *     term 0 1 : 2 : 0
 *     term -1 -1 : 2 : 1
 *     cone 1 0
 *     cone 0 1
 *     h 3                     optional; computed from the affine relation
 *                             by change_of_variables when absent
 */
inline TodaSpec load_toda_file(std::istream& in, const std::string& display_name) {
    TodaSpec spec;
    spec.name = display_name;
    int rank = 0;
    std::vector<std::vector<Rat>> gram;
    std::optional<int> h;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        std::string head;
        if (!(ls >> head)) continue;
        auto fail = [&](const std::string& msg) -> ParseError {
            return ParseError(display_name + ":" + std::to_string(lineno) + ": " + msg);
        };
        if (head == "rank") {
            if (!(ls >> rank) || rank < 1) throw fail("bad rank");
        } else if (head == "gram") {
            if (rank == 0) throw fail("rank must come before gram");
            std::vector<Rat> row;
            std::string tok;
            while (ls >> tok) row.push_back(rat_from_string(tok));
            if (static_cast<int>(row.size()) != rank) throw fail("gram row needs rank entries");
            gram.push_back(std::move(row));
        } else if (head == "term") {
            if (rank == 0) throw fail("rank must come before term");
            std::vector<int> w(rank);
            for (int i = 0; i < rank; ++i)
                if (!(ls >> w[i])) throw fail("term weight needs rank integers");
            std::string colon, coeff_tok, colon2;
            int qp = 0;
            if (!(ls >> colon >> coeff_tok >> colon2 >> qp) || colon != ":" || colon2 != ":")
                throw fail("term syntax: term <weights> : <coeff> : <q-power>");
            if (qp < 0) throw fail("q-power must be non-negative");
            spec.terms.push_back({Weight(std::move(w)), rat_from_string(coeff_tok), qp});
        } else if (head == "cone") {
            std::vector<int> row(rank);
            for (int i = 0; i < rank; ++i)
                if (!(ls >> row[i])) throw fail("cone row needs rank integers");
            spec.cone.push_back(std::move(row));
        } else if (head == "h") {
            int v;
            if (!(ls >> v) || v < 1) throw fail("bad grading exponent");
            h = v;
        } else {
            throw fail("unknown directive '" + head + "'");
        }
    }
    if (rank == 0) throw ParseError(display_name + ": missing rank");
    if (static_cast<int>(gram.size()) != rank) throw ParseError(display_name + ": need rank gram rows");
    if (spec.terms.empty()) throw ParseError(display_name + ": no terms");
    spec.lattice = make_lattice(rank, std::move(gram));
    if (h) {
        spec.grading_h = *h;
    } else if (spec.is_uniform()) {
        spec.grading_h = 1;
    } else {
        spec.grading_h = change_of_variables(spec).grading_h;
    }
    return spec;
}

inline TodaSpec load_toda_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open algebra file: " + path);
    return load_toda_file(in, path);
}

}  // namespace toda
