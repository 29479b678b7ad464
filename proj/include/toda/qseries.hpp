#pragma once

#include <algorithm>
#include <utility>
#include <functional>
#include <string>
#include <vector>

#include "toda/errors.hpp"
#include "toda/rational.hpp"

namespace toda {

/*
 * Power series in the coupling q, truncated at an explicit inclusive
 * order N.  Every value knows its own truncation; binary operations
 * propagate the minimum of the operand orders, so precision is never
 * silently invented.  Coefficients are any exact ring type supporting
 * +, -, *, scalar * by Rat, is_zero(), and one_like()/is_one() for the
 * compositions.
 */
template <class T>
class QSeries {
  public:
    QSeries() : coeffs_(1) {}
    explicit QSeries(int order) : coeffs_(check_order(order) + 1) {}
    explicit QSeries(std::vector<T> coeffs) : coeffs_(std::move(coeffs)) {
        if (coeffs_.empty()) throw PreconditionError("series needs at least the order-0 coefficient");
    }

    int order() const { return static_cast<int>(coeffs_.size()) - 1; }

    const T& coeff(int n) const {
        if (n < 0 || n > order()) throw PreconditionError("series coefficient index out of range");
        return coeffs_[n];
    }

    T& coeff(int n) {
        if (n < 0 || n > order()) throw PreconditionError("series coefficient index out of range");
        return coeffs_[n];
    }

    const std::vector<T>& coeffs() const { return coeffs_; }

    bool is_zero() const {
        return std::all_of(coeffs_.begin(), coeffs_.end(),
                           [](const T& c) { return c.is_zero(); });
    }

    QSeries truncated(int new_order) const {
        if (new_order > order()) throw PreconditionError("cannot extend a truncated series");
        std::vector<T> c(coeffs_.begin(), coeffs_.begin() + new_order + 1);
        return QSeries(std::move(c));
    }

    friend QSeries operator+(const QSeries& x, const QSeries& y) {
        int n = std::min(x.order(), y.order());
        QSeries r = x.truncated(n);
        for (int i = 0; i <= n; ++i) r.coeffs_[i] = x.coeffs_[i] + y.coeffs_[i];
        return r;
    }

    friend QSeries operator-(const QSeries& x, const QSeries& y) {
        int n = std::min(x.order(), y.order());
        QSeries r = x.truncated(n);
        for (int i = 0; i <= n; ++i) r.coeffs_[i] = x.coeffs_[i] - y.coeffs_[i];
        return r;
    }

    friend QSeries operator-(const QSeries& x) {
        QSeries r = x;
        for (auto& c : r.coeffs_) c = T() - c;
        return r;
    }

    friend QSeries operator*(const QSeries& x, const QSeries& y) {
        int n = std::min(x.order(), y.order());
        QSeries r(n);
        for (int i = 0; i <= n; ++i) {
            for (int j = 0; j + i <= n; ++j) {
                if (x.coeffs_[i].is_zero() || y.coeffs_[j].is_zero()) continue;
                r.coeffs_[i + j] = r.coeffs_[i + j] + x.coeffs_[i] * y.coeffs_[j];
            }
        }
        return r;
    }

    QSeries& operator+=(const QSeries& o) { return *this = *this + o; }
    QSeries& operator-=(const QSeries& o) { return *this = *this - o; }
    QSeries& operator*=(const QSeries& o) { return *this = *this * o; }

    template <class S>
    QSeries& scale(const S& s) {
        for (auto& c : coeffs_) c = c * s;
        return *this;
    }

    template <class S>
    QSeries scaled(const S& s) const {
        QSeries r = *this;
        r.scale(s);
        return r;
    }

    friend bool operator==(const QSeries& x, const QSeries& y) {
        return x.coeffs_ == y.coeffs_;
    }
    friend bool operator!=(const QSeries& x, const QSeries& y) { return !(x == y); }

    template <class F>
    auto map(F&& f) const {
        using U = std::decay_t<decltype(f(std::declval<const T&>()))>;
        std::vector<U> c;
        c.reserve(coeffs_.size());
        for (const auto& ci : coeffs_) c.push_back(f(ci));
        return QSeries<U>(std::move(c));
    }

  private:
    static int check_order(int order) {
        if (order < 0) throw PreconditionError("series order must be non-negative");
        return order;
    }

    std::vector<T> coeffs_;
};

/// Euler operator q d/dq: multiplies coefficient n by n.
template <class T>
QSeries<T> q_d_dq(const QSeries<T>& s) {
    QSeries<T> r = s;
    for (int n = 0; n <= r.order(); ++n) r.coeff(n) = r.coeff(n) * Rat(n);
    return r;
}

/// log(s) for s = 1 + O(q); the classic l_n = s_n - (1/n) sum k l_k s_{n-k}.
template <class T>
QSeries<T> series_log(const QSeries<T>& s) {
    if (!is_one(s.coeff(0)))
        throw PreconditionError("series log needs constant term 1");
    int N = s.order();
    QSeries<T> l(N);
    for (int n = 1; n <= N; ++n) {
        T acc = s.coeff(n);
        for (int k = 1; k < n; ++k) {
            if (l.coeff(k).is_zero() || s.coeff(n - k).is_zero()) continue;
            acc = acc - (l.coeff(k) * s.coeff(n - k)) * rat(k, n);
        }
        l.coeff(n) = acc;
    }
    return l;
}

/// exp(x) for x = O(q); e_n = (1/n) sum k x_k e_{n-k}.
template <class T>
QSeries<T> series_exp(const QSeries<T>& x) {
    if (!x.coeff(0).is_zero())
        throw PreconditionError("series exp needs constant term 0");
    int N = x.order();
    QSeries<T> e(N);
    e.coeff(0) = one_like(x.coeff(0));
    for (int n = 1; n <= N; ++n) {
        T acc{};
        for (int k = 1; k <= n; ++k) {
            if (x.coeff(k).is_zero() || e.coeff(n - k).is_zero()) continue;
            acc = acc + (x.coeff(k) * e.coeff(n - k)) * rat(k, n);
        }
        e.coeff(n) = acc;
    }
    return e;
}

/// sqrt(s) for s = 1 + O(q), branch with constant term 1.
template <class T>
QSeries<T> series_sqrt(const QSeries<T>& s) {
    if (!is_one(s.coeff(0)))
        throw PreconditionError("series sqrt needs constant term 1");
    int N = s.order();
    QSeries<T> r(N);
    r.coeff(0) = one_like(s.coeff(0));
    for (int n = 1; n <= N; ++n) {
        T acc = s.coeff(n);
        for (int k = 1; k < n; ++k) {
            if (r.coeff(k).is_zero() || r.coeff(n - k).is_zero()) continue;
            acc = acc - r.coeff(k) * r.coeff(n - k);
        }
        r.coeff(n) = acc * rat(1, 2);
    }
    return r;
}

/// x / y for invertible y (unit constant term in the coefficient field).
template <class T>
QSeries<T> series_div(const QSeries<T>& x, const QSeries<T>& y) {
    if (y.coeff(0).is_zero())
        throw PreconditionError("series division needs an invertible constant term");
    int N = std::min(x.order(), y.order());
    QSeries<T> r(N);
    for (int n = 0; n <= N; ++n) {
        T acc = x.coeff(n);
        for (int k = 0; k < n; ++k) {
            if (r.coeff(k).is_zero() || y.coeff(n - k).is_zero()) continue;
            acc = acc - r.coeff(k) * y.coeff(n - k);
        }
        r.coeff(n) = acc / y.coeff(0);
    }
    return r;
}

}  // namespace toda
