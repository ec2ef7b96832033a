#pragma once

#include <algorithm>
#include <cassert>
#include <vector>

#include "qknot/errors.hpp"
#include "qknot/rational.hpp"

namespace qknot {

inline Rat invert_unit(const Rat& a) {
    if (is_zero(a)) throw ZeroLeadingTerm();
    return 1 / a;
}

inline I128 invert_unit(const I128& a) {
    if (a.v == 1 || a.v == -1) return a;
    throw Error("leading coefficient is not a unit in the integer ring");
}

/// Truncated Laurent series in u = q^(1/2) over an exact coefficient ring R.
///
/// A series stores exactly the coefficients of u^valuation .. u^(trunc-1);
/// it is known modulo O(u^trunc). The zero series has valuation == trunc and
/// no stored coefficients. All exponents are in u-units: a q-exponent e is
/// represented as 2e.
template <class R>
class QSeries {
public:
    QSeries() : val_(0), trunc_(0) {}

    QSeries(long val, std::vector<R> coeffs, long trunc)
        : val_(val), trunc_(trunc), c_(std::move(coeffs)) {
        assert(val_ + (long)c_.size() == trunc_ || (c_.empty() && val_ <= trunc_));
        if (c_.empty()) val_ = trunc_;
        normalize();
    }

    static QSeries zero(long trunc) { return QSeries(trunc, {}, trunc); }

    static QSeries monomial(R c, long exp, long trunc) {
        if (exp >= trunc || is_zero(c)) return zero(trunc);
        std::vector<R> v(trunc - exp);
        v[0] = std::move(c);
        return QSeries(exp, std::move(v), trunc);
    }

    static QSeries one(long trunc) { return monomial(R(1), 0, trunc); }

    long valuation() const { return val_; }
    long trunc() const { return trunc_; }
    bool is_zero_series() const { return c_.empty(); }
    const std::vector<R>& coeffs() const { return c_; }

    /// Coefficient of u^exp; exp must be below the truncation order.
    const R& coeff(long exp) const {
        assert(exp < trunc_);
        static const R kZero{};
        if (exp < val_) return kZero;
        return c_[exp - val_];
    }

    /// Restricts knowledge to O(u^new_trunc). new_trunc must not exceed trunc.
    QSeries truncated(long new_trunc) const {
        assert(new_trunc <= trunc_);
        if (new_trunc <= val_) return zero(new_trunc);
        return QSeries(val_, std::vector<R>(c_.begin(), c_.begin() + (new_trunc - val_)),
                       new_trunc);
    }

    /// Multiplies by sign^sign_exponent * u^halfpower (sign = -1).
    QSeries shifted(long halfpower, long sign_exponent = 0) const {
        QSeries r = *this;
        r.val_ += halfpower;
        r.trunc_ += halfpower;
        if (sign_exponent & 1)
            for (R& x : r.c_) x = -x;
        return r;
    }

    friend QSeries operator+(const QSeries& a, const QSeries& b) {
        long t = std::min(a.trunc_, b.trunc_);
        long v = std::min(a.val_, b.val_);
        v = std::min(v, t);
        std::vector<R> c(t - v);
        for (long i = a.val_; i < std::min(a.trunc_, t); ++i) c[i - v] = a.c_[i - a.val_];
        for (long i = b.val_; i < std::min(b.trunc_, t); ++i) c[i - v] += b.c_[i - b.val_];
        return QSeries(v, std::move(c), t);
    }

    friend QSeries operator-(const QSeries& a, const QSeries& b) { return a + (-b); }

    QSeries operator-() const {
        QSeries r = *this;
        for (R& x : r.c_) x = -x;
        return r;
    }

    friend QSeries operator*(const QSeries& a, const QSeries& b) {
        return mul(a, b, a.trunc_ + b.trunc_);
    }

    /// Cauchy product, additionally truncated at O(u^cap). The natural
    /// truncation is min(a.trunc + b.val, b.trunc + a.val).
    static QSeries mul(const QSeries& a, const QSeries& b, long cap) {
        long t = std::min({a.trunc_ + b.val_, b.trunc_ + a.val_, cap});
        long v = a.val_ + b.val_;
        if (a.c_.empty() || b.c_.empty() || v >= t) return zero(t);
        std::vector<R> c(t - v);
        for (size_t i = 0; i < a.c_.size(); ++i) {
            if (is_zero(a.c_[i])) continue;
            const long lim = std::min((long)b.c_.size(), t - v - (long)i);
            for (long j = 0; j < lim; ++j) {
                if (!is_zero(b.c_[j])) c[i + j] += a.c_[i] * b.c_[j];
            }
        }
        return QSeries(v, std::move(c), t);
    }

    /// Multiplicative inverse: this * invert(this) = 1 + O(u^N) with
    /// N = trunc - 2*valuation. Requires a nonzero leading coefficient.
    QSeries invert() const;

    friend bool operator==(const QSeries& a, const QSeries& b) {
        return a.val_ == b.val_ && a.trunc_ == b.trunc_ && a.c_ == b.c_;
    }

    /// True when the two series agree coefficientwise up to the smaller
    /// truncation order.
    bool agrees_with(const QSeries& b) const {
        long t = std::min(trunc_, b.trunc_);
        for (long e = std::min(val_, b.val_); e < t; ++e)
            if (!(coeff(e) == b.coeff(e))) return false;
        return true;
    }

    template <class R2>
    QSeries<R2> converted() const {
        std::vector<R2> c(c_.size());
        for (size_t i = 0; i < c_.size(); ++i) c[i] = to_rat(c_[i]);
        return QSeries<R2>(val_, std::move(c), trunc_);
    }

private:
    void normalize() {
        size_t lead = 0;
        while (lead < c_.size() && is_zero(c_[lead])) ++lead;
        if (lead > 0) {
            c_.erase(c_.begin(), c_.begin() + lead);
            val_ += (long)lead;
        }
        if (c_.empty()) val_ = trunc_;
    }

    long val_;
    long trunc_;
    std::vector<R> c_;
};

template <class R>
QSeries<R> QSeries<R>::invert() const {
    if (c_.empty()) throw ZeroLeadingTerm();
    // Long division against the normalized unit part.
    const long n = (long)c_.size();
    std::vector<R> inv(n);
    // Leading coefficient must be invertible in R; over Rat this always
    // holds, over integer rings only for +-1 (callers ensure that).
    R lead = c_[0];
    R lead_inv = invert_unit(lead);
    inv[0] = lead_inv;
    for (long t = 1; t < n; ++t) {
        R acc{};
        for (long i = 1; i <= t; ++i) acc += c_[i] * inv[t - i];
        inv[t] = -(lead_inv * acc);
    }
    return QSeries(-val_, std::move(inv), trunc_ - 2 * val_);
}

using Series = QSeries<Rat>;
using ISeries = QSeries<I128>;

}  // namespace qknot
