#pragma once

#include <algorithm>
#include <cassert>
#include <vector>

#include "qknot/qseries.hpp"

namespace qknot {

/// Laurent polynomial in u over the rationals: coefficient list plus a
/// u-valuation. Zero is the empty list. First and last stored coefficients
/// are nonzero.
class UPoly {
public:
    UPoly() : val_(0) {}

    UPoly(long val, std::vector<Rat> coeffs) : val_(val), c_(std::move(coeffs)) { normalize(); }

    static UPoly zero() { return UPoly(); }
    static UPoly constant(Rat c) { return UPoly(0, {std::move(c)}); }
    static UPoly monomial(Rat c, long exp) { return UPoly(exp, {std::move(c)}); }
    static UPoly one() { return constant(Rat(1)); }

    bool is_zero_poly() const { return c_.empty(); }
    long valuation() const { return val_; }            // exponent of lowest term
    long degree() const { return val_ + (long)c_.size() - 1; }  // exponent of highest term
    const std::vector<Rat>& coeffs() const { return c_; }

    Rat coeff(long exp) const {
        if (exp < val_ || exp > degree() || c_.empty()) return Rat(0);
        return c_[exp - val_];
    }

    const Rat& lead() const {
        assert(!c_.empty());
        return c_.back();
    }

    friend UPoly operator+(const UPoly& a, const UPoly& b) {
        if (a.c_.empty()) return b;
        if (b.c_.empty()) return a;
        long v = std::min(a.val_, b.val_);
        long d = std::max(a.degree(), b.degree());
        std::vector<Rat> c(d - v + 1);
        for (size_t i = 0; i < a.c_.size(); ++i) c[a.val_ - v + i] = a.c_[i];
        for (size_t i = 0; i < b.c_.size(); ++i) c[b.val_ - v + i] += b.c_[i];
        return UPoly(v, std::move(c));
    }

    UPoly operator-() const {
        UPoly r = *this;
        for (Rat& x : r.c_) x = -x;
        return r;
    }

    friend UPoly operator-(const UPoly& a, const UPoly& b) { return a + (-b); }

    friend UPoly operator*(const UPoly& a, const UPoly& b) {
        if (a.c_.empty() || b.c_.empty()) return UPoly();
        std::vector<Rat> c(a.c_.size() + b.c_.size() - 1);
        for (size_t i = 0; i < a.c_.size(); ++i) {
            if (is_zero(a.c_[i])) continue;
            for (size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
        }
        return UPoly(a.val_ + b.val_, std::move(c));
    }

    friend UPoly operator*(const Rat& s, const UPoly& a) {
        UPoly r = a;
        for (Rat& x : r.c_) x *= s;
        r.normalize();
        return r;
    }

    friend bool operator==(const UPoly& a, const UPoly& b) {
        return a.val_ == b.val_ && a.c_ == b.c_;
    }

    UPoly shifted(long exp) const {
        UPoly r = *this;
        if (!r.c_.empty()) r.val_ += exp;
        return r;
    }

    /// Substitutes u -> 1/u (reverses the coefficient list).
    UPoly reciprocal_sub() const {
        if (c_.empty()) return UPoly();
        std::vector<Rat> c(c_.rbegin(), c_.rend());
        return UPoly(-degree(), std::move(c));
    }

    Rat eval_at_one() const {
        Rat s(0);
        for (const Rat& x : c_) s += x;
        return s;
    }

    QSeries<Rat> to_series(long trunc) const {
        if (c_.empty() || val_ >= trunc) return Series::zero(trunc);
        std::vector<Rat> c(trunc - val_);
        for (size_t i = 0; i < c_.size() && (long)i < trunc - val_; ++i) c[i] = c_[i];
        return Series(val_, std::move(c), trunc);
    }

    /// Quotient and remainder in Q[u] of the shifted-to-ordinary parts.
    /// Both operands must have valuation >= 0.
    static std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b) {
        assert(!b.c_.empty());
        assert(a.val_ >= 0 && b.val_ >= 0);
        // Dense copies indexed from u^0.
        std::vector<Rat> r(a.degree() + 1);
        for (size_t i = 0; i < a.c_.size(); ++i) r[a.val_ + i] = a.c_[i];
        long db = b.degree();
        if ((long)r.size() - 1 < db) return {UPoly(), a};
        std::vector<Rat> q(r.size() - db);
        for (long t = (long)r.size() - 1; t >= db; --t) {
            if (is_zero(r[t])) continue;
            Rat f = r[t] / b.lead();
            q[t - db] = f;
            for (long j = 0; j <= db; ++j) r[t - db + j] -= f * b.coeff(j);
        }
        return {UPoly(0, std::move(q)), UPoly(0, std::move(r))};
    }

    /// Monic gcd in Q[u] of the polynomial parts (valuations ignored).
    static UPoly gcd(UPoly a, UPoly b) {
        a.val_ = 0;
        b.val_ = 0;
        while (!b.c_.empty()) {
            auto [q, r] = divmod(a, b);
            (void)q;
            a = b;
            b = r;
            if (!b.c_.empty()) b.val_ = 0;
        }
        if (!a.c_.empty()) a = (1 / a.lead()) * a;
        return a;
    }

    friend UPoly operator/(const UPoly& a, const UPoly& b) {  // exact division
        if (a.c_.empty()) return UPoly();
        UPoly an = a, bn = b;
        long shift = a.val_ - b.val_;
        an.val_ = 0;
        bn.val_ = 0;
        auto [q, r] = divmod(an, bn);
        assert(r.is_zero_poly());
        return q.shifted(shift);
    }

private:
    void normalize() {
        size_t lead0 = 0;
        while (lead0 < c_.size() && is_zero(c_[lead0])) ++lead0;
        if (lead0) {
            c_.erase(c_.begin(), c_.begin() + lead0);
            val_ += (long)lead0;
        }
        while (!c_.empty() && is_zero(c_.back())) c_.pop_back();
        if (c_.empty()) val_ = 0;
    }

    long val_;
    std::vector<Rat> c_;
};

/// Rational function in u. Canonical form: denominator is an ordinary
/// polynomial with nonzero constant term, monic in u; gcd(num, den) = 1;
/// the numerator carries the u-valuation and any rational scale.
class RatFun {
public:
    RatFun() : num_(), den_(UPoly::one()) {}
    RatFun(UPoly num, UPoly den) : num_(std::move(num)), den_(std::move(den)) { reduce(); }

    static RatFun zero() { return RatFun(); }
    static RatFun one() { return RatFun(UPoly::one(), UPoly::one()); }
    static RatFun constant(Rat c) { return RatFun(UPoly::constant(std::move(c)), UPoly::one()); }
    static RatFun monomial(Rat c, long exp) {
        return RatFun(UPoly::monomial(std::move(c), exp), UPoly::one());
    }

    const UPoly& num() const { return num_; }
    const UPoly& den() const { return den_; }
    bool is_zero_fun() const { return num_.is_zero_poly(); }

    friend RatFun operator+(const RatFun& a, const RatFun& b) {
        return RatFun(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RatFun operator-(const RatFun& a, const RatFun& b) {
        return RatFun(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RatFun operator*(const RatFun& a, const RatFun& b) {
        return RatFun(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend RatFun operator/(const RatFun& a, const RatFun& b) {
        if (b.num_.is_zero_poly()) throw ZeroDenominator();
        return RatFun(a.num_ * b.den_, a.den_ * b.num_);
    }
    RatFun operator-() const { return RatFun(-num_, den_); }

    friend bool operator==(const RatFun& a, const RatFun& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }

private:
    void reduce() {
        if (den_.is_zero_poly()) throw ZeroDenominator();
        if (num_.is_zero_poly()) {
            den_ = UPoly::one();
            return;
        }
        // Move both valuations into the numerator.
        long nv = num_.valuation(), dv = den_.valuation();
        UPoly n = num_.shifted(-nv), d = den_.shifted(-dv);
        UPoly g = UPoly::gcd(n, d);
        if (g.degree() > 0) {
            n = n / g;
            d = d / g;
        }
        Rat lead = d.lead();
        num_ = ((1 / lead) * n).shifted(nv - dv);
        den_ = (1 / lead) * d;
    }

    UPoly num_;
    UPoly den_;
};

/// Series expansion of f to O(u^trunc).
inline Series series_of(const RatFun& f, long trunc) {
    if (f.is_zero_fun()) return Series::zero(trunc);
    long need = trunc - f.num().valuation();
    if (need <= 0) return Series::zero(trunc);
    // Canonical form guarantees den(0) != 0, so den is a unit series.
    Series den_inv = f.den().to_series(need).invert();
    return Series::mul(f.num().to_series(trunc), den_inv, trunc).truncated(trunc);
}

}  // namespace qknot
