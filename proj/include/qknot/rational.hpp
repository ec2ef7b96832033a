#pragma once

#include <cstdint>
#include <string>

#include <gmpxx.h>

#include "qknot/errors.hpp"

namespace qknot {

/// Exact rational coefficients. GMP's canonical form (reduced, positive
/// denominator) is maintained by mpq_class itself.
using Rat = mpq_class;
using Int = mpz_class;

inline bool is_zero(const Rat& a) { return sgn(a) == 0; }

inline Rat rat_from(long num, long den = 1) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}

/// Overflow-checked 128-bit integer, the coefficient ring of the hot
/// summation paths. Any overflow throws; callers fall back to Rat.
struct I128 {
    __int128 v = 0;

    I128() = default;
    I128(long x) : v(x) {}
    I128(int x) : v(x) {}
    explicit I128(__int128 x) : v(x) {}

    I128& operator+=(const I128& o) {
        if (__builtin_add_overflow(v, o.v, &v)) throw Overflow();
        return *this;
    }
    I128& operator-=(const I128& o) {
        if (__builtin_sub_overflow(v, o.v, &v)) throw Overflow();
        return *this;
    }
    friend I128 operator+(I128 a, const I128& b) { return a += b; }
    friend I128 operator-(I128 a, const I128& b) { return a -= b; }
    friend I128 operator*(const I128& a, const I128& b) {
        I128 r;
        if (__builtin_mul_overflow(a.v, b.v, &r.v)) throw Overflow();
        return r;
    }
    I128& operator*=(const I128& o) { return *this = *this * o; }
    I128 operator-() const {
        I128 r;
        if (__builtin_sub_overflow((__int128)0, v, &r.v)) throw Overflow();
        return r;
    }
    friend bool operator==(const I128& a, const I128& b) { return a.v == b.v; }
    friend bool operator!=(const I128& a, const I128& b) { return a.v != b.v; }
};

inline bool is_zero(const I128& a) { return a.v == 0; }

inline Int to_mpz(__int128 v) {
    bool neg = v < 0;
    unsigned __int128 u = neg ? -(unsigned __int128)v : (unsigned __int128)v;
    Int hi((unsigned long)(u >> 64));
    Int lo((unsigned long)(u & ~0ULL));
    Int r = (hi << 64) + lo;
    return neg ? Int(-r) : r;
}

inline Rat to_rat(const I128& a) { return Rat(to_mpz(a.v)); }
inline Rat to_rat(const Rat& a) { return a; }

/// Parses "p" or "p/q" with optional sign.
inline Rat rat_parse(const std::string& s) {
    Rat r;
    if (r.set_str(s, 10) != 0) throw Error("bad rational literal: " + s);
    r.canonicalize();
    return r;
}

inline std::string rat_str(const Rat& a) { return a.get_str(); }

}  // namespace qknot
