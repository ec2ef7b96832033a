#pragma once

#include <random>
#include <vector>

#include "qknot/qseries.hpp"
#include "qknot/upoly.hpp"

namespace qknot::test {

struct Term {
    long exp;
    long num;
    long den = 1;
};

inline Series mk(std::initializer_list<Term> terms, long trunc) {
    Series s = Series::zero(trunc);
    for (const Term& t : terms)
        s = s + Series::monomial(rat_from(t.num, t.den), t.exp, trunc);
    return s;
}

inline UPoly mkpoly(std::initializer_list<Term> terms) {
    UPoly p;
    for (const Term& t : terms) p = p + UPoly::monomial(rat_from(t.num, t.den), t.exp);
    return p;
}

inline Series random_series(std::mt19937& rng, long val_lo, long val_hi, long trunc,
                            bool integer_coeffs = false) {
    std::uniform_int_distribution<long> vd(val_lo, val_hi);
    std::uniform_int_distribution<long> cd(-9, 9);
    std::uniform_int_distribution<long> dd(1, 5);
    long val = vd(rng);
    if (val >= trunc) val = trunc - 1;
    std::vector<Rat> c(trunc - val);
    for (Rat& x : c)
        x = integer_coeffs ? rat_from(cd(rng)) : rat_from(cd(rng), dd(rng));
    return Series(val, std::move(c), trunc);
}

inline Series random_unit_series(std::mt19937& rng, long val_lo, long val_hi, long trunc) {
    Series s = random_series(rng, val_lo, val_hi, trunc);
    while (s.is_zero_series() || is_zero(s.coeff(s.valuation())))
        s = random_series(rng, val_lo, val_hi, trunc);
    return s;
}

inline UPoly random_upoly(std::mt19937& rng, int max_deg, bool allow_zero = true) {
    std::uniform_int_distribution<int> deg(0, max_deg);
    std::uniform_int_distribution<long> cd(-6, 6);
    int d = deg(rng);
    std::vector<Rat> c(d + 1);
    for (Rat& x : c) x = rat_from(cd(rng));
    UPoly p(0, std::move(c));
    if (!allow_zero && p.is_zero_poly()) return UPoly::one();
    return p;
}

}  // namespace qknot::test
