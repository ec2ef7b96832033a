#pragma once

#include <functional>
#include <optional>

#include "qknot/modular.hpp"
#include "qknot/qseries.hpp"
#include "qknot/upoly.hpp"

namespace qknot {

/// Bivariate Laurent polynomial in x and u: the coefficient of x^(xval+i)
/// is a Laurent polynomial in u. First and last x-coefficients are nonzero.
struct BiPoly {
    long xval = 0;
    std::vector<UPoly> xc;

    static BiPoly zero() { return {}; }

    static BiPoly term(UPoly c, long xexp) {
        BiPoly p;
        if (c.is_zero_poly()) return p;
        p.xval = xexp;
        p.xc.push_back(std::move(c));
        return p;
    }

    bool is_zero_poly() const { return xc.empty(); }
    long xdeg() const { return xval + (long)xc.size() - 1; }

    UPoly coeff(long xexp) const {
        if (xc.empty() || xexp < xval || xexp > xdeg()) return UPoly::zero();
        return xc[xexp - xval];
    }

    void normalize() {
        while (!xc.empty() && xc.front().is_zero_poly()) {
            xc.erase(xc.begin());
            ++xval;
        }
        while (!xc.empty() && xc.back().is_zero_poly()) xc.pop_back();
        if (xc.empty()) xval = 0;
    }

    friend BiPoly operator+(const BiPoly& a, const BiPoly& b) {
        if (a.xc.empty()) return b;
        if (b.xc.empty()) return a;
        long lo = std::min(a.xval, b.xval);
        long hi = std::max(a.xdeg(), b.xdeg());
        BiPoly r;
        r.xval = lo;
        r.xc.assign(hi - lo + 1, UPoly::zero());
        for (size_t i = 0; i < a.xc.size(); ++i) r.xc[a.xval - lo + i] = a.xc[i];
        for (size_t i = 0; i < b.xc.size(); ++i)
            r.xc[b.xval - lo + i] = r.xc[b.xval - lo + i] + b.xc[i];
        r.normalize();
        return r;
    }

    friend BiPoly operator*(const BiPoly& a, const BiPoly& b) {
        if (a.xc.empty() || b.xc.empty()) return {};
        BiPoly r;
        r.xval = a.xval + b.xval;
        r.xc.assign(a.xc.size() + b.xc.size() - 1, UPoly::zero());
        for (size_t i = 0; i < a.xc.size(); ++i)
            for (size_t j = 0; j < b.xc.size(); ++j)
                r.xc[i + j] = r.xc[i + j] + a.xc[i] * b.xc[j];
        r.normalize();
        return r;
    }

    BiPoly operator-() const {
        BiPoly r = *this;
        for (auto& c : r.xc) c = -c;
        return r;
    }

    friend BiPoly operator-(const BiPoly& a, const BiPoly& b) { return a + (-b); }

    friend bool operator==(const BiPoly& a, const BiPoly& b) {
        return a.xval == b.xval && a.xc == b.xc;
    }

    /// x -> u^(2n), yielding a Laurent polynomial in u.
    UPoly at_x_qn(long n) const {
        UPoly out;
        for (size_t i = 0; i < xc.size(); ++i)
            out = out + xc[i].shifted(2 * n * (xval + (long)i));
        return out;
    }

    /// u -> 1/u in every coefficient (x untouched).
    BiPoly u_inverted() const {
        BiPoly r = *this;
        for (auto& c : r.xc) c = c.reciprocal_sub();
        return r;
    }

    /// u -> 1 in every coefficient.
    BiPoly at_u_one() const {
        BiPoly r;
        r.xval = xval;
        for (const auto& c : xc) r.xc.push_back(UPoly::constant(c.eval_at_one()));
        r.normalize();
        return r;
    }
};

/// Linear q-difference operator sum_j P_j(x, u) sigma^j.
struct QDiffOperator {
    std::vector<BiPoly> coeffs;  // index j

    int order() const { return (int)coeffs.size() - 1; }
    bool is_zero_op() const {
        for (const auto& c : coeffs)
            if (!c.is_zero_poly()) return false;
        return true;
    }

    friend bool operator==(const QDiffOperator& a, const QDiffOperator& b) {
        return a.coeffs == b.coeffs;
    }

    /// Canonical form: trailing zero coefficients dropped, joint x- and
    /// u-valuations shifted to zero, content cleared to coprime integers,
    /// and the lexicographically first coefficient made positive.
    QDiffOperator canonical() const {
        QDiffOperator op = *this;
        while (!op.coeffs.empty() && op.coeffs.back().is_zero_poly()) op.coeffs.pop_back();
        if (op.coeffs.empty()) return op;
        long minx = std::numeric_limits<long>::max();
        long minu = std::numeric_limits<long>::max();
        Int num_gcd(0), den_lcm(1);
        for (const auto& p : op.coeffs) {
            if (p.is_zero_poly()) continue;
            minx = std::min(minx, p.xval);
            for (const auto& c : p.xc) {
                if (c.is_zero_poly()) continue;
                minu = std::min(minu, c.valuation());
                for (const Rat& r : c.coeffs()) {
                    if (is_zero(r)) continue;
                    Int n = r.get_num() < 0 ? Int(-r.get_num()) : r.get_num();
                    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), n.get_mpz_t());
                    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), r.get_den().get_mpz_t());
                }
            }
        }
        Rat scale(den_lcm, num_gcd == 0 ? Int(1) : num_gcd);
        for (auto& p : op.coeffs) {
            p.xval -= minx == std::numeric_limits<long>::max() ? 0 : minx;
            for (auto& c : p.xc) c = (scale * c).shifted(c.is_zero_poly() ? 0 : -minu);
        }
        // sign of the first nonzero coefficient in (j, x, u) order
        for (const auto& p : op.coeffs) {
            for (const auto& c : p.xc) {
                if (c.is_zero_poly()) continue;
                if (c.coeffs().front() < 0) {
                    for (auto& pp : op.coeffs)
                        for (auto& cc : pp.xc) cc = -cc;
                }
                return op;
            }
        }
        return op;
    }
};

inline Series poly_times_series(const UPoly& p, const Series& s, long cap) {
    if (p.is_zero_poly()) return Series::zero(cap);
    Series acc = Series::zero(s.trunc() + p.degree());
    for (long e = p.valuation(); e <= p.degree(); ++e) {
        Rat c = p.coeff(e);
        if (is_zero(c)) continue;
        acc = acc + Series::mul(Series::monomial(c, e, e + s.trunc() - s.valuation() + 1), s,
                                cap);
    }
    return acc.truncated(std::min(acc.trunc(), cap));
}

/// A family of series indexed by an integer (a window row or column, or a
/// holomorphic block color at varying n).
using SeriesFamily = std::function<Series(long)>;

/// sum_j P_j(q^n, q) f(n+j): the left (row) action, x acting by q^n.
inline Series apply_left(const QDiffOperator& op, const SeriesFamily& f, long n) {
    long cap = std::numeric_limits<long>::max();
    std::vector<Series> terms;
    for (int j = 0; j < (int)op.coeffs.size(); ++j) {
        if (op.coeffs[j].is_zero_poly()) continue;
        UPoly pj = op.coeffs[j].at_x_qn(n);
        if (pj.is_zero_poly()) continue;
        Series fj = f(n + j);
        cap = std::min(cap, fj.trunc() + pj.valuation());
        terms.push_back(poly_times_series(pj, fj, fj.trunc() + pj.degree()));
    }
    if (terms.empty()) return Series::zero(0);
    Series acc = Series::zero(cap);
    for (const Series& t : terms) acc = acc + t.truncated(std::min(t.trunc(), cap));
    return acc;
}

/// sum_j P_j(q^-n', q^-1) f(n'+j): the right (column) action.
inline Series apply_right(const QDiffOperator& op, const SeriesFamily& f, long np) {
    QDiffOperator flipped;
    for (const auto& p : op.coeffs) flipped.coeffs.push_back(p.u_inverted());
    // x acts by q^(-n'): reuse the left action with negated index
    long cap = std::numeric_limits<long>::max();
    std::vector<Series> terms;
    for (int j = 0; j < (int)flipped.coeffs.size(); ++j) {
        if (flipped.coeffs[j].is_zero_poly()) continue;
        UPoly pj = flipped.coeffs[j].at_x_qn(-np);
        if (pj.is_zero_poly()) continue;
        Series fj = f(np + j);
        cap = std::min(cap, fj.trunc() + pj.valuation());
        terms.push_back(poly_times_series(pj, fj, fj.trunc() + pj.degree()));
    }
    if (terms.empty()) return Series::zero(0);
    Series acc = Series::zero(cap);
    for (const Series& t : terms) acc = acc + t.truncated(std::min(t.trunc(), cap));
    return acc;
}

inline QDiffOperator classical_limit(const QDiffOperator& op) {
    QDiffOperator r;
    for (const auto& p : op.coeffs) r.coeffs.push_back(p.at_u_one());
    return r.canonical();
}

namespace detail {

struct GuessTriple {
    int order, xdeg, udeg;
};

inline QDiffOperator build_operator(const std::vector<Rat>& sol, int order, int xdeg, int udeg) {
    QDiffOperator op;
    int idx = 0;
    for (int j = 0; j <= order; ++j) {
        BiPoly p;
        p.xval = 0;
        for (int a = 0; a <= xdeg; ++a) {
            std::vector<Rat> uc(2 * udeg + 1);
            for (int b = -udeg; b <= udeg; ++b) uc[b + udeg] = sol[idx++];
            p.xc.push_back(UPoly(-udeg, std::move(uc)));
        }
        p.normalize();
        op.coeffs.push_back(std::move(p));
    }
    return op;
}

}  // namespace detail

inline constexpr long kGuessGuard = 30;

/// Guesses the minimal linear q-difference operator annihilating the family
/// on base points n_lo..n_hi, searching (order, xdeg, udeg) bounds in
/// lexicographic order up to the given maxima. The modular candidate is
/// verified exactly on all base points plus three beyond the range.
/// Throws NoRecursion when nothing within bounds annihilates the family.
inline QDiffOperator guess(const SeriesFamily& f, int max_order, int max_xdeg, int max_udeg,
                           long n_lo, long n_hi, long guard = kGuessGuard) {
    if (n_hi < n_lo) throw Error("empty guess range");
    std::vector<Series> fam;  // f(n_lo) .. f(n_hi + 3 + max_order)
    for (long n = n_lo; n <= n_hi + 3 + max_order; ++n) fam.push_back(f(n));
    auto fat = [&](long n) -> const Series& { return fam[n - n_lo]; };

    bool any_sized = false;
    for (int order = 1; order <= max_order; ++order)
        for (int xdeg = 0; xdeg <= max_xdeg; ++xdeg)
            for (int udeg = 0; udeg <= max_udeg; ++udeg) {
                const int ncols = (order + 1) * (xdeg + 1) * (2 * udeg + 1);
                // equation rows, one per (base point, u-order)
                struct Row {
                    long n, t;
                };
                std::vector<Row> rows;
                for (long n = n_lo; n <= n_hi; ++n) {
                    long t_lo = std::numeric_limits<long>::max();
                    long t_hi = std::numeric_limits<long>::max();
                    for (int j = 0; j <= order; ++j) {
                        const Series& s = fat(n + j);
                        long shift = std::min(0L, 2 * n * xdeg) - udeg;
                        t_lo = std::min(t_lo, s.valuation() + shift);
                        t_hi = std::min(t_hi, s.trunc() + shift);
                    }
                    for (long t = t_lo; t < t_hi; ++t) rows.push_back({n, t});
                }
                if ((long)rows.size() < ncols + guard) continue;
                any_sized = true;

                auto row_fp = [&](const Row& rw, uint64_t p) {
                    std::vector<uint64_t> out(ncols, 0);
                    int idx = 0;
                    for (int j = 0; j <= order; ++j) {
                        const Series& s = fat(rw.n + j);
                        for (int a = 0; a <= xdeg; ++a)
                            for (int b = -udeg; b <= udeg; ++b, ++idx) {
                                long e = rw.t - 2 * rw.n * a - b;
                                if (e < s.trunc() && !is_zero(s.coeff(e)))
                                    out[idx] = modular::to_fp(s.coeff(e), p);
                            }
                    }
                    return out;
                };

                std::vector<uint64_t> primes;
                std::vector<std::vector<uint64_t>> samples;
                std::vector<int> structure;
                for (int k = 0; k < 6; ++k) {
                    uint64_t p = modular::nth_prime(k);
                    std::vector<std::vector<uint64_t>> m;
                    m.reserve(rows.size());
                    for (const Row& rw : rows) m.push_back(row_fp(rw, p));
                    auto ns = modular::nullspace(std::move(m), ncols, p);
                    if (ns.basis.empty()) break;  // no solution at these bounds
                    if (!primes.empty() && ns.free_cols != structure) {
                        primes.clear();
                        samples.clear();
                    }
                    structure = ns.free_cols;
                    primes.push_back(p);
                    samples.push_back(ns.basis.front());
                    auto vec = modular::rat_reconstruct_vector(samples, primes);
                    if (!vec) continue;
                    QDiffOperator op = detail::build_operator(*vec, order, xdeg, udeg).canonical();
                    if (op.is_zero_op()) break;
                    // exact verification on every base point and three more
                    bool ok = true;
                    for (long n = n_lo; n <= n_hi + 3 && ok; ++n) {
                        Series r = apply_left(op, [&](long m2) { return fat(m2); }, n);
                        ok = r.is_zero_series();
                    }
                    if (ok) return op;
                }
            }
    if (!any_sized)
        throw InsufficientPrecision("guess needs more series depth for the requested bounds");
    throw NoRecursion();
}

/// The ratio a = f(x) * b when it exists: checked via cross-multiplication
/// of every coefficient pair, then reduced as a fraction of x-polynomials
/// with coefficients in the rational functions of u.
struct OpRatio {
    std::vector<RatFun> num, den;  // ascending x-powers; den monic
    long xshift = 0;

    bool is_constant() const { return num.size() == 1 && den.size() == 1 && xshift == 0; }
};

namespace detail {

using XPoly = std::vector<RatFun>;  // dense from x^0

inline void xtrim(XPoly& p) {
    while (!p.empty() && p.back().is_zero_fun()) p.pop_back();
}

inline std::pair<XPoly, XPoly> xdivmod(XPoly a, const XPoly& b) {
    XPoly q(a.size() > b.size() - 1 ? a.size() - b.size() + 1 : 0, RatFun::zero());
    while (a.size() >= b.size()) {
        RatFun f = a.back() / b.back();
        size_t off = a.size() - b.size();
        q[off] = f;
        for (size_t i = 0; i < b.size(); ++i) a[off + i] = a[off + i] - f * b[i];
        xtrim(a);
        if (a.size() >= b.size() && a.size() && a.back().is_zero_fun()) xtrim(a);
        if (q.size() && a.size() >= b.size() && a.size() + b.size() == 0) break;
        if (!a.empty() && a.size() >= b.size() && a.back().is_zero_fun()) break;
        if (a.empty()) break;
        if (a.size() < b.size()) break;
    }
    xtrim(q);
    return {q, a};
}

inline XPoly xgcd(XPoly a, XPoly b) {
    xtrim(a);
    xtrim(b);
    while (!b.empty()) {
        auto [q, r] = xdivmod(a, b);
        (void)q;
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        RatFun lead = a.back();
        for (auto& c : a) c = c / lead;
    }
    return a;
}

inline XPoly bipoly_to_xpoly(const BiPoly& p) {
    XPoly out;
    for (const auto& c : p.xc) {
        if (c.is_zero_poly())
            out.push_back(RatFun::zero());
        else
            out.push_back(RatFun(c, UPoly::one()));
    }
    xtrim(out);
    return out;
}

}  // namespace detail

inline std::optional<OpRatio> ratio_check(const QDiffOperator& a, const QDiffOperator& b) {
    if (a.coeffs.size() != b.coeffs.size()) return std::nullopt;
    // pick a reference j with both coefficients nonzero
    int ref = -1;
    for (int j = 0; j < (int)a.coeffs.size(); ++j) {
        bool az = a.coeffs[j].is_zero_poly(), bz = b.coeffs[j].is_zero_poly();
        if (az != bz) return std::nullopt;
        if (!az && ref < 0) ref = j;
    }
    if (ref < 0) return std::nullopt;
    for (int j = 0; j < (int)a.coeffs.size(); ++j) {
        if (!(a.coeffs[j] * b.coeffs[ref] == b.coeffs[j] * a.coeffs[ref])) return std::nullopt;
    }
    OpRatio r;
    r.xshift = a.coeffs[ref].xval - b.coeffs[ref].xval;
    detail::XPoly num = detail::bipoly_to_xpoly(a.coeffs[ref]);
    detail::XPoly den = detail::bipoly_to_xpoly(b.coeffs[ref]);
    detail::XPoly g = detail::xgcd(num, den);
    if (g.size() > 1) {
        num = detail::xdivmod(num, g).first;
        den = detail::xdivmod(den, g).first;
    }
    RatFun lead = den.back();
    for (auto& c : num) c = c / lead;
    for (auto& c : den) c = c / lead;
    r.num = std::move(num);
    r.den = std::move(den);
    return r;
}

/// Operator text: one line `sigma^j : <terms c*x^a*u^b>` per coefficient.
inline std::string op_to_text(const QDiffOperator& op) {
    std::ostringstream out;
    for (int j = 0; j < (int)op.coeffs.size(); ++j) {
        out << "sigma^" << j << " :";
        const BiPoly& p = op.coeffs[j];
        bool any = false;
        for (long a = p.xval; a <= p.xdeg() && !p.is_zero_poly(); ++a) {
            UPoly c = p.coeff(a);
            for (long e = c.valuation(); e <= c.degree() && !c.is_zero_poly(); ++e) {
                Rat v = c.coeff(e);
                if (is_zero(v)) continue;
                out << (v < 0 ? " - " : (any ? " + " : " "));
                Rat av = v < 0 ? Rat(-v) : v;
                out << av.get_str();
                if (a != 0) out << "*x^" << a;
                if (e != 0) out << "*u^" << e;
                any = true;
            }
        }
        if (!any) out << " 0";
        out << "\n";
    }
    return out.str();
}

inline QDiffOperator op_from_text(const std::string& text) {
    QDiffOperator op;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto colon = line.find(':');
        if (colon == std::string::npos || line.find("sigma^") != 0)
            throw ParseError("expected 'sigma^j : <terms>'", (int)op.coeffs.size() + 1);
        int j = std::stoi(line.substr(6, colon - 6));
        if (j != (int)op.coeffs.size())
            throw ParseError("operator lines out of order", (int)op.coeffs.size() + 1);
        std::string body = line.substr(colon + 1);
        BiPoly p;
        size_t i = 0;
        auto skip = [&] {
            while (i < body.size() && std::isspace((unsigned char)body[i])) ++i;
        };
        skip();
        if (i < body.size() && body[i] == '0' && body.find_first_not_of(" \t\r", i + 1) ==
                                                     std::string::npos) {
            op.coeffs.push_back(std::move(p));
            continue;
        }
        while (true) {
            skip();
            if (i >= body.size()) break;
            int sign = 1;
            while (i < body.size() && (body[i] == '+' || body[i] == '-')) {
                if (body[i] == '-') sign = -sign;
                ++i;
                skip();
            }
            size_t s0 = i;
            while (i < body.size() && (std::isdigit((unsigned char)body[i]) || body[i] == '/'))
                ++i;
            Rat c = s0 == i ? Rat(1) : rat_parse(body.substr(s0, i - s0));
            if (sign < 0) c = -c;
            long xe = 0, ue = 0;
            while (i < body.size() && (body[i] == '*' || body[i] == 'x' || body[i] == 'u')) {
                if (body[i] == '*') {
                    ++i;
                    continue;
                }
                char var = body[i++];
                long e = 1;
                if (i < body.size() && body[i] == '^') {
                    ++i;
                    size_t e0 = i;
                    if (i < body.size() && (body[i] == '-' || body[i] == '+')) ++i;
                    while (i < body.size() && std::isdigit((unsigned char)body[i])) ++i;
                    e = std::stol(body.substr(e0, i - e0));
                }
                (var == 'x' ? xe : ue) = e;
            }
            p = p + BiPoly::term(UPoly::monomial(c, ue), xe);
        }
        op.coeffs.push_back(std::move(p));
    }
    if (op.coeffs.empty()) throw ParseError("empty operator", 1);
    return op;
}

}  // namespace qknot
