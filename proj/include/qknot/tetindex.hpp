#pragma once

#include <memory>
#include <mutex>
#include <unordered_map>

#include "qknot/qseries.hpp"

namespace qknot {

inline bool is_zero(const mpz_class& a) { return sgn(a) == 0; }
inline mpz_class invert_unit(const mpz_class& a) {
    if (a == 1 || a == -1) return a;
    throw Error("leading coefficient is not a unit in the integer ring");
}

/// Degree (valuation) of the tetrahedron index in u-units, i.e. 2*delta(m,e):
/// m+(m+e)+ + (-m)+e+ + (-e)+(-e-m)+ + max{0, m, -e}.
inline long tet_degree_u(long m, long e) {
    auto pos = [](long x) { return x > 0 ? x : 0L; };
    return pos(m) * pos(m + e) + pos(-m) * pos(e) + pos(-e) * pos(-e - m) +
           std::max({0L, m, -e});
}

namespace tet {

/// One tetrahedron-index value, q-dense: entry i is the coefficient of
/// u^(uval + 2i). By parity every other u-coefficient vanishes, so this is
/// the complete expansion modulo O(u^(uval + 2*qlen)).
template <class C>
struct TetSeries {
    long uval = 0;
    std::vector<C> q;
};

/// In-place multiplication by the geometric series 1/(1 - q^step).
template <class C>
inline void geom_dp(std::vector<C>& p, long step) {
    for (size_t t = step; t < p.size(); ++t) p[t] += p[t - step];
}

/// Direct evaluation of I_Delta. The argument pair is first rotated by the
/// triality I(m,e) = (-q^(1/2))^(-e) I(e,-e-m) until m <= 0; in that chamber
/// the defining sum has strictly increasing term valuations starting exactly
/// at the degree, so no cancellation region is ever materialized.
template <class C>
TetSeries<C> tet_compute(long m, long e, long qlen) {
    long c = 0;  // accumulated (-q^(1/2))^c prefactor
    if (m > 0) {
        if (e <= 0) {
            c = -e;
            long m2 = e, e2 = -e - m;
            m = m2;
            e = e2;
        } else {
            c = m;
            long m2 = -e - m, e2 = m;
            m = m2;
            e = e2;
        }
    }
    assert(m <= 0);
    const long n0 = std::max(0L, -e);
    auto term_val = [&](long n) { return n * (n + 1) - (2 * n + e) * m; };
    const long t0 = term_val(n0);

    TetSeries<C> out;
    out.uval = c + t0;
    if (qlen <= 0) return out;
    out.q.assign(qlen, C(0));

    // P = 1/((q;q)_n (q;q)_(n+e)), built and advanced by geometric factors.
    std::vector<C> p(qlen, C(0));
    p[0] = C(1);
    for (long i = 1; i <= n0; ++i) geom_dp(p, i);
    for (long i = 1; i <= n0 + e; ++i) geom_dp(p, i);

    long n = n0;
    while (true) {
        long qoff = (term_val(n) - t0) / 2;
        if (qoff >= qlen) break;
        const bool neg = ((n + c) & 1) != 0;
        for (long i = 0; i + qoff < qlen; ++i) {
            if (neg)
                out.q[qoff + i] -= p[i];
            else
                out.q[qoff + i] += p[i];
        }
        ++n;
        geom_dp(p, n);
        geom_dp(p, n + e);
    }
    return out;
}

/// Memo cache per coefficient type. Entries keep the longest prefix computed
/// so far; when the byte budget is exceeded the cache is cleared wholesale
/// (requests have strong locality along lattice lines, so a generational
/// clear keeps most of the benefit).
template <class C>
class Cache {
public:
    static Cache& instance() {
        static Cache c;
        return c;
    }

    std::shared_ptr<const TetSeries<C>> get(long m, long e, long qlen) {
        const uint64_t key = pack(m, e);
        {
            std::lock_guard<std::mutex> lk(mu_);
            auto it = map_.find(key);
            if (it != map_.end() && (long)it->second->q.size() >= qlen) return it->second;
        }
        auto fresh = std::make_shared<TetSeries<C>>(tet_compute<C>(m, e, qlen));
        std::lock_guard<std::mutex> lk(mu_);
        auto& slot = map_[key];
        if (!slot || slot->q.size() < fresh->q.size()) {
            if (slot) bytes_ -= slot->q.size() * sizeof(C);
            bytes_ += fresh->q.size() * sizeof(C);
            slot = fresh;
            if (bytes_ > budget_) {
                map_.clear();
                bytes_ = 0;
            }
        }
        return fresh;
    }

    void clear() {
        std::lock_guard<std::mutex> lk(mu_);
        map_.clear();
        bytes_ = 0;
    }

    void set_budget(size_t bytes) { budget_ = bytes; }

private:
    static uint64_t pack(long m, long e) {
        return ((uint64_t)(uint32_t)(int32_t)m << 32) | (uint32_t)(int32_t)e;
    }

    std::mutex mu_;
    std::unordered_map<uint64_t, std::shared_ptr<const TetSeries<C>>> map_;
    size_t bytes_ = 0;
    size_t budget_ = size_t(3) << 30;
};

}  // namespace tet

/// The tetrahedron index I_Delta(m,e) as an exact series, O(u^trunc).
inline Series tet_index(long m, long e, long trunc) {
    const long uval = tet_degree_u(m, e);
    if (trunc <= uval) return Series::zero(trunc);
    const long qlen = (trunc - uval + 1) / 2;
    auto ts = tet::Cache<I128>::instance().get(m, e, qlen);
    std::vector<Rat> c(2 * qlen);
    for (long i = 0; i < qlen; ++i) c[2 * i] = to_rat(ts->q[i]);
    return Series(uval, std::move(c), uval + 2 * qlen).truncated(trunc);
}

}  // namespace qknot
