#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qknot/rational.hpp"

namespace qknot {
namespace modular {

inline uint64_t mulmod(uint64_t a, uint64_t b, uint64_t p) {
    return (uint64_t)((unsigned __int128)a * b % p);
}

inline uint64_t powmod(uint64_t a, uint64_t e, uint64_t p) {
    uint64_t r = 1;
    a %= p;
    while (e) {
        if (e & 1) r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return r;
}

inline uint64_t invmod(uint64_t a, uint64_t p) { return powmod(a, p - 2, p); }

inline bool is_prime(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % q == 0) return n == q;
    }
    uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

/// The k-th prime below 2^62, counting down. Deterministic.
inline uint64_t nth_prime(int k) {
    static std::vector<uint64_t> cache;
    uint64_t start = cache.empty() ? ((1ULL << 62) - 1) : cache.back() - 2;
    while ((int)cache.size() <= k) {
        while (!is_prime(start)) start -= 2;
        cache.push_back(start);
        start -= 2;
    }
    return cache[k];
}

inline uint64_t to_fp(const Rat& x, uint64_t p) {
    uint64_t n = mpz_fdiv_ui(x.get_num().get_mpz_t(), p);
    uint64_t d = mpz_fdiv_ui(x.get_den().get_mpz_t(), p);
    if (d == 0) throw Error("prime divides a denominator");
    return mulmod(n, invmod(d, p), p);
}

inline uint64_t to_fp(const Int& x, uint64_t p) { return mpz_fdiv_ui(x.get_mpz_t(), p); }

/// Reduced row echelon form in place; returns pivot column per row rank order.
inline std::vector<int> rref(std::vector<std::vector<uint64_t>>& m, uint64_t p) {
    std::vector<int> pivots;
    if (m.empty()) return pivots;
    const int ncols = (int)m[0].size();
    int row = 0;
    for (int col = 0; col < ncols && row < (int)m.size(); ++col) {
        int sel = -1;
        for (int i = row; i < (int)m.size(); ++i)
            if (m[i][col] != 0) {
                sel = i;
                break;
            }
        if (sel < 0) continue;
        std::swap(m[row], m[sel]);
        uint64_t inv = invmod(m[row][col], p);
        for (int j = col; j < ncols; ++j) m[row][j] = mulmod(m[row][j], inv, p);
        for (int i = 0; i < (int)m.size(); ++i) {
            if (i == row || m[i][col] == 0) continue;
            uint64_t f = m[i][col];
            for (int j = col; j < ncols; ++j) {
                uint64_t sub = mulmod(f, m[row][j], p);
                m[i][j] = m[i][j] >= sub ? m[i][j] - sub : m[i][j] + p - sub;
            }
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

struct Nullspace {
    std::vector<int> pivots;                       // pivot columns
    std::vector<std::vector<uint64_t>> basis;      // one vector per free column
    std::vector<int> free_cols;
};

/// Nullspace basis of the column space: vectors v with M v = 0 (mod p),
/// one per free column, with the free variable set to 1.
inline Nullspace nullspace(std::vector<std::vector<uint64_t>> m, int ncols, uint64_t p) {
    Nullspace ns;
    ns.pivots = rref(m, p);
    std::vector<int> pivot_of_col(ncols, -1);
    for (int r = 0; r < (int)ns.pivots.size(); ++r) pivot_of_col[ns.pivots[r]] = r;
    for (int col = 0; col < ncols; ++col) {
        if (pivot_of_col[col] >= 0) continue;
        ns.free_cols.push_back(col);
        std::vector<uint64_t> v(ncols, 0);
        v[col] = 1;
        for (int r = 0; r < (int)ns.pivots.size(); ++r) {
            uint64_t x = m[r][col];
            if (x) v[ns.pivots[r]] = p - x;
        }
        ns.basis.push_back(std::move(v));
    }
    return ns;
}

/// Chinese remainder combination into the symmetric range is not needed;
/// callers pass the nonnegative residue to rational reconstruction.
inline Int crt(const std::vector<uint64_t>& residues, const std::vector<uint64_t>& primes) {
    Int m(1), r(0);
    for (size_t i = 0; i < residues.size(); ++i) {
        Int p = to_mpz((__int128)primes[i]);
        // r' = r + m * ((res - r) * m^-1 mod p)
        Int diff = (Int(to_mpz((__int128)residues[i])) - r) % p;
        if (diff < 0) diff += p;
        Int minv;
        mpz_invert(minv.get_mpz_t(), Int(m % p).get_mpz_t(), p.get_mpz_t());
        Int k = (diff * minv) % p;
        r += m * k;
        m *= p;
    }
    return r;
}

/// Wang's rational reconstruction: n/d with n = r*d (mod M),
/// |n|, d <= sqrt(M/2). Returns nothing when no such pair exists.
inline std::optional<Rat> rat_reconstruct(const Int& r, const Int& M) {
    Int bound;
    mpz_sqrt(bound.get_mpz_t(), Int(M / 2).get_mpz_t());
    Int r0 = M, r1 = r % M, t0 = 0, t1 = 1;
    if (r1 < 0) r1 += M;
    while (r1 > bound) {
        Int q = r0 / r1;
        Int r2 = r0 - q * r1;
        Int t2 = t0 - q * t1;
        r0 = r1;
        r1 = r2;
        t0 = t1;
        t1 = t2;
    }
    if (t1 == 0) return std::nullopt;
    Int num = r1, den = t1;
    if (den < 0) {
        den = -den;
        num = -num;
    }
    if (den > bound) return std::nullopt;
    Int g;
    mpz_gcd(g.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    if (g != 1) {
        num /= g;
        den /= g;
    }
    // Confirm the congruence (the loop can exit with an invalid pair).
    Int check = (num - r * den) % M;
    if (check != 0) return std::nullopt;
    Rat out(num, den);
    out.canonicalize();
    return out;
}

/// Reconstructs every coordinate of a projective vector sampled modulo
/// several primes. Returns nothing if any coordinate fails.
inline std::optional<std::vector<Rat>> rat_reconstruct_vector(
    const std::vector<std::vector<uint64_t>>& residue_vectors,
    const std::vector<uint64_t>& primes) {
    const size_t n = residue_vectors[0].size();
    std::vector<Rat> out(n);
    std::vector<uint64_t> res(primes.size());
    Int M(1);
    for (uint64_t p : primes) M *= to_mpz((__int128)p);
    for (size_t i = 0; i < n; ++i) {
        for (size_t k = 0; k < primes.size(); ++k) res[k] = residue_vectors[k][i];
        auto r = rat_reconstruct(crt(res, primes), M);
        if (!r) return std::nullopt;
        out[i] = *r;
    }
    return out;
}

}  // namespace modular
}  // namespace qknot
