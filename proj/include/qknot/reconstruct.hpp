#pragma once

#include <vector>

#include "qknot/modular.hpp"
#include "qknot/qseries.hpp"
#include "qknot/upoly.hpp"

namespace qknot {

inline constexpr long kReconstructGuard = 20;

/// Recovers the rational function whose expansion matches s, with numerator
/// and denominator u-degrees bounded by the given limits (u-units, applied
/// after stripping the valuation). The linear system s*den - num = 0 is
/// solved modulo large primes; the candidate is then verified exactly
/// against every known coefficient, which includes at least `guard` beyond
/// the solve window. Throws NoReconstruction when no such function exists.
inline RatFun reconstruct(const Series& s, long max_num_deg, long max_den_deg,
                          long guard = kReconstructGuard) {
    if (s.is_zero_series()) return RatFun::zero();
    const long v = s.valuation();
    const long len = s.trunc() - v;  // known coefficients of the shifted series
    const long dn = max_num_deg, dd = max_den_deg;
    if (dn + dd + 1 + guard > len)
        throw InsufficientPrecision(
            "reconstruct needs " + std::to_string(dn + dd + 1 + guard) +
            " coefficients, have " + std::to_string(len));

    const int ncols = (int)(dd + 1 + dn + 1);
    auto coeff = [&](long t) -> const Rat& { return s.coeff(v + t); };

    // Integer matrix rows, scaled by the row's denominator lcm.
    auto build_rows = [&](uint64_t p) {
        std::vector<std::vector<uint64_t>> rows;
        rows.reserve(len);
        for (long t = 0; t < len; ++t) {
            std::vector<uint64_t> row(ncols, 0);
            for (long j = 0; j <= dd && j <= t; ++j)
                row[j] = modular::to_fp(coeff(t - j), p);
            if (t <= dn) row[dd + 1 + t] = p - 1;  // -num_t
            rows.push_back(std::move(row));
        }
        return rows;
    };

    std::vector<uint64_t> primes;
    std::vector<std::vector<uint64_t>> samples;
    std::vector<int> structure;
    for (int k = 0; k < 8; ++k) {
        uint64_t p = modular::nth_prime(k);
        auto ns = modular::nullspace(build_rows(p), ncols, p);
        if (ns.basis.empty()) throw NoReconstruction();
        if (!primes.empty() && ns.free_cols != structure) {
            // pivot structure changed: earlier primes were unlucky
            primes.clear();
            samples.clear();
        }
        structure = ns.free_cols;
        primes.push_back(p);
        samples.push_back(ns.basis.front());

        auto vec = modular::rat_reconstruct_vector(samples, primes);
        if (!vec) continue;
        std::vector<Rat> den_c(vec->begin(), vec->begin() + dd + 1);
        std::vector<Rat> num_c(vec->begin() + dd + 1, vec->end());
        UPoly den(0, std::move(den_c));
        if (den.is_zero_poly()) continue;
        RatFun f(UPoly(0, std::move(num_c)).shifted(v), den);
        if (series_of(f, s.trunc()).agrees_with(s)) return f;
    }
    throw NoReconstruction();
}

/// Searches the degree bounds upward: (1,1), (2,2), (4,4), ... until the
/// series data can no longer support the solve window plus guard.
inline RatFun reconstruct_auto(const Series& s, long guard = kReconstructGuard) {
    if (s.is_zero_series()) return RatFun::zero();
    long len = s.trunc() - s.valuation();
    for (long d = 1; 2 * d + 1 + guard <= len; d *= 2) {
        try {
            return reconstruct(s, d, d, guard);
        } catch (const NoReconstruction&) {
        }
    }
    throw NoReconstruction();
}

}  // namespace qknot
