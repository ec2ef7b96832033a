#pragma once

#include "qknot/insertion.hpp"
#include "qknot/reconstruct.hpp"

namespace qknot {

/// Degree-bound escalation ceiling for Q-entry reconstruction, in u-units.
inline constexpr long kQMaxDegU = 64;

struct QExtraction {
    RatMatrix Q;
    long residual_order = 0;  // Q*I[r] - I_O[r] verified zero below this u-order
};

/// Extracts the finite rational matrix with I_O[r] = Q I[r]: forms
/// I_O[r] (I[r])^-1 over series, reconstructs every entry as a rational
/// function (bounds escalate up to max_deg_u), and verifies the product
/// identity exactly against the original windows.
inline QExtraction extract_q(const NZReduced& nz, const Insertion& ins, int r, long trunc,
                             long guard = kReconstructGuard, long max_deg_u = kQMaxDegU,
                             const IndexOptions& opt = {}) {
    SeriesMatrix w = window(nz, r, trunc, opt);
    SeriesMatrix wo = inserted_window(nz, ins, r, trunc, opt);
    SeriesMatrix winv;
    try {
        winv = mat_invert_series(w);
    } catch (const SingularMatrix&) {
        throw SingularWindow();
    }
    SeriesMatrix m = mat_mul(wo, winv);

    QExtraction out;
    out.Q = RatMatrix(r, r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
            const Series& s = m.at(i, j);
            RatFun f;
            bool found = false;
            for (long d = 8; d <= max_deg_u && !found; d *= 2) {
                try {
                    f = reconstruct(s, d, d, guard);
                    found = true;
                } catch (const NoReconstruction&) {
                    if (d * 2 > max_deg_u)
                        throw NoReconstruction("window entry (" + std::to_string(i) + "," +
                                               std::to_string(j) +
                                               ") is not rational within degree bounds");
                }
            }
            out.Q.at(i, j) = f;
        }

    // exact residual check of Q * I[r] = I_O[r]
    out.residual_order = std::numeric_limits<long>::max();
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
            Series acc = Series::zero(trunc);
            for (int k = 0; k < r; ++k) {
                const Series& wk = w.at(k, j);
                Series c = series_of(out.Q.at(i, k), trunc - std::min(wk.valuation(), 0L));
                acc = acc + Series::mul(c, wk, trunc);
            }
            Series resid = acc - wo.at(i, j);
            if (!resid.is_zero_series())
                throw Error("reconstructed Q fails the product identity at u^" +
                            std::to_string(resid.valuation()));
            out.residual_order = std::min(out.residual_order, resid.trunc());
        }
    return out;
}

struct VerifySample {
    long n = 0, np = 0;
    bool ok = false;
    long matched_order = 0;  // identity holds below this u-order
};

struct VerifyReport {
    std::vector<VerifySample> samples;
    bool all_ok = true;
};

/// Checks I_O(n, n') = sum_m Q[n][m] I(m, n') for each sample; n must lie
/// inside the window, n' may be any integer.
inline VerifyReport verify_q(const NZReduced& nz, const Insertion& ins, const RatMatrix& q,
                             const std::vector<std::pair<long, long>>& samples, long trunc,
                             const IndexOptions& opt = {}) {
    VerifyReport rep;
    const int r = q.rows();
    for (auto [n, np] : samples) {
        VerifySample vs;
        vs.n = n;
        vs.np = np;
        if (n < 0 || n >= r) throw Error("verify_q sample row outside the window");
        Series lhs = inserted_rotated_index(nz, ins, n, np, trunc, opt);
        Series acc = Series::zero(trunc);
        for (int m = 0; m < r; ++m) {
            if (q.at((int)n, m).is_zero_fun()) continue;
            Series im = rotated_index(nz, m, np, trunc, opt);
            Series c = series_of(q.at((int)n, m), trunc - std::min(im.valuation(), 0L));
            acc = acc + Series::mul(c, im, trunc);
        }
        Series resid = lhs - acc;
        vs.ok = resid.is_zero_series();
        vs.matched_order = vs.ok ? resid.trunc() : resid.valuation();
        rep.all_ok = rep.all_ok && vs.ok;
        rep.samples.push_back(vs);
    }
    return rep;
}

/// Determinant of a small rational-function matrix by cofactor expansion.
inline RatFun ratmat_det(const RatMatrix& m) {
    const int r = m.rows();
    if (r == 1) return m.at(0, 0);
    RatFun acc = RatFun::zero();
    for (int j = 0; j < r; ++j) {
        RatMatrix sub(r - 1, r - 1);
        for (int i = 1; i < r; ++i) {
            int cc = 0;
            for (int c = 0; c < r; ++c) {
                if (c == j) continue;
                sub.at(i - 1, cc++) = m.at(i, c);
            }
        }
        RatFun term = m.at(0, j) * ratmat_det(sub);
        acc = j % 2 ? acc - term : acc + term;
    }
    return acc;
}

/// The paper-style display: a common denominator (the lcm of the entry
/// denominators, monic, with u-powers stripped) over Laurent-polynomial
/// entries.
struct FactoredQ {
    UPoly den;
    Matrix<UPoly> entries;
};

inline FactoredQ factor_common_den(const RatMatrix& q) {
    FactoredQ out;
    out.den = UPoly::one();
    for (int i = 0; i < q.rows(); ++i)
        for (int j = 0; j < q.cols(); ++j) {
            const UPoly& d = q.at(i, j).den();
            UPoly g = UPoly::gcd(out.den, d);
            out.den = out.den * (d / g);
        }
    out.den = (1 / out.den.lead()) * out.den;
    out.entries = Matrix<UPoly>(q.rows(), q.cols());
    for (int i = 0; i < q.rows(); ++i)
        for (int j = 0; j < q.cols(); ++j) {
            const RatFun& f = q.at(i, j);
            out.entries.at(i, j) = f.num() * (out.den / f.den());
        }
    return out;
}

}  // namespace qknot
