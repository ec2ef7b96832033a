#include <catch2/catch_amalgamated.hpp>

#include "qknot/indexsum.hpp"
#include "test_helpers.hpp"

using namespace qknot;
using test::mk;

namespace {
const NZReduced& nz41() {
    static NZReduced r = knot_nz("4_1");
    return r;
}
const NZReduced& nz52() {
    static NZReduced r = knot_nz("5_2");
    return r;
}
const NZReduced& nz237() {
    static NZReduced r = knot_nz("m237");
    return r;
}

// q-indexed helper: {q-exponent, coefficient} with entries at integer or
// half-integer q-powers given directly in u-units by the caller.
Series qmk(std::initializer_list<test::Term> terms, long qtrunc) {
    Series s = Series::zero(2 * qtrunc);
    for (const test::Term& t : terms)
        s = s + Series::monomial(rat_from(t.num, t.den), t.exp, 2 * qtrunc);
    return s;
}
}  // namespace

TEST_CASE("4_1 summand at the origin", "[indexsum]") {
    Series s = summand(nz41(), {0, 0}, 0, 0, 20);
    Series t = tet_index(0, 0, 20);
    Series tt = Series::mul(t, t, 20);
    CHECK(s == tt);
}

TEST_CASE("4_1 summand matches the explicit double-sum formula", "[indexsum]") {
    // I_Delta(k1, k1+k2) * I_Delta(k1+k2-n+n', k1-n+n') * q^(k2 (n+n')/2)
    std::mt19937 rng(6);
    std::uniform_int_distribution<long> kd(-4, 4), nd(-2, 2);
    for (int it = 0; it < 25; ++it) {
        long k1 = kd(rng), k2 = kd(rng), n = nd(rng), np = nd(rng);
        Series got = summand(nz41(), {k1, k2}, n, np, 16);
        long uexp = k2 * (n + np);
        Series want = Series::mul(tet_index(k1, k1 + k2, 16 + std::abs(uexp) + 1),
                                  tet_index(k1 + k2 - n + np, k1 - n + np,
                                            16 + std::abs(uexp) + 1),
                                  16 - std::min(uexp, 0L))
                          .shifted(uexp);
        INFO("k=(" << k1 << "," << k2 << ") n=" << n << " np=" << np);
        CHECK(got.agrees_with(want));
        CHECK(got.trunc() >= 16);
    }
}

TEST_CASE("summand valuation oracle", "[indexsum][property]") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<long> kd(-6, 6), nd(-3, 3);
    for (const char* name : {"4_1", "5_2", "m237"}) {
        NZReduced nz = reduce(builtin(name));
        for (int it = 0; it < 170; ++it) {
            std::vector<long> k(nz.N);
            for (auto& x : k) x = kd(rng);
            long n = nd(rng), np = nd(rng);
            long v = summand_valuation(nz, k, n, np);
            Series s = summand(nz, k, n, np, v + 6);
            INFO(name << " it=" << it);
            REQUIRE(!s.is_zero_series());
            CHECK(s.valuation() == v);
        }
    }
}

TEST_CASE("valuation grows along rays", "[indexsum][property]") {
    // all eight sign patterns for the 4_1 lattice
    for (long sx : {-1L, 0L, 1L})
        for (long sy : {-1L, 0L, 1L}) {
            if (sx == 0 && sy == 0) continue;
            long prev = std::numeric_limits<long>::min();
            bool grew = false;
            for (long t = 30; t <= 50; t += 5) {
                long v = summand_valuation(nz41(), {sx * t, sy * t}, 0, 0);
                grew = v > prev;
                prev = v;
            }
            CHECK(grew);
        }
}

TEST_CASE("4_1 rotated index matches the printed window", "[indexsum][paper]") {
    // entry (0,0): 1 - 8q - 9q^2 + 18q^3 + 46q^4 + 90q^5 + 62q^6 + 10q^7
    Series i00 = rotated_index(nz41(), 0, 0, 16);
    CHECK(i00.agrees_with(qmk({{0, 1}, {2, -8}, {4, -9}, {6, 18}, {8, 46}, {10, 90}, {12, 62}, {14, 10}}, 8)));
    // entry (0,1): -q^(-1/2) + q^(1/2) - q^(3/2) + 6q^(5/2) + 20q^(7/2) + 29q^(9/2) + 25q^(11/2)
    Series i01 = rotated_index(nz41(), 0, 1, 13);
    CHECK(i01.agrees_with(qmk({{-1, -1}, {1, 1}, {3, -1}, {5, 6}, {7, 20}, {9, 29}, {11, 25}}, 13)));
    // entry (1,1): 2q + 2q^2 + 7q^3 + 8q^4 + 3q^5 - 22q^6 - 67q^7
    Series i11 = rotated_index(nz41(), 1, 1, 16);
    CHECK(i11.agrees_with(qmk({{2, 2}, {4, 2}, {6, 7}, {8, 8}, {10, 3}, {12, -22}, {14, -67}}, 8)));
}

TEST_CASE("window assembles the printed 2x2 matrix", "[indexsum][paper]") {
    SeriesMatrix w = window(nz41(), 2, 16);
    CHECK(w.at(0, 0) == rotated_index(nz41(), 0, 0, 16));
    CHECK(w.at(0, 1) == rotated_index(nz41(), 0, 1, 16));
    CHECK(w.at(1, 0) == rotated_index(nz41(), 1, 0, 16));
    CHECK(w.at(1, 1) == rotated_index(nz41(), 1, 1, 16));
    // symmetry of this particular window
    CHECK(w.at(0, 1) == w.at(1, 0));
}

TEST_CASE("index symmetries", "[indexsum][property]") {
    for (const char* name : {"4_1", "5_2", "m237"}) {
        NZReduced nz = knot_nz(name);
        long trunc = 20;  // q-trunc 10 here; acceptance runs 20
        for (long n = 0; n <= 2; ++n)
            for (long np = 0; np <= 2; ++np) {
                Series base = rotated_index(nz, n, np, trunc);
                INFO(name << " n=" << n << " np=" << np);
                CHECK(base.agrees_with(rotated_index(nz, -n, np, trunc)));
                CHECK(base.agrees_with(rotated_index(nz, n, -np, trunc)));
                CHECK(base.agrees_with(rotated_index(nz, -n, -np, trunc)));
            }
    }
}

TEST_CASE("cross-route equality with the plain index", "[indexsum][property]") {
    // I_rot(n,n') = sum_e I(n-n', e) q^(e(n+n')/2)
    for (const char* name : {"4_1", "5_2"}) {
        NZReduced nz = knot_nz(name);
        const long trunc = 20;
        for (auto [n, np] : {std::pair<long, long>{0, 0}, {1, 0}, {1, 1}, {2, 1}}) {
            Series direct = rotated_index(nz, n, np, trunc);
            Series acc = Series::zero(trunc);
            // |e| beyond the truncation cannot contribute: the plain index
            // valuation grows in |e| (checked by widening until stable).
            for (long e = -30; e <= 30; ++e) {
                Series pe = plain_index(nz, n - np, e, trunc + std::abs(e * (n + np)) + 2);
                acc = acc + pe.shifted(e * (n + np)).truncated(trunc);
            }
            INFO(name << " n=" << n << " np=" << np);
            CHECK(acc.agrees_with(direct));
        }
    }
}

TEST_CASE("plain index leading coefficient", "[indexsum]") {
    Series p = plain_index(nz41(), 0, 0, 12);
    CHECK(p.valuation() == 0);
    CHECK(p.coeff(0) == 1);
}

TEST_CASE("completeness under scan margin doubling", "[indexsum][property]") {
    for (const char* name : {"4_1", "5_2"}) {
        NZReduced nz = knot_nz(name);
        IndexOptions wide;
        wide.policy.stop_run = 24;
        for (auto [n, np] : {std::pair<long, long>{0, 0}, {2, 1}}) {
            Series a = rotated_index(nz, n, np, 40);
            Series b = rotated_index(nz, n, np, 40, wide);
            INFO(name);
            CHECK(a == b);
        }
    }
}

TEST_CASE("thread count does not change results", "[indexsum][property]") {
    IndexOptions one;
    one.threads = 1;
    IndexOptions two;
    two.threads = 2;
    CHECK(rotated_index(nz52(), 1, 0, 30, one) == rotated_index(nz52(), 1, 0, 30, two));
}

TEST_CASE("divergence guard on non-1-efficient data", "[indexsum]") {
    NZReduced degenerate;
    degenerate.N = 2;
    degenerate.A = {{0, 0}, {0, 0}};
    degenerate.B = {{0, 0}, {0, 0}};
    degenerate.nu = {0, 0};
    degenerate.lambda = {0, 0};
    degenerate.lambdapp = {0, 0};
    degenerate.nu_lambda = 0;
    IndexOptions opt;
    opt.policy.hard_cap = 200;
    CHECK_THROWS_AS(rotated_index(degenerate, 0, 0, 10, opt), DivergenceGuard);
}

TEST_CASE("pretzel window leading terms", "[indexsum][paper]") {
    // the 6x6 leading-monomial matrix of the pretzel knot, a few entries:
    // (0,1) = -q^(-9/2), (1,0) = -q^(9/2), (1,1) = 6q^2, (2,2) = q
    Series e01 = rotated_index(nz237(), 0, 1, -9 + 4);
    CHECK(e01.valuation() == -9);
    CHECK(e01.coeff(-9) == -1);
    Series e10 = rotated_index(nz237(), 1, 0, 9 + 4);
    CHECK(e10.valuation() == 9);
    CHECK(e10.coeff(9) == -1);
    Series e11 = rotated_index(nz237(), 1, 1, 8);
    CHECK(e11.valuation() == 4);
    CHECK(e11.coeff(4) == 6);
    Series e22 = rotated_index(nz237(), 2, 2, 6);
    CHECK(e22.valuation() == 2);
    CHECK(e22.coeff(2) == 1);
}
