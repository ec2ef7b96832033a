#include <catch2/catch_amalgamated.hpp>

#include "qknot/tetindex.hpp"
#include "test_helpers.hpp"

using namespace qknot;

namespace {

// Literal evaluation of the defining alternating sum, cancellation region
// and all. Independent of the production path (which rotates the arguments
// into the no-cancellation chamber).
Series tet_oracle(long m, long e, long trunc) {
    // Term valuations dip as low as about -(m^2 + |e m|); add headroom.
    long depth = m * m + std::abs(e * m) + std::abs(e) + 4;
    long work = trunc + 2 * depth + 8;
    std::vector<Series> poch_inv;  // 1/(q;q)_n
    poch_inv.push_back(Series::one(work));
    auto ipoch = [&](long n) -> const Series& {
        while ((long)poch_inv.size() <= n) {
            long k = (long)poch_inv.size();
            Series factor = Series::one(work) - Series::monomial(Rat(1), 2 * k, work);
            poch_inv.push_back(Series::mul(poch_inv.back(), factor.invert(), work));
        }
        return poch_inv[n];
    };
    Series acc = Series::zero(work);
    for (long n = std::max(0L, -e); n <= 40; ++n) {
        long uval = n * (n + 1) - (2 * n + e) * m;
        const Series a = ipoch(n);
        const Series b = ipoch(n + e);  // may reallocate the memo vector
        Series term = Series::mul(a, b, work - std::min(uval, 0L));
        acc = acc + term.shifted(uval, n);
    }
    return acc.truncated(trunc);
}

}  // namespace

TEST_CASE("tet degree closed form", "[tetindex]") {
    CHECK(tet_degree_u(0, 0) == 0);
    CHECK(tet_degree_u(-1, 0) == 0);
    CHECK(tet_degree_u(2, 3) == 12);  // delta = 6 in q-units
    CHECK(tet_degree_u(1, 0) == 2);   // delta = 1
}

TEST_CASE("tet index against the literal sum", "[tetindex]") {
    for (long m = -6; m <= 6; ++m)
        for (long e = -6; e <= 6; ++e) {
            Series got = tet_index(m, e, 24);
            Series want = tet_oracle(m, e, 24);
            INFO("m=" << m << " e=" << e);
            CHECK(got == want);
        }
}

TEST_CASE("tet index first coefficients", "[tetindex]") {
    Series s = tet_index(0, 0, 16);
    CHECK(s.coeff(0) == 1);
    CHECK(s.coeff(2) == -1);   // q^1
    CHECK(s.coeff(4) == -2);   // q^2
    CHECK(s.coeff(6) == -2);   // q^3
    CHECK(tet_index(0, 0, 16).valuation() == 0);
    CHECK(tet_index(1, 0, 16).valuation() == 2);
}

TEST_CASE("valuation equals the degree formula", "[tetindex][property]") {
    for (long m = -6; m <= 6; ++m)
        for (long e = -6; e <= 6; ++e) {
            long d = tet_degree_u(m, e);
            Series s = tet_index(m, e, d + 10);
            INFO("m=" << m << " e=" << e);
            CHECK(s.valuation() == d);
        }
    std::mt19937 rng(81);
    std::uniform_int_distribution<long> dist(-40, 40);
    for (int it = 0; it < 60; ++it) {
        long m = dist(rng), e = dist(rng);
        long d = tet_degree_u(m, e);
        Series s = tet_index(m, e, d + 8);
        CHECK(s.valuation() == d);
    }
}

TEST_CASE("integrality", "[tetindex][property]") {
    std::mt19937 rng(4);
    std::uniform_int_distribution<long> dist(-12, 12);
    for (int it = 0; it < 30; ++it) {
        long m = dist(rng), e = dist(rng);
        Series s = tet_index(m, e, tet_degree_u(m, e) + 30);
        for (const Rat& c : s.coeffs()) CHECK(c.get_den() == 1);
    }
}

TEST_CASE("cache serves longest prefix", "[tetindex]") {
    tet::Cache<I128>::instance().clear();
    Series long1 = tet_index(2, -1, 60);
    Series short1 = tet_index(2, -1, 20);
    CHECK(long1.truncated(20) == short1);
    // mpz fallback computes the same values
    auto a = tet::tet_compute<I128>(3, -2, 25);
    auto b = tet::tet_compute<mpz_class>(3, -2, 25);
    REQUIRE(a.uval == b.uval);
    for (size_t i = 0; i < a.q.size(); ++i) CHECK(to_mpz(a.q[i].v) == b.q[i]);
}
