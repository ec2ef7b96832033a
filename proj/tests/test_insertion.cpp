#include <catch2/catch_amalgamated.hpp>

#include "qknot/insertion.hpp"
#include "test_helpers.hpp"

using namespace qknot;
using test::mk;

namespace {
const NZReduced& nz41() {
    static NZReduced r = knot_nz("4_1");
    return r;
}
WeylMonomial identity_mono(int N) {
    WeylMonomial m;
    m.alpha.assign(N, 0);
    m.beta.assign(N, 0);
    return m;
}
}  // namespace

TEST_CASE("identity insertion reproduces the summand", "[insertion]") {
    std::mt19937 rng(12);
    std::uniform_int_distribution<long> kd(-3, 3), nd(-2, 2);
    for (int it = 0; it < 20; ++it) {
        std::vector<long> k{kd(rng), kd(rng)};
        long n = nd(rng), np = nd(rng);
        CHECK(inserted_summand(nz41(), identity_mono(2), k, n, np, 14) ==
              summand(nz41(), k, n, np, 14));
    }
}

TEST_CASE("L_O hand value", "[insertion][paper]") {
    WeylMonomial m = identity_mono(2);
    m.alpha = {1, 0};
    CHECK(two_l_o(nz41(), m, {2, -1}, 1, 0) == 2);  // L_O = 1
}

TEST_CASE("L_O is k-independent on edge rows", "[insertion][property]") {
    std::mt19937 rng(3);
    std::uniform_int_distribution<long> kd(-8, 8);
    for (const char* name : {"4_1", "5_2", "m237"}) {
        const NZReduced& nz = knot_nz(name);
        for (int i = 1; i <= nz.N - 1; ++i) {
            WeylMonomial m = identity_mono(nz.N);
            m.alpha = nz.A[i - 1];
            m.beta = nz.B[i - 1];
            std::vector<long> k0(nz.N, 0);
            long ref = two_l_o(nz, m, k0, 0, 0);
            for (int it = 0; it < 20; ++it) {
                std::vector<long> k(nz.N);
                for (auto& x : k) x = kd(rng);
                CHECK(two_l_o(nz, m, k, 0, 0) == ref);
                CHECK(two_l_o(nz, m, k, 2, -1) == ref);
            }
        }
    }
}

TEST_CASE("edge operator shift identity", "[insertion][paper]") {
    std::mt19937 rng(9);
    std::uniform_int_distribution<long> kd(-4, 4);
    for (const char* name : {"4_1", "5_2", "m237"}) {
        const NZReduced& nz = knot_nz(name);
        for (int i = 1; i <= nz.N - 1; ++i) {
            Insertion ei = edge_operator(nz, i);
            REQUIRE(ei.terms.size() == 1);
            for (int it = 0; it < 50; ++it) {
                std::vector<long> k(nz.N), ks(nz.N);
                for (int d = 0; d < nz.N; ++d) k[d] = kd(rng);
                ks = k;
                ks[i - 1] -= 1;
                Series lhs = inserted_summand(nz, ei.terms[0], k, 0, 0, 12);
                Series rhs = summand(nz, ks, 0, 0, 14).shifted(2).truncated(12);
                INFO(name << " edge " << i << " it " << it);
                CHECK(lhs.agrees_with(rhs));
            }
        }
    }
}

TEST_CASE("edge minus q annihilates the index", "[insertion][paper]") {
    for (const char* name : {"4_1", "5_2", "m237"}) {
        const NZReduced& nz = knot_nz(name);
        for (int i = 1; i <= nz.N - 1; ++i) {
            for (long n = 0; n <= 1; ++n)
                for (long np = 0; np <= 1; ++np) {
                    Series with = inserted_rotated_index(nz, edge_operator(nz, i), n, np, 20);
                    Series base = rotated_index(nz, n, np, 18).shifted(2);
                    Series diff = with - base;
                    INFO(name << " edge " << i << " (" << n << "," << np << ")");
                    CHECK(diff.is_zero_series());
                }
        }
    }
}

TEST_CASE("Lagrangian operators annihilate the index", "[insertion][paper]") {
    for (const char* name : {"4_1", "5_2", "m237"}) {
        const NZReduced& nz = knot_nz(name);
        for (int j = 1; j <= nz.N; ++j)
            for (long n = 0; n <= 1; ++n)
                for (long np = 0; np <= 1; ++np) {
                    Series s = inserted_rotated_index(nz, lagrangian_insertion(nz.N, j), n, np, 20);
                    INFO(name << " tet " << j << " (" << n << "," << np << ")");
                    CHECK(s.is_zero_series());
                }
    }
}

TEST_CASE("builtin insertions", "[insertion]") {
    Insertion o1 = builtin_insertion("4_1", "O1");
    REQUIRE(o1.terms.size() == 3);
    int minus = 0, plus = 0;
    for (auto& t : o1.terms) {
        if (t.coeff == RatFun::constant(Rat(-1))) ++minus;
        if (t.coeff == RatFun::one()) ++plus;
    }
    CHECK(minus == 2);
    CHECK(plus == 1);
    Insertion o52 = builtin_insertion("5_2", "O1");
    REQUIRE(o52.terms.size() == 1);
    CHECK(o52.terms[0].alpha == std::vector<long>{1, 0, 0});
    CHECK(o52.terms[0].beta == std::vector<long>{0, 0, 0});
    Insertion om = builtin_insertion("m237", "O");
    REQUIRE(om.terms.size() == 1);
    CHECK(om.terms[0].alpha == std::vector<long>{0, 1, 0});
    CHECK_THROWS_AS(builtin_insertion("4_1", "O9"), UnknownInsertion);
}

TEST_CASE("4_1 inserted window matches the printed matrix", "[insertion][paper]") {
    Insertion o = builtin_insertion("4_1", "O1");
    // -3 + 15q + 24q^2 - 15q^3 - 69q^4 - 174q^5 - 183q^6 - 165q^7
    Series i00 = inserted_rotated_index(nz41(), o, 0, 0, 16);
    CHECK(i00.agrees_with(mk({{0, -3}, {2, 15}, {4, 24}, {6, -15}, {8, -69}, {10, -174}, {12, -183}, {14, -165}}, 16)));
    // 2q^(-1/2) - q^(1/2) + 4q^(3/2) - 7q^(5/2) - 34q^(7/2) - 64q^(9/2)
    Series i01 = inserted_rotated_index(nz41(), o, 0, 1, 11);
    CHECK(i01.agrees_with(mk({{-1, 2}, {1, -1}, {3, 4}, {5, -7}, {7, -34}, {9, -64}}, 11)));
    // q^(-3/2) - q^(-1/2) - q^(1/2) + q^(3/2) - 5q^(5/2) - 26q^(7/2) - 48q^(9/2)
    Series i10 = inserted_rotated_index(nz41(), o, 1, 0, 11);
    CHECK(i10.agrees_with(mk({{-3, 1}, {-1, -1}, {1, -1}, {3, 1}, {5, -5}, {7, -26}, {9, -48}}, 11)));
    // -1 - 2q - 4q^2 - 9q^3 - 17q^4 - 13q^5 + 10q^6 + 77q^7
    Series i11 = inserted_rotated_index(nz41(), o, 1, 1, 16);
    CHECK(i11.agrees_with(mk({{0, -1}, {2, -2}, {4, -4}, {6, -9}, {8, -17}, {10, -13}, {12, 10}, {14, 77}}, 16)));
    // the window op assembles the same entries
    SeriesMatrix w = inserted_window(nz41(), o, 2, 11);
    CHECK(w.at(0, 0).agrees_with(i00));
    CHECK(w.at(1, 0) == i10);
}

TEST_CASE("zero insertion gives zero", "[insertion]") {
    CHECK(inserted_rotated_index(nz41(), Insertion{}, 0, 0, 12).is_zero_series());
}

TEST_CASE("linearity", "[insertion][property]") {
    const NZReduced& nz = nz41();
    Insertion o1 = builtin_insertion("4_1", "O1");
    Insertion o2 = builtin_insertion("4_1", "O2");
    RatFun a = ratfun_from_text("(2)/(1)");
    RatFun b = ratfun_from_text("(1-q)/(1+q^2)");
    Insertion combo = o1.scaled(a) + o2.scaled(b);
    for (auto [n, np] : {std::pair<long, long>{0, 0}, {1, 0}}) {
        Series lhs = inserted_rotated_index(nz, combo, n, np, 14);
        Series s1 = inserted_rotated_index(nz, o1, n, np, 16);
        Series s2 = inserted_rotated_index(nz, o2, n, np, 16);
        Series rhs = Series::mul(series_of(a, 14), s1, 14) + Series::mul(series_of(b, 14), s2, 14);
        CHECK(lhs.agrees_with(rhs));
    }
}

TEST_CASE("insertion text round trip", "[insertion][io]") {
    Insertion o = builtin_insertion("4_1", "O1");
    CHECK(parse_insertion(insertion_to_text(o), 2).terms.size() == 3);
    Insertion back = parse_insertion(insertion_to_text(o), 2);
    for (size_t i = 0; i < o.terms.size(); ++i) {
        CHECK(back.terms[i].alpha == o.terms[i].alpha);
        CHECK(back.terms[i].beta == o.terms[i].beta);
        CHECK(back.terms[i].coeff == o.terms[i].coeff);
    }
    Insertion parsed = parse_insertion("-1*z1^-1 + 1*z1''^2*z3 + (1+q)/(1-q)*z2", 3);
    CHECK(parsed.terms.size() == 3);
    Insertion again = parse_insertion(insertion_to_text(parsed), 3);
    CHECK(insertion_to_text(again) == insertion_to_text(parsed));
    CHECK_THROWS_AS(parse_insertion("z9", 3), ParseError);
}
