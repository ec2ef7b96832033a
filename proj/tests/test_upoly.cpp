#include <catch2/catch_amalgamated.hpp>

#include "qknot/io.hpp"
#include "qknot/upoly.hpp"
#include "test_helpers.hpp"

using namespace qknot;
using test::mk;
using test::mkpoly;

TEST_CASE("upoly arithmetic and normalization", "[upoly]") {
    UPoly p = mkpoly({{0, 1}, {2, -1}});  // 1 - u^2
    UPoly q = mkpoly({{2, 1}});
    CHECK((p + q) == UPoly::one());
    CHECK((p - p).is_zero_poly());
    UPoly laurent = mkpoly({{-2, 1}, {1, 3}});
    CHECK(laurent.valuation() == -2);
    CHECK(laurent.degree() == 1);
    CHECK((laurent * mkpoly({{2, 1}})) == mkpoly({{0, 1}, {3, 3}}));
}

TEST_CASE("upoly divmod and gcd", "[upoly]") {
    UPoly a = mkpoly({{0, -1}, {2, 1}});           // u^2 - 1
    UPoly b = mkpoly({{0, 1}, {1, 1}});            // u + 1
    auto [q, r] = UPoly::divmod(a, b);
    CHECK(r.is_zero_poly());
    CHECK(q == mkpoly({{0, -1}, {1, 1}}));
    UPoly g = UPoly::gcd(a, b);
    CHECK(g == b);  // monic already
    CHECK(UPoly::gcd(mkpoly({{0, 2}}), mkpoly({{0, 5}})) == UPoly::one());
}

TEST_CASE("ratfun canonical form", "[upoly]") {
    // (u^2-1)/(u+1) reduces to u-1 over 1
    RatFun f(mkpoly({{0, -1}, {2, 1}}), mkpoly({{0, 1}, {1, 1}}));
    CHECK(f.num() == mkpoly({{0, -1}, {1, 1}}));
    CHECK(f.den() == UPoly::one());
    // denominator made monic, scale pushed to numerator
    RatFun g(UPoly::one(), mkpoly({{0, 2}, {1, 2}}));
    CHECK(g.den() == mkpoly({{0, 1}, {1, 1}}));
    CHECK(g.num() == UPoly::constant(rat_from(1, 2)));
    // denominator u-powers move to the numerator valuation
    RatFun h(UPoly::one(), mkpoly({{1, 1}, {2, 1}}));  // 1/(u + u^2)
    CHECK(h.den() == mkpoly({{0, 1}, {1, 1}}));
    CHECK(h.num() == mkpoly({{-1, 1}}));
    CHECK_THROWS_AS(RatFun(UPoly::one(), UPoly::zero()), ZeroDenominator);
}

TEST_CASE("series_of", "[upoly]") {
    SECTION("geometric") {
        RatFun f(UPoly::one(), mkpoly({{0, 1}, {2, -1}}));  // 1/(1-u^2)
        Series s = series_of(f, 9);
        CHECK(s == mk({{0, 1}, {2, 1}, {4, 1}, {6, 1}, {8, 1}}, 9));
    }
    SECTION("(2-q)/(q-1) in u") {
        RatFun f(mkpoly({{0, 2}, {2, -1}}), mkpoly({{0, -1}, {2, 1}}));
        Series s = series_of(f, 7);
        CHECK(s == mk({{0, -2}, {2, -1}, {4, -1}, {6, -1}}, 7));
    }
    SECTION("identity monomial") {
        RatFun f = RatFun::monomial(Rat(1), 1);
        CHECK(series_of(f, 5) == mk({{1, 1}}, 5));
    }
    SECTION("negative valuation") {
        RatFun f(mkpoly({{-2, 1}}), mkpoly({{0, 1}, {1, -1}}));  // u^-2/(1-u)
        Series s = series_of(f, 3);
        for (long e = -2; e < 3; ++e) CHECK(s.coeff(e) == 1);
    }
}

TEST_CASE("ratfun arithmetic", "[upoly]") {
    std::mt19937 rng(11);
    for (int it = 0; it < 30; ++it) {
        RatFun a(test::random_upoly(rng, 4), test::random_upoly(rng, 3, false));
        RatFun b(test::random_upoly(rng, 4), test::random_upoly(rng, 3, false));
        Series sa = series_of(a, 25), sb = series_of(b, 25);
        CHECK(series_of(a + b, 20).agrees_with(sa + sb));
        CHECK(series_of(a * b, 20).agrees_with(Series::mul(sa, sb, 20)));
        if (!b.is_zero_fun()) {
            RatFun q = a / b;
            CHECK((q * b) == a);
        }
    }
}

TEST_CASE("poly and ratfun text", "[upoly][io]") {
    UPoly p = mkpoly({{-2, -1}, {0, 1, 2}, {3, 5}});
    std::string s = upoly_to_text(p);
    CHECK(s == "-u^-2 + 1/2 + 5*u^3");
    CHECK(upoly_from_text(s) == p);
    CHECK(upoly_from_text("2-q") == mkpoly({{0, 2}, {2, -1}}));
    CHECK(upoly_from_text("q^-1") == mkpoly({{-2, 1}}));
    RatFun f(mkpoly({{0, 2}, {2, -1}}), mkpoly({{0, -1}, {2, 1}}));
    CHECK(ratfun_from_text(ratfun_to_text(f)) == f);
    CHECK(ratfun_from_text("(2-q)/(q-1)") == f);
    std::mt19937 rng(5);
    for (int it = 0; it < 20; ++it) {
        RatFun g(test::random_upoly(rng, 5), test::random_upoly(rng, 4, false));
        CHECK(ratfun_from_text(ratfun_to_text(g)) == g);
    }
}
