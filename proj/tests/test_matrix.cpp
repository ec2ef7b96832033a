#include <catch2/catch_amalgamated.hpp>

#include "qknot/matrix.hpp"
#include "test_helpers.hpp"

using namespace qknot;
using test::mk;

namespace {

SeriesMatrix random_matrix(std::mt19937& rng, int n, long trunc) {
    SeriesMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m.at(i, j) = test::random_series(rng, -2, 2, trunc);
    return m;
}

bool is_identity_to_trunc(const SeriesMatrix& m) {
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) {
            const Series& s = m.at(i, j);
            if (!(s.agrees_with(i == j ? Series::one(s.trunc()) : Series::zero(s.trunc()))))
                return false;
        }
    return true;
}

// Independent determinant oracle: cofactor expansion along the first row.
Series det_cofactor(const SeriesMatrix& m) {
    const int n = m.rows();
    if (n == 1) return m.at(0, 0);
    long t = m.at(0, 0).trunc();
    Series acc = Series::zero(t * 4);
    for (int j = 0; j < n; ++j) {
        SeriesMatrix sub(n - 1, n - 1);
        for (int r = 1; r < n; ++r) {
            int cc = 0;
            for (int c = 0; c < n; ++c) {
                if (c == j) continue;
                sub.at(r - 1, cc++) = m.at(r, c);
            }
        }
        Series term = m.at(0, j) * det_cofactor(sub);
        acc = acc + (j % 2 ? -term : term);
    }
    return acc;
}

}  // namespace

TEST_CASE("series matrix inverse", "[matrix]") {
    SECTION("identity") {
        SeriesMatrix id(2, 2);
        id.at(0, 0) = id.at(1, 1) = Series::one(10);
        id.at(0, 1) = id.at(1, 0) = Series::zero(10);
        CHECK(is_identity_to_trunc(mat_invert_series(id)));
    }
    SECTION("monomial diagonal") {
        SeriesMatrix d(2, 2);
        d.at(0, 0) = mk({{1, 1}}, 10);
        d.at(1, 1) = mk({{-1, 1}}, 10);
        d.at(0, 1) = d.at(1, 0) = Series::zero(10);
        SeriesMatrix inv = mat_invert_series(d);
        CHECK(inv.at(0, 0).agrees_with(mk({{-1, 1}}, 8)));
        CHECK(inv.at(1, 1).agrees_with(mk({{1, 1}}, 8)));
    }
    SECTION("random unit matrices multiply back to identity") {
        std::mt19937 rng(17);
        for (int it = 0; it < 10; ++it) {
            SeriesMatrix m = random_matrix(rng, 2, 16);
            SeriesMatrix inv;
            try {
                inv = mat_invert_series(m);
            } catch (const SingularMatrix&) {
                continue;
            }
            CHECK(is_identity_to_trunc(mat_mul(m, inv)));
            CHECK(is_identity_to_trunc(mat_mul(inv, m)));
        }
    }
    SECTION("singular matrix throws") {
        SeriesMatrix z(2, 2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) z.at(i, j) = Series::one(8);
        CHECK_THROWS_AS(mat_invert_series(z), SingularMatrix);
    }
}

TEST_CASE("series matrix determinant", "[matrix]") {
    SECTION("identity and diagonal") {
        SeriesMatrix id(3, 3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) id.at(i, j) = i == j ? Series::one(12) : Series::zero(12);
        CHECK(mat_det(id).agrees_with(Series::one(12)));

        std::mt19937 rng(23);
        Series a = test::random_series(rng, -1, 1, 12);
        Series b = test::random_series(rng, -1, 1, 12);
        SeriesMatrix d(2, 2);
        d.at(0, 0) = a;
        d.at(1, 1) = b;
        d.at(0, 1) = d.at(1, 0) = Series::zero(12);
        CHECK(mat_det(d).agrees_with(a * b));
    }
    SECTION("cofactor oracle and multiplicativity on random 3x3") {
        std::mt19937 rng(31);
        for (int it = 0; it < 8; ++it) {
            SeriesMatrix m = random_matrix(rng, 3, 14);
            SeriesMatrix n = random_matrix(rng, 3, 14);
            CHECK(mat_det(m).agrees_with(det_cofactor(m)));
            Series lhs = mat_det(mat_mul(m, n));
            Series rhs = mat_det(m) * mat_det(n);
            CHECK(lhs.agrees_with(rhs));
        }
    }
}
