#include "doctest.h"

#include "qlift/lattice.hpp"

using namespace qlift;

namespace {

IntMat random_matrix(Rng& rng, std::size_t r, std::size_t c, int lo, int hi) {
    IntMat m(r, IntVec(c));
    for (auto& row : m) {
        for (auto& x : row) x = Int(static_cast<long>(rng.range(lo, hi)));
    }
    return m;
}

}  // namespace

TEST_CASE("determinant and adjugate") {
    IntMat m{{2, 1, 0}, {1, 3, 1}, {0, 1, 4}};
    CHECK(determinant(m) == 18);
    const IntMat a = adjugate(m);
    const IntMat prod = mat_mul(m, a);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) CHECK(prod[i][j] == (i == j ? 18 : 0));
    }
    Rng rng(5);
    for (int t = 0; t < 30; ++t) {
        const IntMat r = random_matrix(rng, 4, 4, -9, 9);
        const IntMat pr = mat_mul(r, adjugate(r));
        const Int d = determinant(r);
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) CHECK(pr[i][j] == (i == j ? d : Int(0)));
        }
    }
}

TEST_CASE("hnf is canonical") {
    Rng rng(11);
    for (int t = 0; t < 40; ++t) {
        IntMat base = random_matrix(rng, 4, 4, -20, 20);
        if (determinant(base) == 0) continue;
        // a second presentation: unimodular mix plus redundant rows
        IntMat U = identity_matrix(4);
        for (int k = 0; k < 6; ++k) {
            const int i = static_cast<int>(rng.below(4)), j = static_cast<int>(rng.below(4));
            if (i == j) continue;
            const Int f = Int(static_cast<long>(rng.range(-3, 3)));
            for (int c = 0; c < 4; ++c) U[i][c] += f * U[j][c];
        }
        IntMat other = mat_mul(U, base);
        IntVec extra(4);
        for (int c = 0; c < 4; ++c) extra[c] = base[0][c] * 3 - base[2][c];
        other.push_back(extra);
        const IntMat h1 = hnf(base), h2 = hnf(other);
        CHECK(h1 == h2);
        CHECK(abs(determinant(h1)) == abs(determinant(base)));
        for (int i = 0; i < 4; ++i) {
            CHECK(h1[i][i] > 0);
            for (int j = 0; j < i; ++j) CHECK(h1[i][j] == 0);
            for (int k = 0; k < i; ++k) {
                CHECK(h1[k][i] >= 0);
                CHECK(h1[k][i] < h1[i][i]);
            }
        }
    }
    CHECK_THROWS_AS(hnf(IntMat{{1, 0}, {2, 0}}), MalformedInput);
}

TEST_CASE("rational lattices: dual, sum, intersection") {
    const RatLattice Z2 = RatLattice::from_rows(identity_matrix(2));
    const RatLattice A = RatLattice::from_rows({{2, 0}, {0, 3}});
    const RatLattice B = RatLattice::from_rows({{3, 0}, {0, 2}});
    CHECK(A.intersect(B) == RatLattice::from_rows({{6, 0}, {0, 6}}));
    CHECK(A + B == Z2);
    CHECK(A.dual() == RatLattice::from_rows({{3, 0}, {0, 2}}, 6));
    CHECK(A.dual().dual() == A);
    CHECK(A.index_in(Z2) == 6);
    CHECK(Z2.contains(A));
    CHECK_FALSE(A.contains(Z2));
    CHECK(A.contains({4, 9}, 1));
    CHECK_FALSE(A.contains({1, 0}, 1));
    CHECK(A.scaled(Rat(1, 2)).contains({1, 0}, 1));

    Rng rng(3);
    for (int t = 0; t < 20; ++t) {
        IntMat m1 = random_matrix(rng, 3, 3, -6, 6), m2 = random_matrix(rng, 3, 3, -6, 6);
        if (determinant(m1) == 0 || determinant(m2) == 0) continue;
        const RatLattice L1 = RatLattice::from_rows(m1, 2), L2 = RatLattice::from_rows(m2, 3);
        const RatLattice I = L1.intersect(L2), S = L1 + L2;
        CHECK(L1.contains(I));
        CHECK(L2.contains(I));
        CHECK(S.contains(L1));
        CHECK(S.contains(L2));
        // covolume identity for sum and intersection
        CHECK(I.covolume() * S.covolume() == L1.covolume() * L2.covolume());
    }
}

TEST_CASE("unimodular completion") {
    Rng rng(8);
    for (int t = 0; t < 50; ++t) {
        IntVec c(4);
        for (auto& x : c) x = Int(static_cast<long>(rng.range(-30, 30)));
        Int g = 0;
        for (const auto& x : c) g = gcd(g, x);
        if (g != 1) continue;
        const IntMat U = unimodular_with_first_row(c);
        CHECK(U[0] == c);
        CHECK(abs(determinant(U)) == 1);
    }
    CHECK_THROWS_AS(unimodular_with_first_row({2, 4, 0}), MalformedInput);
}

TEST_CASE("LLL and short vectors") {
    RatMat G{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    IntMat B{{1, 5, 7}, {0, 1, 9}, {0, 0, 1}};
    IntMat R = lll_reduce(B, G);
    CHECK(abs(determinant(R)) == 1);
    for (const auto& row : R) {
        Int n = 0;
        for (const auto& x : row) n += x * x;
        CHECK(n == 1);
    }

    // brute-force oracle for the enumeration
    RatMat Q{{2, 1, 0}, {1, 3, Rat(1, 2)}, {0, Rat(1, 2), 5}};
    const Rat bound = 12;
    auto vs = short_vectors(Q, bound);
    int expected = 0;
    for (int a = -6; a <= 6; ++a) {
        for (int b = -6; b <= 6; ++b) {
            for (int c = -6; c <= 6; ++c) {
                if (a == 0 && b == 0 && c == 0) continue;
                const int v[3] = {a, b, c};
                Rat s = 0;
                for (int i = 0; i < 3; ++i) {
                    for (int j = 0; j < 3; ++j) s += Q[i][j] * v[i] * v[j];
                }
                if (s <= bound) ++expected;
            }
        }
    }
    CHECK(static_cast<int>(vs.size()) * 2 == expected);
    for (const auto& v : vs) {
        std::size_t k = 0;
        while (v[k] == 0) ++k;
        CHECK(v[k] > 0);
    }
}
