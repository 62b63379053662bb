#include "doctest.h"

#include "qlift/precomp.hpp"

using namespace qlift;

namespace {

Factorization fac(unsigned long n) { return Factorization::trial(Int(n)); }

unsigned ceil_log2(unsigned long n) {
    unsigned b = 0;
    while ((1UL << b) < n) ++b;
    return b;
}

}  // namespace

TEST_CASE("PLDU decomposition") {
    const auto sw = matrix_pldu_decompose(MatModN(5, 0, 1, 1, 0), fac(5));
    CHECK(sw.swapped);
    CHECK(sw.L == MatModN::identity(5));
    CHECK(sw.Dg == MatModN::identity(5));
    CHECK(sw.U2 == MatModN::identity(5));

    const auto six = matrix_pldu_decompose(MatModN(6, 2, 3, 3, 2), fac(6));
    CHECK(six.k == 1);
    CHECK(six.product() == MatModN(6, 2, 3, 3, 2));

    Rng rng(12);
    for (unsigned long n : {45UL, 11UL, 105UL, 9UL}) {
        for (int t = 0; t < 100; ++t) {
            const MatModN M = random_invertible(Int(n), rng);
            const auto d = matrix_pldu_decompose(M, fac(n));
            CHECK(d.product() == M);
            CHECK(d.L(0, 1) == 0);
            CHECK(d.Dg(0, 1) == 0);
            CHECK(d.Dg(1, 0) == 0);
            CHECK(d.U2(1, 0) == 0);
            if (!fac(n).is_prime()) CHECK(gcd(M(0, 0) + d.k * M(1, 0), Int(n)) == 1);
        }
    }
    CHECK_THROWS_AS(matrix_pldu_decompose(MatModN(11, 1, 2, 2, 4), fac(11)), MalformedInput);
}

TEST_CASE("precomputed lifting") {
    for (unsigned long n : {11UL, 15UL}) {
        auto P = make_params(103, n);
        const auto F = fac(n);
        const RingIso iso = explicit_isomorphism(o0_structure_constants(P, F), 5);
        LiftConfig cfg;
        cfg.B = Int(1) << 20;
        cfg.seed = 17;
        const PrecompTable T = precompute_lift_table(P, F, iso, cfg);
        CHECK(T.entries.size() == T.families().size() * T.bits);
        if (n == 11) {
            CHECK(T.entries.size() == 16);
            CHECK(T.swap.has_value());
            CHECK(T.entry("L", 0).matrix == MatModN(11, 1, 0, 1, 1));
            CHECK(T.entry("C", 0).matrix == MatModN(11, T.generators[0], 0, 0, 1));
        }
        for (const auto& e : T.entries) {
            CHECK(verify_lift(P, F, o0_lattice(), P.from_o0(element_of_matrix(iso, e.matrix)), e.lift, T.bound));
        }
        for (std::size_t i = 0; i < T.entries.size(); ++i) {
            for (std::size_t j = i + 1; j < T.entries.size(); ++j) {
                CHECK(gcd(T.entries[i].lift.cert.value, T.entries[j].lift.cert.value) == 1);
            }
        }

        const auto id = precomputed_lift(P, T, iso, MatModN::identity(n));
        CHECK(id.sigma == QuatElem::scalar(P.alg, 1));
        CHECK(id.lambda == 1);

        Rng rng(3);
        for (int t = 0; t < 20; ++t) {
            const MatModN M = random_invertible(Int(n), rng);
            unsigned used = 0;
            const auto r = precomputed_lift(P, T, iso, M, &used);
            CHECK(used <= 4 * ceil_log2(n) + 1);
            const auto [c, den] = P.o0_coords(r.sigma);
            REQUIRE(den == 1);
            CHECK(matrix_of_element(iso, c) == M.scaled(r.lambda));
        }

        // agreement with a direct lift up to a unit
        const MatModN M = random_invertible(Int(n), rng);
        const auto a = precomputed_lift(P, T, iso, M);
        const QuatElem s0 = P.from_o0(element_of_matrix(iso, M));
        const auto b = pqlp_lift(P, F, o0_lattice(), s0, cfg);
        const auto u = unit_ratio_mod(P, F, a.sigma, b.sigma);
        CHECK(u.has_value());
    }
}
