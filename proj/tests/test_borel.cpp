#include "doctest.h"

#include <set>

#include "qlift/borel.hpp"

using namespace qlift;

namespace {

Factorization fac(unsigned long n) { return Factorization::trial(Int(n)); }

std::vector<CyclicSubmodule> all_submodules(unsigned long n) {
    const auto F = fac(n);
    std::set<std::pair<Int, Int>> seen;
    std::vector<CyclicSubmodule> out;
    for (unsigned long x = 0; x < n; ++x) {
        for (unsigned long y = 0; y < n; ++y) {
            if (!is_primitive(F, x, y)) continue;
            CyclicSubmodule S(F, x, y);
            if (seen.insert({S.x(), S.y()}).second) out.push_back(S);
        }
    }
    return out;
}

bool is_prime_power(unsigned long n) { return fac(n).factors().size() == 1; }

}  // namespace

TEST_CASE("membership test matches direct membership") {
    for (unsigned long n = 2; n <= 30; ++n) {
        if (!is_prime_power(n)) continue;
        const PrimePower qk = fac(n).factors()[0];
        for (const auto& S : all_submodules(n)) {
            PlantedOracle f(S);
            for (unsigned long a = 0; a < n; ++a) {
                for (unsigned long b = 0; b < n; ++b) {
                    bool expected = S.contains(a, b);
                    // a primitive u modulo 2^k is only seen up to the stabilizer
                    if (qk.prime == 2 && (a % 2 == 1 || b % 2 == 1)) {
                        expected = same_borel_subgroup(S, CyclicSubmodule(fac(n), a, b));
                    }
                    CHECK(membership_test(f, qk, a, b) == expected);
                }
            }
        }
    }
    PlantedOracle nine(CyclicSubmodule(fac(9), 1, 2));
    CHECK(membership_test(nine, {3, 2}, 3, 6));
    CHECK_FALSE(membership_test(nine, {3, 2}, 1, 0));
    CHECK(membership_test(nine, {3, 2}, 0, 0));
    PlantedOracle eight(CyclicSubmodule(fac(8), 1, 3));
    CHECK(membership_test(eight, {2, 3}, 1, 3));
    CHECK_FALSE(membership_test(eight, {2, 3}, 1, 5));
    CHECK_FALSE(membership_test(eight, {2, 3}, 2, 2));
}

TEST_CASE("stabilizers modulo 2^k determine S only modulo 2^(k-1)") {
    for (unsigned long m : {2UL, 4UL, 8UL, 9UL, 16UL}) {
        const auto F = fac(m);
        const auto subs = all_submodules(m);
        std::vector<std::set<std::array<Int, 4>>> stabs(subs.size());
        for (unsigned long a = 0; a < m; ++a)
            for (unsigned long b = 0; b < m; ++b)
                for (unsigned long c = 0; c < m; ++c)
                    for (unsigned long d = 0; d < m; ++d) {
                        const MatModN g(m, a, b, c, d);
                        if (!g.is_invertible()) continue;
                        for (std::size_t i = 0; i < subs.size(); ++i) {
                            if (subs[i].image(g) == subs[i]) stabs[i].insert(g.entries());
                        }
                    }
        for (std::size_t i = 0; i < subs.size(); ++i) {
            for (std::size_t j = 0; j < subs.size(); ++j) {
                CHECK((stabs[i] == stabs[j]) == same_borel_subgroup(subs[i], subs[j]));
            }
        }
    }
    CHECK(same_borel_subgroup(CyclicSubmodule(fac(8), 1, 1), CyclicSubmodule(fac(8), 1, 5)));
    CHECK_FALSE(same_borel_subgroup(CyclicSubmodule(fac(8), 1, 1), CyclicSubmodule(fac(8), 1, 3)));
}

TEST_CASE("stabilizer generators span the stabilizer modulo 2^k") {
    for (unsigned long m : {2UL, 4UL, 8UL, 16UL, 32UL}) {
        const auto F = fac(m);
        Int gl = Int(m) * m * m * m;
        gl = gl * 3 / 8;
        const Int expected = gl / count_cyclic_submodules(F);
        for (const auto& [u1, u2] : std::vector<std::pair<int, int>>{{1, 0}, {0, 1}, {1, 1}, {3, 2}}) {
            const CyclicSubmodule R(F, u1, u2);
            const auto gens = stabilizer_generators(m, u1, u2);
            std::set<std::array<Int, 4>> seen{MatModN::identity(m).entries()};
            std::vector<MatModN> frontier{MatModN::identity(m)};
            while (!frontier.empty()) {
                std::vector<MatModN> next;
                for (const auto& g : frontier) {
                    for (const auto& h : gens) {
                        const MatModN gh = g * h;
                        if (seen.insert(gh.entries()).second) next.push_back(gh);
                    }
                }
                frontier = std::move(next);
            }
            CHECK(Int(seen.size()) == expected);
            for (const auto& h : gens) CHECK(R.image(h) == R);
        }
    }
}

TEST_CASE("prime-power solver") {
    PlantedOracle nine(CyclicSubmodule(fac(9), 1, 2));
    CHECK(solve_prime_power(nine, {3, 2}) == CyclicSubmodule(fac(9), 1, 2));
    PlantedOracle two(CyclicSubmodule(fac(2), 0, 1));
    CHECK(solve_prime_power(two, {2, 1}) == CyclicSubmodule(fac(2), 0, 1));
    PlantedOracle eight(CyclicSubmodule(fac(8), 1, 5));
    CHECK(same_borel_subgroup(solve_prime_power(eight, {2, 3}), CyclicSubmodule(fac(8), 1, 5)));
    PlantedOracle eight3(CyclicSubmodule(fac(8), 1, 3));
    CHECK(same_borel_subgroup(solve_prime_power(eight3, {2, 3}), CyclicSubmodule(fac(8), 1, 3)));

    FunctionOracle junk(9, [](const MatModN& M) { return M.to_string(); });
    CHECK_THROWS_AS(solve_prime_power(junk, {3, 2}), InternalError);
}

TEST_CASE("CRT split") {
    PlantedOracle f(CyclicSubmodule(fac(12), 1, 7));
    const auto parts = crt_split(f, fac(12));
    REQUIRE(parts.size() == 2);
    std::set<Int> mods;
    for (const auto& p : parts) mods.insert(p.component.value());
    CHECK(mods == std::set<Int>{3, 4});
    for (const auto& p : parts) {
        const MatModN M(p.component.value(), 2, 1, 1, 1);
        const MatModN E = p.oracle->embed(M);
        CHECK(E.reduce(p.component.value()) == M);
        const Int rest = Int(12) / p.component.value();
        CHECK(E.reduce(rest) == MatModN::identity(rest));
    }
    PlantedOracle g(CyclicSubmodule(fac(9), 1, 4));
    CHECK(crt_split(g, fac(9)).size() == 1);
}

TEST_CASE("exhaustive recovery for N <= 30") {
    for (unsigned long n = 2; n <= 30; ++n) {
        const auto F = fac(n);
        const auto subs = all_submodules(n);
        CHECK(Int(subs.size()) == count_cyclic_submodules(F));
        for (const auto& S : subs) {
            PlantedOracle f(S);
            BorelStats st;
            const auto R = borel_solve(f, F, {}, &st);
            CHECK(same_borel_subgroup(R, S));
            if (n % 4 != 0) CHECK(R == S);
            CHECK(double(st.solve_calls) <= borel_call_budget(F));
        }
    }
    PlantedOracle f(CyclicSubmodule(fac(15), 2, 1));
    CHECK(borel_solve(f, fac(15)) == CyclicSubmodule(fac(15), 2, 1));
}

TEST_CASE("randomized recovery and coset promise") {
    Rng rng(99);
    for (unsigned long n : {360UL, 1048575UL, 1001UL, 2048UL, 43UL * 47UL * 3UL}) {
        const auto F = fac(n);
        for (int t = 0; t < 10; ++t) {
            Int x, y;
            do {
                x = rng.below(Int(n));
                y = rng.below(Int(n));
            } while (!is_primitive(F, x, y));
            const CyclicSubmodule S(F, x, y);
            PlantedOracle f(S);
            BorelStats st;
            BorelConfig cfg;
            cfg.seed = t;
            const auto R = borel_solve(f, F, cfg, &st);
            CHECK(same_borel_subgroup(R, S));
            if (n % 4 != 0) CHECK(R == S);
            CHECK(double(st.solve_calls) <= borel_call_budget(F));
            for (int i = 0; i < 5; ++i) {
                const MatModN X = random_invertible(Int(n), rng);
                const MatModN h = random_stabilizer_element(S, rng);
                CHECK(S.image(h) == S);
                CHECK(f(X) == f(X * h));
            }
        }
    }
    PlantedOracle big(CyclicSubmodule(fac(53), 1, 1));
    BorelConfig cfg;
    cfg.prime_bound = 50;
    CHECK_THROWS_AS(borel_solve(big, fac(53), cfg), MalformedInput);
}
