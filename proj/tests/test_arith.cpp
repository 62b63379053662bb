#include "doctest.h"

#include <map>

#include "qlift/arith.hpp"

using namespace qlift;

namespace {

Factorization fac(unsigned long n) { return Factorization::trial(Int(n)); }

}  // namespace

TEST_CASE("crt_combine") {
    std::vector<Residue> r{{2, 3}, {3, 5}};
    auto out = crt_combine(r);
    CHECK(out.modulus == 15);
    // exhaustive oracle over 0..14
    int found = -1;
    for (int x = 0; x < 15; ++x) {
        if (x % 3 == 2 && x % 5 == 3) found = x;
    }
    CHECK(out.value == found);
    CHECK(out.value == 8);

    std::vector<Residue> one{{0, 7}};
    CHECK(crt_combine(one).value == 0);
    CHECK(crt_combine(one).modulus == 7);

    std::vector<Residue> common{{1, 4}, {1, 9}};
    CHECK(crt_combine(common).value == 1);
    CHECK(crt_combine(common).modulus == 36);

    std::vector<Residue> bad{{1, 6}, {1, 9}};
    CHECK_THROWS_AS(crt_combine(bad), MalformedInput);
}

TEST_CASE("mod_sqrt examples") {
    auto r = mod_sqrt(2, fac(7));
    REQUIRE(r);
    CHECK((*r == 3 || *r == 4));

    auto r9 = mod_sqrt(1, fac(9));
    REQUIRE(r9);
    CHECK(mod(*r9 * *r9, 9) == 1);

    CHECK_FALSE(mod_sqrt(2, fac(15)).has_value());
}

TEST_CASE("mod_sqrt agrees with brute force for odd m < 2000") {
    for (unsigned long m = 3; m < 2000; m += 2) {
        const auto f = fac(m);
        std::vector<bool> is_sq(m, false);
        for (unsigned long x = 0; x < m; ++x) is_sq[(x * x) % m] = true;
        for (unsigned long a = 1; a < m; a += 1 + m / 37) {
            if (gcd(Int(a), Int(m)) != 1) continue;
            auto r = mod_sqrt(Int(a), f);
            CHECK(r.has_value() == static_cast<bool>(is_sq[a]));
            if (r) CHECK(mod(*r * *r, Int(m)) == a);
        }
    }
}

TEST_CASE("hensel lifting to high prime powers") {
    for (unsigned long p : {3ul, 5ul, 7ul, 101ul}) {
        for (unsigned e = 1; e <= 12; ++e) {
            const Int pe = PrimePower{Int(p), e}.value();
            const Int a = 4 + p;  // a square modulo p
            auto r0 = sqrt_mod_prime(a, Int(p));
            REQUIRE(r0);
            const Int r = hensel_lift_sqrt(a, *r0, Int(p), e);
            CHECK(mod(r * r - a, pe) == 0);
        }
    }
}

TEST_CASE("jacobi") {
    CHECK(jacobi(2, 15) == 1);
    CHECK(jacobi(0, 9) == 0);
    CHECK(jacobi(4, 7) == 1);
    // Euler's criterion oracle for primes
    for (unsigned long p : {3ul, 5ul, 7ul, 11ul, 13ul, 101ul, 103ul}) {
        for (unsigned long a = 0; a < p; ++a) {
            Int e = pow_mod(Int(a), Int((p - 1) / 2), Int(p));
            int expected = (a == 0) ? 0 : (e == 1 ? 1 : -1);
            CHECK(jacobi(Int(a), Int(p)) == expected);
        }
    }
}

TEST_CASE("cornacchia") {
    auto r = cornacchia(1, 13);
    REQUIRE(r);
    CHECK(r->first * r->first + r->second * r->second == 13);
    CHECK(std::min(r->first, r->second) == 2);
    CHECK(std::max(r->first, r->second) == 3);

    auto one = cornacchia(1, 1);
    REQUIRE(one);
    CHECK(one->first == 1);
    CHECK(one->second == 0);

    CHECK_FALSE(cornacchia(1, 107).has_value());
}

TEST_CASE("cornacchia on large primes matches the form") {
    Rng rng(5);
    int hits = 0;
    for (int trial = 0; trial < 400; ++trial) {
        Int M = rng.range(Int(1) << 40, Int(1) << 41);
        mpz_nextprime(M.get_mpz_t(), M.get_mpz_t());
        for (unsigned long q : {1ul, 3ul, 7ul, 11ul}) {
            auto r = cornacchia(Int(q), M);
            if (r) {
                ++hits;
                CHECK(r->first * r->first + Int(q) * r->second * r->second == M);
            } else if (q == 1) {
                CHECK(mod(M, 4) == 3);
            }
        }
    }
    CHECK(hits > 0);
}

TEST_CASE("cornacchia small values against brute force") {
    for (unsigned long q : {1ul, 3ul, 7ul}) {
        for (unsigned long M = 1; M < 3000; ++M) {
            if (!is_probable_prime(Int(M)) && M != 1) continue;
            bool exists = false;
            for (unsigned long y = 0; q * y * y <= M && !exists; ++y) {
                exists = is_square(Int(M - q * y * y));
            }
            auto r = cornacchia(Int(q), Int(M));
            CHECK(r.has_value() == exists);
        }
    }
}

TEST_CASE("is_probable_prime") {
    CHECK(is_probable_prime(317));
    CHECK_FALSE(is_probable_prime(4));
    CHECK(is_probable_prime(1000003));
    // trial division oracle
    for (unsigned long n = 2; n < 5000; ++n) {
        bool prime = true;
        for (unsigned long d = 2; d * d <= n; ++d) {
            if (n % d == 0) prime = false;
        }
        CHECK(is_probable_prime(Int(n)) == prime);
    }
    // Carmichael numbers and a strong pseudoprime to several bases
    for (unsigned long c : {561ul, 1105ul, 1729ul, 3215031751ul}) CHECK_FALSE(is_probable_prime(Int(c)));
}

TEST_CASE("primes_up_to") {
    const auto& ps = primes_up_to(30);
    CHECK(ps == std::vector<unsigned long>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29});
    CHECK(primes_up_to(100000).size() == 9592);
    CHECK(primes_up_to(30).size() == 10);
}

TEST_CASE("sample_powersmooth examples") {
    Rng rng(1);
    PowersmoothRequest req;
    req.bound = 16;
    req.lower = 100;
    req.coprime_to = {11};
    auto cert = sample_powersmooth(req, rng);
    CHECK(cert.verify());
    CHECK(cert.value >= 100);
    CHECK(gcd(cert.value, 11) == 1);
    for (const auto& f : cert.factorization.factors()) CHECK(f.value() <= 16);
    // 420 = 2^2 3 5 7 is one admissible output; it must pass the same checks
    auto c420 = certify_powersmooth(420, 16);
    REQUIRE(c420);
    CHECK(c420->verify());

    PowersmoothRequest two;
    two.bound = 2;
    auto c2 = sample_powersmooth(two, rng);
    CHECK(c2.value == 2);

    PowersmoothRequest none;
    none.bound = 16;
    none.lower = 100;
    none.coprime_to = {Int(2 * 3 * 5 * 7 * 11 * 13)};
    CHECK_THROWS_AS(sample_powersmooth(none, rng), BudgetExhausted);
}

TEST_CASE("sample_powersmooth honours constraints") {
    Rng rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        PowersmoothRequest req;
        req.bound = 5000;
        req.lower = Int(1) << 60;
        req.coprime_to = {Int(3 * 5 * 11)};
        req.excluded_primes = {7};
        req.legendre_targets = {{Int(11), trial % 2 ? 1 : -1}, {Int(13), -1}};
        auto cert = sample_powersmooth(req, rng);
        CHECK(cert.verify());
        CHECK(cert.value >= req.lower);
        CHECK(gcd(cert.value, 3 * 5 * 7 * 11) == 1);
        CHECK(jacobi(cert.value, 11) == (trial % 2 ? 1 : -1));
        CHECK(jacobi(cert.value, 13) == -1);
        auto indep = certify_powersmooth(cert.value, req.bound);
        REQUIRE(indep);
        CHECK(indep->factorization == cert.factorization);
    }
    PowersmoothRequest sq;
    sq.bound = 1000;
    sq.lower = 1000000;
    sq.square = true;
    auto c = sample_powersmooth(sq, rng);
    CHECK(is_square(c.value));
    CHECK(c.verify());
}

TEST_CASE("sample_powersmooth is deterministic") {
    PowersmoothRequest req;
    req.bound = 10000;
    req.lower = Int(1) << 80;
    Rng a(42), b(42);
    CHECK(sample_powersmooth(req, a).value == sample_powersmooth(req, b).value);
}

TEST_CASE("solve_gf2") {
    std::vector<std::vector<int>> A{{1, 1, 0}, {0, 1, 1}};
    auto x = solve_gf2(A, {1, 0});
    REQUIRE(x);
    CHECK(((*x)[0] ^ (*x)[1]) == 1);
    CHECK(((*x)[1] ^ (*x)[2]) == 0);
    std::vector<std::vector<int>> S{{1, 1}, {1, 1}};
    CHECK_FALSE(solve_gf2(S, {1, 0}).has_value());
}

TEST_CASE("dlog_smooth examples") {
    CHECK(*dlog_smooth(2, 8, 13, fac(12)) == 3);
    CHECK(*dlog_smooth(2, 5, 13, fac(12)) == 9);
    CHECK(*dlog_smooth(7, 1, 13, fac(12)) == 0);
    // 3 is not a power of 4 modulo 13 (4 generates the squares)
    CHECK_FALSE(dlog_smooth(4, 2, 13, fac(12)).has_value());
}

TEST_CASE("dlog_smooth inverts exponentiation for m < 10^4") {
    Rng rng(7);
    for (int trial = 0; trial < 300; ++trial) {
        const unsigned long m = 3 + rng.below(9997);
        // group order of (Z/m)^*
        const Factorization fm = fac(m);
        const Factorization phi = fac(fm.totient().get_ui());
        unsigned long g = 1 + rng.below(m - 1);
        if (gcd(Int(g), Int(m)) != 1) continue;
        std::map<unsigned long, unsigned long> first;
        unsigned long cur = 1;
        for (unsigned long e = 0; e < m; ++e) {
            if (first.count(cur)) break;
            first[cur] = e;
            cur = cur * g % m;
        }
        for (unsigned long h = 1; h < m; h += 1 + m / 50) {
            if (gcd(Int(h), Int(m)) != 1) continue;
            auto e = dlog_smooth(Int(g), Int(h), Int(m), phi);
            auto it = first.find(h);
            CHECK(e.has_value() == (it != first.end()));
            if (e && it != first.end()) {
                CHECK(pow_mod(Int(g), *e, Int(m)) == h);
                CHECK(*e == it->second);
            }
        }
    }
}

TEST_CASE("primitive roots") {
    for (unsigned long p : {3ul, 5ul, 7ul, 11ul, 13ul, 29ul}) {
        for (unsigned e = 1; e <= 3; ++e) {
            const Int pe = PrimePower{Int(p), e}.value();
            const Int g = primitive_root_prime_power(Int(p), e);
            const Factorization phi = fac(PrimePower{Int(p), e}.value().get_ui() / p * (p - 1));
            CHECK(multiplicative_order(g, pe, phi) == phi.value());
        }
    }
}

TEST_CASE("factorization validation") {
    CHECK_THROWS_AS(Factorization({{Int(4), 1}}), MalformedInput);
    CHECK_THROWS_AS(Factorization({{Int(5), 1}, {Int(3), 1}}), MalformedInput);
    auto f = fac(360);
    CHECK(f.value() == 360);
    CHECK(f.omega() == 3);
    CHECK(f.totient() == 96);
}
