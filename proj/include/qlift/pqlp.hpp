#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "qlift/ideal.hpp"

namespace qlift {

struct LiftConfig {
    /// powersmooth bound; 0 selects floor((log2 p)^4)
    Int B = 0;
    /// exponent in the RepresentInteger' floor M > p log2(p)^epsilon
    double epsilon = 9;
    /// omega(N) <= ceil(c ln ln p)
    double c = 2;
    /// attempts per randomized loop
    unsigned budget = 100000;
    std::uint64_t seed = 0;
    /// lowers the RepresentInteger' floor to p + 1 (tiny demo primes)
    bool relaxed = false;
    /// floor for StrongApproximation's F; 0 selects p(q+1)N^4
    Int f_floor = 0;
    /// primes that must not divide n(sigma)
    std::vector<Int> excluded_primes;
};

Int default_powersmooth_bound(const Int& p);
Int effective_bound(const QuatParams& P, const LiftConfig& cfg);

/// Throws MalformedInput unless N is odd, > 1, coprime to p and q, with
/// omega(N) <= ceil(c ln ln p).
void validate_lift_modulus(const QuatParams& P, const Factorization& N, const LiftConfig& cfg);

/// l^e-part square test for odd l: 0, or even valuation with a square unit part.
bool is_square_mod(const Int& a, const Factorization& N);

struct ConditionReport {
    std::array<bool, 5> ok{};
    /// 4q(4p^2 n(ABCD) - (n(AC) - p n(AD))^2)
    Int discriminant;
    bool all() const { return ok[0] && ok[1] && ok[2] && ok[3] && ok[4]; }
};

ConditionReport check_conditions(const QuatParams& P, const Factorization& N, const GaussElem& A, const GaussElem& B,
                                 const GaussElem& C, const GaussElem& D, const Int& bound);

struct RepIntResult {
    GaussElem C, D;
    PowersmoothCert cert;  // n(C + Dj)
    unsigned attempts = 0;
};

/// One pass of Steps 2-12 for fixed M and (z, t); nullopt when a gate fails.
std::optional<std::pair<GaussElem, GaussElem>> represent_integer_step(const QuatParams& P, const Factorization& N,
                                                                      const GaussElem& A, const GaussElem& B,
                                                                      const Int& M, const Int& z, const Int& t);

/// RepresentInteger'. n(C + Dj) is sqrt(B)-powersmooth so that its square stays B-powersmooth.
RepIntResult represent_integer_prime(const QuatParams& P, const Factorization& N, const GaussElem& A,
                                     const GaussElem& B, const LiftConfig& cfg, Rng& rng);

struct StrongApproxResult {
    QuatElem mu;
    Int lambda;
    PowersmoothCert cert;  // n(mu) = F
};

/// StrongApproximation_ps for mu0 = (t + s i) j given as ts = t + s i.
StrongApproxResult strong_approximation_ps(const QuatParams& P, const Factorization& N, const GaussElem& ts,
                                           const LiftConfig& cfg, Rng& rng);

/// (M1, M2, M3, M4) of the norm-product system for x, y.
std::array<Int, 4> norm_product_coefficients(const Int& q, const Int& N, const GaussElem& x, const GaussElem& y);

/// Exact solvability of t1t2 = M1, s1s2 = M2, s1t2 = M3, t1s2 = M4 mod l^e.
bool norm_product_solvable(const std::array<Int, 4>& M, const Int& l, unsigned e);

/// (x1, x2) with x1 conj(x2) = x and x1 x2 = y mod N R. Throws NoSolution when
/// n(x) != n(y) mod N or the system has no solution modulo some l^e.
std::pair<GaussElem, GaussElem> equiv_norm_conjugation_product(const Int& q, const Factorization& N,
                                                               const GaussElem& x, const GaussElem& y);

struct DecompositionTriple {
    GaussElem x1, x2, x3;
    Int t0;
    /// sigma0 = lambda' (x1 j) gamma (x2 j) gamma (x3 j) mod N O0
    Int lambda_prime;
};

DecompositionTriple quaternion_decomposition(const QuatParams& P, const Factorization& N, const GaussElem& A,
                                             const GaussElem& B, const GaussElem& C, const GaussElem& D);

/// Unit u with a = u b mod N O0, if one exists (O0 coordinates).
std::optional<Int> unit_ratio_mod(const QuatParams& P, const Factorization& N, const QuatElem& a, const QuatElem& b);

struct LiftTrace {
    /// the element of R + Rj that was decomposed (after D'D and any premultiplication)
    QuatElem sigma0_reduced;
    GaussElem C, D;
    DecompositionTriple triple;
    bool premultiplied = false;
    bool conjugated = false;
};

struct LiftResult {
    QuatElem sigma;
    Int lambda;
    PowersmoothCert cert;
    std::optional<LiftTrace> trace;
};

/// PQLP_O(N, sigma0). O must be a maximal order containing sigma0.
LiftResult pqlp_lift(const QuatParams& P, const Factorization& N, const QuatLattice& O, const QuatElem& sigma0,
                     const LiftConfig& cfg);

/// sigma - lambda sigma0 in N O, gcd(lambda, N) = 1, cert for n(sigma) with bound.
bool verify_lift(const QuatParams& P, const Factorization& N, const QuatLattice& O, const QuatElem& sigma0,
                 const LiftResult& r, const Int& bound);

/// The trace's decomposition recomposes to a single unit times sigma0_reduced.
bool verify_recomposition(const QuatParams& P, const Factorization& N, const LiftTrace& t);

/// Number of (x, y) in (Z/N)^2 with N1 x + N2 y = N3 mod N, by enumeration.
Int count_linear_solutions(const Int& N1, const Int& N2, const Int& N3, const Int& N);
/// Number of pairs (N1 x mod N, N2 y mod N) with sum N3, by enumeration.
Int count_linear_value_pairs(const Int& N1, const Int& N2, const Int& N3, const Int& N);

/// All solvable (x, y) in (R/N)^2 by enumerating (x1, x2); index u1 + N v1 + N^2 u2 + N^3 v2.
std::vector<bool> norm_product_image(const Int& q, unsigned long N);

}  // namespace qlift
