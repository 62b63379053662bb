#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "qlift/errors.hpp"
#include "qlift/rng.hpp"

namespace qlift {

using Int = mpz_class;

// ---------------------------------------------------------------------------
// Small helpers on arbitrary-precision integers.

/// Non-negative residue of a modulo m (m > 0).
Int mod(const Int& a, const Int& m);
/// Inverse of a modulo m; throws MalformedInput when gcd(a, m) != 1.
Int inv_mod(const Int& a, const Int& m);
Int pow_mod(const Int& base, const Int& exp, const Int& m);
Int gcd(const Int& a, const Int& b);
/// Floor of the square root of n >= 0.
Int isqrt(const Int& n);
bool is_square(const Int& n);
/// Largest e with p^e | n (n != 0).
unsigned valuation(const Int& n, const Int& p);
/// log2 of a positive integer as a double (accurate for huge values).
double log2_of(const Int& n);
std::string to_string(const Int& n);
Int parse_int(const std::string& s);

// ---------------------------------------------------------------------------

struct PrimePower {
    Int prime;
    unsigned exponent = 1;

    Int value() const;
    bool operator==(const PrimePower&) const = default;
};

/// A factored positive integer: primes strictly increasing, each prime passes
/// is_probable_prime, exponents positive.
class Factorization {
public:
    Factorization() = default;
    /// Validates the invariants; throws MalformedInput otherwise.
    explicit Factorization(std::vector<PrimePower> factors);

    /// Trial-division factorization for small inputs (CLI convenience and
    /// tests). Throws MalformedInput if a cofactor above `limit`^2 remains.
    static Factorization trial(const Int& n, unsigned long limit = 1000000);

    const std::vector<PrimePower>& factors() const { return factors_; }
    std::size_t omega() const { return factors_.size(); }
    Int value() const;
    bool is_prime() const { return factors_.size() == 1 && factors_[0].exponent == 1; }
    bool divisible_by(const Int& prime) const;
    /// Euler phi of value().
    Int totient() const;
    /// Factorization of gcd(value(), m) restricted to the primes of this one.
    Factorization restricted_to(const Int& m) const;

    bool operator==(const Factorization&) const = default;

private:
    std::vector<PrimePower> factors_;
};

// ---------------------------------------------------------------------------

struct Residue {
    Int value;
    Int modulus;
};

/// Combines pairwise-coprime congruences. Returns the value modulo the product
/// of the moduli. Throws MalformedInput for non-coprime moduli.
Residue crt_combine(std::span<const Residue> residues);

/// Square root of a prime residue via Tonelli-Shanks. nullopt if a is a
/// non-residue. Requires p odd prime.
std::optional<Int> sqrt_mod_prime(const Int& a, const Int& p);

/// Lifts a root r of x^2 = a (mod p) to modulo p^e. Requires gcd(2a, p) = 1.
Int hensel_lift_sqrt(const Int& a, const Int& r, const Int& p, unsigned e);

/// r with r^2 = a (mod m) for odd m given by its factorization, or nullopt
/// when a is a non-residue modulo some prime factor. Requires gcd(a, m) = 1.
std::optional<Int> mod_sqrt(const Int& a, const Factorization& m);

/// Jacobi symbol (a / n) for odd n > 0.
int jacobi(const Int& a, const Int& n);

/// Solves x^2 + q y^2 = M with x, y >= 0. nullopt is authoritative when M
/// is prime or small enough to search exhaustively.
std::optional<std::pair<Int, Int>> cornacchia(const Int& q, const Int& M);

/// BPSW (deterministic for n < 2^64) plus extra Miller-Rabin rounds;
/// error < 2^-80.
bool is_probable_prime(const Int& n);

// ---------------------------------------------------------------------------
// Powersmooth integers.

/// All primes up to `bound`, cached per process.
const std::vector<unsigned long>& primes_up_to(unsigned long bound);

struct PowersmoothCert {
    Int value;
    Int bound;
    Factorization factorization;

    /// True when the factorization multiplies out to value and every prime
    /// power is <= bound.
    bool verify() const;
};

/// Certificate for n if n is bound-powersmooth (found by trial division over
/// primes <= bound), else nullopt.
std::optional<PowersmoothCert> certify_powersmooth(const Int& n, const Int& bound);

/// Product of two certified values with disjoint primes.
PowersmoothCert multiply_certs(const PowersmoothCert& a, const PowersmoothCert& b);

struct PowersmoothRequest {
    Int bound;
    Int lower = 1;
    /// The result is coprime to each of these.
    std::vector<Int> coprime_to;
    /// Primes that must not divide the result (cheaper than coprime_to when
    /// the caller already knows the primes).
    std::vector<Int> excluded_primes;
    /// (odd prime l, s): the result must have Legendre symbol s modulo l.
    std::vector<std::pair<Int, int>> legendre_targets;
    /// Every exponent even (the result is a perfect square).
    bool square = false;
    unsigned retry_budget = 10000;
};

/// Random bound-powersmooth integer >= lower honouring the request. Throws
/// BudgetExhausted when the constraints cannot be met (bound too small).
PowersmoothCert sample_powersmooth(const PowersmoothRequest& req, Rng& rng);

/// Solves A x = b over GF(2); A is rows x cols of 0/1. nullopt if
/// inconsistent. Free variables are set to 0.
std::optional<std::vector<int>> solve_gf2(const std::vector<std::vector<int>>& A,
                                          const std::vector<int>& b);

// ---------------------------------------------------------------------------

/// Multiplicative order of g modulo m, given a factorization of a multiple of
/// it (usually the group order).
Int multiplicative_order(const Int& g, const Int& m, const Factorization& group_order);

/// Smallest e >= 0 with g^e = h (mod m), or nullopt when h is not in <g>.
/// `group_order` factors a multiple of ord(g); Pohlig-Hellman with
/// baby-step giant-step on each prime.
std::optional<Int> dlog_smooth(const Int& g, const Int& h, const Int& m,
                               const Factorization& group_order);

/// A generator of (Z/p^e)^* for odd prime p.
Int primitive_root_prime_power(const Int& p, unsigned e);

}  // namespace qlift
