#include "qlift/arith.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <set>

namespace qlift {

// ---------------------------------------------------------------------------
// Rng

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t Rng::below(std::uint64_t n) {
    if (n == 0) throw MalformedInput("Rng::below(0)");
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % n);
    std::uint64_t x;
    do {
        x = engine_();
    } while (x >= limit);
    return x % n;
}

std::int64_t Rng::range(std::int64_t lo, std::int64_t hi) {
    if (hi < lo) throw MalformedInput("Rng::range with hi < lo");
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(engine_());
    return lo + static_cast<std::int64_t>(below(span));
}

Int Rng::below(const Int& n) {
    if (n <= 0) throw MalformedInput("Rng::below of non-positive bound");
    if (n.fits_ulong_p()) {
        return Int(static_cast<unsigned long>(below(static_cast<std::uint64_t>(n.get_ui()))));
    }
    const std::size_t bits = mpz_sizeinbase(n.get_mpz_t(), 2);
    const std::size_t words = (bits + 63) / 64;
    for (;;) {
        Int x = 0;
        for (std::size_t w = 0; w < words; ++w) {
            x <<= 64;
            const std::uint64_t r = engine_();
            Int part;
            mpz_import(part.get_mpz_t(), 1, 1, sizeof(r), 0, 0, &r);
            x += part;
        }
        const std::size_t extra = words * 64 - bits;
        x >>= static_cast<mp_bitcnt_t>(extra);
        if (x < n) return x;
    }
}

Int Rng::range(const Int& lo, const Int& hi) {
    if (hi < lo) throw MalformedInput("Rng::range with hi < lo");
    return lo + below(Int(hi - lo + 1));
}

Rng Rng::split(std::uint64_t tag) const {
    return Rng(splitmix64(seed_ ^ splitmix64(tag + 0x51ed27ULL)));
}

// ---------------------------------------------------------------------------
// helpers

Int mod(const Int& a, const Int& m) {
    Int r;
    mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

Int inv_mod(const Int& a, const Int& m) {
    if (m == 1) return 0;
    Int r;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0) {
        throw MalformedInput(to_string(a) + " is not invertible modulo " + to_string(m));
    }
    return r;
}

Int pow_mod(const Int& base, const Int& exp, const Int& m) {
    Int r;
    if (exp < 0) {
        const Int inv = inv_mod(base, m);
        const Int e = -exp;
        mpz_powm(r.get_mpz_t(), inv.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
    } else {
        mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), m.get_mpz_t());
    }
    return r;
}

Int gcd(const Int& a, const Int& b) {
    Int r;
    mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

Int isqrt(const Int& n) {
    if (n < 0) throw MalformedInput("isqrt of negative value");
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

bool is_square(const Int& n) { return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0; }

unsigned valuation(const Int& n, const Int& p) {
    if (n == 0) throw MalformedInput("valuation of zero");
    Int m = abs(n);
    unsigned v = 0;
    while (mpz_divisible_p(m.get_mpz_t(), p.get_mpz_t())) {
        m /= p;
        ++v;
    }
    return v;
}

double log2_of(const Int& n) {
    if (n <= 0) throw MalformedInput("log2 of non-positive value");
    long exp = 0;
    const double mant = mpz_get_d_2exp(&exp, n.get_mpz_t());
    return std::log2(mant) + static_cast<double>(exp);
}

std::string to_string(const Int& n) { return n.get_str(10); }

Int parse_int(const std::string& s) {
    Int r;
    if (s.empty() || r.set_str(s, 10) != 0) throw MalformedInput("not a decimal integer: '" + s + "'");
    return r;
}

// ---------------------------------------------------------------------------
// Factorization

Int PrimePower::value() const {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), prime.get_mpz_t(), exponent);
    return r;
}

Factorization::Factorization(std::vector<PrimePower> factors) : factors_(std::move(factors)) {
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        const auto& f = factors_[i];
        if (f.exponent == 0) throw MalformedInput("zero exponent in factorization");
        if (i > 0 && !(factors_[i - 1].prime < f.prime)) {
            throw MalformedInput("factorization primes must be strictly increasing");
        }
        if (!is_probable_prime(f.prime)) {
            throw MalformedInput(to_string(f.prime) + " is not prime");
        }
    }
}

Factorization Factorization::trial(const Int& n, unsigned long limit) {
    if (n < 1) throw MalformedInput("cannot factor non-positive value");
    std::vector<PrimePower> out;
    Int m = n;
    for (unsigned long p : primes_up_to(limit)) {
        if (m == 1) break;
        if (Int(p) * p > m) break;
        unsigned e = 0;
        while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
            mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
            ++e;
        }
        if (e > 0) out.push_back({Int(p), e});
    }
    if (m > 1) {
        if (!is_probable_prime(m)) {
            throw MalformedInput("trial factorization incomplete for " + to_string(n));
        }
        out.push_back({m, 1});
    }
    return Factorization(std::move(out));
}

Int Factorization::value() const {
    Int r = 1;
    for (const auto& f : factors_) r *= f.value();
    return r;
}

bool Factorization::divisible_by(const Int& prime) const {
    return std::any_of(factors_.begin(), factors_.end(),
                       [&](const PrimePower& f) { return f.prime == prime; });
}

Int Factorization::totient() const {
    Int r = 1;
    for (const auto& f : factors_) {
        PrimePower lower{f.prime, f.exponent - 1};
        r *= (f.prime - 1) * (f.exponent > 1 ? lower.value() : Int(1));
    }
    return r;
}

Factorization Factorization::restricted_to(const Int& m) const {
    std::vector<PrimePower> out;
    for (const auto& f : factors_) {
        if (m == 0) {
            out.push_back(f);
            continue;
        }
        if (!mpz_divisible_p(m.get_mpz_t(), f.prime.get_mpz_t())) continue;
        unsigned e = std::min(f.exponent, valuation(m, f.prime));
        out.push_back({f.prime, e});
    }
    return Factorization(std::move(out));
}

// ---------------------------------------------------------------------------
// CRT

Residue crt_combine(std::span<const Residue> residues) {
    Residue acc{0, 1};
    for (const auto& r : residues) {
        if (r.modulus < 1) throw MalformedInput("CRT modulus must be positive");
        if (gcd(acc.modulus, r.modulus) != 1) {
            throw MalformedInput("CRT moduli " + to_string(acc.modulus) + " and " +
                                 to_string(r.modulus) + " are not coprime");
        }
        // acc.value + acc.modulus * t = r.value (mod r.modulus)
        const Int t = mod((r.value - acc.value) * inv_mod(acc.modulus, r.modulus), r.modulus);
        acc.value = acc.value + acc.modulus * t;
        acc.modulus *= r.modulus;
        acc.value = mod(acc.value, acc.modulus);
    }
    return acc;
}

// ---------------------------------------------------------------------------
// square roots

std::optional<Int> sqrt_mod_prime(const Int& a_in, const Int& p) {
    const Int a = mod(a_in, p);
    if (p == 2) return a;
    if (a == 0) return Int(0);
    if (jacobi(a, p) != 1) return std::nullopt;

    // p - 1 = Q 2^S
    Int Q = p - 1;
    unsigned S = 0;
    while (mpz_even_p(Q.get_mpz_t())) {
        Q /= 2;
        ++S;
    }
    if (S == 1) return pow_mod(a, (p + 1) / 4, p);

    Int z = 2;
    while (jacobi(z, p) != -1) ++z;

    Int M = S;
    Int c = pow_mod(z, Q, p);
    Int t = pow_mod(a, Q, p);
    Int R = pow_mod(a, (Q + 1) / 2, p);
    while (t != 1) {
        // least i with t^(2^i) = 1
        unsigned i = 0;
        Int tt = t;
        while (tt != 1) {
            tt = mod(tt * tt, p);
            ++i;
        }
        Int b = c;
        for (unsigned k = 0; k + i + 1 < M.get_ui(); ++k) b = mod(b * b, p);
        M = i;
        c = mod(b * b, p);
        t = mod(t * c, p);
        R = mod(R * b, p);
    }
    return R;
}

Int hensel_lift_sqrt(const Int& a, const Int& r0, const Int& p, unsigned e) {
    Int r = r0;
    Int modulus = p;
    unsigned prec = 1;
    while (prec < e) {
        prec = std::min(2 * prec, e);
        PrimePower pp{p, prec};
        modulus = pp.value();
        // Newton step: r <- r - (r^2 - a) / (2r)
        const Int delta = mod((r * r - a) * inv_mod(2 * r, modulus), modulus);
        r = mod(r - delta, modulus);
    }
    return mod(r, modulus);
}

std::optional<Int> mod_sqrt(const Int& a, const Factorization& m) {
    std::vector<Residue> parts;
    for (const auto& f : m.factors()) {
        if (f.prime == 2) throw MalformedInput("mod_sqrt requires an odd modulus");
        const Int pe = f.value();
        if (mpz_divisible_p(a.get_mpz_t(), f.prime.get_mpz_t())) {
            throw MalformedInput("mod_sqrt requires gcd(a, m) = 1");
        }
        auto r = sqrt_mod_prime(a, f.prime);
        if (!r) return std::nullopt;
        parts.push_back({hensel_lift_sqrt(mod(a, pe), *r, f.prime, f.exponent), pe});
    }
    return crt_combine(parts).value;
}

int jacobi(const Int& a, const Int& n) {
    if (n <= 0 || mpz_even_p(n.get_mpz_t())) throw MalformedInput("jacobi requires odd positive n");
    const Int r = mod(a, n);
    return mpz_jacobi(r.get_mpz_t(), n.get_mpz_t());
}

// ---------------------------------------------------------------------------
// Cornacchia

namespace {

std::optional<std::pair<Int, Int>> cornacchia_small(const Int& q, const Int& M) {
    for (Int y = 0; q * y * y <= M; ++y) {
        const Int rest = M - q * y * y;
        if (is_square(rest)) return std::make_pair(isqrt(rest), y);
    }
    return std::nullopt;
}

}  // namespace

std::optional<std::pair<Int, Int>> cornacchia(const Int& q, const Int& M) {
    if (q < 1 || M < 1) throw MalformedInput("cornacchia requires positive q and M");
    if (M == 1) return std::make_pair(Int(1), Int(0));
    if (M < 1000000) return cornacchia_small(q, M);
    if (!is_probable_prime(M)) return std::nullopt;

    auto r0 = sqrt_mod_prime(-q, M);
    if (!r0) return std::nullopt;
    Int a = M;
    Int b = *r0;
    if (2 * b < M) b = M - b;
    const Int limit = isqrt(M);
    while (b > limit) {
        Int t = a % b;
        a = b;
        b = t;
    }
    const Int rest = M - b * b;
    if (rest % q != 0) return std::nullopt;
    const Int y2 = rest / q;
    if (!is_square(y2)) return std::nullopt;
    return std::make_pair(b, isqrt(y2));
}

bool is_probable_prime(const Int& n) {
    if (n < 2) return false;
    // GMP runs BPSW (deterministic below 2^64) followed by extra
    // Miller-Rabin rounds.
    return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
}

// ---------------------------------------------------------------------------
// powersmooth

const std::vector<unsigned long>& primes_up_to(unsigned long bound) {
    static std::mutex mu;
    static std::vector<unsigned long> primes;
    static unsigned long sieved = 0;
    static std::map<unsigned long, std::vector<unsigned long>> views;

    std::lock_guard<std::mutex> lock(mu);
    if (bound > sieved) {
        const unsigned long n = std::max(bound, 2 * sieved);
        std::vector<bool> composite(n + 1, false);
        primes.clear();
        for (unsigned long i = 2; i <= n; ++i) {
            if (composite[i]) continue;
            primes.push_back(i);
            for (unsigned long j = i * i; j <= n; j += i) composite[j] = true;
        }
        sieved = n;
        views.clear();
    }
    auto it = views.find(bound);
    if (it != views.end()) return it->second;
    auto end = std::upper_bound(primes.begin(), primes.end(), bound);
    return views.emplace(bound, std::vector<unsigned long>(primes.begin(), end)).first->second;
}

bool PowersmoothCert::verify() const {
    Int product = 1;
    for (const auto& f : factorization.factors()) {
        const Int pe = f.value();
        if (pe > bound) return false;
        product *= pe;
    }
    return product == value;
}

std::optional<PowersmoothCert> certify_powersmooth(const Int& n, const Int& bound) {
    if (n < 1) return std::nullopt;
    if (!bound.fits_ulong_p()) throw MalformedInput("powersmooth bound too large to sieve");
    Int m = n;
    std::vector<PrimePower> fs;
    for (unsigned long p : primes_up_to(bound.get_ui())) {
        if (m == 1) break;
        unsigned e = 0;
        while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
            mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
            ++e;
        }
        if (e > 0) {
            PrimePower pp{Int(p), e};
            if (pp.value() > bound) return std::nullopt;
            fs.push_back(pp);
        }
    }
    if (m != 1) return std::nullopt;
    return PowersmoothCert{n, bound, Factorization(std::move(fs))};
}

PowersmoothCert multiply_certs(const PowersmoothCert& a, const PowersmoothCert& b) {
    std::map<Int, unsigned> merged;
    for (const auto& f : a.factorization.factors()) merged[f.prime] += f.exponent;
    for (const auto& f : b.factorization.factors()) merged[f.prime] += f.exponent;
    std::vector<PrimePower> fs;
    for (auto& [p, e] : merged) fs.push_back({p, e});
    return PowersmoothCert{a.value * b.value, std::max(a.bound, b.bound), Factorization(std::move(fs))};
}

std::optional<std::vector<int>> solve_gf2(const std::vector<std::vector<int>>& A,
                                          const std::vector<int>& b) {
    const std::size_t rows = A.size();
    const std::size_t cols = rows ? A[0].size() : 0;
    std::vector<std::vector<int>> M(rows, std::vector<int>(cols + 1));
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) M[i][j] = A[i][j] & 1;
        M[i][cols] = b[i] & 1;
    }
    std::vector<int> pivot_col;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t piv = r;
        while (piv < rows && M[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(M[piv], M[r]);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i != r && M[i][c]) {
                for (std::size_t j = c; j <= cols; ++j) M[i][j] ^= M[r][j];
            }
        }
        pivot_col.push_back(static_cast<int>(c));
        ++r;
    }
    for (std::size_t i = r; i < rows; ++i) {
        if (M[i][cols]) return std::nullopt;
    }
    std::vector<int> x(cols, 0);
    for (std::size_t i = 0; i < r; ++i) x[pivot_col[i]] = M[i][cols];
    return x;
}

namespace {

struct Candidate {
    unsigned long prime;
    unsigned max_exp;
};

int legendre_of_prime_power(unsigned long prime, unsigned exp, const Int& ell) {
    const int s = jacobi(Int(prime), ell);
    return (exp % 2 == 0) ? (s == 0 ? 0 : 1) : s;
}

}  // namespace

PowersmoothCert sample_powersmooth(const PowersmoothRequest& req, Rng& rng) {
    if (req.bound < 2) throw BudgetExhausted("powersmooth bound below 2 admits no primes");
    if (!req.bound.fits_ulong_p()) throw MalformedInput("powersmooth bound too large to sieve");
    const unsigned long bound = req.bound.get_ui();

    std::set<Int> banned(req.excluded_primes.begin(), req.excluded_primes.end());
    for (const auto& [ell, s] : req.legendre_targets) {
        banned.insert(ell);
        if (req.square && s != 1) throw BudgetExhausted("a square cannot be a quadratic non-residue");
    }

    std::vector<Candidate> pool;
    for (unsigned long p : primes_up_to(bound)) {
        if (banned.count(Int(p))) continue;
        unsigned e = 0;
        unsigned long long pe = 1;
        while (pe <= bound / p) {
            pe *= p;
            ++e;
        }
        if (req.square) e -= e % 2;
        if (e == 0) continue;
        bool ok = true;
        for (const Int& c : req.coprime_to) {
            if (c != 0 && mpz_divisible_ui_p(c.get_mpz_t(), p)) {
                ok = false;
                break;
            }
        }
        if (ok) pool.push_back({p, e});
    }
    if (pool.empty()) throw BudgetExhausted("no admissible primes below the powersmooth bound");

    const std::size_t nt = req.legendre_targets.size();
    for (unsigned attempt = 0; attempt < req.retry_budget; ++attempt) {
        std::vector<std::size_t> order(pool.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        // partial Fisher-Yates, lazily extended
        std::size_t drawn = 0;
        auto draw = [&]() -> std::optional<std::size_t> {
            if (drawn == order.size()) return std::nullopt;
            const std::size_t j = drawn + rng.below(static_cast<std::uint64_t>(order.size() - drawn));
            std::swap(order[drawn], order[j]);
            return order[drawn++];
        };

        std::map<unsigned long, unsigned> chosen;
        Int value = 1;
        bool exhausted = false;
        do {
            auto idx = draw();
            if (!idx) {
                exhausted = true;
                break;
            }
            const auto& c = pool[*idx];
            unsigned e = 1 + static_cast<unsigned>(rng.below(c.max_exp));
            if (req.square) e = 2 * (1 + static_cast<unsigned>(rng.below(c.max_exp / 2)));
            chosen[c.prime] = e;
            Int pe;
            mpz_ui_pow_ui(pe.get_mpz_t(), c.prime, e);
            value *= pe;
        } while (value < req.lower);
        if (exhausted) {
            if (attempt == 0 && value < req.lower) {
                throw BudgetExhausted("product of all admissible prime powers is below the lower bound; "
                                      "increase the powersmooth bound");
            }
            continue;
        }

        if (nt > 0) {
            std::vector<int> rhs(nt);
            for (std::size_t j = 0; j < nt; ++j) {
                const auto& [ell, target] = req.legendre_targets[j];
                int s = 1;
                for (auto& [p, e] : chosen) s *= legendre_of_prime_power(p, e, ell);
                rhs[j] = (s == target) ? 0 : 1;
            }
            if (std::any_of(rhs.begin(), rhs.end(), [](int v) { return v != 0; })) {
                // correction primes with exponent one
                std::vector<unsigned long> extra;
                while (extra.size() < nt + 4) {
                    auto idx = draw();
                    if (!idx) break;
                    extra.push_back(pool[*idx].prime);
                }
                std::vector<std::vector<int>> A(nt, std::vector<int>(extra.size()));
                for (std::size_t j = 0; j < nt; ++j) {
                    for (std::size_t i = 0; i < extra.size(); ++i) {
                        A[j][i] = jacobi(Int(extra[i]), req.legendre_targets[j].first) == -1 ? 1 : 0;
                    }
                }
                auto x = solve_gf2(A, rhs);
                if (!x) continue;
                for (std::size_t i = 0; i < extra.size(); ++i) {
                    if ((*x)[i]) {
                        chosen[extra[i]] = 1;
                        value *= extra[i];
                    }
                }
            }
        }

        bool coprime = true;
        for (const Int& c : req.coprime_to) {
            if (c != 0 && gcd(value, c) != 1) coprime = false;
        }
        if (!coprime) continue;

        std::vector<PrimePower> fs;
        for (auto& [p, e] : chosen) fs.push_back({Int(p), e});
        PowersmoothCert cert{value, req.bound, Factorization(std::move(fs))};
        QLIFT_CHECK(cert.verify(), "sampled powersmooth certificate");
        return cert;
    }
    throw BudgetExhausted("sample_powersmooth: retry budget exhausted (bound " + to_string(req.bound) +
                          ", lower " + to_string(req.lower) + ")");
}

// ---------------------------------------------------------------------------
// discrete logs

Int multiplicative_order(const Int& g, const Int& m, const Factorization& group_order) {
    Int ord = group_order.value();
    if (pow_mod(g, ord, m) != 1) throw MalformedInput("group order does not annihilate g");
    for (const auto& f : group_order.factors()) {
        for (unsigned k = 0; k < f.exponent; ++k) {
            if (ord % f.prime != 0) break;
            if (pow_mod(g, ord / f.prime, m) == 1) {
                ord /= f.prime;
            } else {
                break;
            }
        }
    }
    return ord;
}

namespace {

// Solves gamma^x = target with gamma of prime order ell.
std::optional<Int> bsgs(const Int& gamma, const Int& target, const Int& ell, const Int& m) {
    const Int step = isqrt(ell) + 1;
    std::map<Int, Int> baby;
    Int cur = 1;
    for (Int j = 0; j < step; ++j) {
        baby.emplace(cur, j);
        cur = mod(cur * gamma, m);
    }
    const Int giant = pow_mod(gamma, -step, m);
    Int y = mod(target, m);
    for (Int i = 0; i <= step; ++i) {
        auto it = baby.find(y);
        if (it != baby.end()) {
            const Int x = i * step + it->second;
            if (x < ell) return x;
            return mod(x, ell);
        }
        y = mod(y * giant, m);
    }
    return std::nullopt;
}

}  // namespace

std::optional<Int> dlog_smooth(const Int& g, const Int& h, const Int& m,
                               const Factorization& group_order) {
    if (m < 2) throw MalformedInput("dlog modulus must be at least 2");
    const Int hh = mod(h, m);
    if (gcd(hh, m) != 1 || gcd(g, m) != 1) return std::nullopt;
    if (hh == 1) return Int(0);

    const Int ord = multiplicative_order(g, m, group_order);
    std::vector<Residue> parts;
    for (const auto& f : group_order.factors()) {
        if (ord % f.prime != 0) continue;
        const unsigned e = valuation(ord, f.prime);
        PrimePower pp{f.prime, e};
        const Int le = pp.value();
        const Int cof = ord / le;
        const Int gl = pow_mod(g, cof, m);
        const Int hl = pow_mod(hh, cof, m);
        PrimePower top{f.prime, e - 1};
        const Int gamma = pow_mod(gl, top.value(), m);
        Int x = 0;
        Int lk = 1;
        for (unsigned k = 0; k < e; ++k) {
            PrimePower shift{f.prime, e - 1 - k};
            const Int hk = pow_mod(mod(pow_mod(gl, -x, m) * hl, m), shift.value(), m);
            auto d = bsgs(gamma, hk, f.prime, m);
            if (!d) return std::nullopt;
            x += *d * lk;
            lk *= f.prime;
        }
        parts.push_back({x, le});
    }
    const Int e = crt_combine(parts).value;
    if (pow_mod(g, e, m) != hh) return std::nullopt;
    return e;
}

Int primitive_root_prime_power(const Int& p, unsigned e) {
    if (p == 2) throw MalformedInput("(Z/2^e)^* is not cyclic in general");
    const Factorization pm1 = Factorization::trial(p - 1);
    Int g = 2;
    for (;; ++g) {
        bool ok = true;
        for (const auto& f : pm1.factors()) {
            if (pow_mod(g, (p - 1) / f.prime, p) == 1) {
                ok = false;
                break;
            }
        }
        if (ok) break;
    }
    if (e > 1 && pow_mod(g, p - 1, p * p) == 1) g += p;
    return g;
}

}  // namespace qlift
