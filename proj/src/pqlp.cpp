#include "qlift/pqlp.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace qlift {

namespace {

Int centered(const Int& a, const Int& m) {
    Int r = mod(a, m);
    if (2 * r > m) r -= m;
    return r;
}

bool coprime(const Int& a, const Int& N) { return gcd(a, N) == 1; }

GaussElem gauss_half(const QuatElem& x, bool second) {
    const auto& n = x.num();
    return second ? GaussElem{n[2], n[3]} : GaussElem{n[0], n[1]};
}

/// Splits an element of R + Rj into (A, B).
std::pair<GaussElem, GaussElem> split_rrj(const QuatElem& x) {
    QLIFT_CHECK(x.is_integral_coords(), "element outside R + Rj");
    return {gauss_half(x, false), gauss_half(x, true)};
}

/// x reduced coordinatewise mod N in the (1, i, j, k) frame.
QuatElem reduce_rrj(const QuatParams& P, const QuatElem& x, const Int& N) {
    const auto [A, B] = split_rrj(x);
    return P.from_gauss(gmod(A, N), gmod(B, N));
}

bool gauss_zero_mod(const GaussElem& x, const Int& l) { return mod(x.re, l) == 0 && mod(x.im, l) == 0; }

Int lower_for_repint(const QuatParams& P, const LiftConfig& cfg) {
    if (cfg.relaxed) return P.p + 1;
    const double f = std::pow(log2_of(P.p), cfg.epsilon);
    Int l(std::ceil(f));
    return P.p * l + 1;
}

Int f_floor_for(const QuatParams& P, const Factorization& N, const LiftConfig& cfg) {
    if (cfg.f_floor > 0) return cfg.f_floor;
    const Int n = N.value();
    return P.p * (P.q + 1) * n * n * n * n + 1;
}

void add_primes(std::vector<Int>& out, const Factorization& f) {
    for (const auto& pp : f.factors()) out.push_back(pp.prime);
}

PowersmoothCert merge_certs(const std::vector<std::pair<const PowersmoothCert*, unsigned>>& parts,
                            const Int& bound) {
    std::map<Int, unsigned> exps;
    Int value = 1;
    for (const auto& [c, mult] : parts) {
        for (const auto& pp : c->factorization.factors()) exps[pp.prime] += pp.exponent * mult;
        Int v;
        mpz_pow_ui(v.get_mpz_t(), c->value.get_mpz_t(), mult);
        value *= v;
    }
    std::vector<PrimePower> fs;
    for (const auto& [pr, e] : exps) fs.push_back({pr, e});
    PowersmoothCert out{value, bound, Factorization(fs)};
    QLIFT_CHECK(out.verify(), "merged certificate does not verify");
    return out;
}

PowersmoothCert trivial_cert(const Int& bound) { return PowersmoothCert{1, bound, Factorization()}; }

/// Roots of c1 + c2 t + c3 t^2 modulo l^e, smallest first.
std::vector<Int> quadratic_roots(const Int& c1, const Int& c2, const Int& c3, const Int& l, unsigned e) {
    Int m;
    mpz_pow_ui(m.get_mpz_t(), l.get_mpz_t(), e);
    auto eval = [&](const Int& t) { return mod(c1 + c2 * t + c3 * t * t, m); };
    std::vector<Int> roots;
    if (mod(c3, l) != 0) {
        const Int disc = mod(c2 * c2 - 4 * c1 * c3, m);
        Int r;
        if (disc == 0) {
            r = 0;
        } else {
            const unsigned v = valuation(disc, l);
            if (v % 2 == 1) return {};
            Int lv;
            mpz_pow_ui(lv.get_mpz_t(), l.get_mpz_t(), v);
            const Int u = disc / lv;
            const auto s = mod_sqrt(mod(u, m), Factorization({PrimePower{l, e}}));
            if (!s) return {};
            Int half;
            mpz_pow_ui(half.get_mpz_t(), l.get_mpz_t(), v / 2);
            r = mod(half * *s, m);
        }
        const Int inv2c3 = inv_mod(2 * c3, m);
        for (const Int& rr : {r, mod(-r, m)}) {
            const Int t = mod((rr - c2) * inv2c3, m);
            if (eval(t) == 0) roots.push_back(t);
        }
    } else if (mod(c2, l) != 0) {
        // simple root: linear solution mod l, then Newton
        Int t = mod(-c1 * inv_mod(c2, l), l);
        for (unsigned k = 1; k < e + 1; ++k) {
            const Int d = mod(c2 + 2 * c3 * t, m);
            t = mod(t - eval(t) * inv_mod(d, m), m);
        }
        if (eval(t) == 0) roots.push_back(t);
    }
    if (roots.empty() && m <= 1000000) {
        for (Int t = 0; t < m; ++t) {
            if (eval(t) == 0) roots.push_back(t);
        }
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    return roots;
}

}  // namespace

Int default_powersmooth_bound(const Int& p) {
    const double l = log2_of(p);
    Int b(std::floor(l * l * l * l));
    return b < 16 ? Int(16) : b;
}

Int effective_bound(const QuatParams& P, const LiftConfig& cfg) {
    return cfg.B > 0 ? cfg.B : default_powersmooth_bound(P.p);
}

void validate_lift_modulus(const QuatParams& P, const Factorization& N, const LiftConfig& cfg) {
    const Int n = N.value();
    if (n <= 1) throw MalformedInput("N must exceed 1");
    if (n % 2 == 0) throw MalformedInput("N must be odd");
    if (!coprime(n, P.p)) throw MalformedInput("N must be coprime to p");
    if (!coprime(n, P.q)) throw MalformedInput("N must be coprime to q");
    const double lim = std::ceil(cfg.c * std::log(std::log(P.p.get_d())));
    if (static_cast<double>(N.omega()) > lim) {
        throw MalformedInput("N has too many distinct prime factors (limit " + std::to_string(static_cast<int>(lim)) +
                             ")");
    }
    if (cfg.B != 0 && cfg.B < 16) throw MalformedInput("powersmooth bound must be at least 16");
    if (!(cfg.epsilon > 8)) throw MalformedInput("epsilon must exceed 8");
}

bool is_square_mod(const Int& a, const Factorization& N) {
    for (const auto& f : N.factors()) {
        const Int m = f.value();
        const Int r = mod(a, m);
        if (r == 0) continue;
        const unsigned v = valuation(r, f.prime);
        if (v % 2 == 1) return false;
        Int lv;
        mpz_pow_ui(lv.get_mpz_t(), f.prime.get_mpz_t(), v);
        if (f.prime == 2) {
            // unit part square mod 2^(e-v)
            const unsigned rest = f.exponent - v;
            const Int u = r / lv;
            if (rest >= 3 && mod(u, Int(8)) != 1) return false;
            if (rest == 2 && mod(u, Int(4)) != 1) return false;
            continue;
        }
        if (jacobi(r / lv, f.prime) != 1) return false;
    }
    return true;
}

ConditionReport check_conditions(const QuatParams& P, const Factorization& N, const GaussElem& A, const GaussElem& B,
                                 const GaussElem& C, const GaussElem& D, const Int& bound) {
    const Int n = N.value();
    const Int& p = P.p;
    const Int& q = P.q;
    ConditionReport r;
    const Int ng = gnorm(C, q) + p * gnorm(D, q);
    r.ok[0] = coprime(ng, n) && certify_powersmooth(ng, bound).has_value();
    r.ok[1] = coprime(gnorm(C, q), n);
    r.ok[2] = coprime(gnorm(D, q), n);
    const GaussElem W = gmul(gmul(A, gconj(B), q), gmul(C, gconj(D), q), q);
    r.ok[3] = coprime(W.im, n);
    const Int nAC = gnorm(A, q) * gnorm(C, q);
    const Int nAD = gnorm(A, q) * gnorm(D, q);
    const Int nABCD = gnorm(A, q) * gnorm(B, q) * gnorm(C, q) * gnorm(D, q);
    const Int inner = nAC - p * nAD;
    r.discriminant = 4 * q * (4 * p * p * nABCD - inner * inner);
    r.ok[4] = is_square_mod(r.discriminant, N);
    return r;
}

std::optional<std::pair<GaussElem, GaussElem>> represent_integer_step(const QuatParams& P, const Factorization& N,
                                                                      const GaussElem& A, const GaussElem& B,
                                                                      const Int& M, const Int& z, const Int& t) {
    const Int n = N.value();
    const Int& q = P.q;
    const Int nd = z * z + q * t * t;
    const Int Mp = M - P.p * nd;
    if (!coprime(nd, n) || Mp < 2 || !coprime(Mp, n) || !is_probable_prime(Mp)) return std::nullopt;
    const auto xy = cornacchia(q, Mp);
    if (!xy) return std::nullopt;
    std::vector<GaussElem> cands{{xy->first, xy->second}};
    // for q = 1 the swapped pair is an equally valid Cornacchia output
    if (q == 1 && xy->first != xy->second) cands.push_back({xy->second, xy->first});
    const GaussElem D{z, t};
    for (const GaussElem& C : cands) {
        const GaussElem W = gmul(gmul(A, gconj(B), q), gmul(C, gconj(D), q), q);
        if (!coprime(W.im, n)) continue;
        // condition (v) through the full report; (i) is the caller's business (bound)
        const auto rep = check_conditions(P, N, A, B, C, D, Int(0));
        if (!rep.ok[4]) continue;
        return std::make_pair(C, D);
    }
    return std::nullopt;
}

RepIntResult represent_integer_prime(const QuatParams& P, const Factorization& N, const GaussElem& A,
                                     const GaussElem& B, const LiftConfig& cfg, Rng& rng) {
    const Int n = N.value();
    if (!coprime(gnorm(A, P.q) + P.p * gnorm(B, P.q), n)) throw MalformedInput("n(A + Bj) must be coprime to N");
    if (n % 2 == 0) throw MalformedInput("N must be odd");
    if (!coprime(P.q, n)) throw MalformedInput("q must be coprime to N");
    const Int bound = effective_bound(P, cfg);
    const Int sb = std::max(isqrt(bound), Int(2));

    PowersmoothRequest req;
    req.bound = sb;
    req.lower = lower_for_repint(P, cfg);
    req.coprime_to = {n};
    req.excluded_primes = cfg.excluded_primes;

    unsigned attempts = 0;
    while (attempts < cfg.budget) {
        const PowersmoothCert Mc = sample_powersmooth(req, rng);
        const Int m = isqrt(Mc.value / (P.p * (P.q + 1)));
        const Int span2 = (2 * m + 1) * (2 * m + 1);
        const unsigned per_m = span2 < 2000 ? static_cast<unsigned>(span2.get_ui()) : 2000u;
        for (unsigned k = 0; k < per_m && attempts < cfg.budget; ++k, ++attempts) {
            const Int z = rng.range(-m, m), t = rng.range(-m, m);
            auto cd = represent_integer_step(P, N, A, B, Mc.value, z, t);
            if (!cd) continue;
            const Int ng = gnorm(cd->first, P.q) + P.p * gnorm(cd->second, P.q);
            QLIFT_CHECK(ng == Mc.value, "n(C + Dj) differs from M");
            return RepIntResult{cd->first, cd->second, Mc, attempts + 1};
        }
    }
    throw BudgetExhausted("RepresentInteger': retry budget exhausted; increase B or epsilon");
}

StrongApproxResult strong_approximation_ps(const QuatParams& P, const Factorization& N, const GaussElem& ts,
                                           const LiftConfig& cfg, Rng& rng) {
    const Int n = N.value();
    const Int& p = P.p;
    const Int& q = P.q;
    if (n % 2 == 0) throw MalformedInput("N must be odd");
    const Int& t = ts.re;
    const Int& s = ts.im;
    const Int n0 = p * (t * t + q * s * s);
    if (!coprime(n0, n)) throw MalformedInput("n(mu0) must be coprime to N");
    const Int bound = effective_bound(P, cfg);
    const Int n2 = n * n;

    PowersmoothRequest req;
    req.bound = bound;
    req.lower = f_floor_for(P, N, cfg);
    req.coprime_to = {n};
    req.excluded_primes = cfg.excluded_primes;
    for (const auto& f : N.factors()) req.legendre_targets.push_back({f.prime, jacobi(n0, f.prime)});

    const Int per_f = std::min(Int(4096), Int(4 * n));
    unsigned attempts = 0;
    while (attempts < cfg.budget) {
        const PowersmoothCert Fc = sample_powersmooth(req, rng);
        const Int& F = Fc.value;
        const auto lam = mod_sqrt(mod(F * inv_mod(n0, n), n), N);
        QLIFT_CHECK(lam.has_value(), "F / n(mu0) is not a square mod N");
        const Int lambda = *lam;
        const Int diff = F - lambda * lambda * n0;
        QLIFT_CHECK(mod(diff, n) == 0, "F - lambda^2 n(mu0) not divisible by N");
        const Int rhs = diff / n;
        for (Int k = 0; k < per_f && attempts < cfg.budget; ++k, ++attempts) {
            std::vector<Residue> cs, ds;
            for (const auto& f : N.factors()) {
                const Int m = f.value();
                const Int a1 = mod(2 * lambda * p * t, m), a2 = mod(2 * lambda * p * q * s, m), r = mod(rhs, m);
                Int c, d;
                if (mod(a1, f.prime) != 0) {
                    d = rng.below(m);
                    c = mod((r - a2 * d) * inv_mod(a1, m), m);
                } else {
                    QLIFT_CHECK(mod(a2, f.prime) != 0, "degenerate line in strong approximation");
                    c = rng.below(m);
                    d = mod((r - a1 * c) * inv_mod(a2, m), m);
                }
                cs.push_back({c, m});
                ds.push_back({d, m});
            }
            const Int c = crt_combine(cs).value, d = crt_combine(ds).value;
            const Int w1 = centered(lambda * t + c * n, n2);
            const Int w2 = centered(lambda * s + d * n, n2);
            const Int num = F - p * (w1 * w1 + q * w2 * w2);
            QLIFT_CHECK(mod(num, n2) == 0, "strong approximation line condition violated");
            const Int M = num / n2;
            if (M < 2 || !is_probable_prime(M)) continue;
            const auto ab = cornacchia(q, M);
            if (!ab) continue;
            const QuatElem mu = P.from_gauss({n * ab->first, n * ab->second}, {w1, w2});
            QLIFT_CHECK(mu.norm() == Rat(F), "n(mu) != F");
            return StrongApproxResult{mu, lambda, Fc};
        }
    }
    throw BudgetExhausted("StrongApproximation: retry budget exhausted; increase B");
}

std::array<Int, 4> norm_product_coefficients(const Int& q, const Int& N, const GaussElem& x, const GaussElem& y) {
    const Int zeta = inv_mod(2, N);
    const Int qp = inv_mod(q, N);
    return {mod(zeta * (x.re + y.re), N), mod(zeta * qp * (x.re - y.re), N), mod(zeta * (x.im + y.im), N),
            mod(zeta * (y.im - x.im), N)};
}

namespace {

/// Solution (t1, s1, t2, s2) modulo l^e, or nullopt.
std::optional<std::array<Int, 4>> solve_norm_product_pp(const std::array<Int, 4>& Min, const Int& l, unsigned e) {
    Int m;
    mpz_pow_ui(m.get_mpz_t(), l.get_mpz_t(), e);
    std::array<Int, 4> M;
    for (int i = 0; i < 4; ++i) M[i] = mod(Min[i], m);
    if (std::all_of(M.begin(), M.end(), [](const Int& v) { return v == 0; })) return std::array<Int, 4>{0, 0, 0, 0};
    unsigned v = e;
    for (const auto& x : M) {
        if (x != 0) v = std::min(v, valuation(x, l));
    }
    Int lv;
    mpz_pow_ui(lv.get_mpz_t(), l.get_mpz_t(), v);
    const Int mr = m / lv;
    std::array<Int, 4> R;
    for (int i = 0; i < 4; ++i) R[i] = mod(M[i] / lv, mr);
    // R = (M1, M2, M3, M4): t1t2, s1s2, s1t2, t1s2
    std::array<Int, 4> sol;  // t1, s1, t2, s2
    auto unit = [&](const Int& a) { return mod(a, l) != 0; };
    if (unit(R[0])) {
        sol = {1, mod(R[2] * inv_mod(R[0], mr), mr), R[0], R[3]};
    } else if (unit(R[1])) {
        sol = {mod(R[3] * inv_mod(R[1], mr), mr), 1, R[2], R[1]};
    } else if (unit(R[2])) {
        sol = {mod(R[0] * inv_mod(R[2], mr), mr), 1, R[2], R[1]};
    } else {
        sol = {1, mod(R[1] * inv_mod(R[3], mr), mr), R[0], R[3]};
    }
    auto holds = [&](const std::array<Int, 4>& x, const std::array<Int, 4>& target, const Int& mm) {
        return mod(x[0] * x[2] - target[0], mm) == 0 && mod(x[1] * x[3] - target[1], mm) == 0 &&
               mod(x[1] * x[2] - target[2], mm) == 0 && mod(x[0] * x[3] - target[3], mm) == 0;
    };
    if (!holds(sol, R, mr)) return std::nullopt;
    std::array<Int, 4> out{mod(sol[0] * lv, m), mod(sol[1] * lv, m), mod(sol[2], m), mod(sol[3], m)};
    QLIFT_CHECK(holds(out, M, m), "lifted norm-product solution fails");
    return out;
}

}  // namespace

bool norm_product_solvable(const std::array<Int, 4>& M, const Int& l, unsigned e) {
    return solve_norm_product_pp(M, l, e).has_value();
}

std::pair<GaussElem, GaussElem> equiv_norm_conjugation_product(const Int& q, const Factorization& N,
                                                               const GaussElem& x, const GaussElem& y) {
    const Int n = N.value();
    if (n % 2 == 0) throw MalformedInput("N must be odd");
    if (!coprime(q, n)) throw MalformedInput("q must be coprime to N");
    if (mod(gnorm(x, q) - gnorm(y, q), n) != 0) throw NoSolution("norm precondition violated: n(x) != n(y) mod N");
    const auto M = norm_product_coefficients(q, n, x, y);
    std::array<std::vector<Residue>, 4> parts;
    for (const auto& f : N.factors()) {
        const auto sol = solve_norm_product_pp(M, f.prime, f.exponent);
        if (!sol) throw NoSolution("norm-product system has no solution modulo " + to_string(f.value()));
        for (int i = 0; i < 4; ++i) parts[i].push_back({(*sol)[i], f.value()});
    }
    const GaussElem x1{crt_combine(parts[0]).value, crt_combine(parts[1]).value};
    const GaussElem x2{crt_combine(parts[2]).value, crt_combine(parts[3]).value};
    QLIFT_CHECK(gmod(gsub(gmul(x1, gconj(x2), q), x), n) == GaussElem{}, "x1 conj(x2) != x");
    QLIFT_CHECK(gmod(gsub(gmul(x1, x2, q), y), n) == GaussElem{}, "x1 x2 != y");
    return {x1, x2};
}

DecompositionTriple quaternion_decomposition(const QuatParams& P, const Factorization& N, const GaussElem& A,
                                             const GaussElem& B, const GaussElem& C, const GaussElem& D) {
    const Int n = N.value();
    const Int& p = P.p;
    const Int& q = P.q;
    const auto rep = check_conditions(P, N, A, B, C, D, Int(0));
    // condition (i) powersmoothness is not needed here; coprimality is
    if (!coprime(gnorm(C, q) + p * gnorm(D, q), n) || !rep.ok[1] || !rep.ok[2] || !rep.ok[3]) {
        throw MalformedInput("decomposition preconditions (i)-(iv) fail");
    }
    if (!rep.ok[4]) throw MalformedInput("discriminant is not a square modulo N");

    const GaussElem W = gmul(gmul(A, gconj(B), q), gmul(C, gconj(D), q), q);
    const Int X = gnorm(A, q) * (gnorm(C, q) - p * gnorm(D, q));
    const Int C1 = X + 2 * p * W.re;
    const Int C2 = -4 * q * p * W.im;
    const Int C3 = q * X - 2 * q * p * W.re;

    std::vector<Residue> troots;
    for (const auto& f : N.factors()) {
        const Int m = f.value();
        const auto roots = quadratic_roots(C1, C2, C3, f.prime, f.exponent);
        std::optional<Int> pick;
        for (const Int& t : roots) {
            if (mod(1 + q * t * t, f.prime) != 0) {
                pick = t;
                break;
            }
        }
        if (!pick) throw NoSolution("no admissible root of the x3 quadratic modulo " + to_string(m));
        troots.push_back({*pick, m});
    }
    const Int t0 = crt_combine(troots).value;
    QLIFT_CHECK(mod(C1 + C2 * t0 + C3 * t0 * t0, n) == 0, "t0 is not a root");
    const GaussElem x3{1, t0};

    const Int pinv = inv_mod(p, n);
    const Int nc = inv_mod(gnorm(C, q), n), nd = inv_mod(gnorm(D, q), n);
    // x1 conj(x2) = conj(pC)^-1 (...) needs the factor C as well as n(C)^-1
    const GaussElem rx = gsub(gscale(gmul(gmul(A, gconj(D), q), x3, q), p),
                              gscale(gmul(gmul(B, gconj(C), q), gconj(x3), q), p));
    const GaussElem ry = gadd(gmul(gmul(A, C, q), x3, q), gscale(gmul(gmul(B, D, q), gconj(x3), q), p));
    const GaussElem x = gmod(gscale(gmul(C, rx, q), nc * pinv), n);
    const GaussElem y = gmod(gscale(gmul(D, ry, q), nd * pinv), n);
    QLIFT_CHECK(mod(gnorm(x, q) - gnorm(y, q), n) == 0, "n(x) != n(y) after choosing x3");
    const auto [x1, x2] = equiv_norm_conjugation_product(q, N, x, y);
    const Int ngam = gnorm(C, q) + p * gnorm(D, q);
    const Int lp = inv_mod(mod(ngam * p * gnorm(x3, q), n), n);

    DecompositionTriple out{x1, x2, x3, t0, lp};
    LiftTrace tr;
    tr.sigma0_reduced = P.from_gauss(A, B);
    tr.C = C;
    tr.D = D;
    tr.triple = out;
    QLIFT_CHECK(verify_recomposition(P, N, tr), "decomposition does not recompose");
    return out;
}

std::optional<Int> unit_ratio_mod(const QuatParams& P, const Factorization& N, const QuatElem& a, const QuatElem& b) {
    const auto [ca, da] = P.o0_coords(a);
    const auto [cb, db] = P.o0_coords(b);
    if (da != 1 || db != 1) return std::nullopt;
    std::vector<Residue> parts;
    for (const auto& f : N.factors()) {
        const Int m = f.value();
        int k = -1;
        for (int i = 0; i < 4; ++i) {
            if (mod(cb[i], f.prime) != 0) {
                k = i;
                break;
            }
        }
        if (k < 0) return std::nullopt;
        const Int u = mod(ca[k] * inv_mod(cb[k], m), m);
        if (mod(u, f.prime) == 0) return std::nullopt;
        for (int i = 0; i < 4; ++i) {
            if (mod(ca[i] - u * cb[i], m) != 0) return std::nullopt;
        }
        parts.push_back({u, m});
    }
    return crt_combine(parts).value;
}

bool verify_recomposition(const QuatParams& P, const Factorization& N, const LiftTrace& t) {
    const QuatElem gamma = P.from_gauss(t.C, t.D);
    const GaussElem zero{};
    const QuatElem prod = P.from_gauss(zero, t.triple.x1) * gamma * P.from_gauss(zero, t.triple.x2) * gamma *
                          P.from_gauss(zero, t.triple.x3);
    const auto u = unit_ratio_mod(P, N, t.sigma0_reduced, prod);
    return u.has_value() && *u == mod(t.triple.lambda_prime, N.value());
}

namespace {

struct O0Lift {
    QuatElem sigma;
    Int lambda;
    std::vector<std::pair<PowersmoothCert, unsigned>> certs;
    std::optional<LiftTrace> trace;
};

/// rho = C + Dj with n(C), n(D) units and sqrt(B)-powersmooth norm.
RepIntResult sample_unit_rho(const QuatParams& P, const Factorization& N, const LiftConfig& cfg, Rng& rng) {
    const Int n = N.value();
    PowersmoothRequest req;
    req.bound = std::max(isqrt(effective_bound(P, cfg)), Int(2));
    req.lower = P.p * (P.q + 1) * 4;
    req.coprime_to = {n};
    req.excluded_primes = cfg.excluded_primes;
    for (unsigned a = 0; a < cfg.budget;) {
        const PowersmoothCert Mc = sample_powersmooth(req, rng);
        const Int m = isqrt(Mc.value / (P.p * (P.q + 1)));
        for (unsigned k = 0; k < 200 && a < cfg.budget; ++k, ++a) {
            const Int z = rng.range(-m, m), t = rng.range(-m, m);
            const Int nd = z * z + P.q * t * t;
            const Int Mp = Mc.value - P.p * nd;
            if (!coprime(nd, n) || Mp < 2 || !coprime(Mp, n) || !is_probable_prime(Mp)) continue;
            const auto xy = cornacchia(P.q, Mp);
            if (!xy) continue;
            return RepIntResult{{xy->first, xy->second}, {z, t}, Mc, a + 1};
        }
    }
    throw BudgetExhausted("randomizing factor: retry budget exhausted; increase B");
}

bool degenerate_for_repint(const QuatParams& P, const Factorization& N, const GaussElem& A, const GaussElem& B) {
    const GaussElem w = gmul(A, gconj(B), P.q);
    for (const auto& f : N.factors()) {
        if (gauss_zero_mod(w, f.prime)) return true;
    }
    return false;
}

/// Whether some (C, D) mod l meets conditions (ii)-(v) and yields an admissible
/// root x3 = 1 + t i. Small l can be obstructed for particular (A, B).
bool feasible_mod_prime(const QuatParams& P, const GaussElem& A, const GaussElem& B, unsigned long l) {
    using u64 = unsigned long long;
    const u64 p = mpz_fdiv_ui(P.p.get_mpz_t(), l), q = mpz_fdiv_ui(P.q.get_mpz_t(), l);
    auto r = [l](const Int& x) { return static_cast<u64>(mpz_fdiv_ui(x.get_mpz_t(), l)); };
    const u64 a0 = r(A.re), a1 = r(A.im), b0 = r(B.re), b1 = r(B.im);
    auto md = [l](u64 x) { return x % l; };
    auto nrm = [&](u64 x0, u64 x1) { return md(x0 * x0 + q * md(x1 * x1)); };
    std::vector<bool> sq(l, false);
    for (u64 x = 0; x < l; ++x) sq[md(x * x)] = true;
    // w = A conj(B)
    const u64 w0 = md(a0 * b0 + q * md(a1 * b1)), w1 = md(a1 * b0 + (l - md(a0 * b1)));
    const u64 nA = nrm(a0, a1), nB = nrm(b0, b1);
    for (u64 c0 = 0; c0 < l; ++c0)
        for (u64 c1 = 0; c1 < l; ++c1) {
            const u64 nC = nrm(c0, c1);
            if (nC == 0) continue;
            for (u64 d0 = 0; d0 < l; ++d0)
                for (u64 d1 = 0; d1 < l; ++d1) {
                    const u64 nD = nrm(d0, d1);
                    if (nD == 0 || md(nC + p * nD) == 0) continue;
                    // z = C conj(D), W = w z
                    const u64 z0 = md(c0 * d0 + q * md(c1 * d1)), z1 = md(c1 * d0 + (l - md(c0 * d1)));
                    const u64 W0 = md(w0 * z0 + (l - md(q * md(w1 * z1))));
                    const u64 W1 = md(w0 * z1 + w1 * z0);
                    if (W1 == 0) continue;
                    const u64 X = md(nA * md(nC + (l - md(p * nD))));
                    const u64 nABCD = md(md(nA * nB) * md(nC * nD));
                    const u64 disc = md(4 * q * md(md(4 * md(p * p)) * nABCD + (l - md(X * X))));
                    if (!sq[disc]) continue;
                    const u64 C1 = md(X + 2 * md(p * W0));
                    const u64 C2 = md(l * l * 8 - md(4 * md(q * md(p * W1))));
                    const u64 C3 = md(md(q * X) + (l - md(2 * md(q * md(p * W0)))));
                    for (u64 t = 0; t < l; ++t) {
                        if (md(1 + q * md(t * t)) == 0) continue;
                        if (md(C1 + md(C2 * t) + md(C3 * md(t * t))) == 0) return true;
                    }
                }
        }
    return false;
}

bool feasible_small_primes(const QuatParams& P, const Factorization& N, const GaussElem& A, const GaussElem& B) {
    for (const auto& f : N.factors()) {
        if (f.prime <= 50 && !feasible_mod_prime(P, A, B, f.prime.get_ui())) return false;
    }
    return true;
}

O0Lift lift_o0(const QuatParams& P, const Factorization& N, const QuatElem& sigma0, const LiftConfig& cfg0,
               Rng& rng) {
    const Int n = N.value();
    const auto [c, den] = P.o0_coords(sigma0);
    if (den != 1) throw MalformedInput("sigma0 is not in O0");
    if (mod(c[1], n) == 0 && mod(c[2], n) == 0 && mod(c[3], n) == 0) {
        return O0Lift{QuatElem::scalar(P.alg, 1), inv_mod(c[0], n), {}, std::nullopt};
    }

    // Steps 1-3: into R + Rj
    const QuatElem sD = sigma0 * Rat(P.D);
    QLIFT_CHECK(sD.is_integral_coords(), "D sigma0 outside R + Rj");
    const QuatElem base = reduce_rrj(P, sD * Rat(inv_mod(P.D, n)), n);

    // Steps 4-5. When sigma0 is obstructed at some l | N (degenerate, or no
    // admissible gamma mod l) it is replaced by sigma0 conj(rho) for a random
    // rho of powersmooth norm, and rho is multiplied back at the end.
    Rng rr = rng.split(0x70), rg = rng.split(0x71);
    LiftConfig cfg = cfg0;
    std::optional<RepIntResult> rho, gam;
    std::optional<DecompositionTriple> tri;
    QuatElem s0 = base;
    constexpr unsigned kRounds = 48, kGammas = 16;
    for (unsigned round = 0; round < kRounds && !tri; ++round) {
        rho.reset();
        s0 = base;
        cfg = cfg0;
        if (round > 0) {
            rho = sample_unit_rho(P, N, cfg0, rr);
            s0 = reduce_rrj(P, base * P.from_gauss(rho->C, rho->D).conj(), n);
            add_primes(cfg.excluded_primes, rho->cert.factorization);
        }
        const auto [A, B] = split_rrj(s0);
        if (degenerate_for_repint(P, N, A, B) || !feasible_small_primes(P, N, A, B)) continue;
        try {
            for (unsigned k = 0; k < kGammas && !tri; ++k) {
                gam = represent_integer_prime(P, N, A, B, cfg, rg);
                try {
                    tri = quaternion_decomposition(P, N, A, B, gam->C, gam->D);
                } catch (const NoSolution&) {
                    tri.reset();
                }
            }
        } catch (const BudgetExhausted&) {
            tri.reset();
        }
    }
    if (!tri) throw BudgetExhausted("no decomposable representative of sigma0 found; increase B");

    std::vector<std::pair<PowersmoothCert, unsigned>> certs;
    if (rho) certs.push_back({rho->cert, 1});
    certs.push_back({gam->cert, 2});
    add_primes(cfg.excluded_primes, gam->cert.factorization);

    // Step 6
    const std::array<GaussElem, 3> xs{tri->x1, tri->x2, tri->x3};
    std::array<QuatElem, 3> gs;
    Int lam = 1;
    for (int i = 0; i < 3; ++i) {
        Rng ri = rng.split(0x80 + static_cast<std::uint64_t>(i));
        const auto sa = strong_approximation_ps(P, N, xs[i], cfg, ri);
        gs[i] = sa.mu;
        lam = mod(lam * sa.lambda, n);
        certs.push_back({sa.cert, 1});
        add_primes(cfg.excluded_primes, sa.cert.factorization);
    }

    // Step 7
    const QuatElem gamma = P.from_gauss(gam->C, gam->D);
    QuatElem sigma = gs[0] * gamma * gs[1] * gamma * gs[2];
    lam = mod(lam * inv_mod(tri->lambda_prime, n), n);
    if (rho) {
        sigma = sigma * P.from_gauss(rho->C, rho->D);
        lam = mod(lam * rho->cert.value, n);
    }

    LiftTrace tr;
    tr.sigma0_reduced = s0;
    tr.C = gam->C;
    tr.D = gam->D;
    tr.triple = *tri;
    tr.premultiplied = rho.has_value();
    return O0Lift{sigma, lam, certs, tr};
}

}  // namespace

LiftResult pqlp_lift(const QuatParams& P, const Factorization& N, const QuatLattice& O, const QuatElem& sigma0,
                     const LiftConfig& cfg) {
    validate_lift_modulus(P, N, cfg);
    const Int n = N.value();
    const Int bound = effective_bound(P, cfg);
    if (!lattice_contains(P, O, sigma0)) throw MalformedInput("sigma0 is not in O");
    const Rat ns = sigma0.norm();
    if (ns.get_den() != 1 || !coprime(ns.get_num(), n)) throw MalformedInput("n(sigma0) must be coprime to N");
    Rng rng(cfg.seed);

    LiftResult out;
    if (O == o0_lattice()) {
        O0Lift r = lift_o0(P, N, sigma0, cfg, rng);
        std::vector<std::pair<const PowersmoothCert*, unsigned>> parts;
        for (const auto& [c, m] : r.certs) parts.push_back({&c, m});
        out = LiftResult{r.sigma, r.lambda, r.certs.empty() ? trivial_cert(bound) : merge_certs(parts, bound),
                         r.trace};
    } else {
        const QuatIdeal Ip = connecting_ideal(P, o0_lattice(), O);
        const Int sb = std::max(isqrt(bound), Int(2));
        const auto accept = [&](const Int& nj) {
            for (const Int& e : cfg.excluded_primes) {
                if (nj % e == 0) return false;
            }
            return certify_powersmooth(nj, sb).has_value();
        };
        const EquivalentIdeal eq = equivalent_coprime_ideal(P, Ip, n, accept);
        QLIFT_CHECK(eq.J.norm.get_den() == 1, "equivalent ideal norm not integral");
        const Int nj = eq.J.norm.get_num();
        const auto njc = certify_powersmooth(nj, sb);
        QLIFT_CHECK(njc.has_value(), "n_J is not powersmooth");
        const QuatElem binv = eq.beta.inverse();
        const QuatElem inner = binv * sigma0 * eq.beta * Rat(nj);
        QLIFT_CHECK(P.in_o0(inner), "n_J beta^-1 sigma0 beta outside O0");
        LiftConfig c2 = cfg;
        add_primes(c2.excluded_primes, njc->factorization);
        O0Lift r = lift_o0(P, N, inner, c2, rng);
        std::vector<std::pair<const PowersmoothCert*, unsigned>> parts{{&*njc, 2}};
        for (const auto& [c, m] : r.certs) parts.push_back({&c, m});
        out.sigma = eq.beta * (r.sigma * Rat(nj)) * binv;
        out.lambda = mod(r.lambda * nj * nj, n);
        out.cert = merge_certs(parts, bound);
        out.trace = r.trace;
        if (out.trace) out.trace->conjugated = true;
    }
    if (!verify_lift(P, N, O, sigma0, out, bound)) throw InternalError("PQLP output failed verification");
    return out;
}

bool verify_lift(const QuatParams& P, const Factorization& N, const QuatLattice& O, const QuatElem& sigma0,
                 const LiftResult& r, const Int& bound) {
    const Int n = N.value();
    if (!lattice_contains(P, O, r.sigma)) return false;
    if (!coprime(r.lambda, n)) return false;
    const QuatElem diff = (r.sigma - sigma0 * Rat(r.lambda)) * Rat(1, n);
    if (!lattice_contains(P, O, diff)) return false;
    const Rat nn = r.sigma.norm();
    if (nn.get_den() != 1 || nn.get_num() != r.cert.value) return false;
    const PowersmoothCert c{r.cert.value, bound, r.cert.factorization};
    return c.verify();
}

Int count_linear_solutions(const Int& N1, const Int& N2, const Int& N3, const Int& N) {
    const unsigned long n = N.get_ui();
    Int count = 0;
    for (unsigned long x = 0; x < n; ++x) {
        for (unsigned long y = 0; y < n; ++y) {
            if (mod(N1 * x + N2 * y - N3, N) == 0) ++count;
        }
    }
    return count;
}

Int count_linear_value_pairs(const Int& N1, const Int& N2, const Int& N3, const Int& N) {
    const unsigned long n = N.get_ui();
    std::set<std::pair<Int, Int>> seen;
    for (unsigned long x = 0; x < n; ++x) {
        for (unsigned long y = 0; y < n; ++y) {
            const Int X = mod(N1 * x, N), Y = mod(N2 * y, N);
            if (mod(X + Y - N3, N) == 0) seen.insert({X, Y});
        }
    }
    return Int(static_cast<unsigned long>(seen.size()));
}

std::vector<bool> norm_product_image(const Int& q, unsigned long N) {
    const unsigned long n4 = N * N * N * N;
    std::vector<bool> hit(n4, false);
    const unsigned long qq = mpz_fdiv_ui(q.get_mpz_t(), N);
    for (unsigned long t1 = 0; t1 < N; ++t1) {
        for (unsigned long s1 = 0; s1 < N; ++s1) {
            for (unsigned long t2 = 0; t2 < N; ++t2) {
                for (unsigned long s2 = 0; s2 < N; ++s2) {
                    // x1 conj(x2), x1 x2
                    const unsigned long u1 = (t1 * t2 + qq * s1 * s2) % N;
                    const unsigned long v1 = (s1 * t2 + N * N - (t1 * s2) % N) % N;
                    const unsigned long u2 = (t1 * t2 + N * N - (qq * s1 * s2) % N) % N;
                    const unsigned long v2 = (t1 * s2 + s1 * t2) % N;
                    hit[u1 + N * v1 + N * N * u2 + N * N * N * v2] = true;
                }
            }
        }
    }
    return hit;
}

}  // namespace qlift
