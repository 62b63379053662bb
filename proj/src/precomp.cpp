#include "qlift/precomp.hpp"

#include <map>

namespace qlift {

namespace {

MatModN lower(const Int& N, const Int& l) { return MatModN(N, 1, 0, l, 1); }
MatModN upper(const Int& N, const Int& u) { return MatModN(N, 1, u, 0, 1); }
MatModN diag(const Int& N, const Int& x, const Int& y) { return MatModN(N, x, 0, 0, y); }
MatModN swap_matrix(const Int& N) { return MatModN(N, 0, 1, 1, 0); }

/// M = L Dg U for M with unit top-left entry.
void ldu(const MatModN& M, MatModN& L, MatModN& Dg, MatModN& U) {
    const Int& N = M.modulus();
    const Int ai = inv_mod(M(0, 0), N);
    L = lower(N, mod(M(1, 0) * ai, N));
    Dg = diag(N, M(0, 0), mod(M.det() * ai, N));
    U = upper(N, mod(M(0, 1) * ai, N));
}

Int two_pow(unsigned k) {
    Int r;
    mpz_ui_pow_ui(r.get_mpz_t(), 2, k);
    return r;
}

std::vector<unsigned> set_bits(const Int& e) {
    std::vector<unsigned> out;
    const std::size_t n = mpz_sizeinbase(e.get_mpz_t(), 2);
    for (std::size_t i = 0; i < n; ++i) {
        if (mpz_tstbit(e.get_mpz_t(), i)) out.push_back(static_cast<unsigned>(i));
    }
    return out;
}

Factorization totient_factorization(const PrimePower& pp) {
    Int phi;
    mpz_pow_ui(phi.get_mpz_t(), pp.prime.get_mpz_t(), pp.exponent - 1);
    phi *= pp.prime - 1;
    return Factorization::trial(phi);
}

/// Lift of an invertible matrix through pqlp_lift; entries coprime to `used`.
LiftResult lift_matrix(const QuatParams& P, const Factorization& N, const RingIso& iso, const MatModN& G,
                       const LiftConfig& cfg, std::vector<Int>& used, std::uint64_t tag) {
    LiftConfig c = cfg;
    c.excluded_primes.insert(c.excluded_primes.end(), used.begin(), used.end());
    c.seed = Rng(cfg.seed).split(tag).next();
    const QuatElem s0 = P.from_o0(element_of_matrix(iso, G));
    LiftResult r = pqlp_lift(P, N, o0_lattice(), s0, c);
    for (const auto& pp : r.cert.factorization.factors()) used.push_back(pp.prime);
    return r;
}

}  // namespace

PlduDecomposition matrix_pldu_decompose(const MatModN& M, const Factorization& N) {
    const Int n = N.value();
    if (M.modulus() != n) throw MalformedInput("matrix modulus differs from N");
    if (!M.is_invertible()) throw MalformedInput("matrix is not invertible modulo N");
    PlduDecomposition d;
    d.P = MatModN::identity(n);
    d.U1 = MatModN::identity(n);
    if (N.is_prime()) {
        MatModN Mp = M;
        if (M(0, 0) == 0) {
            d.swapped = true;
            d.P = swap_matrix(n);
            Mp = d.P * M;
        }
        ldu(Mp, d.L, d.Dg, d.U2);
    } else {
        // smallest k with a + k c a unit; at most omega(N) values of k fail
        Int k = 0;
        while (gcd(M(0, 0) + k * M(1, 0), n) != 1) {
            ++k;
            QLIFT_CHECK(k <= n, "no shear makes the corner invertible");
        }
        d.k = k;
        d.U1 = upper(n, mod(-k, n));
        ldu(upper(n, k) * M, d.L, d.Dg, d.U2);
    }
    QLIFT_CHECK(d.product() == M, "PLDU reconstruction");
    return d;
}

const PrecompEntry& PrecompTable::entry(const std::string& family, unsigned k) const {
    for (const auto& e : entries) {
        if (e.family == family && e.k == k) return e;
    }
    throw InternalError("missing table entry " + family + "^(2^" + std::to_string(k) + ")");
}

std::vector<std::string> PrecompTable::families() const {
    if (N.is_prime()) return {"L", "U", "C", "D"};
    std::vector<std::string> f{"L", "U", "S"};
    for (std::size_t i = 0; i < N.omega(); ++i) f.push_back("D" + std::to_string(i));
    return f;
}

PrecompTable precompute_lift_table(const QuatParams& P, const Factorization& N, const RingIso& iso,
                                   const LiftConfig& cfg) {
    validate_lift_modulus(P, N, cfg);
    const Int n = N.value();
    if (iso.N != n) throw MalformedInput("isomorphism modulus differs from N");
    PrecompTable t;
    t.N = N;
    t.bound = effective_bound(P, cfg);
    t.bits = static_cast<unsigned>(mpz_sizeinbase(n.get_mpz_t(), 2));
    if (N.is_prime()) {
        t.generators.push_back(primitive_root_prime_power(N.factors()[0].prime, 1));
    } else {
        for (const auto& f : N.factors()) {
            const Int g = primitive_root_prime_power(f.prime, f.exponent);
            std::vector<Residue> parts;
            for (const auto& h : N.factors()) parts.push_back({&h == &f ? g : Int(1), h.value()});
            t.generators.push_back(crt_combine(parts).value);
        }
    }

    std::vector<Int> used = cfg.excluded_primes;
    std::uint64_t tag = 1;
    for (const std::string& fam : t.families()) {
        for (unsigned k = 0; k < t.bits; ++k) {
            const Int e = two_pow(k);
            MatModN G;
            if (fam == "L") {
                G = lower(n, mod(e, n));
            } else if (fam == "U") {
                G = upper(n, mod(e, n));
            } else if (fam == "S") {
                G = upper(n, mod(-e, n));
            } else if (fam == "C") {
                G = diag(n, pow_mod(t.generators[0], e, n), 1);
            } else if (fam == "D" && N.is_prime()) {
                G = diag(n, 1, pow_mod(t.generators[0], e, n));
            } else {
                const std::size_t i = std::stoul(fam.substr(1));
                G = diag(n, 1, pow_mod(t.generators[i], e, n));
            }
            t.entries.push_back({fam, k, G, lift_matrix(P, N, iso, G, cfg, used, tag++)});
        }
    }
    if (N.is_prime()) {
        const MatModN S = swap_matrix(n);
        t.swap = PrecompEntry{"P", 0, S, lift_matrix(P, N, iso, S, cfg, used, tag++)};
    }

    // pairwise coprime norms
    std::map<Int, std::size_t> owner;
    auto check = [&](const PrecompEntry& e, std::size_t idx) {
        for (const auto& pp : e.lift.cert.factorization.factors()) {
            const auto [it, fresh] = owner.emplace(pp.prime, idx);
            QLIFT_CHECK(fresh, "table norms share a prime");
        }
    };
    for (std::size_t i = 0; i < t.entries.size(); ++i) check(t.entries[i], i);
    if (t.swap) check(*t.swap, t.entries.size());
    return t;
}

LiftResult precomputed_lift(const QuatParams& P, const PrecompTable& table, const RingIso& iso, const MatModN& M,
                            unsigned* factors) {
    const Factorization& N = table.N;
    const Int n = N.value();
    const PlduDecomposition d = matrix_pldu_decompose(M, N);

    std::vector<const PrecompEntry*> use;
    auto add_power = [&](const std::string& fam, const Int& e) {
        for (unsigned b : set_bits(e)) {
            if (b >= table.bits) throw InternalError("exponent exceeds the table range");
            use.push_back(&table.entry(fam, b));
        }
    };

    Int scalar_inv = 1;
    if (N.is_prime()) {
        if (d.swapped) use.push_back(&*table.swap);
        add_power("L", d.L(1, 0));
        const Int& g = table.generators[0];
        const Factorization order = Factorization::trial(n - 1);
        const auto a = dlog_smooth(g, d.Dg(0, 0), n, order);
        const auto b = dlog_smooth(g, d.Dg(1, 1), n, order);
        if (!a || !b) throw InternalError("discrete log outside the generated group");
        add_power("C", *a);
        add_power("D", *b);
        add_power("U", d.U2(0, 1));
    } else {
        add_power("S", d.k);
        add_power("L", d.L(1, 0));
        const Int x = d.Dg(0, 0);
        const Int ratio = mod(d.Dg(1, 1) * inv_mod(x, n), n);
        for (std::size_t i = 0; i < N.omega(); ++i) {
            const auto& f = N.factors()[i];
            const Int m = f.value();
            const auto e = dlog_smooth(mod(table.generators[i], m), mod(ratio, m), m, totient_factorization(f));
            if (!e) throw InternalError("discrete log outside the generated group");
            add_power("D" + std::to_string(i), *e);
        }
        add_power("U", d.U2(0, 1));
        scalar_inv = inv_mod(x, n);
    }

    LiftResult out;
    out.sigma = QuatElem::scalar(P.alg, 1);
    out.lambda = scalar_inv;
    std::map<Int, unsigned> exps;
    Int value = 1;
    for (const PrecompEntry* e : use) {
        out.sigma = out.sigma * e->lift.sigma;
        out.lambda = mod(out.lambda * e->lift.lambda, n);
        value *= e->lift.cert.value;
        for (const auto& pp : e->lift.cert.factorization.factors()) exps[pp.prime] += pp.exponent;
    }
    std::vector<PrimePower> fs;
    for (const auto& [pr, ex] : exps) fs.push_back({pr, ex});
    out.cert = PowersmoothCert{value, table.bound, Factorization(fs)};
    if (factors) *factors = static_cast<unsigned>(use.size());

    const QuatElem s0 = P.from_o0(element_of_matrix(iso, M));
    if (!verify_lift(P, N, o0_lattice(), s0, out, table.bound)) {
        throw InternalError("precomputed lift failed verification");
    }
    return out;
}

}  // namespace qlift
