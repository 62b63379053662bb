#include "qlift/matring.hpp"

#include <algorithm>

namespace qlift {

namespace {

IntVec vec_mod(IntVec v, const Int& N) {
    for (auto& x : v) x = mod(x, N);
    return v;
}

IntVec vec_add(const IntVec& a, const IntVec& b, const Int& N) {
    IntVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = mod(a[i] + b[i], N);
    return r;
}

IntVec vec_scale(const IntVec& a, const Int& s, const Int& N) {
    IntVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = mod(a[i] * s, N);
    return r;
}

bool vec_zero(const IntVec& a) {
    for (const auto& x : a) {
        if (x != 0) return false;
    }
    return true;
}

/// Inverse of a square integer matrix modulo N (throws if det is not a unit).
IntMat inverse_mod(const IntMat& T, const Int& N) {
    const Int det = mod(determinant(T), N);
    if (gcd(det, N) != 1) throw MalformedInput("matrix is not invertible modulo N");
    const Int di = inv_mod(det, N);
    IntMat adj = adjugate(T);
    for (auto& r : adj) {
        for (auto& x : r) x = mod(x * di, N);
    }
    return adj;
}

IntVec row_times(const IntVec& v, const IntMat& M, const Int& N) {
    IntVec r(M[0].size(), 0);
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] == 0) continue;
        for (std::size_t j = 0; j < r.size(); ++j) r[j] += v[i] * M[i][j];
    }
    return vec_mod(r, N);
}

}  // namespace

IntVec StructureConstants::mul(const IntVec& x, const IntVec& y) const {
    const Int m = modulus();
    IntVec out(4, 0);
    for (int i = 0; i < 4; ++i) {
        if (x[i] == 0) continue;
        for (int j = 0; j < 4; ++j) {
            if (y[j] == 0) continue;
            const Int xy = x[i] * y[j];
            for (int k = 0; k < 4; ++k) out[k] += xy * tensor[i][j][k];
        }
    }
    return vec_mod(out, m);
}

IntVec StructureConstants::unit() const {
    IntVec u(4, 0);
    u[one] = 1;
    if (modulus() == 1) u[one] = 0;
    return u;
}

bool StructureConstants::verify() const {
    if (one < 0 || one > 3) return false;
    const Int m = modulus();
    auto e = [](int i) {
        IntVec v(4, 0);
        v[i] = 1;
        return v;
    };
    for (int i = 0; i < 4; ++i) {
        IntVec bi = vec_mod(e(i), m);
        if (mul(unit(), bi) != bi || mul(bi, unit()) != bi) return false;
        for (int j = 0; j < 4; ++j) {
            const IntVec bij = mul(bi, e(j));
            for (int k = 0; k < 4; ++k) {
                if (mul(bij, e(k)) != mul(bi, mul(e(j), e(k)))) return false;
            }
        }
    }
    return true;
}

StructureConstants StructureConstants::reduce(const Factorization& d) const {
    const Int dv = d.value();
    if (modulus() % dv != 0) throw MalformedInput("reduction modulus must divide N");
    StructureConstants r;
    r.N = d;
    r.one = one;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            for (int k = 0; k < 4; ++k) r.tensor[i][j][k] = mod(tensor[i][j][k], dv);
        }
    }
    return r;
}

StructureConstants o0_structure_constants(const QuatParams& P, const Factorization& N) {
    StructureConstants A;
    A.N = N;
    A.one = 0;
    const Int m = N.value();
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            for (int k = 0; k < 4; ++k) A.tensor[i][j][k] = mod(P.mult[i][j][k], m);
        }
    }
    return A;
}

StructureConstants standard_matrix_algebra(const Factorization& N) {
    // basis 0: I, 1: E12, 2: E21, 3: E11 (E22 = I - E11)
    StructureConstants A;
    A.N = N;
    A.one = 0;
    const Int m = N.value();
    for (auto& a : A.tensor) {
        for (auto& b : a) b = {0, 0, 0, 0};
    }
    auto set = [&](int i, int j, std::array<int, 4> v) {
        for (int k = 0; k < 4; ++k) A.tensor[i][j][k] = mod(Int(v[k]), m);
    };
    for (int i = 0; i < 4; ++i) {
        std::array<int, 4> ei{0, 0, 0, 0};
        ei[i] = 1;
        set(0, i, ei);
        set(i, 0, ei);
    }
    set(1, 1, {0, 0, 0, 0});
    set(1, 2, {0, 0, 0, 1});   // E12 E21 = E11
    set(1, 3, {0, 0, 0, 0});   // E12 E11 = 0
    set(2, 1, {1, 0, 0, -1});  // E21 E12 = E22
    set(2, 2, {0, 0, 0, 0});
    set(2, 3, {0, 0, 1, 0});  // E21 E11 = E21
    set(3, 1, {0, 1, 0, 0});  // E11 E12 = E12
    set(3, 2, {0, 0, 0, 0});  // E11 E21 = 0
    set(3, 3, {0, 0, 0, 1});
    return A;
}

StructureConstants change_basis(const StructureConstants& A, const IntMat& U) {
    const Int m = A.modulus();
    const IntMat W = inverse_mod(U, m);
    StructureConstants B;
    B.N = A.N;
    B.one = -1;
    for (int r = 0; r < 4; ++r) {
        if (vec_mod(U[r], m) == A.unit()) B.one = r;
    }
    if (B.one < 0) throw MalformedInput("change of basis must keep the identity as a basis element");
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            const IntVec prod = A.mul(vec_mod(U[a], m), vec_mod(U[b], m));
            const IntVec c = row_times(prod, W, m);
            for (int k = 0; k < 4; ++k) B.tensor[a][b][k] = c[k];
        }
    }
    return B;
}

StructureConstants scramble(const StructureConstants& A, Rng& rng, IntMat* used) {
    const Int m = A.modulus();
    for (;;) {
        IntMat U(4, IntVec(4));
        const int pos = static_cast<int>(rng.below(4));
        for (int r = 0; r < 4; ++r) {
            if (r == pos) {
                U[r] = A.unit();
            } else {
                for (int c = 0; c < 4; ++c) U[r][c] = rng.below(m);
            }
        }
        if (gcd(determinant(U), m) != 1) continue;
        if (used) *used = U;
        return change_basis(A, U);
    }
}

// ---------------------------------------------------------------------------

IntVec idempotent_mod_prime(const StructureConstants& A, Rng& rng, unsigned budget) {
    const Int l = A.modulus();
    const IntVec one = A.unit();
    for (unsigned attempt = 0; attempt < budget; ++attempt) {
        IntVec x(4);
        for (auto& c : x) c = rng.below(l);
        int t = -1;
        for (int i = 0; i < 4; ++i) {
            if (i != A.one && x[i] != 0) t = i;
        }
        if (t < 0) continue;  // scalar
        // x^2 = a x + b
        const IntVec x2 = A.mul(x, x);
        const Int a = mod(x2[t] * inv_mod(x[t], l), l);
        const IntVec rest = vec_add(x2, vec_scale(x, -a, l), l);
        const Int b = rest[A.one];
        if (rest != vec_scale(one, b, l)) continue;
        // roots of T^2 - a T - b
        std::vector<Int> roots;
        if (l == 2) {
            for (int r = 0; r < 2; ++r) {
                if (mod(Int(r * r) - a * r - b, l) == 0) roots.push_back(r);
            }
        } else {
            const Int disc = mod(a * a + 4 * b, l);
            if (disc == 0) continue;
            auto s = sqrt_mod_prime(disc, l);
            if (!s) continue;
            const Int h = inv_mod(2, l);
            roots = {mod((a + *s) * h, l), mod((a - *s) * h, l)};
        }
        if (roots.size() != 2 || roots[0] == roots[1]) continue;
        const Int scale = inv_mod(roots[0] - roots[1], l);
        const IntVec e = vec_scale(vec_add(x, vec_scale(one, -roots[1], l), l), scale, l);
        if (A.mul(e, e) != e || vec_zero(e) || e == one) continue;
        return e;
    }
    throw BudgetExhausted("no nontrivial idempotent found within the retry budget");
}

IntVec hensel_lift_idempotent(const StructureConstants& A, const IntVec& e0) {
    if (A.N.omega() != 1) throw MalformedInput("idempotent lifting needs a prime-power modulus");
    const Int l = A.N.factors()[0].prime;
    const unsigned k = A.N.factors()[0].exponent;
    const Int m = A.modulus();
    const IntVec one = A.unit();
    IntVec e = vec_mod(e0, m);
    {
        const IntVec d = vec_add(A.mul(e, e), vec_scale(e, -1, m), m);
        for (const auto& c : d) QLIFT_CHECK(c % l == 0, "e0 is idempotent modulo l");
    }
    Int li = l;
    for (unsigned i = 1; i < k; ++i) {
        // E = (e^2 - e) / l^i, f = -E (2e - 1)^{-1} = -E (2e - 1) mod l
        const IntVec d = vec_add(A.mul(e, e), vec_scale(e, -1, m), m);
        IntVec E(4);
        for (int c = 0; c < 4; ++c) {
            QLIFT_CHECK(d[c] % li == 0, "idempotent defect divisible by l^i");
            E[c] = d[c] / li;
        }
        const IntVec two_e_minus_one = vec_add(vec_scale(e, 2, m), vec_scale(one, -1, m), m);
        const IntVec f = vec_scale(A.mul(E, two_e_minus_one), -1, m);
        e = vec_add(e, vec_scale(f, li, m), m);
        li *= l;
    }
    QLIFT_CHECK(A.mul(e, e) == e, "lifted idempotent");
    return e;
}

namespace {

// Left-regular representation on A e modulo a prime power.
std::array<MatModN, 4> module_iso(const StructureConstants& A, const IntVec& e) {
    const Int m = A.modulus();
    const Int l = A.N.factors()[0].prime;
    std::vector<IntVec> cand;
    for (int i = 0; i < 4; ++i) {
        IntVec bi(4, 0);
        bi[i] = 1;
        cand.push_back(A.mul(vec_mod(bi, m), e));
    }
    std::vector<IntVec> u;
    std::vector<int> piv;
    for (int step = 0; step < 2; ++step) {
        int ci = -1, col = -1;
        for (std::size_t c = 0; c < cand.size() && ci < 0; ++c) {
            for (int t = 0; t < 4; ++t) {
                if (std::find(piv.begin(), piv.end(), t) != piv.end()) continue;
                if (cand[c][t] % l != 0) {
                    ci = static_cast<int>(c);
                    col = t;
                    break;
                }
            }
        }
        QLIFT_CHECK(ci >= 0, "A e is free of rank 2");
        IntVec v = vec_scale(cand[ci], inv_mod(cand[ci][col], m), m);
        cand.erase(cand.begin() + ci);
        for (auto& c : cand) c = vec_add(c, vec_scale(v, -c[col], m), m);
        for (auto& w : u) w = vec_add(w, vec_scale(v, -w[col], m), m);
        u.push_back(v);
        piv.push_back(col);
    }
    for (const auto& c : cand) QLIFT_CHECK(vec_zero(c), "A e has rank exactly 2");

    auto coords = [&](const IntVec& y) {
        const Int c1 = y[piv[0]], c2 = y[piv[1]];
        QLIFT_CHECK(vec_add(vec_scale(u[0], c1, m), vec_scale(u[1], c2, m), m) == y, "element of A e");
        return std::make_pair(c1, c2);
    };
    std::array<MatModN, 4> out;
    for (int i = 0; i < 4; ++i) {
        IntVec bi(4, 0);
        bi[i] = 1;
        bi = vec_mod(bi, m);
        const auto [a, c] = coords(A.mul(bi, u[0]));
        const auto [b, d] = coords(A.mul(bi, u[1]));
        out[i] = MatModN(m, a, b, c, d);
    }
    return out;
}

}  // namespace

void verify_iso(const StructureConstants& A, const RingIso& iso) {
    const Int m = A.modulus();
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            IntVec bi(4, 0), bj(4, 0);
            bi[i] = 1;
            bj[j] = 1;
            const IntVec prod = A.mul(vec_mod(bi, m), vec_mod(bj, m));
            QLIFT_CHECK(matrix_of_element(iso, prod) == iso.forward[i] * iso.forward[j], "iso is multiplicative");
        }
    }
    QLIFT_CHECK(iso.forward[A.one] == MatModN::identity(m), "iso is unital");
    for (int i = 0; i < 4; ++i) {
        IntVec bi(4, 0);
        bi[i] = 1;
        QLIFT_CHECK(element_of_matrix(iso, iso.forward[i]) == vec_mod(bi, m), "backward after forward is identity");
    }
    const std::array<MatModN, 4> units{MatModN(m, 1, 0, 0, 0), MatModN(m, 0, 1, 0, 0), MatModN(m, 0, 0, 1, 0),
                                       MatModN(m, 0, 0, 0, 1)};
    for (const auto& E : units) {
        QLIFT_CHECK(matrix_of_element(iso, element_of_matrix(iso, E)) == E, "forward after backward is identity");
    }
}

RingIso explicit_isomorphism(const StructureConstants& A, std::uint64_t seed) {
    if (!A.verify()) throw MalformedInput("structure constants fail associativity or identity axioms");
    const Int N = A.modulus();
    Rng rng(seed);
    std::vector<std::array<MatModN, 4>> parts;
    std::vector<Int> mods;
    for (const auto& f : A.N.factors()) {
        const StructureConstants Ak = A.reduce(Factorization({f}));
        const StructureConstants A1 = A.reduce(Factorization({{f.prime, 1}}));
        const IntVec e0 = idempotent_mod_prime(A1, rng);
        const IntVec e = hensel_lift_idempotent(Ak, e0);
        parts.push_back(module_iso(Ak, e));
        mods.push_back(f.value());
    }
    RingIso iso;
    iso.N = N;
    for (int i = 0; i < 4; ++i) {
        std::array<Int, 4> ent;
        for (int t = 0; t < 4; ++t) {
            std::vector<Residue> rs;
            for (std::size_t c = 0; c < parts.size(); ++c) rs.push_back({parts[c][i].entries()[t], mods[c]});
            ent[t] = crt_combine(rs).value;
        }
        iso.forward[i] = MatModN(N, ent[0], ent[1], ent[2], ent[3]);
    }
    IntMat T(4, IntVec(4));
    for (int i = 0; i < 4; ++i) {
        for (int t = 0; t < 4; ++t) T[i][t] = iso.forward[i].entries()[t];
    }
    iso.backward = inverse_mod(T, N);
    verify_iso(A, iso);
    return iso;
}

MatModN matrix_of_element(const RingIso& iso, const IntVec& coords) {
    MatModN out(iso.N, 0, 0, 0, 0);
    for (int i = 0; i < 4; ++i) {
        if (mod(coords[i], iso.N) == 0) continue;
        out = out + iso.forward[i].scaled(coords[i]);
    }
    return out;
}

IntVec element_of_matrix(const RingIso& iso, const MatModN& M) {
    IntVec flat(M.entries().begin(), M.entries().end());
    return row_times(flat, iso.backward, iso.N);
}

}  // namespace qlift
