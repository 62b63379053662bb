#include "qlift/ideal.hpp"

#include <algorithm>

namespace qlift {

namespace {

RatVec rat_row(const std::pair<IntVec, Int>& c) {
    RatVec r;
    for (const auto& x : c.first) {
        Rat y(x, c.second);
        y.canonicalize();
        r.push_back(y);
    }
    return r;
}

Int lcm_int(const Int& a, const Int& b) {
    Int r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

/// Rational coordinates of num/den with respect to the basis of L.
RatVec rational_coords(const QuatLattice& L, const IntVec& num, const Int& den) {
    const auto& H = L.basis();
    const std::size_t n = H.size();
    RatVec c(n);
    for (std::size_t j = 0; j < n; ++j) {
        Rat acc(num[j] * L.den(), den);
        acc.canonicalize();
        for (std::size_t i = 0; i < j; ++i) acc -= c[i] * H[i][j];
        c[j] = acc / H[j][j];
    }
    return c;
}

Rat rational_gcd(const std::vector<Rat>& xs) {
    Int l = 1;
    for (const auto& x : xs) l = lcm_int(l, x.get_den());
    Int g = 0;
    for (const auto& x : xs) {
        Rat y = x * l;
        g = gcd(g, y.get_num());
    }
    Rat r(g, l);
    r.canonicalize();
    return r;
}

}  // namespace

QuatLattice o0_lattice() { return RatLattice::from_rows(identity_matrix(4), 1); }

QuatLattice lattice_of(const QuatParams& P, const std::vector<QuatElem>& gens) {
    RatMat rows;
    for (const auto& g : gens) rows.push_back(rat_row(P.o0_coords(g)));
    return RatLattice::from_rat_rows(rows);
}

std::vector<QuatElem> basis_elems(const QuatParams& P, const QuatLattice& L) {
    std::vector<QuatElem> out;
    for (const auto& r : L.basis()) out.push_back(P.from_o0(r, L.den()));
    return out;
}

bool lattice_contains(const QuatParams& P, const QuatLattice& L, const QuatElem& x) {
    const auto [num, den] = P.o0_coords(x);
    return L.contains(num, den);
}

QuatLattice left_mul(const QuatParams& P, const QuatElem& a, const QuatLattice& L) {
    std::vector<QuatElem> gens;
    for (const auto& e : basis_elems(P, L)) gens.push_back(a * e);
    return lattice_of(P, gens);
}

QuatLattice right_mul(const QuatParams& P, const QuatLattice& L, const QuatElem& a) {
    std::vector<QuatElem> gens;
    for (const auto& e : basis_elems(P, L)) gens.push_back(e * a);
    return lattice_of(P, gens);
}

QuatLattice lattice_product(const QuatParams& P, const QuatLattice& L1, const QuatLattice& L2) {
    const auto b1 = basis_elems(P, L1);
    const auto b2 = basis_elems(P, L2);
    std::vector<QuatElem> gens;
    for (const auto& x : b1) {
        for (const auto& y : b2) gens.push_back(x * y);
    }
    return lattice_of(P, gens);
}

QuatLattice conjugate_lattice(const QuatParams& P, const QuatLattice& L, const QuatElem& a) {
    const QuatElem ai = a.inverse();
    std::vector<QuatElem> gens;
    for (const auto& e : basis_elems(P, L)) gens.push_back(ai * e * a);
    return lattice_of(P, gens);
}

Rat lattice_norm(const QuatParams& P, const QuatLattice& L) {
    const auto b = basis_elems(P, L);
    std::vector<Rat> vals;
    for (std::size_t i = 0; i < b.size(); ++i) {
        vals.push_back(b[i].norm());
        for (std::size_t j = i + 1; j < b.size(); ++j) vals.push_back((b[i] * b[j].conj()).trace());
    }
    return rational_gcd(vals);
}

Rat order_discriminant(const QuatParams& P, const QuatLattice& O) {
    const auto b = basis_elems(P, O);
    return reduced_discriminant({b[0], b[1], b[2], b[3]});
}

bool is_order(const QuatParams& P, const QuatLattice& O) {
    if (!lattice_contains(P, O, P.elem(1, 0, 0, 0))) return false;
    const auto b = basis_elems(P, O);
    for (const auto& x : b) {
        for (const auto& y : b) {
            if (!lattice_contains(P, O, x * y)) return false;
        }
    }
    return true;
}

QuatIdeal make_ideal(const QuatParams& P, const QuatLattice& lattice, const QuatLattice& lo) {
    return QuatIdeal{lattice, lo, lattice_norm(P, lattice)};
}

QuatIdeal ideal_from_generators(const QuatParams& P, const QuatLattice& lo, const std::vector<QuatElem>& gens) {
    if (gens.empty()) throw MalformedInput("no generators");
    const auto ob = basis_elems(P, lo);
    std::vector<QuatElem> prods;
    for (const auto& g : gens) {
        for (const auto& o : ob) prods.push_back(o * g);
    }
    RatMat rows;
    for (const auto& g : prods) rows.push_back(rat_row(P.o0_coords(g)));
    IntMat check;
    for (const auto& r : rows) {
        IntVec v;
        Int l = 1;
        for (const auto& x : r) l = lcm_int(l, x.get_den());
        for (const auto& x : r) {
            Rat y = x * l;
            v.push_back(y.get_num());
        }
        check.push_back(v);
    }
    if (rank(check) < 4) throw MalformedInput("generators span a rank-deficient lattice");
    return make_ideal(P, RatLattice::from_rat_rows(rows), lo);
}

QuatLattice left_order(const QuatParams& P, const QuatLattice& I) {
    std::optional<QuatLattice> acc;
    for (const auto& e : basis_elems(P, I)) {
        QuatLattice t = right_mul(P, I, e.inverse());
        acc = acc ? acc->intersect(t) : t;
    }
    return *acc;
}

QuatLattice right_order(const QuatParams& P, const QuatLattice& I) {
    std::optional<QuatLattice> acc;
    for (const auto& e : basis_elems(P, I)) {
        QuatLattice t = left_mul(P, e.inverse(), I);
        acc = acc ? acc->intersect(t) : t;
    }
    return *acc;
}

bool is_integral(const QuatParams& P, const QuatIdeal& I) {
    (void)P;
    return I.left_order.contains(I.lattice);
}

QuatLattice eichler_order(const QuatParams& P, const QuatIdeal& I) {
    if (!is_integral(P, I)) throw MalformedInput("Eichler order of a non-integral ideal");
    std::vector<QuatElem> gens = basis_elems(P, I.lattice);
    gens.push_back(P.elem(1, 0, 0, 0));
    const QuatLattice zi = lattice_of(P, gens);
    // the identity needs I primitive; n O has both orders equal to O
    Int content = 0;
    for (const auto& r : I.lattice.basis()) {
        for (const auto& c : rational_coords(I.left_order, r, I.lattice.den())) content = gcd(content, c.get_num());
    }
    if (content == 1) {
        const QuatLattice inter = left_order(P, I.lattice).intersect(right_order(P, I.lattice));
        QLIFT_CHECK(zi == inter, "Z + I equals the intersection of the left and right orders");
    }
    return zi;
}

std::optional<IntVec> OrderFrame::coords(const QuatParams& P, const QuatElem& x) const {
    const auto [num, den] = P.o0_coords(x);
    const auto h = lattice.coords(num, den);
    if (!h) return std::nullopt;
    IntVec c(4, 0);
    for (int j = 0; j < 4; ++j) {
        for (int i = 0; i < 4; ++i) c[j] += (*h)[i] * from_hnf[i][j];
    }
    return c;
}

QuatElem OrderFrame::element(const QuatParams& P, const IntVec& c) const {
    QuatElem x = P.elem(0, 0, 0, 0);
    for (int i = 0; i < 4; ++i) {
        if (c[i] != 0) x = x + basis[i] * Rat(c[i]);
    }
    return x;
}

OrderFrame order_frame(const QuatParams& P, const QuatLattice& O) {
    const auto one = O.coords({1, 0, 0, 0}, 1);
    if (!one) throw MalformedInput("lattice does not contain 1");
    OrderFrame F;
    F.lattice = O;
    F.to_hnf = unimodular_with_first_row(*one);
    const Int d = determinant(F.to_hnf);
    F.from_hnf = adjugate(F.to_hnf);
    for (auto& row : F.from_hnf) {
        for (auto& x : row) x *= d;
    }
    const auto hb = basis_elems(P, O);
    for (int i = 0; i < 4; ++i) {
        QuatElem x = P.elem(0, 0, 0, 0);
        for (int j = 0; j < 4; ++j) {
            if (F.to_hnf[i][j] != 0) x = x + hb[j] * Rat(F.to_hnf[i][j]);
        }
        F.basis[i] = x;
    }
    QLIFT_CHECK(F.basis[0] == P.elem(1, 0, 0, 0), "first frame element is 1");
    return F;
}

OrderFrame o0_frame(const QuatParams& P) {
    OrderFrame F;
    F.lattice = o0_lattice();
    F.basis = P.basis;
    F.to_hnf = identity_matrix(4);
    F.from_hnf = identity_matrix(4);
    return F;
}

StructureConstants order_structure_constants(const QuatParams& P, const OrderFrame& O, const Factorization& N) {
    StructureConstants A;
    A.N = N;
    A.one = 0;
    const Int m = N.value();
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            const auto c = O.coords(P, O.basis[i] * O.basis[j]);
            if (!c) throw MalformedInput("lattice is not closed under multiplication");
            for (int k = 0; k < 4; ++k) A.tensor[i][j][k] = mod((*c)[k], m);
        }
    }
    return A;
}

QuatIdeal kernel_ideal_in(const QuatParams& P, const OrderFrame& O, const Factorization& N,
                          const CyclicSubmodule& v, const RingIso& iso) {
    const Int n = N.value();
    if (iso.N != n) throw MalformedInput("isomorphism modulus differs from N");
    if (!is_primitive(N, v.x(), v.y())) throw MalformedInput("kernel vector is not primitive");
    IntMat rows = identity_matrix(4);
    for (int i = 0; i < 4; ++i) rows[i][i] = n;
    IntVec a0(4), a1(4);
    for (int i = 0; i < 4; ++i) {
        const auto [w0, w1] = iso.forward[i].apply(v.x(), v.y());
        a0[i] = w0;
        a1[i] = w1;
    }
    rows.push_back(a0);
    rows.push_back(a1);
    // {c in Z^4 : sum c_i M_{b_i} v = 0 mod N} in frame coordinates
    const QuatLattice K = RatLattice::from_rows(rows, n).dual();
    QLIFT_CHECK(K.den() == 1, "kernel lattice is integral");
    std::vector<QuatElem> gens;
    for (const auto& r : K.basis()) gens.push_back(O.element(P, r));
    QuatIdeal I = make_ideal(P, lattice_of(P, gens), O.lattice);
    QLIFT_CHECK(I.norm == Rat(n), "kernel ideal has norm N");
    QLIFT_CHECK(I.lattice.index_in(O.lattice) == n * n, "kernel ideal has index N^2");
    return I;
}

CyclicSubmodule kernel_of_ideal_in(const QuatParams& P, const OrderFrame& O, const Factorization& N,
                                   const QuatIdeal& I, const RingIso& iso) {
    std::vector<MatModN> mats;
    for (const auto& e : basis_elems(P, I.lattice)) {
        const auto c = O.coords(P, e);
        if (!c) throw MalformedInput("ideal is not contained in the order");
        mats.push_back(matrix_of_element(iso, *c));
    }
    std::vector<Residue> xs, ys;
    for (const auto& f : N.factors()) {
        const Int m = f.value();
        bool found = false;
        for (const auto& M : mats) {
            for (int r = 0; r < 2 && !found; ++r) {
                const Int r1 = mod(M(r, 0), m), r2 = mod(M(r, 1), m);
                if (r1 % f.prime != 0 || r2 % f.prime != 0) {
                    xs.push_back({mod(-r2, m), m});
                    ys.push_back({r1, m});
                    found = true;
                }
            }
            if (found) break;
        }
        if (!found) throw MalformedInput("ideal is not cyclic");
    }
    CyclicSubmodule S(N, crt_combine(xs).value, crt_combine(ys).value);
    for (const auto& M : mats) {
        const auto [a, b] = M.apply(S.x(), S.y());
        if (a != 0 || b != 0) throw MalformedInput("ideal is not the kernel ideal of a cyclic submodule");
    }
    return S;
}

QuatIdeal kernel_ideal(const QuatParams& P, const Factorization& N, const CyclicSubmodule& v, const RingIso& iso) {
    return kernel_ideal_in(P, o0_frame(P), N, v, iso);
}

CyclicSubmodule kernel_of_ideal(const QuatParams& P, const Factorization& N, const QuatIdeal& I,
                                const RingIso& iso) {
    return kernel_of_ideal_in(P, o0_frame(P), N, I, iso);
}

bool is_cyclic(const QuatParams& P, const Factorization& N, const QuatIdeal& I) {
    (void)P;
    for (const auto& f : N.factors()) {
        if (I.left_order.scaled(Rat(f.prime)).contains(I.lattice)) return false;
    }
    return true;
}

QuatIdeal connecting_ideal(const QuatParams& P, const QuatLattice& O1, const QuatLattice& O2) {
    if (order_discriminant(P, O1) != Rat(P.p) || order_discriminant(P, O2) != Rat(P.p)) {
        throw MalformedInput("connecting ideal requires maximal orders");
    }
    const QuatLattice L = lattice_product(P, O1, O2);
    Int d = 1;
    for (const auto& r : L.basis()) {
        for (const auto& c : rational_coords(O1, r, L.den())) d = lcm_int(d, c.get_den());
    }
    const QuatLattice I = L.scaled(Rat(d));
    QLIFT_CHECK(O1.contains(I), "connecting ideal is integral");
    QLIFT_CHECK(left_order(P, I) == O1, "connecting ideal has left order O1");
    QLIFT_CHECK(right_order(P, I) == O2, "connecting ideal has right order O2");
    return make_ideal(P, I, O1);
}

EquivalentIdeal equivalent_coprime_ideal(const QuatParams& P, const QuatIdeal& I, const Int& N,
                                         const std::function<bool(const Int&)>& accept, unsigned max_rounds) {
    const Rat nI = I.norm;
    if (nI.get_den() == 1 && gcd(nI.get_num(), N) == 1 && (!accept || accept(nI.get_num()))) {
        return {I, P.elem(1, 0, 0, 0)};
    }
    const auto b = basis_elems(P, I.lattice);
    RatMat G(4, RatVec(4));
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) G[i][j] = (b[i] * b[j].conj()).trace() / 2;
    }
    const IntMat R = lll_reduce(identity_matrix(4), G);
    const RatMat GR = gram_of(R, G);
    Rat bound = GR[0][0];
    for (int i = 1; i < 4; ++i) bound = std::min(bound, GR[i][i]);
    Rat tested = -1;
    for (unsigned round = 0; round < max_rounds; ++round, bound *= 2) {
        auto vecs = short_vectors(GR, bound);
        std::vector<std::pair<Rat, IntVec>> cands;
        for (const auto& x : vecs) {
            Rat nx = 0;
            for (int i = 0; i < 4; ++i) {
                for (int j = 0; j < 4; ++j) nx += GR[i][j] * x[i] * x[j];
            }
            if (nx > tested) cands.push_back({nx, x});
        }
        std::sort(cands.begin(), cands.end());
        for (const auto& [nx, x] : cands) {
            QuatElem chi = P.elem(0, 0, 0, 0);
            for (int j = 0; j < 4; ++j) {
                Int c = 0;
                for (int k = 0; k < 4; ++k) c += x[k] * R[k][j];
                if (c != 0) chi = chi + b[j] * Rat(c);
            }
            const Rat q = chi.norm() / nI;
            if (q.get_den() != 1) continue;
            if (gcd(q.get_num(), N) != 1) continue;
            if (accept && !accept(q.get_num())) continue;
            const QuatElem beta = chi.conj() * Rat(1 / nI);
            QuatIdeal J = make_ideal(P, right_mul(P, I.lattice, beta), I.left_order);
            QLIFT_CHECK(J.norm == q, "equivalent ideal has norm n(chi)/n(I)");
            return {J, beta};
        }
        tested = bound;
    }
    throw BudgetExhausted("no equivalent ideal of coprime norm within the enumeration radius");
}

}  // namespace qlift
