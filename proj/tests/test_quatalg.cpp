#include "doctest.h"

#include "qlift/ideal.hpp"

using namespace qlift;

namespace {

Factorization fac(unsigned long n) { return Factorization::trial(Int(n)); }

QuatElem random_o0(const QuatParams& P, Rng& rng, int r = 20) {
    IntVec c(4);
    for (auto& x : c) x = Int(static_cast<long>(rng.range(-r, r)));
    return P.from_o0(c);
}

QuatElem random_nonzero(const QuatParams& P, Rng& rng, int r = 20) {
    for (;;) {
        QuatElem x = random_o0(P, rng, r);
        if (!x.is_zero()) return x;
    }
}

CyclicSubmodule random_primitive(const Factorization& N, Rng& rng) {
    for (;;) {
        const Int x = rng.below(N.value()), y = rng.below(N.value());
        if (is_primitive(N, x, y)) return CyclicSubmodule(N, x, y);
    }
}

}  // namespace

TEST_CASE("make_params examples") {
    auto P = make_params(103, 11);
    CHECK(P.q == 1);
    CHECK(P.D == 4);
    CHECK(P.basis[0] == P.elem(1, 0, 0, 0));
    CHECK(P.basis[1] == P.elem(0, 1, 0, 0));
    CHECK(P.basis[2] == P.elem(1, 0, 1, 0, 2));
    CHECK(P.basis[3] == P.elem(0, 1, 0, 1, 2));
    CHECK(reduced_discriminant(P.basis) == 103);

    auto P3 = make_params(3, 5);
    CHECK(P3.q == 1);
    CHECK(P3.D == 4);

    // scan q = 3, 7, 11, ... testing both conditions by Euler's criterion
    auto P13 = make_params(13, 5);
    Int expected = 0;
    for (long q = 3; q < 200; q += 4) {
        bool prime = true;
        for (long d = 2; d * d <= q; ++d) prime = prime && (q % d != 0);
        if (!prime || q % 5 == 0) continue;
        if (pow_mod(mod(Int(-13), Int(q)), (q - 1) / 2, Int(q)) != 1) continue;
        expected = q;
        break;
    }
    CHECK(P13.q == expected);
    CHECK(P13.q == 7);
    CHECK(P13.D == 28);
    CHECK(reduced_discriminant(P13.basis) == 13);

    // the smallest valid q is skipped when it divides N
    CHECK(make_params(13, 7).q != 7);

    CHECK_THROWS_AS(make_params(15, 7), MalformedInput);
    CHECK_THROWS_AS(make_params(13, 13), MalformedInput);
    ParamsConfig tight;
    tight.q_bound = 3;
    CHECK_THROWS_AS(make_params(13, 5, tight), MalformedInput);
}

TEST_CASE("O0 index and closure") {
    for (long p : {3L, 7L, 103L, 1019L, 13L, 17L, 29L, 41L, 1009L}) {
        auto P = make_params(p, 1);
        CHECK(reduced_discriminant(P.basis) == p);
        // [O0 : Z<1,i,j,k>] = D
        QuatLattice std_order = lattice_of(P, {P.elem(1, 0, 0, 0), P.elem(0, 1, 0, 0), P.elem(0, 0, 1, 0),
                                               P.elem(0, 0, 0, 1)});
        CHECK(std_order.index_in(o0_lattice()) == P.D);
        CHECK(is_order(P, o0_lattice()));
    }
}

TEST_CASE("element arithmetic") {
    auto P = make_params(19, 1);
    const QuatElem a = P.elem(1, 2, 3, 4);
    CHECK(a.norm() == 480);
    CHECK(a.conj() == P.elem(1, -2, -3, -4));
    CHECK(a.trace() == 2);
    const QuatElem i = P.elem(0, 1, 0, 0), j = P.elem(0, 0, 1, 0), k = P.elem(0, 0, 0, 1);
    CHECK(i * i == P.elem(-1, 0, 0, 0));
    CHECK(j * j == P.elem(-19, 0, 0, 0));
    CHECK(i * j == k);
    CHECK(j * i == -k);

    auto P13 = make_params(13, 5);
    const QuatElem i7 = P13.elem(0, 1, 0, 0);
    CHECK(i7 * i7 == P13.elem(-7, 0, 0, 0));

    Rng rng(1);
    for (const auto* PP : {&P, &P13}) {
        for (int t = 0; t < 1000; ++t) {
            const QuatElem x = random_o0(*PP, rng), y = random_o0(*PP, rng), z = random_o0(*PP, rng);
            CHECK((x * y) * z == x * (y * z));
            CHECK((x * y).conj() == y.conj() * x.conj());
            CHECK((x * y).norm() == x.norm() * y.norm());
            if (t < 100) CHECK(x * x.conj() == QuatElem::scalar(PP->alg, x.norm()));
        }
    }
    auto other = make_params(23, 1);
    CHECK_THROWS_AS(a * other.elem(1, 0, 0, 0), MalformedInput);
}

TEST_CASE("ideal_from_generators and orders") {
    auto P = make_params(103, 11);
    const QuatLattice O0 = o0_lattice();
    const QuatIdeal NO = ideal_from_generators(P, O0, {P.elem(11, 0, 0, 0)});
    CHECK(NO.norm == 121);
    CHECK(NO.lattice == O0.scaled(11));
    CHECK(left_order(P, NO.lattice) == O0);
    CHECK(right_order(P, NO.lattice) == O0);

    Rng rng(2);
    for (int t = 0; t < 10; ++t) {
        const QuatElem a = random_nonzero(P, rng);
        const QuatIdeal I = ideal_from_generators(P, O0, {a});
        CHECK(I.norm == a.norm());
        CHECK(I.lattice == right_mul(P, O0, a));
        CHECK(right_order(P, I.lattice) == conjugate_lattice(P, O0, a));
    }
    const QuatIdeal unit = ideal_from_generators(P, O0, {P.elem(1, 0, 0, 0)});
    CHECK(right_order(P, unit.lattice) == O0);
    CHECK_THROWS_AS(ideal_from_generators(P, O0, {}), MalformedInput);
    CHECK_THROWS_AS(ideal_from_generators(P, O0, {P.elem(0, 0, 0, 0)}), MalformedInput);

    // Eichler order examples
    const QuatLattice e1 = eichler_order(P, NO);
    CHECK(e1.index_in(O0) == 11 * 11 * 11);
    CHECK(eichler_order(P, unit) == O0);
}

TEST_CASE("kernel ideals") {
    auto P = make_params(103, 11);
    const auto N = fac(11);
    const auto A = o0_structure_constants(P, N);
    const RingIso iso = explicit_isomorphism(A, 17);
    const QuatLattice O0 = o0_lattice();

    // v = (1, 0): contains N and every alpha whose matrix has zero first column
    const CyclicSubmodule e1(N, 1, 0);
    const QuatIdeal K1 = kernel_ideal(P, N, e1, iso);
    CHECK(lattice_contains(P, K1.lattice, P.elem(11, 0, 0, 0)));
    const CyclicSubmodule v12(N, 1, 2);
    const QuatIdeal K = kernel_ideal(P, N, v12, iso);
    CHECK(K.norm == 11);
    CHECK(is_cyclic(P, N, K));

    // brute force over O0 / 11 O0
    int count1 = 0, count12 = 0;
    for (int a = 0; a < 11; ++a) {
        for (int b = 0; b < 11; ++b) {
            for (int c = 0; c < 11; ++c) {
                for (int d = 0; d < 11; ++d) {
                    const IntVec co{a, b, c, d};
                    const MatModN M = matrix_of_element(iso, co);
                    const QuatElem x = P.from_o0(co);
                    const bool col = M(0, 0) == 0 && M(1, 0) == 0;
                    if (col) ++count1;
                    CHECK(lattice_contains(P, K1.lattice, x) == col);
                    const auto [u, w] = M.apply(1, 2);
                    const bool in12 = u == 0 && w == 0;
                    if (in12) ++count12;
                    CHECK(lattice_contains(P, K.lattice, x) == in12);
                }
            }
        }
    }
    // index N^2 means norm N for a maximal order
    CHECK(count1 == 121);
    CHECK(count12 == 121);

    // {alpha, N} generates the kernel ideal
    QuatElem alpha = P.elem(0, 0, 0, 0);
    for (const auto& b : basis_elems(P, K1.lattice)) {
        if (!lattice_contains(P, O0.scaled(11), b)) {
            alpha = b;
            break;
        }
    }
    const QuatIdeal Kg = ideal_from_generators(P, O0, {alpha, P.elem(11, 0, 0, 0)});
    CHECK(Kg.norm == 11);
    CHECK(Kg.lattice == K1.lattice);

    // right order is maximal; Eichler identity holds
    CHECK(order_discriminant(P, right_order(P, K.lattice)) == 103);
    CHECK(is_order(P, right_order(P, K.lattice)));
    const QuatLattice E = eichler_order(P, K);
    CHECK(E.index_in(O0) == 11);
}

TEST_CASE("kernel ideal norms and read-back for random v") {
    Rng rng(4);
    for (unsigned long n : {11UL, 15UL, 9UL, 45UL}) {
        const auto N = fac(n);
        auto P = make_params(103, N.value());
        const RingIso iso = explicit_isomorphism(o0_structure_constants(P, N), n);
        for (int t = 0; t < 50; ++t) {
            const CyclicSubmodule v = random_primitive(N, rng);
            const QuatIdeal I = kernel_ideal(P, N, v, iso);
            // gcd of norms of many random ideal elements
            Int g = 0;
            const auto b = basis_elems(P, I.lattice);
            for (int s = 0; s < 40; ++s) {
                QuatElem x = P.elem(0, 0, 0, 0);
                for (const auto& e : b) x = x + e * Rat(static_cast<long>(rng.range(-5, 5)));
                g = gcd(g, x.norm().get_num());
            }
            CHECK(g == Int(n));
            CHECK(I.norm == Int(n));
            CHECK(is_cyclic(P, N, I));
            CHECK(kernel_of_ideal(P, N, I, iso) == v);
        }
    }
    auto P = make_params(103, 15);
    const auto N = fac(15);
    const RingIso iso = explicit_isomorphism(o0_structure_constants(P, N), 1);
    CHECK_THROWS_AS(kernel_ideal(P, N, CyclicSubmodule(), iso), MalformedInput);
}

TEST_CASE("Eichler identity on random kernel ideals") {
    auto P = make_params(103, 11);
    const auto N = fac(11);
    const RingIso iso = explicit_isomorphism(o0_structure_constants(P, N), 5);
    Rng rng(6);
    for (int t = 0; t < 10; ++t) {
        const QuatIdeal I = kernel_ideal(P, N, random_primitive(N, rng), iso);
        const QuatLattice E = eichler_order(P, I);
        CHECK(E == left_order(P, I.lattice).intersect(right_order(P, I.lattice)));
    }
}

TEST_CASE("order frames") {
    auto P = make_params(103, 15);
    const auto N = fac(15);
    CHECK(order_structure_constants(P, o0_frame(P), N).tensor == o0_structure_constants(P, N).tensor);
    Rng rng(9);
    for (int t = 0; t < 5; ++t) {
        const QuatElem a = random_nonzero(P, rng);
        const QuatLattice O = conjugate_lattice(P, o0_lattice(), a);
        const OrderFrame F = order_frame(P, O);
        CHECK(F.basis[0] == P.elem(1, 0, 0, 0));
        const auto A = order_structure_constants(P, F, N);
        CHECK(A.verify());
        for (const auto& b : F.basis) {
            const auto c = F.coords(P, b);
            REQUIRE(c);
            CHECK(F.element(P, *c) == b);
        }
        const RingIso iso = explicit_isomorphism(A, t);
        const CyclicSubmodule v = random_primitive(N, rng);
        const QuatIdeal I = kernel_ideal_in(P, F, N, v, iso);
        CHECK(I.norm == 15);
        CHECK(left_order(P, I.lattice) == O);
        CHECK(kernel_of_ideal_in(P, F, N, I, iso) == v);
    }
}

TEST_CASE("connecting ideals") {
    auto P = make_params(103, 11);
    const QuatLattice O0 = o0_lattice();
    const QuatIdeal I0 = connecting_ideal(P, O0, O0);
    CHECK(I0.lattice == O0);

    // an element of norm 420
    QuatElem a = P.elem(0, 0, 0, 0);
    bool found = false;
    for (int x0 = -20; x0 <= 20 && !found; ++x0) {
        for (int x1 = -20; x1 <= 20 && !found; ++x1) {
            for (int x2 = -3; x2 <= 3 && !found; ++x2) {
                for (int x3 = -3; x3 <= 3 && !found; ++x3) {
                    const QuatElem c = P.from_o0({x0, x1, x2, x3});
                    if (c.norm() == 420) {
                        a = c;
                        found = true;
                    }
                }
            }
        }
    }
    REQUIRE(found);
    const QuatLattice O = conjugate_lattice(P, O0, a);
    const QuatIdeal I = connecting_ideal(P, O0, O);
    CHECK(left_order(P, I.lattice) == O0);
    CHECK(right_order(P, I.lattice) == O);
    CHECK(is_integral(P, I));

    Rng rng(12);
    for (int t = 0; t < 20; ++t) {
        const QuatLattice Oc = conjugate_lattice(P, O0, random_nonzero(P, rng, 6));
        const QuatIdeal J = connecting_ideal(P, O0, Oc);
        CHECK(O0.contains(J.lattice));
        CHECK(right_order(P, J.lattice) == Oc);
    }
    const QuatLattice nonmax = lattice_of(P, {P.elem(1, 0, 0, 0), P.elem(0, 1, 0, 0), P.elem(0, 0, 1, 0),
                                              P.elem(0, 0, 0, 1)});
    CHECK_THROWS_AS(connecting_ideal(P, O0, nonmax), MalformedInput);
}

TEST_CASE("equivalent coprime ideals") {
    auto P = make_params(103, 11);
    const QuatLattice O0 = o0_lattice();
    const QuatIdeal seven = ideal_from_generators(P, O0, {P.elem(7, 0, 0, 0)});
    const auto same = equivalent_coprime_ideal(P, seven, 11);
    CHECK(same.J == seven);
    CHECK(same.beta == P.elem(1, 0, 0, 0));

    const QuatIdeal NO = ideal_from_generators(P, O0, {P.elem(11, 0, 0, 0)});
    const auto r = equivalent_coprime_ideal(P, NO, 11);
    CHECK(gcd(r.J.norm.get_num(), Int(11)) == 1);
    CHECK(r.J.lattice == right_mul(P, NO.lattice, r.beta));

    const auto N = fac(11);
    const RingIso iso = explicit_isomorphism(o0_structure_constants(P, N), 3);
    Rng rng(13);
    for (int t = 0; t < 20; ++t) {
        QuatIdeal I = kernel_ideal(P, N, random_primitive(N, rng), iso);
        const auto e = equivalent_coprime_ideal(P, I, 11);
        CHECK(e.J.norm.get_den() == 1);
        CHECK(gcd(e.J.norm.get_num(), Int(11)) == 1);
        CHECK(left_order(P, e.J.lattice) == O0);
        CHECK(right_order(P, e.J.lattice) == conjugate_lattice(P, right_order(P, I.lattice), e.beta));
    }
}
