#include "doctest.h"

#include <set>

#include "qlift/iserp.hpp"

using namespace qlift;

namespace {

Factorization fac(unsigned long n) { return Factorization::trial(Int(n)); }

std::vector<MatModN> all_invertible(unsigned long n) {
    std::vector<MatModN> out;
    for (unsigned long a = 0; a < n; ++a)
        for (unsigned long b = 0; b < n; ++b)
            for (unsigned long c = 0; c < n; ++c)
                for (unsigned long d = 0; d < n; ++d) {
                    MatModN M(n, a, b, c, d);
                    if (M.is_invertible()) out.push_back(M);
                }
    return out;
}

/// A maximal order whose N-neighbours are pairwise non-isomorphic.
std::optional<QuatLattice> generic_base(const QuatParams& P, const Factorization& N) {
    for (unsigned long ell : {2UL, 5UL, 7UL, 11UL, 13UL}) {
        const auto L = fac(ell);
        auto P2 = make_params(P.p, Int(ell));
        const IsERPInstance step = plant_instance(P2, L, ell);
        const QuatLattice O = right_order(P2, step.ideal.lattice);
        PlantOptions opt;
        opt.base_order = O;
        const IsERPInstance probe = plant_instance(P, N, 1, opt);
        std::set<std::string> labels;
        std::size_t count = 0;
        for (unsigned long t = 0; t <= N.value().get_ui(); ++t) {
            const CyclicSubmodule S = t < N.value() ? CyclicSubmodule(N, 1, t) : CyclicSubmodule(N, 0, 1);
            const auto I = with_secret(probe, S).ideal;
            labels.insert(order_invariant_label(P, right_order(P, I.lattice)));
            ++count;
        }
        if (labels.size() == count) return O;
    }
    return std::nullopt;
}

}  // namespace

TEST_CASE("planting") {
    auto P = make_params(103, 15);
    const auto inst = plant_instance(P, fac(15), 4);
    CHECK(inst.ideal.norm == 15);
    CHECK(is_cyclic(P, fac(15), inst.ideal));
    for (unsigned long ell : {3UL, 5UL}) {
        CHECK_FALSE(o0_lattice().scaled(Rat(ell)).contains(inst.ideal.lattice));
    }
    PlantOptions opt;
    opt.forced_secret = CyclicSubmodule(fac(15), 1, 0);
    const auto col = plant_instance(P, fac(15), 4, opt);
    CHECK(col.secret == CyclicSubmodule(fac(15), 1, 0));
    CHECK(kernel_of_ideal(P, fac(15), col.ideal, col.iso) == col.secret);
    CHECK(plant_instance(P, fac(15), 4).ideal == inst.ideal);
}

TEST_CASE("group action on ideals") {
    auto P = make_params(103, 15);
    const auto F = fac(15);
    const auto inst = plant_instance(P, F, 9);
    CHECK(act(inst, MatModN::identity(15)) == inst.ideal);
    CHECK(act(inst, MatModN::scalar(15, 7)) == inst.ideal);
    Rng rng(5);
    for (int t = 0; t < 50; ++t) CHECK_NOTHROW(act(inst, random_invertible(Int(15), rng)));
    for (int t = 0; t < 100; ++t) {
        const MatModN A = random_invertible(Int(15), rng), B = random_invertible(Int(15), rng);
        const auto moved = with_secret(inst, inst.secret.image(B));
        CHECK(act(inst, A * B) == act(moved, A));
    }
}

TEST_CASE("hiding oracle level sets") {
    auto P = make_params(103, 15);
    const auto F = fac(15);
    const auto inst = plant_instance(P, F, 2);
    IsERPOracle f(inst, OracleMode::IdealHnf);
    const std::string id = f(MatModN::identity(15));
    Rng rng(8);
    for (int t = 0; t < 20; ++t) CHECK(f(random_stabilizer_element(inst.secret, rng)) == id);
    int moved = 0;
    for (int t = 0; t < 20; ++t) {
        const MatModN M = random_invertible(Int(15), rng);
        if (inst.secret.image(M) == inst.secret) continue;
        ++moved;
        CHECK(f(M) != id);
    }
    CHECK(moved > 0);
    CHECK(eichler_stabilizer_check(inst, 20, rng));
}

TEST_CASE("order-invariant label") {
    auto P = make_params(103, 3);
    const QuatLattice O = o0_lattice();
    const QuatElem a = P.elem(1, 2, 1, 0);
    const QuatLattice conj = conjugate_lattice(P, O, a);
    CHECK(conj != O);
    CHECK(order_invariant_label(P, conj) == order_invariant_label(P, O));

    const auto base = generic_base(P, fac(3));
    REQUIRE(base.has_value());
    CHECK(order_invariant_label(P, *base) != order_invariant_label(P, O));
    PlantOptions opt;
    opt.base_order = *base;
    const auto inst = plant_instance(P, fac(3), 11, opt);
    const auto mats = all_invertible(3);
    CHECK(mats.size() == 48);
    CHECK(oracle_partitions_agree(inst, mats));

    opt.mode = OracleMode::OrderInvariant;
    const auto inv = plant_instance(P, fac(3), 12, opt);
    const auto t = run_attack(inv, 3);
    CHECK(t.ok());
}

TEST_CASE("attack") {
    for (unsigned long p : {103UL, 1019UL}) {
        auto P = make_params(p, 15);
        const auto inst = plant_instance(P, fac(15), 1);
        const auto t = run_attack(inst, 1);
        CHECK(t.ok());
        CHECK(t.recovered == inst.secret);
        CHECK(t.oracle_calls > 0);
    }
    auto P2 = make_params(103, 2);
    for (std::uint64_t s = 0; s < 3; ++s) {
        const auto inst = plant_instance(P2, fac(2), s);
        CHECK(run_attack(inst, s).ok());
    }
    auto P45 = make_params(103, 45);
    CHECK(run_attack(plant_instance(P45, fac(45), 6), 6).ok());
}

TEST_CASE("PQLP round trip") {
    auto P = make_params(103, 11);
    const auto inst = plant_instance(P, fac(11), 3);
    LiftConfig cfg;
    cfg.seed = 4;
    const auto id = pqlp_roundtrip_demo(inst, MatModN::identity(11), cfg);
    CHECK(id.matrix_ok);
    CHECK(id.lift_ok);
    Rng rng(6);
    for (int t = 0; t < 3; ++t) {
        const auto r = pqlp_roundtrip_demo(inst, random_invertible(Int(11), rng), cfg);
        CHECK(r.matrix_ok);
        CHECK(r.lift_ok);
    }
    auto P15 = make_params(103, 15);
    const auto i15 = plant_instance(P15, fac(15), 3);
    for (int t = 0; t < 3; ++t) {
        const auto r = pqlp_roundtrip_demo(i15, random_invertible(Int(15), rng), cfg);
        CHECK(r.matrix_ok);
        CHECK(r.lift_ok);
    }
    CHECK_THROWS_AS(pqlp_roundtrip_demo(i15, MatModN(15, 3, 0, 0, 1), cfg), MalformedInput);
}
