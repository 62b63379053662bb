#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "qlift/matring.hpp"
#include "qlift/quaternion.hpp"

namespace qlift {

/// Rank-4 lattice in the O0 frame (O0 itself is the identity matrix).
using QuatLattice = RatLattice;

QuatLattice o0_lattice();
QuatLattice lattice_of(const QuatParams& P, const std::vector<QuatElem>& gens);
std::vector<QuatElem> basis_elems(const QuatParams& P, const QuatLattice& L);
bool lattice_contains(const QuatParams& P, const QuatLattice& L, const QuatElem& x);

QuatLattice left_mul(const QuatParams& P, const QuatElem& a, const QuatLattice& L);
QuatLattice right_mul(const QuatParams& P, const QuatLattice& L, const QuatElem& a);
/// Z-span of all products x y with x in L1, y in L2.
QuatLattice lattice_product(const QuatParams& P, const QuatLattice& L1, const QuatLattice& L2);
/// a^{-1} L a
QuatLattice conjugate_lattice(const QuatParams& P, const QuatLattice& L, const QuatElem& a);

/// Norm of a lattice: the positive rational generating the values of n(.)
/// on L, from gcd of n(b_i) and trd(b_i conj(b_j)).
Rat lattice_norm(const QuatParams& P, const QuatLattice& L);
/// Reduced discriminant of an order lattice.
Rat order_discriminant(const QuatParams& P, const QuatLattice& O);
bool is_order(const QuatParams& P, const QuatLattice& O);

struct QuatIdeal {
    QuatLattice lattice;
    QuatLattice left_order;
    Rat norm;

    bool operator==(const QuatIdeal& o) const { return lattice == o.lattice && left_order == o.left_order; }
};

QuatIdeal ideal_from_generators(const QuatParams& P, const QuatLattice& left_order,
                                const std::vector<QuatElem>& gens);
/// Wraps a lattice known to be a left ideal of `left_order`.
QuatIdeal make_ideal(const QuatParams& P, const QuatLattice& lattice, const QuatLattice& left_order);

QuatLattice left_order(const QuatParams& P, const QuatLattice& I);
QuatLattice right_order(const QuatParams& P, const QuatLattice& I);
/// Z + I, asserted equal to O_L(I) cap O_R(I) when I is primitive.
QuatLattice eichler_order(const QuatParams& P, const QuatIdeal& I);
bool is_integral(const QuatParams& P, const QuatIdeal& I);

/// A maximal order with a basis whose first element is 1; structure
/// constants and isomorphisms for O/NO are expressed in this basis.
struct OrderFrame {
    QuatLattice lattice;
    std::array<QuatElem, 4> basis;
    /// rows: basis elements in lattice-HNF coordinates, and the inverse
    IntMat to_hnf;
    IntMat from_hnf;

    /// Integer coordinates of x in `basis`, nullopt if x is not in the order.
    std::optional<IntVec> coords(const QuatParams& P, const QuatElem& x) const;
    QuatElem element(const QuatParams& P, const IntVec& c) const;
};

OrderFrame order_frame(const QuatParams& P, const QuatLattice& O);
/// O0 with its standard basis.
OrderFrame o0_frame(const QuatParams& P);
StructureConstants order_structure_constants(const QuatParams& P, const OrderFrame& O, const Factorization& N);

/// {a in O : M_a v = 0 mod N} + N O for the iso O/N O -> M_2(Z/N).
QuatIdeal kernel_ideal_in(const QuatParams& P, const OrderFrame& O, const Factorization& N,
                          const CyclicSubmodule& v, const RingIso& iso);
/// Reads the kernel submodule back from an ideal of norm N containing N O.
CyclicSubmodule kernel_of_ideal_in(const QuatParams& P, const OrderFrame& O, const Factorization& N,
                                   const QuatIdeal& I, const RingIso& iso);
/// kernel_ideal_in / kernel_of_ideal_in with O = O0.
QuatIdeal kernel_ideal(const QuatParams& P, const Factorization& N, const CyclicSubmodule& v, const RingIso& iso);
CyclicSubmodule kernel_of_ideal(const QuatParams& P, const Factorization& N, const QuatIdeal& I,
                                const RingIso& iso);
/// I is not contained in l O_L(I) for any l | N.
bool is_cyclic(const QuatParams& P, const Factorization& N, const QuatIdeal& I);

/// d O1 O2 with d the least positive integer making it integral in O1.
QuatIdeal connecting_ideal(const QuatParams& P, const QuatLattice& O1, const QuatLattice& O2);

struct EquivalentIdeal {
    QuatIdeal J;
    QuatElem beta;
};

/// J = I beta with gcd(n(J), N) = 1, beta = conj(chi)/n(I) for a short chi in I.
/// `accept` may impose further conditions on n(J).
EquivalentIdeal equivalent_coprime_ideal(const QuatParams& P, const QuatIdeal& I, const Int& N,
                                         const std::function<bool(const Int&)>& accept = {},
                                         unsigned max_rounds = 24);

}  // namespace qlift
