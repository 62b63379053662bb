#pragma once

#include <array>

#include "qlift/matmod.hpp"
#include "qlift/quaternion.hpp"

namespace qlift {

using Tensor = std::array<std::array<std::array<Int, 4>, 4>, 4>;

/// A rank-4 algebra over Z/N presented by structure constants:
/// b_i b_j = sum_k tensor[i][j][k] b_k, with b_one the identity.
struct StructureConstants {
    Factorization N;
    Tensor tensor;
    int one = 0;

    const Int modulus() const { return N.value(); }
    IntVec mul(const IntVec& x, const IntVec& y) const;
    IntVec unit() const;
    /// Checks associativity on all basis triples and the identity axioms.
    bool verify() const;
    /// The same algebra reduced modulo a divisor d of N.
    StructureConstants reduce(const Factorization& d) const;
};

/// Structure constants of O0 / N O0 in the O0 basis.
StructureConstants o0_structure_constants(const QuatParams& P, const Factorization& N);
/// M_2(Z/N) in the basis {I, E12, E21, E11} (one = 0).
StructureConstants standard_matrix_algebra(const Factorization& N);
/// Presentation of the same algebra in the basis c_i = sum_j U[i][j] b_j for
/// U invertible mod N with row `one` equal to the old identity vector.
StructureConstants change_basis(const StructureConstants& A, const IntMat& U);
/// Random change of basis keeping the identity as a basis element.
StructureConstants scramble(const StructureConstants& A, Rng& rng, IntMat* used = nullptr);

struct RingIso {
    Int N;
    /// images of the four basis elements
    std::array<MatModN, 4> forward;
    /// rows: basis coordinates of E11, E12, E21, E22
    IntMat backward;
};

/// Nontrivial idempotent of A (A modulo a prime l, A isomorphic to M_2(F_l))
/// by random splitting elements. Throws BudgetExhausted after `budget` samples.
IntVec idempotent_mod_prime(const StructureConstants& A, Rng& rng, unsigned budget = 200);

/// Lifts an idempotent e0 modulo l to modulo l^k (A is given modulo l^k).
IntVec hensel_lift_idempotent(const StructureConstants& A, const IntVec& e0);

/// Explicit isomorphism A -> M_2(Z/N), verified before returning.
RingIso explicit_isomorphism(const StructureConstants& A, std::uint64_t seed);

/// Throws InternalError unless iso is multiplicative, unital and bijective.
void verify_iso(const StructureConstants& A, const RingIso& iso);

MatModN matrix_of_element(const RingIso& iso, const IntVec& coords);
IntVec element_of_matrix(const RingIso& iso, const MatModN& M);

}  // namespace qlift
