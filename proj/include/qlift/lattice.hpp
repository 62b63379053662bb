#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "qlift/arith.hpp"

namespace qlift {

using Rat = mpq_class;
using IntVec = std::vector<Int>;
using IntMat = std::vector<IntVec>;
using RatVec = std::vector<Rat>;
using RatMat = std::vector<RatVec>;

IntMat identity_matrix(std::size_t n);
IntMat transpose(const IntMat& m);
IntMat mat_mul(const IntMat& a, const IntMat& b);
/// Determinant of a square integer matrix (fraction-free elimination).
Int determinant(const IntMat& m);
/// adj(m) with m * adj(m) = det(m) * I.
IntMat adjugate(const IntMat& m);
/// Rank of the row span over the rationals.
std::size_t rank(const IntMat& rows);

/// Unimodular U with first row c (c primitive: gcd of entries 1).
IntMat unimodular_with_first_row(const IntVec& c);

/// Canonical row Hermite normal form of a full-rank row set of width n:
/// n x n upper triangular, positive pivots, entries above each pivot reduced
/// into [0, pivot). Throws MalformedInput if the rows do not span rank n.
IntMat hnf(const IntMat& rows);

/// A full-rank lattice (1/den) * rowspan(basis) in Q^n with basis in HNF and
/// gcd(basis entries, den) = 1, so equality of lattices is equality of the
/// stored data.
class RatLattice {
public:
    RatLattice() = default;
    static RatLattice from_rows(const IntMat& rows, const Int& den = 1);
    static RatLattice from_rat_rows(const RatMat& rows);

    std::size_t dim() const { return basis_.size(); }
    const IntMat& basis() const { return basis_; }
    const Int& den() const { return den_; }
    RatMat rat_basis() const;

    /// |det| of the basis as a rational (covolume w.r.t. the standard frame).
    Rat covolume() const;

    /// Integer coefficients of num/den w.r.t. the basis, or nullopt if the
    /// vector is outside the lattice.
    std::optional<IntVec> coords(const IntVec& num, const Int& den) const;
    bool contains(const IntVec& num, const Int& den) const { return coords(num, den).has_value(); }
    bool contains(const RatLattice& other) const;

    RatLattice scaled(const Rat& c) const;
    /// Dual w.r.t. the standard dot product.
    RatLattice dual() const;
    RatLattice operator+(const RatLattice& other) const;
    RatLattice intersect(const RatLattice& other) const;
    /// [other : this] for this a sublattice of other.
    Int index_in(const RatLattice& other) const;

    bool operator==(const RatLattice& o) const = default;

private:
    RatLattice(IntMat basis, Int den) : basis_(std::move(basis)), den_(std::move(den)) {}
    IntMat basis_;
    Int den_ = 1;
};

/// Exact LLL (delta = 3/4) of the integer rows of `basis` w.r.t. the
/// positive definite rational form `gram` on coordinates. Returns the reduced
/// basis (same lattice).
IntMat lll_reduce(const IntMat& basis, const RatMat& gram);

/// Gram matrix b_i^T G b_j of integer rows.
RatMat gram_of(const IntMat& basis, const RatMat& gram);

/// All nonzero integer vectors x (up to sign: first nonzero entry positive)
/// with x^T G x <= bound, G positive definite of small dimension.
std::vector<IntVec> short_vectors(const RatMat& G, const Rat& bound);

}  // namespace qlift
