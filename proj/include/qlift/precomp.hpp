#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qlift/pqlp.hpp"

namespace qlift {

/// M = P U1 L Dg U2. For prime N: U1 = I and P is I or the swap. Otherwise
/// P = I and U1 is the shear by -k with a + k c a unit.
struct PlduDecomposition {
    Int k = 0;
    bool swapped = false;
    MatModN P, U1, L, Dg, U2;

    MatModN product() const { return P * U1 * L * Dg * U2; }
};

PlduDecomposition matrix_pldu_decompose(const MatModN& M, const Factorization& N);

struct PrecompEntry {
    /// "L", "U", "C", "D" (prime N); "L", "U", "S", "D<i>" otherwise; "P" for the swap
    std::string family;
    unsigned k = 0;
    MatModN matrix;
    LiftResult lift;
};

struct PrecompTable {
    Factorization N;
    Int bound;
    /// prime N: a primitive root; otherwise one CRT-embedded generator per prime power
    std::vector<Int> generators;
    unsigned bits = 0;
    std::vector<PrecompEntry> entries;
    std::optional<PrecompEntry> swap;

    const PrecompEntry& entry(const std::string& family, unsigned k) const;
    std::vector<std::string> families() const;
};

PrecompTable precompute_lift_table(const QuatParams& P, const Factorization& N, const RingIso& iso,
                                   const LiftConfig& cfg);

/// Lift of element_of_matrix(iso, M) from table entries; `factors` receives
/// the number of entries multiplied.
LiftResult precomputed_lift(const QuatParams& P, const PrecompTable& table, const RingIso& iso, const MatModN& M,
                            unsigned* factors = nullptr);

}  // namespace qlift
