#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>

#include "qlift/arith.hpp"
#include "qlift/lattice.hpp"

namespace qlift {

/// The algebra B_{p,inf} with i^2 = -q, j^2 = -p, k = ij = -ji.
struct Algebra {
    Int p;
    Int q;
    bool operator==(const Algebra&) const = default;
};

/// (a + b i + c j + d k) / den in lowest terms with den > 0.
class QuatElem {
public:
    QuatElem() = default;
    QuatElem(std::shared_ptr<const Algebra> alg, Int a, Int b, Int c, Int d, Int den = 1);
    static QuatElem scalar(std::shared_ptr<const Algebra> alg, const Rat& r);

    const Algebra& algebra() const { return *alg_; }
    const std::shared_ptr<const Algebra>& algebra_ptr() const { return alg_; }
    const std::array<Int, 4>& num() const { return num_; }
    const Int& den() const { return den_; }
    Rat coeff(int idx) const;

    QuatElem conj() const;
    Rat norm() const;
    Rat trace() const;
    QuatElem inverse() const;
    bool is_zero() const;
    bool is_integral_coords() const { return den_ == 1; }

    QuatElem operator+(const QuatElem& o) const;
    QuatElem operator-(const QuatElem& o) const;
    QuatElem operator-() const;
    QuatElem operator*(const QuatElem& o) const;
    QuatElem operator*(const Rat& r) const;
    bool operator==(const QuatElem& o) const;

    std::string to_string() const;

private:
    void normalize();
    void check_same(const QuatElem& o) const;

    std::shared_ptr<const Algebra> alg_;
    std::array<Int, 4> num_{0, 0, 0, 0};
    Int den_ = 1;
};

/// re + im * i in R = Z[i] with i^2 = -q.
struct GaussElem {
    Int re = 0;
    Int im = 0;
    bool operator==(const GaussElem&) const = default;
};

GaussElem gmul(const GaussElem& x, const GaussElem& y, const Int& q);
GaussElem gconj(const GaussElem& x);
GaussElem gadd(const GaussElem& x, const GaussElem& y);
GaussElem gsub(const GaussElem& x, const GaussElem& y);
GaussElem gscale(const GaussElem& x, const Int& s);
GaussElem gmod(const GaussElem& x, const Int& N);
Int gnorm(const GaussElem& x, const Int& q);

/// Structure constants: b_i b_j = sum_k mult[i][j][k] b_k.
using MultTable = std::array<std::array<std::array<Int, 4>, 4>, 4>;

struct QuatParams {
    Int p;
    Int q;
    /// [O0 : R + Rj]
    Int D;
    /// root of x^2 + p mod q used for O0 when p = 1 mod 4 (0 otherwise)
    Int c;
    std::shared_ptr<const Algebra> alg;
    /// O0 basis; basis[0] = 1.
    std::array<QuatElem, 4> basis;
    /// rows = basis elements in the standard frame (1, i, j, k)
    RatMat to_std;
    RatMat from_std;
    MultTable mult;

    QuatElem elem(const Int& a, const Int& b, const Int& c, const Int& d, const Int& den = 1) const;
    QuatElem from_gauss(const GaussElem& A, const GaussElem& B) const;
    /// Coordinates in the O0 basis as (numerators, common denominator).
    std::pair<IntVec, Int> o0_coords(const QuatElem& x) const;
    QuatElem from_o0(const IntVec& num, const Int& den = 1) const;
    bool in_o0(const QuatElem& x) const;
    /// Product of two integral O0-coordinate vectors via the structure constants.
    IntVec mul_o0(const IntVec& x, const IntVec& y) const;
};

struct ParamsConfig {
    /// Upper bound for the auxiliary prime q; 0 selects 4 log^2 p loglog p.
    Int q_bound = 0;
};

/// Parameters for p and a modulus N (q is chosen coprime to N).
QuatParams make_params(const Int& p, const Int& N, const ParamsConfig& cfg = {});

/// Reduced discriminant of a rank-4 lattice given in the standard frame:
/// sqrt(|det(trd(b_i conj(b_j)))|).
Rat reduced_discriminant(const std::array<QuatElem, 4>& basis);

}  // namespace qlift
