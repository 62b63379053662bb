#pragma once

#include <array>
#include <string>

#include "qlift/arith.hpp"

namespace qlift {

/// 2x2 matrix [[a, b], [c, d]] over Z/N, entries kept in [0, N).
class MatModN {
public:
    MatModN() = default;
    MatModN(Int N, Int a, Int b, Int c, Int d);
    static MatModN identity(const Int& N);
    static MatModN scalar(const Int& N, const Int& s);

    const Int& modulus() const { return N_; }
    const Int& operator()(int r, int c) const { return e_[2 * r + c]; }
    const std::array<Int, 4>& entries() const { return e_; }

    Int det() const;
    bool is_invertible() const;
    MatModN inverse() const;
    MatModN operator*(const MatModN& o) const;
    MatModN operator+(const MatModN& o) const;
    MatModN operator-(const MatModN& o) const;
    MatModN scaled(const Int& s) const;
    /// M * (x, y)^T
    std::pair<Int, Int> apply(const Int& x, const Int& y) const;
    /// The same matrix reduced modulo a divisor of N.
    MatModN reduce(const Int& divisor) const;
    bool operator==(const MatModN& o) const = default;

    std::string to_string() const;

private:
    Int N_ = 1;
    std::array<Int, 4> e_{0, 0, 0, 0};
};

/// Uniformly random invertible matrix modulo N.
MatModN random_invertible(const Int& N, Rng& rng);

/// A free cyclic submodule of (Z/N)^2 given by a primitive generator in
/// canonical form: modulo each prime-power factor the lowest-index unit
/// coordinate is scaled to 1; components are recombined by CRT.
class CyclicSubmodule {
public:
    CyclicSubmodule() = default;
    /// Throws MalformedInput if (x, y) is not primitive modulo N.
    CyclicSubmodule(const Factorization& N, const Int& x, const Int& y);

    const Int& modulus() const { return N_; }
    const Factorization& factorization() const { return fac_; }
    const Int& x() const { return x_; }
    const Int& y() const { return y_; }
    /// Membership of (u1, u2) in the submodule.
    bool contains(const Int& u1, const Int& u2) const;
    CyclicSubmodule image(const MatModN& M) const;
    bool operator==(const CyclicSubmodule& o) const { return N_ == o.N_ && x_ == o.x_ && y_ == o.y_; }

private:
    Factorization fac_;
    Int N_ = 1;
    Int x_ = 0;
    Int y_ = 0;
};

bool is_primitive(const Factorization& N, const Int& x, const Int& y);

/// Number of primitive submodules (projective line size) of (Z/N)^2.
Int count_cyclic_submodules(const Factorization& N);

}  // namespace qlift
