#include "qlift/matmod.hpp"

#include <sstream>

namespace qlift {

MatModN::MatModN(Int N, Int a, Int b, Int c, Int d) : N_(std::move(N)) {
    if (N_ < 1) throw MalformedInput("matrix modulus must be positive");
    e_ = {mod(a, N_), mod(b, N_), mod(c, N_), mod(d, N_)};
}

MatModN MatModN::identity(const Int& N) { return MatModN(N, 1, 0, 0, 1); }

MatModN MatModN::scalar(const Int& N, const Int& s) { return MatModN(N, s, 0, 0, s); }

Int MatModN::det() const { return mod(e_[0] * e_[3] - e_[1] * e_[2], N_); }

bool MatModN::is_invertible() const { return gcd(det(), N_) == 1; }

MatModN MatModN::inverse() const {
    const Int di = inv_mod(det(), N_);
    return MatModN(N_, e_[3] * di, -e_[1] * di, -e_[2] * di, e_[0] * di);
}

MatModN MatModN::operator*(const MatModN& o) const {
    if (N_ != o.N_) throw MalformedInput("matrix moduli differ");
    return MatModN(N_, e_[0] * o.e_[0] + e_[1] * o.e_[2], e_[0] * o.e_[1] + e_[1] * o.e_[3],
                   e_[2] * o.e_[0] + e_[3] * o.e_[2], e_[2] * o.e_[1] + e_[3] * o.e_[3]);
}

MatModN MatModN::operator+(const MatModN& o) const {
    if (N_ != o.N_) throw MalformedInput("matrix moduli differ");
    return MatModN(N_, e_[0] + o.e_[0], e_[1] + o.e_[1], e_[2] + o.e_[2], e_[3] + o.e_[3]);
}

MatModN MatModN::operator-(const MatModN& o) const {
    if (N_ != o.N_) throw MalformedInput("matrix moduli differ");
    return MatModN(N_, e_[0] - o.e_[0], e_[1] - o.e_[1], e_[2] - o.e_[2], e_[3] - o.e_[3]);
}

MatModN MatModN::scaled(const Int& s) const { return MatModN(N_, e_[0] * s, e_[1] * s, e_[2] * s, e_[3] * s); }

std::pair<Int, Int> MatModN::apply(const Int& x, const Int& y) const {
    return {mod(e_[0] * x + e_[1] * y, N_), mod(e_[2] * x + e_[3] * y, N_)};
}

MatModN MatModN::reduce(const Int& divisor) const {
    if (N_ % divisor != 0) throw MalformedInput("reduction modulus must divide N");
    return MatModN(divisor, e_[0], e_[1], e_[2], e_[3]);
}

std::string MatModN::to_string() const {
    std::ostringstream os;
    os << "[[" << e_[0] << "," << e_[1] << "],[" << e_[2] << "," << e_[3] << "]] mod " << N_;
    return os.str();
}

MatModN random_invertible(const Int& N, Rng& rng) {
    for (;;) {
        MatModN m(N, rng.below(N), rng.below(N), rng.below(N), rng.below(N));
        if (m.is_invertible()) return m;
    }
}

// ---------------------------------------------------------------------------

bool is_primitive(const Factorization& N, const Int& x, const Int& y) {
    for (const auto& f : N.factors()) {
        if (x % f.prime == 0 && y % f.prime == 0) return false;
    }
    return true;
}

CyclicSubmodule::CyclicSubmodule(const Factorization& N, const Int& x, const Int& y)
    : fac_(N), N_(N.value()) {
    if (!is_primitive(N, x, y)) {
        throw MalformedInput("(" + qlift::to_string(x) + ", " + qlift::to_string(y) + ") is not primitive modulo " +
                             qlift::to_string(N_));
    }
    std::vector<Residue> xs, ys;
    for (const auto& f : N.factors()) {
        const Int m = f.value();
        Int a = mod(x, m), b = mod(y, m);
        const Int s = (a % f.prime != 0) ? inv_mod(a, m) : inv_mod(b, m);
        xs.push_back({mod(a * s, m), m});
        ys.push_back({mod(b * s, m), m});
    }
    x_ = crt_combine(xs).value;
    y_ = crt_combine(ys).value;
    if (N_ == 1) {
        x_ = 0;
        y_ = 0;
    }
}

bool CyclicSubmodule::contains(const Int& u1, const Int& u2) const {
    for (const auto& f : fac_.factors()) {
        const Int m = f.value();
        const Int vx = mod(x_, m), vy = mod(y_, m);
        Int s;
        if (vx % f.prime != 0) {
            s = mod(u1 * inv_mod(vx, m), m);
        } else {
            s = mod(u2 * inv_mod(vy, m), m);
        }
        if (mod(s * vx - u1, m) != 0 || mod(s * vy - u2, m) != 0) return false;
    }
    return true;
}

CyclicSubmodule CyclicSubmodule::image(const MatModN& M) const {
    const auto [a, b] = M.apply(x_, y_);
    return CyclicSubmodule(fac_, a, b);
}

Int count_cyclic_submodules(const Factorization& N) {
    Int r = 1;
    for (const auto& f : N.factors()) {
        PrimePower lower{f.prime, f.exponent - 1};
        r *= (f.prime + 1) * lower.value();
    }
    return r;
}

}  // namespace qlift
