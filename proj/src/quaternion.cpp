#include "qlift/quaternion.hpp"

#include <cmath>
#include <sstream>

namespace qlift {

QuatElem::QuatElem(std::shared_ptr<const Algebra> alg, Int a, Int b, Int c, Int d, Int den)
    : alg_(std::move(alg)), num_{std::move(a), std::move(b), std::move(c), std::move(d)}, den_(std::move(den)) {
    if (!alg_) throw MalformedInput("quaternion element without an algebra");
    if (den_ == 0) throw MalformedInput("zero denominator");
    normalize();
}

QuatElem QuatElem::scalar(std::shared_ptr<const Algebra> alg, const Rat& r) {
    return QuatElem(std::move(alg), r.get_num(), 0, 0, 0, r.get_den());
}

void QuatElem::normalize() {
    if (den_ < 0) {
        den_ = -den_;
        for (auto& x : num_) x = -x;
    }
    Int g = den_;
    for (const auto& x : num_) g = gcd(g, x);
    if (g != 1) {
        den_ /= g;
        for (auto& x : num_) x /= g;
    }
}

void QuatElem::check_same(const QuatElem& o) const {
    if (!alg_ || !o.alg_) throw MalformedInput("uninitialised quaternion element");
    if (alg_ != o.alg_ && !(*alg_ == *o.alg_)) {
        throw MalformedInput("quaternion elements from different algebras");
    }
}

Rat QuatElem::coeff(int idx) const {
    Rat r(num_[idx], den_);
    r.canonicalize();
    return r;
}

QuatElem QuatElem::conj() const { return QuatElem(alg_, num_[0], -num_[1], -num_[2], -num_[3], den_); }

Rat QuatElem::norm() const {
    const Int& p = alg_->p;
    const Int& q = alg_->q;
    const auto& [a, b, c, d] = num_;
    Rat r(a * a + q * b * b + p * c * c + q * p * d * d, den_ * den_);
    r.canonicalize();
    return r;
}

Rat QuatElem::trace() const {
    Rat r(2 * num_[0], den_);
    r.canonicalize();
    return r;
}

QuatElem QuatElem::inverse() const {
    if (is_zero()) throw MalformedInput("inverse of zero");
    const Rat n = norm();
    return conj() * Rat(1 / n);
}

bool QuatElem::is_zero() const {
    for (const auto& x : num_) {
        if (x != 0) return false;
    }
    return true;
}

QuatElem QuatElem::operator+(const QuatElem& o) const {
    check_same(o);
    QuatElem r;
    r.alg_ = alg_;
    for (int t = 0; t < 4; ++t) r.num_[t] = num_[t] * o.den_ + o.num_[t] * den_;
    r.den_ = den_ * o.den_;
    r.normalize();
    return r;
}

QuatElem QuatElem::operator-(const QuatElem& o) const { return *this + (-o); }

QuatElem QuatElem::operator-() const { return QuatElem(alg_, -num_[0], -num_[1], -num_[2], -num_[3], den_); }

QuatElem QuatElem::operator*(const QuatElem& o) const {
    check_same(o);
    const Int& p = alg_->p;
    const Int& q = alg_->q;
    const auto& [a1, b1, c1, d1] = num_;
    const auto& [a2, b2, c2, d2] = o.num_;
    QuatElem r;
    r.alg_ = alg_;
    r.num_[0] = a1 * a2 - q * b1 * b2 - p * c1 * c2 - q * p * d1 * d2;
    r.num_[1] = a1 * b2 + b1 * a2 + p * (c1 * d2 - d1 * c2);
    r.num_[2] = a1 * c2 + c1 * a2 - q * b1 * d2 + q * d1 * b2;
    r.num_[3] = a1 * d2 + d1 * a2 + b1 * c2 - c1 * b2;
    r.den_ = den_ * o.den_;
    r.normalize();
    return r;
}

QuatElem QuatElem::operator*(const Rat& s) const {
    QuatElem r;
    r.alg_ = alg_;
    for (int t = 0; t < 4; ++t) r.num_[t] = num_[t] * s.get_num();
    r.den_ = den_ * s.get_den();
    r.normalize();
    return r;
}

bool QuatElem::operator==(const QuatElem& o) const {
    check_same(o);
    return num_ == o.num_ && den_ == o.den_;
}

std::string QuatElem::to_string() const {
    std::ostringstream os;
    os << "(" << num_[0] << " + " << num_[1] << "*i + " << num_[2] << "*j + " << num_[3] << "*k)";
    if (den_ != 1) os << "/" << den_;
    return os.str();
}

// ---------------------------------------------------------------------------

GaussElem gmul(const GaussElem& x, const GaussElem& y, const Int& q) {
    return {x.re * y.re - q * x.im * y.im, x.re * y.im + x.im * y.re};
}
GaussElem gconj(const GaussElem& x) { return {x.re, -x.im}; }
GaussElem gadd(const GaussElem& x, const GaussElem& y) { return {x.re + y.re, x.im + y.im}; }
GaussElem gsub(const GaussElem& x, const GaussElem& y) { return {x.re - y.re, x.im - y.im}; }
GaussElem gscale(const GaussElem& x, const Int& s) { return {x.re * s, x.im * s}; }
GaussElem gmod(const GaussElem& x, const Int& N) { return {mod(x.re, N), mod(x.im, N)}; }
Int gnorm(const GaussElem& x, const Int& q) { return x.re * x.re + q * x.im * x.im; }

// ---------------------------------------------------------------------------

QuatElem QuatParams::elem(const Int& a, const Int& b, const Int& c_, const Int& d, const Int& den) const {
    return QuatElem(alg, a, b, c_, d, den);
}

QuatElem QuatParams::from_gauss(const GaussElem& A, const GaussElem& B) const {
    return QuatElem(alg, A.re, A.im, B.re, B.im);
}

std::pair<IntVec, Int> QuatParams::o0_coords(const QuatElem& x) const {
    RatVec v(4, 0);
    for (int t = 0; t < 4; ++t) {
        const Rat xt = x.coeff(t);
        if (xt == 0) continue;
        for (int s = 0; s < 4; ++s) v[s] += xt * from_std[t][s];
    }
    Int l = 1;
    for (const auto& r : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), r.get_den_mpz_t());
    IntVec num;
    for (const auto& r : v) {
        Rat y = r * l;
        num.push_back(y.get_num());
    }
    return {num, l};
}

QuatElem QuatParams::from_o0(const IntVec& num, const Int& den) const {
    RatVec v(4, 0);
    for (int s = 0; s < 4; ++s) {
        if (num[s] == 0) continue;
        for (int t = 0; t < 4; ++t) v[t] += Rat(num[s]) * to_std[s][t];
    }
    Int l = den;
    for (const auto& r : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), r.get_den_mpz_t());
    std::array<Int, 4> out;
    for (int t = 0; t < 4; ++t) {
        Rat y = v[t] * l;
        out[t] = y.get_num();
    }
    return QuatElem(alg, out[0], out[1], out[2], out[3], l * den);
}

bool QuatParams::in_o0(const QuatElem& x) const { return o0_coords(x).second == 1; }

IntVec QuatParams::mul_o0(const IntVec& x, const IntVec& y) const {
    IntVec out(4, 0);
    for (int i = 0; i < 4; ++i) {
        if (x[i] == 0) continue;
        for (int j = 0; j < 4; ++j) {
            if (y[j] == 0) continue;
            const Int xy = x[i] * y[j];
            for (int k = 0; k < 4; ++k) {
                if (mult[i][j][k] != 0) out[k] += xy * mult[i][j][k];
            }
        }
    }
    return out;
}

namespace {

RatMat rat_inverse(const RatMat& m) {
    const std::size_t n = m.size();
    RatMat a = m;
    RatMat inv(n, RatVec(n, 0));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && a[piv][c] == 0) ++piv;
        if (piv == n) throw MalformedInput("singular matrix");
        std::swap(a[piv], a[c]);
        std::swap(inv[piv], inv[c]);
        const Rat f = a[c][c];
        for (std::size_t j = 0; j < n; ++j) {
            a[c][j] /= f;
            inv[c][j] /= f;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || a[r][c] == 0) continue;
            const Rat g = a[r][c];
            for (std::size_t j = 0; j < n; ++j) {
                a[r][j] -= g * a[c][j];
                inv[r][j] -= g * inv[c][j];
            }
        }
    }
    return inv;
}

RatVec std_coords(const QuatElem& x) { return {x.coeff(0), x.coeff(1), x.coeff(2), x.coeff(3)}; }

Int default_q_bound(const Int& p) {
    const double lp = std::log(2.0) * log2_of(p);
    const double b = 4 * lp * lp * std::log(lp);
    return Int(static_cast<unsigned long>(std::max(3.0, std::floor(b))));
}

}  // namespace

Rat reduced_discriminant(const std::array<QuatElem, 4>& basis) {
    RatMat g(4, RatVec(4));
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) g[i][j] = (basis[i] * basis[j].conj()).trace();
    }
    Int l = 1;
    for (const auto& r : g) {
        for (const auto& x : r) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
    }
    IntMat gi(4, IntVec(4));
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            Rat y = g[i][j] * l;
            gi[i][j] = y.get_num();
        }
    }
    Int d = abs(determinant(gi));
    Int l4;
    mpz_pow_ui(l4.get_mpz_t(), l.get_mpz_t(), 4);
    Rat disc(d, l4);
    disc.canonicalize();
    if (!is_square(disc.get_num()) || !is_square(disc.get_den())) {
        throw MalformedInput("discriminant is not a square");
    }
    Rat r(isqrt(disc.get_num()), isqrt(disc.get_den()));
    r.canonicalize();
    return r;
}

QuatParams make_params(const Int& p, const Int& N, const ParamsConfig& cfg) {
    if (p <= 2 || !is_probable_prime(p)) throw MalformedInput("p must be an odd prime");
    if (N < 1) throw MalformedInput("N must be positive");
    if (gcd(N, p) != 1) throw MalformedInput("N must be coprime to p");

    QuatParams P;
    P.p = p;
    P.c = 0;
    if (mod(p, 4) == 3) {
        P.q = 1;
    } else {
        const Int bound = cfg.q_bound > 0 ? cfg.q_bound : default_q_bound(p);
        Int q = 3;
        bool found = false;
        for (; q <= bound; q += 4) {
            if (!is_probable_prime(q)) continue;
            if (jacobi(-p, q) != 1) continue;
            if (gcd(q, N) != 1) continue;
            found = true;
            break;
        }
        if (!found) {
            throw MalformedInput("no auxiliary prime q <= " + to_string(bound) + " for p = " + to_string(p) +
                                 ", N = " + to_string(N));
        }
        P.q = q;
        auto c = sqrt_mod_prime(-p, q);
        QLIFT_CHECK(c.has_value(), "sqrt(-p) mod q");
        P.c = *c;
    }
    P.alg = std::make_shared<const Algebra>(Algebra{p, P.q});
    P.D = (P.q == 1) ? Int(4) : Int(4 * P.q);

    // generators of O0 in the standard frame
    std::vector<QuatElem> gens;
    if (P.q == 1) {
        gens = {P.elem(1, 0, 0, 0), P.elem(0, 1, 0, 0), P.elem(1, 0, 1, 0, 2), P.elem(0, 1, 0, 1, 2)};
    } else {
        gens = {P.elem(1, 0, 0, 0), P.elem(1, 1, 0, 0, 2), P.elem(0, 0, 1, 0), P.elem(0, P.c, 0, 1, P.q)};
    }

    // close under multiplication
    auto lattice_of = [](const std::vector<QuatElem>& xs) {
        RatMat rows;
        for (const auto& x : xs) rows.push_back(std_coords(x));
        return RatLattice::from_rat_rows(rows);
    };
    RatLattice L = lattice_of(gens);
    for (int round = 0;; ++round) {
        QLIFT_CHECK(round < 16, "order closure terminates");
        std::vector<QuatElem> cur;
        for (const auto& r : L.basis()) cur.push_back(P.elem(r[0], r[1], r[2], r[3], L.den()));
        std::vector<QuatElem> all = cur;
        for (const auto& x : cur) {
            for (const auto& y : cur) all.push_back(x * y);
        }
        RatLattice L2 = lattice_of(all);
        if (L2 == L) break;
        L = L2;
    }

    // lower-triangular canonical basis with 1 first: HNF in reversed coordinates
    IntMat rev;
    for (const auto& r : L.basis()) rev.push_back({r[3], r[2], r[1], r[0]});
    IntMat H = hnf(rev);
    for (int t = 0; t < 4; ++t) {
        const auto& r = H[3 - t];
        P.basis[t] = P.elem(r[3], r[2], r[1], r[0], L.den());
    }
    QLIFT_CHECK(P.basis[0] == P.elem(1, 0, 0, 0), "1 is the first O0 basis element");

    P.to_std.assign(4, RatVec(4));
    for (int t = 0; t < 4; ++t) P.to_std[t] = std_coords(P.basis[t]);
    P.from_std = rat_inverse(P.to_std);

    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            auto [coords, den] = P.o0_coords(P.basis[i] * P.basis[j]);
            QLIFT_CHECK(den == 1, "O0 is closed under multiplication");
            for (int k = 0; k < 4; ++k) P.mult[i][j][k] = coords[k];
        }
    }

    const Rat disc = reduced_discriminant(P.basis);
    QLIFT_CHECK(disc == Rat(p), "O0 has reduced discriminant p");
    // index of R + Rj = Z<1, i, j, k> in O0
    Rat covol = 1;
    for (int t = 0; t < 4; ++t) covol *= P.to_std[t][t];
    QLIFT_CHECK(Rat(1) / abs(covol) == Rat(P.D), "[O0 : R + Rj] = D");
    return P;
}

}  // namespace qlift
