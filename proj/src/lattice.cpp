#include "qlift/lattice.hpp"

#include <cmath>

namespace qlift {

IntMat identity_matrix(std::size_t n) {
    IntMat m(n, IntVec(n, 0));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

IntMat transpose(const IntMat& m) {
    if (m.empty()) return {};
    IntMat t(m[0].size(), IntVec(m.size()));
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t j = 0; j < m[0].size(); ++j) t[j][i] = m[i][j];
    }
    return t;
}

IntMat mat_mul(const IntMat& a, const IntMat& b) {
    const std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    IntMat c(n, IntVec(m, 0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t l = 0; l < k; ++l) {
            if (a[i][l] == 0) continue;
            for (std::size_t j = 0; j < m; ++j) c[i][j] += a[i][l] * b[l][j];
        }
    }
    return c;
}

Int determinant(const IntMat& m_in) {
    const std::size_t n = m_in.size();
    if (n == 0) return 1;
    IntMat m = m_in;
    Int prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            std::size_t r = k + 1;
            while (r < n && m[r][k] == 0) ++r;
            if (r == n) return 0;
            std::swap(m[k], m[r]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

IntMat adjugate(const IntMat& m) {
    const std::size_t n = m.size();
    IntMat adj(n, IntVec(n));
    if (n == 1) {
        adj[0][0] = 1;
        return adj;
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            IntMat minor;
            for (std::size_t r = 0; r < n; ++r) {
                if (r == i) continue;
                IntVec row;
                for (std::size_t c = 0; c < n; ++c) {
                    if (c != j) row.push_back(m[r][c]);
                }
                minor.push_back(std::move(row));
            }
            const Int d = determinant(minor);
            adj[j][i] = ((i + j) % 2 == 0) ? d : Int(-d);
        }
    }
    return adj;
}

namespace {

// Indices of a maximal independent subset of rows (greedy, in order).
std::vector<std::size_t> independent_rows(const IntMat& rows) {
    std::vector<std::size_t> picked;
    if (rows.empty()) return picked;
    const std::size_t n = rows[0].size();
    std::vector<RatVec> echelon;
    std::vector<std::size_t> pivots;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        RatVec v(n);
        for (std::size_t j = 0; j < n; ++j) v[j] = rows[r][j];
        for (std::size_t e = 0; e < echelon.size(); ++e) {
            const std::size_t pc = pivots[e];
            if (v[pc] != 0) {
                const Rat f = v[pc] / echelon[e][pc];
                for (std::size_t j = 0; j < n; ++j) v[j] -= f * echelon[e][j];
            }
        }
        std::size_t pc = 0;
        while (pc < n && v[pc] == 0) ++pc;
        if (pc == n) continue;
        echelon.push_back(std::move(v));
        pivots.push_back(pc);
        picked.push_back(r);
        if (picked.size() == n) break;
    }
    return picked;
}

}  // namespace

std::size_t rank(const IntMat& rows) { return independent_rows(rows).size(); }

IntMat hnf(const IntMat& rows) {
    if (rows.empty()) throw MalformedInput("hnf of an empty row set");
    const std::size_t n = rows[0].size();
    const auto idx = independent_rows(rows);
    if (idx.size() < n) throw MalformedInput("row set is rank deficient");
    IntMat sub;
    for (auto i : idx) sub.push_back(rows[i]);
    const Int d = abs(determinant(sub));

    // d * Z^n lies in the lattice, so all work can be done modulo d.
    IntMat H(n, IntVec(n, 0));
    for (std::size_t i = 0; i < n; ++i) H[i][i] = d;

    for (const auto& row : rows) {
        IntVec v(n);
        for (std::size_t j = 0; j < n; ++j) v[j] = mod(row[j], d);
        for (std::size_t j = 0; j < n; ++j) {
            if (v[j] == 0) continue;
            Int g, a, b;
            mpz_gcdext(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t(), H[j][j].get_mpz_t(), v[j].get_mpz_t());
            const Int hj = H[j][j] / g;
            const Int vj = v[j] / g;
            IntVec nh(n), nv(n);
            for (std::size_t c = j; c < n; ++c) {
                nh[c] = a * H[j][c] + b * v[c];
                nv[c] = hj * v[c] - vj * H[j][c];
            }
            for (std::size_t c = j + 1; c < n; ++c) {
                nh[c] = mod(nh[c], d);
                nv[c] = mod(nv[c], d);
            }
            nv[j] = 0;
            for (std::size_t c = 0; c < j; ++c) {
                nh[c] = 0;
                nv[c] = 0;
            }
            H[j] = std::move(nh);
            v = std::move(nv);
        }
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (H[j][j] < 0) {
            for (auto& x : H[j]) x = -x;
        }
    }
    for (std::size_t j = 1; j < n; ++j) {
        for (std::size_t i = 0; i < j; ++i) {
            Int q;
            mpz_fdiv_q(q.get_mpz_t(), H[i][j].get_mpz_t(), H[j][j].get_mpz_t());
            if (q != 0) {
                for (std::size_t c = j; c < n; ++c) H[i][c] -= q * H[j][c];
            }
        }
    }
    return H;
}

// ---------------------------------------------------------------------------

RatLattice RatLattice::from_rows(const IntMat& rows, const Int& den) {
    if (den == 0) throw MalformedInput("zero lattice denominator");
    IntMat H = hnf(rows);
    Int g = abs(den);
    for (const auto& r : H) {
        for (const auto& x : r) g = gcd(g, x);
    }
    Int d = abs(den) / g;
    if (g != 1) {
        for (auto& r : H) {
            for (auto& x : r) x /= g;
        }
    }
    return RatLattice(std::move(H), std::move(d));
}

RatLattice RatLattice::from_rat_rows(const RatMat& rows) {
    Int l = 1;
    for (const auto& r : rows) {
        for (const auto& x : r) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
    }
    IntMat ints;
    for (const auto& r : rows) {
        IntVec v;
        for (const auto& x : r) {
            Rat y = x * l;
            v.push_back(y.get_num());
        }
        ints.push_back(std::move(v));
    }
    return from_rows(ints, l);
}

RatMat RatLattice::rat_basis() const {
    RatMat out;
    for (const auto& r : basis_) {
        RatVec v;
        for (const auto& x : r) {
            Rat y(x, den_);
            y.canonicalize();
            v.push_back(y);
        }
        out.push_back(std::move(v));
    }
    return out;
}

Rat RatLattice::covolume() const {
    Int num = 1;
    for (std::size_t i = 0; i < dim(); ++i) num *= basis_[i][i];
    Int d;
    mpz_pow_ui(d.get_mpz_t(), den_.get_mpz_t(), dim());
    Rat r(num, d);
    r.canonicalize();
    return r;
}

std::optional<IntVec> RatLattice::coords(const IntVec& num, const Int& den) const {
    const std::size_t n = dim();
    // c * basis = num * den_ / den
    IntVec c(n);
    for (std::size_t j = 0; j < n; ++j) {
        Int acc = num[j] * den_;
        for (std::size_t i = 0; i < j; ++i) acc -= den * c[i] * basis_[i][j];
        const Int div = den * basis_[j][j];
        if (!mpz_divisible_p(acc.get_mpz_t(), div.get_mpz_t())) return std::nullopt;
        c[j] = acc / div;
    }
    return c;
}

bool RatLattice::contains(const RatLattice& other) const {
    for (const auto& r : other.basis_) {
        if (!contains(r, other.den_)) return false;
    }
    return true;
}

RatLattice RatLattice::scaled(const Rat& c) const {
    if (c == 0) throw MalformedInput("scaling a lattice by zero");
    IntMat rows = basis_;
    for (auto& r : rows) {
        for (auto& x : r) x *= c.get_num();
    }
    return from_rows(rows, den_ * c.get_den());
}

RatLattice RatLattice::dual() const {
    const Int det = determinant(basis_);
    IntMat rows = transpose(adjugate(basis_));
    for (auto& r : rows) {
        for (auto& x : r) x *= den_;
    }
    if (det < 0) {
        for (auto& r : rows) {
            for (auto& x : r) x = -x;
        }
    }
    return from_rows(rows, abs(det));
}

RatLattice RatLattice::operator+(const RatLattice& other) const {
    Int l;
    mpz_lcm(l.get_mpz_t(), den_.get_mpz_t(), other.den_.get_mpz_t());
    IntMat rows;
    const Int s1 = l / den_, s2 = l / other.den_;
    for (const auto& r : basis_) {
        IntVec v;
        for (const auto& x : r) v.push_back(x * s1);
        rows.push_back(std::move(v));
    }
    for (const auto& r : other.basis_) {
        IntVec v;
        for (const auto& x : r) v.push_back(x * s2);
        rows.push_back(std::move(v));
    }
    return from_rows(rows, l);
}

RatLattice RatLattice::intersect(const RatLattice& other) const { return (dual() + other.dual()).dual(); }

Int RatLattice::index_in(const RatLattice& other) const {
    const Rat r = covolume() / other.covolume();
    if (r.get_den() != 1) throw MalformedInput("lattice is not a sublattice");
    return r.get_num();
}

// ---------------------------------------------------------------------------
// LLL and enumeration

RatMat gram_of(const IntMat& b, const RatMat& G) {
    const std::size_t m = b.size(), n = G.size();
    RatMat bg(m, RatVec(n, 0));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            if (b[i][k] == 0) continue;
            for (std::size_t j = 0; j < n; ++j) bg[i][j] += Rat(b[i][k]) * G[k][j];
        }
    }
    RatMat out(m, RatVec(m, 0));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i; j < m; ++j) {
            Rat s = 0;
            for (std::size_t k = 0; k < n; ++k) s += bg[i][k] * Rat(b[j][k]);
            out[i][j] = s;
            out[j][i] = s;
        }
    }
    return out;
}

namespace {

Int round_rat(const Rat& x) {
    Int num = 2 * x.get_num() + x.get_den();
    Int den = 2 * x.get_den();
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    return q;
}

void gram_schmidt(const RatMat& g, RatMat& mu, RatVec& bstar) {
    const std::size_t m = g.size();
    mu.assign(m, RatVec(m, 0));
    bstar.assign(m, 0);
    RatMat r(m, RatVec(m, 0));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            Rat s = g[i][j];
            for (std::size_t l = 0; l < j; ++l) s -= mu[j][l] * r[i][l];
            r[i][j] = s;
            if (j < i) {
                mu[i][j] = s / bstar[j];
            } else {
                bstar[i] = s;
            }
        }
    }
}

}  // namespace

IntMat lll_reduce(const IntMat& basis, const RatMat& G) {
    IntMat b = basis;
    const std::size_t m = b.size();
    if (m < 2) return b;
    RatMat mu;
    RatVec bstar;
    gram_schmidt(gram_of(b, G), mu, bstar);
    std::size_t k = 1;
    const Rat delta(3, 4);
    while (k < m) {
        for (std::size_t jj = k; jj-- > 0;) {
            const Int q = round_rat(mu[k][jj]);
            if (q != 0) {
                for (std::size_t c = 0; c < b[k].size(); ++c) b[k][c] -= q * b[jj][c];
                gram_schmidt(gram_of(b, G), mu, bstar);
            }
        }
        if (bstar[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * bstar[k - 1]) {
            ++k;
        } else {
            std::swap(b[k], b[k - 1]);
            gram_schmidt(gram_of(b, G), mu, bstar);
            k = std::max<std::size_t>(k - 1, 1);
        }
    }
    return b;
}

std::vector<IntVec> short_vectors(const RatMat& G, const Rat& bound) {
    const std::size_t n = G.size();
    // Q(x) = sum_i q[i][i] (x_i + sum_{j>i} q[i][j] x_j)^2
    std::vector<std::vector<long double>> q(n, std::vector<long double>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) q[i][j] = static_cast<long double>(G[i][j].get_d());
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            q[j][i] = q[i][j];
            q[i][j] = q[i][j] / q[i][i];
        }
        for (std::size_t k = i + 1; k < n; ++k) {
            for (std::size_t l = k; l < n; ++l) q[k][l] -= q[k][i] * q[i][l];
        }
    }
    const long double B = static_cast<long double>(bound.get_d()) * (1 + 1e-9L) + 1e-9L;

    std::vector<IntVec> out;
    std::vector<long> x(n, 0);
    std::vector<long double> remaining(n + 1, 0);
    remaining[n] = B;

    auto exact_norm = [&](const std::vector<long>& v) {
        Rat s = 0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) s += G[i][j] * Rat(v[i]) * Rat(v[j]);
        }
        return s;
    };

    std::function<void(std::size_t)> rec = [&](std::size_t level) {
        const std::size_t i = level - 1;
        long double center = 0;
        for (std::size_t j = i + 1; j < n; ++j) center -= q[i][j] * static_cast<long double>(x[j]);
        const long double rad = std::sqrt(std::max<long double>(remaining[level], 0) / q[i][i]);
        const long lo = static_cast<long>(std::ceil(center - rad - 1e-9L));
        const long hi = static_cast<long>(std::floor(center + rad + 1e-9L));
        for (long v = lo; v <= hi; ++v) {
            x[i] = v;
            const long double t = static_cast<long double>(v) - center;
            const long double rem = remaining[level] - q[i][i] * t * t;
            if (rem < -1e-9L * B - 1e-9L) continue;
            if (i == 0) {
                bool zero = true;
                for (auto c : x) zero = zero && c == 0;
                if (zero) continue;
                std::size_t f = 0;
                while (x[f] == 0) ++f;
                if (x[f] < 0) continue;
                if (exact_norm(x) <= bound) {
                    IntVec iv;
                    for (auto c : x) iv.push_back(Int(c));
                    out.push_back(std::move(iv));
                }
            } else {
                remaining[i] = rem;
                rec(i);
            }
        }
        x[i] = 0;
    };
    if (n > 0) rec(n);
    return out;
}

}  // namespace qlift

namespace qlift {

IntMat unimodular_with_first_row(const IntVec& c) {
    const std::size_t n = c.size();
    IntMat V = identity_matrix(n);
    IntVec w = c;
    for (std::size_t j = 1; j < n; ++j) {
        if (w[j] == 0) continue;
        Int g, s, t;
        mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), w[0].get_mpz_t(), w[j].get_mpz_t());
        const Int a = w[j] / g, b = w[0] / g;
        for (std::size_t r = 0; r < n; ++r) {
            const Int c0 = V[r][0], cj = V[r][j];
            V[r][0] = s * c0 + t * cj;
            V[r][j] = -a * c0 + b * cj;
        }
        w[0] = g;
        w[j] = 0;
    }
    if (w[0] != 1 && w[0] != -1) throw MalformedInput("vector is not primitive");
    if (w[0] == -1) {
        for (std::size_t r = 0; r < n; ++r) V[r][0] = -V[r][0];
    }
    const Int d = determinant(V);
    IntMat U = adjugate(V);
    for (auto& row : U) {
        for (auto& x : row) x *= d;
    }
    return U;
}

}  // namespace qlift
