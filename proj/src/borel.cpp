#include "qlift/borel.hpp"

#include <cmath>
#include <csignal>
#include <sys/wait.h>
#include <unistd.h>

#include "json.hpp"

namespace qlift {

std::string HidingOracle::operator()(const MatModN& M) {
    if (M.modulus() != modulus()) throw MalformedInput("oracle queried with a matrix of the wrong modulus");
    if (!M.is_invertible()) throw MalformedInput("oracle queried with a singular matrix");
    ++calls_;
    return label(M);
}

std::string PlantedOracle::label(const MatModN& M) {
    const CyclicSubmodule T = S_.image(M);
    return to_string(T.x()) + "," + to_string(T.y());
}

SubprocessOracle::SubprocessOracle(Int N, const std::string& command) : N_(std::move(N)) {
    int in[2], out[2];
    if (pipe(in) != 0 || pipe(out) != 0) throw InternalError("pipe() failed");
    pid_ = fork();
    if (pid_ < 0) throw InternalError("fork() failed");
    if (pid_ == 0) {
        dup2(in[0], STDIN_FILENO);
        dup2(out[1], STDOUT_FILENO);
        close(in[0]);
        close(in[1]);
        close(out[0]);
        close(out[1]);
        execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
        _exit(127);
    }
    close(in[0]);
    close(out[1]);
    to_child_ = fdopen(in[1], "w");
    from_child_ = fdopen(out[0], "r");
    std::signal(SIGPIPE, SIG_IGN);
}

SubprocessOracle::~SubprocessOracle() {
    if (to_child_) std::fclose(to_child_);
    if (from_child_) std::fclose(from_child_);
    if (pid_ > 0) waitpid(pid_, nullptr, 0);
}

std::string SubprocessOracle::label(const MatModN& M) {
    nlohmann::json req;
    using A = nlohmann::json::array_t;
    req["matrix"] = A{A{to_string(M(0, 0)), to_string(M(0, 1))}, A{to_string(M(1, 0)), to_string(M(1, 1))}};
    const std::string line = req.dump() + "\n";
    if (std::fputs(line.c_str(), to_child_) < 0 || std::fflush(to_child_) != 0) {
        throw InternalError("oracle process closed its input");
    }
    std::string resp;
    int ch;
    while ((ch = std::fgetc(from_child_)) != EOF && ch != '\n') resp.push_back(static_cast<char>(ch));
    if (resp.empty()) throw InternalError("oracle process returned no response");
    const auto j = nlohmann::json::parse(resp, nullptr, false);
    if (j.is_discarded() || !j.contains("label") || !j["label"].is_string()) {
        throw MalformedInput("oracle response is not {\"label\": string}: " + resp);
    }
    return j["label"].get<std::string>();
}

ComponentOracle::ComponentOracle(HidingOracle& parent, const Factorization& N, const PrimePower& component)
    : parent_(parent), N_(N.value()), Ni_(component.value()) {
    const Int rest = N_ / Ni_;
    // idempotents: e_component = 1 mod Ni, 0 mod rest
    std::vector<Residue> a{{Int(1), Ni_}, {Int(0), rest}};
    std::vector<Residue> b{{Int(0), Ni_}, {Int(1), rest}};
    e_component_ = crt_combine(a).value;
    e_rest_ = crt_combine(b).value;
}

MatModN ComponentOracle::embed(const MatModN& M) const {
    auto at = [&](int r, int c) -> Int { return M(r, c) * e_component_ + (r == c ? e_rest_ : Int(0)); };
    return MatModN(N_, at(0, 0), at(0, 1), at(1, 0), at(1, 1));
}

double borel_call_budget(const Factorization& N) {
    double s = 0;
    for (const auto& f : N.factors()) s += double(f.exponent) * f.prime.get_d();
    const double lg = std::log2(N.value().get_d());
    return kBorelKappa * s * std::max(1.0, lg * lg);
}

std::vector<BorelSubinstance> crt_split(HidingOracle& oracle, const Factorization& N) {
    std::vector<BorelSubinstance> out;
    for (const auto& f : N.factors()) out.push_back({f, std::make_unique<ComponentOracle>(oracle, N, f)});
    return out;
}

namespace {

Int ipow(const Int& q, unsigned e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), q.get_mpz_t(), e);
    return r;
}

/// Columns (u, w) with det a unit modulo the prime power.
MatModN basis_completion(const Int& m, const Int& prime, const Int& u1, const Int& u2) {
    if (u1 % prime != 0) return MatModN(m, u1, 0, u2, 1);
    return MatModN(m, u1, 1, u2, 0);
}

}  // namespace

std::vector<MatModN> stabilizer_generators(const Int& m, const Int& u1, const Int& u2) {
    const MatModN B = basis_completion(m, 2, u1, u2);
    const MatModN Bi = B.inverse();
    std::vector<MatModN> gens;
    auto add = [&](const MatModN& T) {
        const MatModN g = B * T * Bi;
        if (g == MatModN::identity(m)) return;
        for (const auto& h : gens) {
            if (h == g) return;
        }
        gens.push_back(g);
    };
    add(MatModN(m, 1, 1, 0, 1));
    for (const Int& a : {Int(-1), Int(3), Int(5)}) {
        add(MatModN(m, a, 0, 0, 1));
        add(MatModN(m, 1, 0, 0, a));
    }
    return gens;
}

bool membership_test(HidingOracle& oracle, const PrimePower& qk, const Int& u1_in, const Int& u2_in,
                     std::string id_label) {
    const Int m = qk.value();
    if (oracle.modulus() != m) throw MalformedInput("membership test modulus differs from the oracle's");
    const Int u1 = mod(u1_in, m), u2 = mod(u2_in, m);
    if (u1 == 0 && u2 == 0) return true;
    if (id_label.empty()) id_label = oracle(MatModN::identity(m));
    const Int& q = qk.prime;
    const bool in_qV = u1 % q == 0 && u2 % q == 0;

    if (!in_qV && q == 2) {
        for (const MatModN& g : stabilizer_generators(m, u1, u2)) {
            if (oracle(g) != id_label) return false;
        }
        return true;
    }
    // phi_1: e1 -> u, e2 -> 0; phi_2: e1 -> 0, e2 -> u
    for (int i = 0; i < 2; ++i) {
        const MatModN phi = i == 0 ? MatModN(m, u1, 0, u2, 0) : MatModN(m, 0, u1, 0, u2);
        const Int& t = i == 0 ? u1 : u2;
        MatModN g;
        if (in_qV) {
            g = phi + MatModN::identity(m);
        } else if (gcd(1 - t, m) == 1) {
            g = phi - MatModN::identity(m);
        } else {
            g = phi.scaled(-1) - MatModN::identity(m);
        }
        QLIFT_CHECK(g.is_invertible(), "membership test matrix");
        if (oracle(g) != id_label) return false;
    }
    return true;
}

CyclicSubmodule solve_prime_power(HidingOracle& oracle, const PrimePower& qk) {
    const Int m = qk.value();
    const Int& q = qk.prime;
    const unsigned k = qk.exponent;
    const std::string id = oracle(MatModN::identity(m));
    auto inconsistent = [&]() {
        return InternalError("oracle is not a Borel hiding function modulo " + to_string(m));
    };

    // bottom layer: S cap q^{k-1} V, one of q + 1 lines
    const Int top = ipow(q, k - 1);
    bool unit_first = false;
    Int known;
    for (Int t = 0; t <= q; ++t) {
        const bool first = t < q;
        const Int a = first ? Int(1) : Int(0), b = first ? t : Int(1);
        if (membership_test(oracle, qk, top * a, top * b, id)) {
            unit_first = first;
            known = first ? t : Int(0);
            break;
        }
        if (t == q) throw inconsistent();
    }
    // digits of the non-normalized coordinate, one q-adic place at a time
    for (unsigned level = 1; level < k; ++level) {
        const Int place = ipow(q, level);
        const Int scale = ipow(q, k - level - 1);
        bool found = false;
        for (Int d = 0; d < q; ++d) {
            const Int c = known + place * d;
            const bool in = unit_first ? membership_test(oracle, qk, scale, scale * c, id)
                                       : membership_test(oracle, qk, scale * c, scale, id);
            if (in) {
                known = c;
                found = true;
                break;
            }
        }
        if (!found) throw inconsistent();
    }
    const Factorization F(std::vector<PrimePower>{qk});
    return unit_first ? CyclicSubmodule(F, 1, known) : CyclicSubmodule(F, known, 1);
}

bool same_borel_subgroup(const CyclicSubmodule& S, const CyclicSubmodule& T) {
    if (S.modulus() != T.modulus()) return false;
    for (const auto& f : S.factorization().factors()) {
        Int m = f.value();
        if (f.prime == 2 && f.exponent >= 2) m /= 2;
        // canonical generators have a unit coordinate equal to 1 modulo m as well
        const Int a = mod(S.x(), m), b = mod(S.y(), m), c = mod(T.x(), m), d = mod(T.y(), m);
        if (mod(a * d - b * c, m) != 0) return false;
    }
    return true;
}

MatModN random_stabilizer_element(const CyclicSubmodule& S, Rng& rng) {
    const Int& N = S.modulus();
    std::vector<Residue> w1, w2;
    for (const auto& f : S.factorization().factors()) {
        const bool first_unit = S.x() % f.prime != 0;
        w1.push_back({first_unit ? Int(0) : Int(1), f.value()});
        w2.push_back({first_unit ? Int(1) : Int(0), f.value()});
    }
    const MatModN B(N, S.x(), crt_combine(w1).value, S.y(), crt_combine(w2).value);
    QLIFT_CHECK(B.is_invertible(), "basis completion");
    auto unit = [&]() {
        for (;;) {
            const Int a = rng.below(N);
            if (gcd(a, N) == 1) return a;
        }
    };
    const MatModN T(N, unit(), rng.below(N), 0, unit());
    return B * T * B.inverse();
}

CyclicSubmodule borel_solve(HidingOracle& oracle, const Factorization& N, const BorelConfig& cfg,
                            BorelStats* stats) {
    const Int n = N.value();
    if (n < 2) throw MalformedInput("Borel instance needs N >= 2");
    if (oracle.modulus() != n) throw MalformedInput("oracle modulus differs from N");
    for (const auto& f : N.factors()) {
        if (f.prime > cfg.prime_bound) {
            throw MalformedInput("prime factor " + to_string(f.prime) + " exceeds the smoothness bound");
        }
    }
    const std::uint64_t start = oracle.calls();
    std::vector<Residue> xs, ys;
    for (auto& sub : crt_split(oracle, N)) {
        const CyclicSubmodule Si = solve_prime_power(*sub.oracle, sub.component);
        xs.push_back({Si.x(), Si.modulus()});
        ys.push_back({Si.y(), Si.modulus()});
    }
    const CyclicSubmodule S(N, crt_combine(xs).value, crt_combine(ys).value);

    const std::uint64_t solved = oracle.calls();
    Rng rng(cfg.seed);
    const std::string id = oracle(MatModN::identity(n));
    for (unsigned i = 0; i < cfg.stabilizer_checks; ++i) {
        if (oracle(random_stabilizer_element(S, rng)) != id) {
            throw InternalError("recovered submodule's stabilizer is not hidden by the oracle");
        }
    }
    if (stats) {
        stats->solve_calls = solved - start;
        stats->check_calls = oracle.calls() - solved;
    }
    return S;
}

}  // namespace qlift
