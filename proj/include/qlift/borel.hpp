#pragma once

#include <cstdio>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "qlift/matmod.hpp"

namespace qlift {

/// Hiding function on GL_2(Z/N): labels are equal exactly on left cosets of
/// a hidden Borel subgroup. Counts its own invocations.
class HidingOracle {
public:
    virtual ~HidingOracle() = default;
    std::string operator()(const MatModN& M);
    std::uint64_t calls() const { return calls_; }
    virtual const Int& modulus() const = 0;

protected:
    virtual std::string label(const MatModN& M) = 0;

private:
    std::uint64_t calls_ = 0;
};

/// Label = canonical generator of M S for a known S.
class PlantedOracle : public HidingOracle {
public:
    explicit PlantedOracle(CyclicSubmodule S) : S_(std::move(S)) {}
    const Int& modulus() const override { return S_.modulus(); }
    const CyclicSubmodule& secret() const { return S_; }

protected:
    std::string label(const MatModN& M) override;

private:
    CyclicSubmodule S_;
};

class FunctionOracle : public HidingOracle {
public:
    FunctionOracle(Int N, std::function<std::string(const MatModN&)> f) : N_(std::move(N)), f_(std::move(f)) {}
    const Int& modulus() const override { return N_; }

protected:
    std::string label(const MatModN& M) override { return f_(M); }

private:
    Int N_;
    std::function<std::string(const MatModN&)> f_;
};

/// Talks newline-delimited JSON to a child process:
/// {"matrix": [["a","b"],["c","d"]]} -> {"label": "..."}.
class SubprocessOracle : public HidingOracle {
public:
    SubprocessOracle(Int N, const std::string& command);
    ~SubprocessOracle() override;
    SubprocessOracle(const SubprocessOracle&) = delete;
    SubprocessOracle& operator=(const SubprocessOracle&) = delete;
    const Int& modulus() const override { return N_; }

protected:
    std::string label(const MatModN& M) override;

private:
    Int N_;
    int pid_ = -1;
    std::FILE* to_child_ = nullptr;
    std::FILE* from_child_ = nullptr;
};

/// Restriction of an oracle mod N to the component mod a prime power
/// dividing N: M is embedded as (M mod Ni, Id elsewhere) by CRT.
class ComponentOracle : public HidingOracle {
public:
    ComponentOracle(HidingOracle& parent, const Factorization& N, const PrimePower& component);
    const Int& modulus() const override { return Ni_; }
    MatModN embed(const MatModN& M) const;

protected:
    std::string label(const MatModN& M) override { return parent_(embed(M)); }

private:
    HidingOracle& parent_;
    Int N_, Ni_;
    Int e_component_, e_rest_;
};

/// Oracle-call constant: calls <= kappa * sum_i k_i q_i * (log2 N)^2.
inline constexpr double kBorelKappa = 4.0;

double borel_call_budget(const Factorization& N);

struct BorelConfig {
    /// largest admissible prime factor of N
    Int prime_bound = 1 << 16;
    /// random stabilizer elements checked against the oracle after solving
    unsigned stabilizer_checks = 20;
    std::uint64_t seed = 0;
};

struct BorelSubinstance {
    PrimePower component;
    std::unique_ptr<ComponentOracle> oracle;
};

std::vector<BorelSubinstance> crt_split(HidingOracle& oracle, const Factorization& N);

/// Stabilizer of <u> for u primitive mod 2^k: conjugates of the shear and
/// the diagonal unit twists by a basis completion of u.
std::vector<MatModN> stabilizer_generators(const Int& modulus, const Int& u1, const Int& u2);

/// u in S for an oracle modulo the prime power q^k. `id_label` is f(Id)
/// if already known (empty otherwise).
bool membership_test(HidingOracle& oracle, const PrimePower& qk, const Int& u1, const Int& u2,
                     std::string id_label = {});

CyclicSubmodule solve_prime_power(HidingOracle& oracle, const PrimePower& qk);

/// Stab(S) == Stab(T). Modulo 2^k with k >= 2 the stabilizer only sees S
/// modulo 2^(k-1); otherwise this is S == T.
bool same_borel_subgroup(const CyclicSubmodule& S, const CyclicSubmodule& T);

/// Random element of the stabilizer of S.
MatModN random_stabilizer_element(const CyclicSubmodule& S, Rng& rng);

struct BorelStats {
    std::uint64_t solve_calls = 0;
    std::uint64_t check_calls = 0;
};

CyclicSubmodule borel_solve(HidingOracle& oracle, const Factorization& N, const BorelConfig& cfg = {},
                            BorelStats* stats = nullptr);

}  // namespace qlift
