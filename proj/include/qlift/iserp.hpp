#pragma once

#include <map>
#include <optional>
#include <string>

#include "qlift/borel.hpp"
#include "qlift/ideal.hpp"
#include "qlift/pqlp.hpp"

namespace qlift {

enum class OracleMode {
    /// label = HNF of the acted-upon ideal
    IdealHnf,
    /// label = isometry class of the Gross lattice of its right order
    OrderInvariant,
};

std::string to_string(OracleMode m);
OracleMode parse_oracle_mode(const std::string& s);

/// A planted secret ideal of norm N in a maximal base order (O0 unless
/// another order is given). Simulates the quaternion side of an isogeny.
struct IsERPInstance {
    QuatParams P;
    Factorization N;
    OrderFrame base;
    RingIso iso;
    CyclicSubmodule secret;
    QuatIdeal ideal;
    OracleMode mode = OracleMode::IdealHnf;
    std::uint64_t seed = 0;
};

struct PlantOptions {
    OracleMode mode = OracleMode::IdealHnf;
    std::optional<CyclicSubmodule> forced_secret;
    /// maximal order to use instead of O0
    std::optional<QuatLattice> base_order;
};

IsERPInstance plant_instance(const QuatParams& P, const Factorization& N, std::uint64_t seed,
                             const PlantOptions& opt = {});

/// Same instance with another secret submodule.
IsERPInstance with_secret(const IsERPInstance& inst, const CyclicSubmodule& S);

/// Ideal of M * phi, computed as the kernel ideal of M v and as
/// sigma (I cap O sigma) sigma^-1 + N O with M_sigma = M. Throws
/// InternalError if the two differ.
QuatIdeal act(const IsERPInstance& inst, const MatModN& M);

std::string ideal_label(const QuatIdeal& I);
/// Canonical Gram matrix of the Gross lattice {x in Z + 2 O : trd x = 0}:
/// lexicographically least over bases realizing the successive minima.
std::string order_invariant_label(const QuatParams& P, const QuatLattice& O);

class IsERPOracle : public HidingOracle {
public:
    IsERPOracle(const IsERPInstance& inst, OracleMode mode) : inst_(inst), mode_(mode) {}
    const Int& modulus() const override { return inst_.secret.modulus(); }

protected:
    std::string label(const MatModN& M) override;

private:
    const IsERPInstance& inst_;
    OracleMode mode_;
};

/// Partitions of `mats` induced by the two oracle modes are identical.
bool oracle_partitions_agree(const IsERPInstance& inst, const std::vector<MatModN>& mats);

/// For `count` random sigma in Z + I with n(sigma) prime to N, M_sigma fixes
/// the secret submodule.
bool eichler_stabilizer_check(const IsERPInstance& inst, unsigned count, Rng& rng);

struct AttackTranscript {
    CyclicSubmodule recovered;
    QuatIdeal recovered_ideal;
    QuatLattice recovered_order;
    std::uint64_t oracle_calls = 0;
    double seconds = 0;
    std::map<std::string, bool> verdicts;
    std::uint64_t seed = 0;

    bool ok() const;
};

AttackTranscript run_attack(const IsERPInstance& inst, std::uint64_t seed = 0);

struct RoundtripResult {
    QuatElem sigma0;
    LiftResult lift;
    bool matrix_ok = false;
    bool lift_ok = false;
};

/// Lifts the element with matrix M to a powersmooth-norm sigma with
/// M_sigma = lambda M.
RoundtripResult pqlp_roundtrip_demo(const IsERPInstance& inst, const MatModN& M, const LiftConfig& cfg);

}  // namespace qlift
