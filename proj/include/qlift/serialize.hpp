#pragma once

#include "json.hpp"

#include "qlift/iserp.hpp"
#include "qlift/precomp.hpp"

namespace qlift {

using Json = nlohmann::ordered_json;

/// Integers travel as decimal strings.
Json int_json(const Int& x);
Int json_int(const Json& j);

Json factorization_json(const Factorization& F);
Factorization factorization_from_json(const Json& j);

Json gauss_json(const GaussElem& x);

/// {"num": [a,b,c,d], "den": d} in O0 coordinates.
Json quat_json(const QuatParams& P, const QuatElem& x);
QuatElem quat_from_json(const QuatParams& P, const Json& j);
Json frame_json(const QuatParams& P);

Json lattice_json(const QuatLattice& L);
QuatLattice lattice_from_json(const Json& j);

Json matrix_json(const MatModN& M);
MatModN matrix_from_json(const Int& N, const Json& j);

Json submodule_json(const CyclicSubmodule& S);

Json cert_json(const PowersmoothCert& c);
PowersmoothCert cert_from_json(const Json& j);

Json lift_json(const QuatParams& P, const LiftResult& r);
LiftResult lift_from_json(const QuatParams& P, const Json& j);

Json structure_constants_json(const StructureConstants& A);

Json iso_json(const RingIso& iso);
RingIso iso_from_json(const Json& j);

inline constexpr int kPrecompFormatVersion = 1;

Json precomp_json(const QuatParams& P, const PrecompTable& T, const RingIso& iso, std::uint64_t seed);
/// Throws MalformedInput on a version or parameter mismatch.
PrecompTable precomp_from_json(const QuatParams& P, const Json& j, RingIso& iso);

Json transcript_json(const IsERPInstance& inst, const AttackTranscript& t);

}  // namespace qlift
