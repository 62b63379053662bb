#include "doctest.h"

#include "qlift/serialize.hpp"

using namespace qlift;

TEST_CASE("integers are decimal strings") {
    const Int big = parse_int("-1152921504606846883000");
    CHECK(int_json(big) == Json("-1152921504606846883000"));
    CHECK(json_int(int_json(big)) == big);
    CHECK(json_int(Json(42)) == 42);
    CHECK_THROWS_AS(json_int(Json(1.5)), MalformedInput);
    CHECK_THROWS_AS(json_int(Json("12x")), Error);
}

TEST_CASE("matrix and lattice round trips") {
    const MatModN M(35, 3, 4, 5, 11);
    CHECK(matrix_from_json(35, matrix_json(M)) == M);
    CHECK(matrix_json(M).dump() == R"([["3","4"],["5","11"]])");
    CHECK_THROWS_AS(matrix_from_json(35, Json::parse(R"({"a":"b"})")), MalformedInput);

    const QuatLattice O = o0_lattice();
    CHECK(lattice_from_json(lattice_json(O)) == O);

    const Factorization F = Factorization::trial(Int(1048575));
    CHECK(factorization_from_json(factorization_json(F)) == F);
}

TEST_CASE("lift result round trip") {
    const auto P = make_params(103, 15);
    const auto F = Factorization::trial(Int(15));
    LiftConfig cfg;
    cfg.seed = 3;
    const QuatElem s0 = P.elem(2, 1, 1, 1);
    const LiftResult r = pqlp_lift(P, F, o0_lattice(), s0, cfg);
    const Json j = lift_json(P, r);
    const LiftResult back = lift_from_json(P, j);
    CHECK(back.sigma == r.sigma);
    CHECK(back.lambda == r.lambda);
    CHECK(back.cert.value == r.cert.value);
    CHECK(verify_lift(P, F, o0_lattice(), s0, back, effective_bound(P, cfg)));
    CHECK(lift_json(P, back).dump() == j.dump());

    Json bad = j;
    bad["norm"]["value"] = int_json(r.cert.value + 1);
    CHECK_THROWS_AS(lift_from_json(P, bad), MalformedInput);
}

TEST_CASE("precomputed table round trip") {
    const auto P = make_params(103, 11);
    const auto F = Factorization::trial(Int(11));
    const RingIso iso = explicit_isomorphism(o0_structure_constants(P, F), 9);
    LiftConfig cfg;
    cfg.B = Int(1) << 20;
    cfg.seed = 4;
    const PrecompTable T = precompute_lift_table(P, F, iso, cfg);
    const Json j = precomp_json(P, T, iso, cfg.seed);

    RingIso iso2;
    const PrecompTable T2 = precomp_from_json(P, Json::parse(j.dump()), iso2);
    CHECK(precomp_json(P, T2, iso2, cfg.seed).dump() == j.dump());
    verify_iso(o0_structure_constants(P, F), iso2);

    Rng rng(8);
    for (int t = 0; t < 10; ++t) {
        const MatModN M = random_invertible(Int(11), rng);
        const LiftResult a = precomputed_lift(P, T, iso, M, nullptr);
        const LiftResult b = precomputed_lift(P, T2, iso2, M, nullptr);
        CHECK(a.sigma == b.sigma);
        CHECK(a.lambda == b.lambda);
    }

    Json wrong = j;
    wrong["version"] = kPrecompFormatVersion + 1;
    CHECK_THROWS_AS(precomp_from_json(P, wrong, iso2), MalformedInput);
    CHECK_THROWS_AS(precomp_from_json(make_params(1019, 11), j, iso2), MalformedInput);
}

TEST_CASE("transcript is deterministic") {
    const auto P = make_params(103, 15);
    const auto F = Factorization::trial(Int(15));
    const auto inst = plant_instance(P, F, 5, {});
    const std::string a = transcript_json(inst, run_attack(inst, 5)).dump();
    const std::string b = transcript_json(inst, run_attack(inst, 5)).dump();
    CHECK(a == b);
    const Json j = Json::parse(a);
    CHECK(j["verdicts"]["ideal_hnf"] == true);
    CHECK(j["oracle_mode"] == "ideal-hnf");
}
