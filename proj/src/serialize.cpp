#include "qlift/serialize.hpp"

namespace qlift {

Json int_json(const Int& x) { return to_string(x); }

Int json_int(const Json& j) {
    if (j.is_string()) return parse_int(j.get<std::string>());
    if (j.is_number_integer()) return Int(std::to_string(j.get<long long>()));
    throw MalformedInput("expected an integer, got " + j.dump());
}

Json factorization_json(const Factorization& F) {
    Json a = Json::array();
    for (const auto& f : F.factors()) a.push_back({int_json(f.prime), int_json(f.exponent)});
    return a;
}

Factorization factorization_from_json(const Json& j) {
    std::vector<PrimePower> fs;
    for (const auto& e : j) fs.push_back({json_int(e.at(0)), static_cast<unsigned>(json_int(e.at(1)).get_ui())});
    return Factorization(fs);
}

Json gauss_json(const GaussElem& x) { return {int_json(x.re), int_json(x.im)}; }

Json quat_json(const QuatParams& P, const QuatElem& x) {
    const auto [num, den] = P.o0_coords(x);
    Json n = Json::array();
    for (const auto& v : num) n.push_back(int_json(v));
    return {{"num", n}, {"den", int_json(den)}};
}

QuatElem quat_from_json(const QuatParams& P, const Json& j) {
    IntVec num;
    for (const auto& v : j.at("num")) num.push_back(json_int(v));
    if (num.size() != 4) throw MalformedInput("quaternion needs four coordinates");
    return P.from_o0(num, json_int(j.at("den")));
}

Json frame_json(const QuatParams& P) { return {{"p", int_json(P.p)}, {"q", int_json(P.q)}}; }

Json lattice_json(const QuatLattice& L) {
    Json rows = Json::array();
    for (const auto& r : L.basis()) {
        Json row = Json::array();
        for (const auto& v : r) row.push_back(int_json(v));
        rows.push_back(row);
    }
    return {{"basis", rows}, {"den", int_json(L.den())}};
}

QuatLattice lattice_from_json(const Json& j) {
    IntMat rows;
    for (const auto& r : j.at("basis")) {
        IntVec row;
        for (const auto& v : r) row.push_back(json_int(v));
        rows.push_back(row);
    }
    return QuatLattice::from_rows(rows, json_int(j.at("den")));
}

Json matrix_json(const MatModN& M) {
    return Json::array({Json::array({int_json(M(0, 0)), int_json(M(0, 1))}),
                        Json::array({int_json(M(1, 0)), int_json(M(1, 1))})});
}

MatModN matrix_from_json(const Int& N, const Json& j) {
    if (!j.is_array() || j.size() != 2 || j[0].size() != 2 || j[1].size() != 2) {
        throw MalformedInput("matrix must be [[a,b],[c,d]]");
    }
    return MatModN(N, json_int(j[0][0]), json_int(j[0][1]), json_int(j[1][0]), json_int(j[1][1]));
}

Json submodule_json(const CyclicSubmodule& S) {
    return {{"N", int_json(S.modulus())}, {"generator", {int_json(S.x()), int_json(S.y())}}};
}

Json cert_json(const PowersmoothCert& c) {
    return {{"value", int_json(c.value)}, {"bound", int_json(c.bound)},
            {"factorization", factorization_json(c.factorization)}};
}

PowersmoothCert cert_from_json(const Json& j) {
    PowersmoothCert c{json_int(j.at("value")), json_int(j.at("bound")),
                      factorization_from_json(j.at("factorization"))};
    if (!c.verify()) throw MalformedInput("powersmooth certificate does not verify");
    return c;
}

Json lift_json(const QuatParams& P, const LiftResult& r) {
    return {{"sigma", quat_json(P, r.sigma)}, {"lambda", int_json(r.lambda)}, {"norm", cert_json(r.cert)}};
}

LiftResult lift_from_json(const QuatParams& P, const Json& j) {
    LiftResult r;
    r.sigma = quat_from_json(P, j.at("sigma"));
    r.lambda = json_int(j.at("lambda"));
    r.cert = cert_from_json(j.at("norm"));
    return r;
}

Json structure_constants_json(const StructureConstants& A) {
    Json t = Json::array();
    for (const auto& a : A.tensor) {
        Json ta = Json::array();
        for (const auto& b : a) {
            Json tb = Json::array();
            for (const auto& v : b) tb.push_back(int_json(v));
            ta.push_back(tb);
        }
        t.push_back(ta);
    }
    return {{"N", int_json(A.modulus())}, {"factors", factorization_json(A.N)}, {"tensor", t}, {"one", A.one}};
}

Json iso_json(const RingIso& iso) {
    Json fwd = Json::array();
    for (const auto& M : iso.forward) fwd.push_back(matrix_json(M));
    Json back = Json::array();
    for (const auto& r : iso.backward) {
        Json row = Json::array();
        for (const auto& v : r) row.push_back(int_json(v));
        back.push_back(row);
    }
    return {{"N", int_json(iso.N)}, {"forward", fwd}, {"backward", back}};
}

RingIso iso_from_json(const Json& j) {
    RingIso iso;
    iso.N = json_int(j.at("N"));
    for (int i = 0; i < 4; ++i) iso.forward[i] = matrix_from_json(iso.N, j.at("forward").at(i));
    for (const auto& r : j.at("backward")) {
        IntVec row;
        for (const auto& v : r) row.push_back(json_int(v));
        iso.backward.push_back(row);
    }
    return iso;
}

namespace {

Json entry_json(const QuatParams& P, const PrecompEntry& e) {
    return {{"family", e.family}, {"k", e.k}, {"matrix", matrix_json(e.matrix)}, {"lift", lift_json(P, e.lift)}};
}

PrecompEntry entry_from_json(const QuatParams& P, const Int& N, const Json& j) {
    return {j.at("family").get<std::string>(), j.at("k").get<unsigned>(), matrix_from_json(N, j.at("matrix")),
            lift_from_json(P, j.at("lift"))};
}

}  // namespace

Json precomp_json(const QuatParams& P, const PrecompTable& T, const RingIso& iso, std::uint64_t seed) {
    Json gens = Json::array();
    for (const auto& g : T.generators) gens.push_back(int_json(g));
    Json entries = Json::array();
    for (const auto& e : T.entries) entries.push_back(entry_json(P, e));
    Json j{{"format", "qlift-precomp"},
           {"version", kPrecompFormatVersion},
           {"frame", frame_json(P)},
           {"N", factorization_json(T.N)},
           {"bound", int_json(T.bound)},
           {"seed", std::to_string(seed)},
           {"bits", T.bits},
           {"generators", gens},
           {"iso", iso_json(iso)},
           {"entries", entries}};
    j["swap"] = T.swap ? entry_json(P, *T.swap) : Json(nullptr);
    return j;
}

PrecompTable precomp_from_json(const QuatParams& P, const Json& j, RingIso& iso) {
    if (j.value("format", "") != "qlift-precomp" || j.value("version", 0) != kPrecompFormatVersion) {
        throw MalformedInput("unsupported precomputation file format");
    }
    if (json_int(j.at("frame").at("p")) != P.p || json_int(j.at("frame").at("q")) != P.q) {
        throw MalformedInput("precomputation file was built for different parameters");
    }
    PrecompTable T;
    T.N = factorization_from_json(j.at("N"));
    T.bound = json_int(j.at("bound"));
    T.bits = j.at("bits").get<unsigned>();
    for (const auto& g : j.at("generators")) T.generators.push_back(json_int(g));
    const Int n = T.N.value();
    for (const auto& e : j.at("entries")) T.entries.push_back(entry_from_json(P, n, e));
    if (!j.at("swap").is_null()) T.swap = entry_from_json(P, n, j.at("swap"));
    iso = iso_from_json(j.at("iso"));
    if (iso.N != n) throw MalformedInput("precomputation iso modulus mismatch");
    return T;
}

Json transcript_json(const IsERPInstance& inst, const AttackTranscript& t) {
    Json verdicts = Json::object();
    for (const auto& [k, v] : t.verdicts) verdicts[k] = v;
    return {{"N", int_json(inst.N.value())},
            {"p", int_json(inst.P.p)},
            {"frame", frame_json(inst.P)},
            {"oracle_mode", to_string(inst.mode)},
            {"oracle_calls", std::to_string(t.oracle_calls)},
            {"recovered_submodule", submodule_json(t.recovered)},
            {"recovered_ideal", lattice_json(t.recovered_ideal.lattice)},
            {"recovered_right_order", lattice_json(t.recovered_order)},
            {"verdicts", verdicts},
            {"seed", std::to_string(t.seed)}};
}

}  // namespace qlift
