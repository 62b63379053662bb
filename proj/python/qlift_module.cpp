#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qlift/serialize.hpp"

namespace py = pybind11;
using namespace qlift;

// Integers cross the boundary as decimal strings; the Python wrapper converts.

namespace {

Factorization odd_modulus(const std::string& N, const Int& p) {
    const Int n = parse_int(N);
    if (n < 3 || n % 2 == 0) throw MalformedInput("N must be odd and at least 3");
    if (gcd(n, p) != 1) throw MalformedInput("N must be coprime to p");
    return Factorization::trial(n);
}

Int prime(const std::string& p) {
    const Int v = parse_int(p);
    if (v <= 2 || !is_probable_prime(v)) throw MalformedInput("p must be an odd prime");
    return v;
}

LiftConfig config(const std::string& B, std::uint64_t seed, bool relaxed) {
    LiftConfig cfg;
    cfg.B = parse_int(B);
    cfg.seed = seed;
    cfg.relaxed = relaxed;
    return cfg;
}

std::string params_json(const std::string& p) {
    const QuatParams P = make_params(prime(p), 1);
    return Json{{"p", int_json(P.p)}, {"q", int_json(P.q)}, {"D", int_json(P.D)},
                {"discriminant", int_json(order_discriminant(P, o0_lattice()).get_num())}}
        .dump();
}

std::string lift(const std::string& p, const std::string& N, const std::vector<std::string>& sigma,
                 const std::string& B, std::uint64_t seed, bool relaxed) {
    const Int pv = prime(p);
    const Factorization F = odd_modulus(N, pv);
    const QuatParams P = make_params(pv, F.value());
    const LiftConfig cfg = config(B, seed, relaxed);
    validate_lift_modulus(P, F, cfg);
    if (sigma.size() != 4 && sigma.size() != 5) throw MalformedInput("sigma needs 4 or 5 integers");
    const QuatElem s0 = P.elem(parse_int(sigma[0]), parse_int(sigma[1]), parse_int(sigma[2]), parse_int(sigma[3]),
                               sigma.size() == 5 ? parse_int(sigma[4]) : Int(1));
    if (!P.in_o0(s0)) throw MalformedInput("sigma is not in O0");
    const LiftResult r = pqlp_lift(P, F, o0_lattice(), s0, cfg);
    if (!verify_lift(P, F, o0_lattice(), s0, r, effective_bound(P, cfg))) throw InternalError("lift did not verify");
    Json j = lift_json(P, r);
    j["sigma0"] = quat_json(P, s0);
    j["verified"] = true;
    return j.dump();
}

std::string iso(const std::string& p, const std::string& N, std::uint64_t seed) {
    const Int pv = prime(p);
    const Factorization F = odd_modulus(N, pv);
    const auto A = o0_structure_constants(make_params(pv, F.value()), F);
    const RingIso r = explicit_isomorphism(A, seed);
    verify_iso(A, r);
    return iso_json(r).dump();
}

std::string precomp_lift(const std::string& p, const std::string& N, const std::vector<std::string>& m,
                         const std::string& B, std::uint64_t seed) {
    const Int pv = prime(p);
    const Factorization F = odd_modulus(N, pv);
    const QuatParams P = make_params(pv, F.value());
    const LiftConfig cfg = config(B, seed, false);
    validate_lift_modulus(P, F, cfg);
    if (m.size() != 4) throw MalformedInput("matrix needs 4 entries");
    const MatModN M(F.value(), parse_int(m[0]), parse_int(m[1]), parse_int(m[2]), parse_int(m[3]));
    if (!M.is_invertible()) throw MalformedInput("matrix must be invertible modulo N");
    const RingIso r = explicit_isomorphism(o0_structure_constants(P, F), seed);
    const PrecompTable T = precompute_lift_table(P, F, r, cfg);
    unsigned used = 0;
    const LiftResult res = precomputed_lift(P, T, r, M, &used);
    const auto [coords, den] = P.o0_coords(res.sigma);
    if (den != 1 || matrix_of_element(r, coords) != M.scaled(res.lambda)) {
        throw InternalError("precomputed lift did not verify");
    }
    Json j = lift_json(P, res);
    j["factors_used"] = used;
    j["table_entries"] = T.entries.size();
    return j.dump();
}

std::string borel(const std::string& N, py::object oracle, std::optional<std::vector<std::string>> planted,
                  std::uint64_t seed) {
    const Factorization F = Factorization::trial(parse_int(N));
    std::unique_ptr<HidingOracle> o;
    std::optional<CyclicSubmodule> truth;
    if (planted) {
        if (planted->size() != 2) throw MalformedInput("planted needs two coordinates");
        const Int x = parse_int((*planted)[0]), y = parse_int((*planted)[1]);
        if (!is_primitive(F, x, y)) throw MalformedInput("planted vector is not primitive");
        truth = CyclicSubmodule(F, x, y);
        o = std::make_unique<PlantedOracle>(*truth);
    } else {
        if (oracle.is_none()) throw MalformedInput("give an oracle or a planted vector");
        o = std::make_unique<FunctionOracle>(F.value(), [oracle](const MatModN& M) {
            py::gil_scoped_acquire g;
            const auto s = [](const Int& v) { return py::int_(py::str(to_string(v))); };
            py::list rows;
            rows.append(py::make_tuple(s(M(0, 0)), s(M(0, 1))));
            rows.append(py::make_tuple(s(M(1, 0)), s(M(1, 1))));
            return py::str(oracle(rows)).cast<std::string>();
        });
    }
    BorelConfig cfg;
    cfg.seed = seed;
    BorelStats st;
    const CyclicSubmodule S = borel_solve(*o, F, cfg, &st);
    Json j{{"submodule", submodule_json(S)},
           {"solve_calls", std::to_string(st.solve_calls)},
           {"check_calls", std::to_string(st.check_calls)}};
    if (truth) j["same_stabilizer"] = same_borel_subgroup(S, *truth);
    return j.dump();
}

std::string attack(const std::string& p, const std::string& N, std::uint64_t seed, const std::string& mode) {
    const Int pv = prime(p);
    const Factorization F = odd_modulus(N, pv);
    PlantOptions opt;
    opt.mode = parse_oracle_mode(mode);
    const IsERPInstance inst = plant_instance(make_params(pv, F.value()), F, seed, opt);
    return transcript_json(inst, run_attack(inst, seed)).dump();
}

}  // namespace

PYBIND11_MODULE(_qlift, m) {
    m.doc() = "quaternion lifting, Borel hidden subgroups and ideal recovery";
    // translators are tried newest first
    py::register_exception<Error>(m, "QliftError", PyExc_RuntimeError);
    py::register_exception<MalformedInput>(m, "MalformedInput", PyExc_ValueError);
    m.def("params", &params_json, py::arg("p"));
    m.def("pqlp_lift", &lift, py::arg("p"), py::arg("N"), py::arg("sigma"), py::arg("B") = "0", py::arg("seed") = 0,
          py::arg("relaxed") = false);
    m.def("explicit_isomorphism", &iso, py::arg("p"), py::arg("N"), py::arg("seed") = 0);
    m.def("precomputed_lift", &precomp_lift, py::arg("p"), py::arg("N"), py::arg("matrix"),
          py::arg("B") = "1048576", py::arg("seed") = 0);
    m.def("borel_solve", &borel, py::arg("N"), py::arg("oracle") = py::none(), py::arg("planted") = py::none(),
          py::arg("seed") = 0);
    m.def("iserp_attack", &attack, py::arg("p"), py::arg("N"), py::arg("seed") = 0,
          py::arg("mode") = "ideal-hnf");
}
