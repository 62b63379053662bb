#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "acceptance.hpp"
#include "qlift/serialize.hpp"

using namespace qlift;

namespace {

/// Validation failures exit with status 2.
struct ValidationError : Error {
    explicit ValidationError(const std::string& d) : Error("validation", d) {}
};

struct Common {
    std::string p, N;
    std::uint64_t seed = 0;
    std::string B = "0";
    double epsilon = 9, c = 2;
    unsigned budget = 100000;
    bool relaxed = false;
};

std::vector<Int> parse_ints(const std::string& s, std::size_t min, std::size_t max, const char* what) {
    std::vector<Int> out;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ',')) {
        try {
            out.push_back(parse_int(part));
        } catch (const Error&) {
            throw ValidationError(std::string(what) + ": '" + part + "' is not an integer");
        }
    }
    if (out.size() < min || out.size() > max) {
        throw ValidationError(std::string(what) + " needs " + std::to_string(min) +
                              (min == max ? "" : "-" + std::to_string(max)) + " comma-separated integers");
    }
    return out;
}

Int need_int(const std::string& s, const char* flag) {
    if (s.empty()) throw ValidationError(std::string("--") + flag + " is required");
    try {
        return parse_int(s);
    } catch (const Error&) {
        throw ValidationError(std::string("--") + flag + ": '" + s + "' is not an integer");
    }
}

Int need_prime(const Common& c) {
    const Int p = need_int(c.p, "p");
    if (p <= 2 || !is_probable_prime(p)) throw ValidationError("p must be an odd prime");
    return p;
}

Factorization need_modulus(const Common& c, bool allow_even) {
    const Int N = need_int(c.N, "N");
    if (N < 2) throw ValidationError("N must be at least 2");
    if (!allow_even && N % 2 == 0) throw ValidationError("N must be odd");
    if (!c.p.empty() && N == parse_int(c.p)) throw ValidationError("N must differ from p");
    try {
        return Factorization::trial(N);
    } catch (const Error& e) {
        throw ValidationError(std::string("cannot factor N: ") + e.what());
    }
}

LiftConfig lift_config(const Common& c) {
    LiftConfig cfg;
    cfg.B = need_int(c.B, "B");
    cfg.epsilon = c.epsilon;
    cfg.c = c.c;
    cfg.budget = c.budget;
    cfg.seed = c.seed;
    cfg.relaxed = c.relaxed;
    return cfg;
}

/// Lift commands: N odd, coprime to p and q, few prime factors.
std::pair<QuatParams, Factorization> lift_setup(const Common& c, const LiftConfig& cfg) {
    const Int p = need_prime(c);
    const Factorization F = need_modulus(c, false);
    if (gcd(F.value(), p) != 1) throw ValidationError("N must be coprime to p");
    QuatParams P = make_params(p, F.value());
    try {
        validate_lift_modulus(P, F, cfg);
    } catch (const MalformedInput& e) {
        throw ValidationError(e.what());
    }
    return {std::move(P), F};
}

QuatElem parse_quat(const QuatParams& P, const std::string& s, const char* what) {
    const auto v = parse_ints(s, 4, 5, what);
    return P.elem(v[0], v[1], v[2], v[3], v.size() == 5 ? v[4] : Int(1));
}

GaussElem parse_gauss(const std::string& s, const char* what) {
    const auto v = parse_ints(s, 2, 2, what);
    return {v[0], v[1]};
}

MatModN parse_matrix(const Int& N, const std::string& s) {
    const auto v = parse_ints(s, 4, 4, "--matrix");
    const MatModN M(N, v[0], v[1], v[2], v[3]);
    if (!M.is_invertible()) throw ValidationError("--matrix must be invertible modulo N");
    return M;
}

void require(bool ok, const std::string& what) {
    if (!ok) throw InternalError("self-verification failed: " + what);
}

Json with_seed(Json j, std::uint64_t seed) {
    j["seed"] = std::to_string(seed);
    return j;
}

std::filesystem::path cache_dir() {
    if (const char* d = std::getenv("QLIFT_CACHE_DIR"); d && *d) return d;
    if (const char* x = std::getenv("XDG_CACHE_HOME"); x && *x) return std::filesystem::path(x) / "qlift";
    if (const char* h = std::getenv("HOME"); h && *h) return std::filesystem::path(h) / ".cache" / "qlift";
    return std::filesystem::temp_directory_path() / "qlift";
}

std::filesystem::path table_path(const QuatParams& P, const Factorization& F, const Int& B, std::uint64_t seed) {
    return cache_dir() / ("precomp-v" + std::to_string(kPrecompFormatVersion) + "-p" + to_string(P.p) + "-N" +
                          to_string(F.value()) + "-B" + to_string(B) + "-s" + std::to_string(seed) + ".json");
}

/// Loads the cached table or builds and stores it.
PrecompTable load_or_build(const QuatParams& P, const Factorization& F, const LiftConfig& cfg, RingIso& iso,
                           bool& cached, std::filesystem::path& path) {
    const Int B = effective_bound(P, cfg);
    path = table_path(P, F, B, cfg.seed);
    if (std::filesystem::exists(path)) {
        std::ifstream in(path);
        const Json j = Json::parse(in, nullptr, false);
        if (!j.is_discarded()) {
            try {
                PrecompTable T = precomp_from_json(P, j, iso);
                if (T.N == F && T.bound == B) {
                    verify_iso(o0_structure_constants(P, F), iso);
                    cached = true;
                    return T;
                }
            } catch (const Error&) {
            }
        }
        std::cerr << "ignoring unusable cache file " << path << "\n";
    }
    cached = false;
    iso = explicit_isomorphism(o0_structure_constants(P, F), Rng(cfg.seed).split(0x150).next());
    PrecompTable T = precompute_lift_table(P, F, iso, cfg);
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path);
    if (out) {
        out << precomp_json(P, T, iso, cfg.seed).dump() << "\n";
    } else {
        std::cerr << "cannot write cache file " << path << "\n";
    }
    return T;
}

void add_common(CLI::App* sub, Common& c, bool lift_flags) {
    sub->add_option("--p", c.p, "odd prime p");
    sub->add_option("--N", c.N, "modulus N");
    sub->add_option("--seed", c.seed, "random seed");
    if (lift_flags) {
        sub->add_option("--B", c.B, "powersmooth bound (0: floor((log2 p)^4))");
        sub->add_option("--epsilon", c.epsilon, "RepresentInteger' floor exponent (> 8)");
        sub->add_option("--c", c.c, "omega(N) <= ceil(c ln ln p)");
        sub->add_option("--budget", c.budget, "attempts per randomized loop");
        sub->add_flag("--relaxed", c.relaxed, "lower RepresentInteger' floor to p + 1");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Powersmooth quaternion lifting, Borel HSP and IsERP simulation"};
    app.require_subcommand(1);
    Common c;
    std::string sigma, alpha, mu, matrix, planted, oracle_cmd, mode = "ideal-hnf";
    bool scramble_flag = false, full = false, trace = false;
    std::vector<int> criteria;

    auto* params = app.add_subcommand("params", "describe O0 for p");
    add_common(params, c, false);
    auto* repint = app.add_subcommand("repint", "RepresentInteger' for alpha = A + B j");
    add_common(repint, c, true);
    repint->add_option("--alpha", alpha, "a0,a1,b0,b1 with A = a0 + a1 i, B = b0 + b1 i")->required();
    auto* sa = app.add_subcommand("strongapprox", "StrongApproximation_ps for mu0 = (t + s i) j");
    add_common(sa, c, true);
    sa->add_option("--mu", mu, "t,s")->required();
    auto* decompose = app.add_subcommand("decompose", "quaternion decomposition of sigma0 along a lift");
    add_common(decompose, c, true);
    decompose->add_option("--sigma", sigma, "a,b,c,d[,den]: (a + b i + c j + d k)/den in O0")->required();
    auto* pqlp = app.add_subcommand("pqlp", "powersmooth quaternion lift of sigma0");
    add_common(pqlp, c, true);
    pqlp->add_option("--sigma", sigma, "a,b,c,d[,den]: (a + b i + c j + d k)/den in O0")->required();
    pqlp->add_flag("--trace", trace, "include the decomposition trace");
    auto* pre = app.add_subcommand("precompute", "build (or load) the precomputed lifting table");
    add_common(pre, c, true);
    auto* lp = app.add_subcommand("lift-precomp", "lift a matrix through the precomputed table");
    add_common(lp, c, true);
    lp->add_option("--matrix", matrix, "a,b,c,d for [[a,b],[c,d]]")->required();
    auto* iso_cmd = app.add_subcommand("explicit-iso", "explicit isomorphism O0/N O0 -> M2(Z/N)");
    add_common(iso_cmd, c, false);
    iso_cmd->add_flag("--scramble", scramble_flag, "use a random presentation of M2(Z/N) instead of O0");
    auto* borel = app.add_subcommand("borel-solve", "solve a Borel hidden subgroup instance");
    add_common(borel, c, false);
    borel->add_option("--planted", planted, "x,y: planted submodule for a self-test oracle");
    borel->add_option("--oracle-cmd", oracle_cmd, "command speaking the JSON-lines oracle protocol");
    auto* serve = app.add_subcommand("oracle-serve", "serve a planted Borel oracle on stdin/stdout");
    add_common(serve, c, false);
    serve->add_option("--planted", planted, "x,y")->required();
    auto* demo = app.add_subcommand("iserp-demo", "plant a secret ideal and run the attack");
    add_common(demo, c, false);
    demo->add_option("--mode", mode, "oracle mode: ideal-hnf or order-invariant");
    auto* selftest = app.add_subcommand("selftest", "run the acceptance suite (scaled down unless --full)");
    selftest->add_flag("--full", full, "full-size runs");
    selftest->add_option("--criterion", criteria, "criteria to run")->check(CLI::Range(1, 8));
    selftest->add_option("--seed", c.seed, "master seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cout << Json{{"error", "validation"}, {"detail", e.what()}}.dump() << std::endl;
        return 2;
    }

    try {
        std::cerr << "seed=" << c.seed << "\n";
        Json out;
        bool success = true;
        if (*params) {
            const Int p = need_prime(c);
            const Int N = c.N.empty() ? Int(1) : need_int(c.N, "N");
            const QuatParams P = make_params(p, N);
            require(is_order(P, o0_lattice()) && order_discriminant(P, o0_lattice()) == Rat(p), "O0 is maximal");
            Json basis = Json::array();
            for (const auto& b : P.basis) {
                Json num = Json::array();
                for (const auto& v : b.num()) num.push_back(int_json(v));
                basis.push_back({{"num", num}, {"den", int_json(b.den())}});
            }
            out = {{"p", int_json(p)}, {"q", int_json(P.q)}, {"D", int_json(P.D)},
                   {"relations", "i^2 = -q, j^2 = -p, k = ij"}, {"basis_std", basis},
                   {"discriminant", int_json(p)}};
        } else if (*repint) {
            const LiftConfig cfg = lift_config(c);
            const auto [P, F] = lift_setup(c, cfg);
            const auto v = parse_ints(alpha, 4, 4, "--alpha");
            const GaussElem A{v[0], v[1]}, B{v[2], v[3]};
            Rng rng(c.seed);
            const RepIntResult r = represent_integer_prime(P, F, A, B, cfg, rng);
            const Int sq = effective_bound(P, cfg);
            require(r.cert.verify() && r.cert.value == gnorm(r.C, P.q) + P.p * gnorm(r.D, P.q), "n(C + Dj)");
            require(check_conditions(P, F, A, B, r.C, r.D, sq).all(), "conditions (i)-(v)");
            out = {{"C", gauss_json(r.C)}, {"D", gauss_json(r.D)}, {"norm", cert_json(r.cert)},
                   {"attempts", r.attempts}};
        } else if (*sa) {
            const LiftConfig cfg = lift_config(c);
            const auto [P, F] = lift_setup(c, cfg);
            const GaussElem ts = parse_gauss(mu, "--mu");
            Rng rng(c.seed);
            const StrongApproxResult r = strong_approximation_ps(P, F, ts, cfg, rng);
            const QuatElem mu0 = P.from_gauss({0, 0}, ts);
            require(verify_lift(P, F, o0_lattice(), mu0, LiftResult{r.mu, r.lambda, r.cert, std::nullopt},
                                effective_bound(P, cfg)),
                    "mu = lambda mu0 mod N O0 with powersmooth norm");
            out = {{"mu0", quat_json(P, mu0)}, {"mu", quat_json(P, r.mu)}, {"lambda", int_json(r.lambda)},
                   {"norm", cert_json(r.cert)}};
        } else if (*decompose || *pqlp) {
            const LiftConfig cfg = lift_config(c);
            const auto [P, F] = lift_setup(c, cfg);
            const QuatElem s0 = parse_quat(P, sigma, "--sigma");
            if (!P.in_o0(s0)) throw ValidationError("--sigma is not in O0");
            if (gcd(s0.norm().get_num(), F.value()) != 1 || s0.norm().get_den() != 1) {
                throw ValidationError("n(sigma0) must be coprime to N");
            }
            const LiftResult r = pqlp_lift(P, F, o0_lattice(), s0, cfg);
            require(verify_lift(P, F, o0_lattice(), s0, r, effective_bound(P, cfg)), "lift");
            if (r.trace) require(verify_recomposition(P, F, *r.trace), "recomposition");
            auto trace_json = [&](const LiftTrace& t) {
                return Json{{"sigma0_reduced", quat_json(P, t.sigma0_reduced)},
                            {"C", gauss_json(t.C)},
                            {"D", gauss_json(t.D)},
                            {"x1", gauss_json(t.triple.x1)},
                            {"x2", gauss_json(t.triple.x2)},
                            {"x3", gauss_json(t.triple.x3)},
                            {"t0", int_json(t.triple.t0)},
                            {"lambda_prime", int_json(t.triple.lambda_prime)},
                            {"premultiplied", t.premultiplied},
                            {"conjugated", t.conjugated}};
            };
            if (*pqlp) {
                out = {{"sigma0", quat_json(P, s0)}, {"N", int_json(F.value())}, {"frame", frame_json(P)}};
                out.update(lift_json(P, r));
                if (trace && r.trace) out["trace"] = trace_json(*r.trace);
            } else {
                out = {{"sigma0", quat_json(P, s0)}, {"N", int_json(F.value())}};
                out["decomposition"] = r.trace ? trace_json(*r.trace) : Json(nullptr);
                if (!r.trace) out["note"] = "sigma0 is a scalar modulo N; no decomposition needed";
            }
        } else if (*pre || *lp) {
            const LiftConfig cfg = lift_config(c);
            const auto [P, F] = lift_setup(c, cfg);
            RingIso iso;
            bool cached = false;
            std::filesystem::path path;
            const PrecompTable T = load_or_build(P, F, cfg, iso, cached, path);
            std::cerr << (cached ? "loaded " : "wrote ") << path << "\n";
            for (const auto& e : T.entries) {
                require(verify_lift(P, F, o0_lattice(), P.from_o0(element_of_matrix(iso, e.matrix)), e.lift, T.bound),
                        "table entry " + e.family + std::to_string(e.k));
            }
            if (*pre) {
                out = {{"N", int_json(F.value())}, {"bound", int_json(T.bound)}, {"entries", T.entries.size()},
                       {"swap", T.swap.has_value()}, {"bits", T.bits}};
            } else {
                const MatModN M = parse_matrix(F.value(), matrix);
                unsigned used = 0;
                const LiftResult r = precomputed_lift(P, T, iso, M, &used);
                const auto [coords, den] = P.o0_coords(r.sigma);
                require(den == 1 && matrix_of_element(iso, coords) == M.scaled(r.lambda), "M_sigma = lambda M");
                out = lift_json(P, r);
                out["matrix"] = matrix_json(M);
                out["factors_used"] = used;
            }
        } else if (*iso_cmd) {
            const Factorization F = need_modulus(c, false);
            StructureConstants A;
            if (scramble_flag) {
                Rng rng(c.seed);
                A = scramble(standard_matrix_algebra(F), rng);
            } else {
                const Int p = need_prime(c);
                if (gcd(p, F.value()) != 1) throw ValidationError("N must be coprime to p");
                A = o0_structure_constants(make_params(p, F.value()), F);
            }
            const RingIso iso = explicit_isomorphism(A, c.seed);
            verify_iso(A, iso);
            out = {{"structure_constants", structure_constants_json(A)}, {"iso", iso_json(iso)}};
        } else if (*borel) {
            const Factorization F = need_modulus(c, true);
            if (planted.empty() == oracle_cmd.empty()) {
                throw ValidationError("give exactly one of --planted and --oracle-cmd");
            }
            std::unique_ptr<HidingOracle> oracle;
            std::optional<CyclicSubmodule> truth;
            if (!planted.empty()) {
                const auto v = parse_ints(planted, 2, 2, "--planted");
                if (!is_primitive(F, v[0], v[1])) throw ValidationError("--planted is not primitive modulo N");
                truth = CyclicSubmodule(F, v[0], v[1]);
                oracle = std::make_unique<PlantedOracle>(*truth);
            } else {
                oracle = std::make_unique<SubprocessOracle>(F.value(), oracle_cmd);
            }
            BorelConfig cfg;
            cfg.seed = c.seed;
            BorelStats st;
            const CyclicSubmodule S = borel_solve(*oracle, F, cfg, &st);
            if (truth) require(same_borel_subgroup(S, *truth), "recovered stabilizer equals the planted one");
            out = {{"N", int_json(F.value())},
                   {"submodule", submodule_json(S)},
                   {"solve_calls", std::to_string(st.solve_calls)},
                   {"check_calls", std::to_string(st.check_calls)},
                   {"call_budget", std::to_string(static_cast<std::uint64_t>(borel_call_budget(F)))}};
            if (truth) out["exact"] = S == *truth;
        } else if (*serve) {
            const Factorization F = need_modulus(c, true);
            const auto v = parse_ints(planted, 2, 2, "--planted");
            if (!is_primitive(F, v[0], v[1])) throw ValidationError("--planted is not primitive modulo N");
            PlantedOracle oracle(CyclicSubmodule(F, v[0], v[1]));
            std::string line;
            while (std::getline(std::cin, line)) {
                if (line.empty()) continue;
                const Json req = Json::parse(line);
                std::cout << Json{{"label", oracle(matrix_from_json(F.value(), req.at("matrix")))}}.dump()
                          << std::endl;
            }
            return 0;
        } else if (*demo) {
            const Int p = need_prime(c);
            const Factorization F = need_modulus(c, false);
            if (gcd(p, F.value()) != 1) throw ValidationError("N must be coprime to p");
            PlantOptions opt;
            try {
                opt.mode = parse_oracle_mode(mode);
            } catch (const MalformedInput& e) {
                throw ValidationError(e.what());
            }
            const QuatParams P = make_params(p, F.value());
            const IsERPInstance inst = plant_instance(P, F, c.seed, opt);
            const AttackTranscript t = run_attack(inst, c.seed);
            std::cerr << "attack: " << t.oracle_calls << " oracle calls, " << t.seconds << " s\n";
            out = transcript_json(inst, t);
            success = t.ok();
        } else if (*selftest) {
            AcceptanceOptions opt;
            opt.quick = !full;
            opt.only.insert(criteria.begin(), criteria.end());
            if (c.seed != 0) opt.seed = c.seed;
            const auto res = run_acceptance(opt, std::cerr, std::cerr);
            Json arr = Json::array();
            for (const auto& l : res) arr.push_back({{"criterion", l.id}, {"pass", l.pass}, {"detail", l.detail}});
            out = {{"quick", opt.quick}, {"criteria", arr}};
            c.seed = opt.seed;
        }
        std::cout << with_seed(out, c.seed).dump(2) << std::endl;
        return success ? 0 : 1;
    } catch (const ValidationError& e) {
        std::cout << Json{{"error", e.code()}, {"detail", e.what()}}.dump() << std::endl;
        return 2;
    } catch (const MalformedInput& e) {
        std::cout << Json{{"error", e.code()}, {"detail", e.what()}}.dump() << std::endl;
        return 2;
    } catch (const Error& e) {
        std::cout << Json{{"error", e.code()}, {"detail", e.what()}}.dump() << std::endl;
        return 1;
    } catch (const std::exception& e) {
        std::cout << Json{{"error", "internal_error"}, {"detail", e.what()}}.dump() << std::endl;
        return 1;
    }
}
