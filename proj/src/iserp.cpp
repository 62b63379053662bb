#include "qlift/iserp.hpp"

#include <algorithm>
#include <chrono>
#include <tuple>

namespace qlift {

std::string to_string(OracleMode m) { return m == OracleMode::IdealHnf ? "ideal-hnf" : "order-invariant"; }

OracleMode parse_oracle_mode(const std::string& s) {
    if (s == "ideal-hnf") return OracleMode::IdealHnf;
    if (s == "order-invariant") return OracleMode::OrderInvariant;
    throw MalformedInput("unknown oracle mode '" + s + "'");
}

namespace {

CyclicSubmodule random_submodule(const Factorization& N, Rng& rng) {
    const Int n = N.value();
    for (;;) {
        const Int x = rng.below(n), y = rng.below(n);
        if (is_primitive(N, x, y)) return CyclicSubmodule(N, x, y);
    }
}

std::string lattice_string(const QuatLattice& L) {
    std::string s = to_string(L.den()) + ":";
    for (const auto& row : L.basis()) {
        for (const auto& v : row) s += to_string(v) + ",";
        s += ";";
    }
    return s;
}

Int as_integer(const Rat& r) {
    QLIFT_CHECK(r.get_den() == 1, "expected an integer");
    return r.get_num();
}

}  // namespace

IsERPInstance plant_instance(const QuatParams& P, const Factorization& N, std::uint64_t seed,
                             const PlantOptions& opt) {
    const Int n = N.value();
    if (n < 2) throw MalformedInput("N must be at least 2");
    if (gcd(n, P.p) != 1) throw MalformedInput("N must be coprime to p");
    IsERPInstance inst;
    inst.P = P;
    inst.N = N;
    inst.mode = opt.mode;
    inst.seed = seed;
    Rng rng(seed);
    inst.base = opt.base_order ? order_frame(P, *opt.base_order) : o0_frame(P);
    inst.iso = explicit_isomorphism(order_structure_constants(P, inst.base, N), rng.split(1).next());
    Rng secret_rng = rng.split(2);
    inst.secret = opt.forced_secret ? *opt.forced_secret : random_submodule(N, secret_rng);
    if (inst.secret.modulus() != n) throw MalformedInput("forced secret has the wrong modulus");
    inst.ideal = kernel_ideal_in(P, inst.base, N, inst.secret, inst.iso);
    QLIFT_CHECK(inst.ideal.norm == Rat(n), "planted ideal norm");
    QLIFT_CHECK(is_cyclic(P, N, inst.ideal), "planted ideal cyclic");
    return inst;
}

IsERPInstance with_secret(const IsERPInstance& inst, const CyclicSubmodule& S) {
    IsERPInstance out = inst;
    out.secret = S;
    out.ideal = kernel_ideal_in(inst.P, inst.base, inst.N, S, inst.iso);
    return out;
}

QuatIdeal act(const IsERPInstance& inst, const MatModN& M) {
    const QuatParams& P = inst.P;
    const Int n = inst.N.value();
    if (M.modulus() != n) throw MalformedInput("matrix modulus differs from N");
    if (!M.is_invertible()) throw MalformedInput("matrix is not invertible modulo N");

    const QuatIdeal direct = kernel_ideal_in(P, inst.base, inst.N, inst.secret.image(M), inst.iso);

    const QuatElem sigma = inst.base.element(P, element_of_matrix(inst.iso, M));
    QLIFT_CHECK(mod(as_integer(sigma.norm()) - M.det(), n) == 0, "det M_sigma == n(sigma) mod N");
    const QuatLattice O = inst.base.lattice;
    const QuatLattice meet = inst.ideal.lattice.intersect(right_mul(P, O, sigma));
    const QuatLattice formula = conjugate_lattice(P, meet, sigma.inverse()) + O.scaled(Rat(n));
    if (formula != direct.lattice) {
        throw InternalError("group action formula disagrees with the kernel ideal for M = " + M.to_string());
    }
    return direct;
}

std::string ideal_label(const QuatIdeal& I) { return lattice_string(I.lattice); }

std::string order_invariant_label(const QuatParams& P, const QuatLattice& O) {
    // Z + 2 O
    std::vector<QuatElem> gens{QuatElem::scalar(P.alg, 1)};
    for (const auto& b : basis_elems(P, O)) gens.push_back(b * Rat(2));
    const auto elems = basis_elems(P, lattice_of(P, gens));

    // trace-zero sublattice: kernel of the trace vector
    IntVec t;
    for (const auto& e : elems) t.push_back(as_integer(e.trace()));
    Int g = 0;
    for (const auto& v : t) g = gcd(g, v);
    QLIFT_CHECK(g != 0, "trace form vanishes");
    IntVec c;
    for (const auto& v : t) c.push_back(v / g);
    const IntMat U = unimodular_with_first_row(c);
    const IntMat adj = adjugate(U);
    std::vector<QuatElem> v3;
    for (int j = 1; j < 4; ++j) {
        QuatElem x = QuatElem::scalar(P.alg, 0);
        for (int i = 0; i < 4; ++i) x = x + elems[i] * Rat(adj[i][j]);
        QLIFT_CHECK(x.trace() == 0, "Gross lattice vector has trace zero");
        v3.push_back(x);
    }
    RatMat G(3, RatVec(3));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) G[i][j] = (v3[i] * v3[j].conj()).trace();

    const IntMat R = lll_reduce(identity_matrix(3), G);
    const RatMat Gr = gram_of(R, G);
    Rat bound = 0;
    for (int i = 0; i < 3; ++i) bound = std::max(bound, Gr[i][i]);
    auto vecs = short_vectors(Gr, bound);
    auto form = [&](const IntVec& x, const IntVec& y) {
        Rat s = 0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) s += Rat(x[i] * y[j]) * Gr[i][j];
        return s;
    };
    std::vector<std::pair<Rat, IntVec>> sorted;
    for (const auto& v : vecs) sorted.emplace_back(form(v, v), v);
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::pair<Rat, IntVec>> signed_vecs;
    for (const auto& [q, v] : sorted) {
        signed_vecs.emplace_back(q, v);
        IntVec w = v;
        for (auto& x : w) x = -x;
        signed_vecs.emplace_back(q, w);
    }

    using Key = std::array<Rat, 6>;
    std::optional<Key> best;
    for (const auto& [qa, a] : sorted) {
        if (best && qa > (*best)[0]) break;
        for (const auto& [qb, b] : signed_vecs) {
            if (best && std::tie(qa, qb) > std::tie((*best)[0], (*best)[1])) break;
            for (const auto& [qc, c3] : signed_vecs) {
                if (best && std::tie(qa, qb, qc) > std::tie((*best)[0], (*best)[1], (*best)[2])) break;
                const Int det = determinant(IntMat{a, b, c3});
                if (det != 1 && det != -1) continue;
                const Key k{qa, qb, qc, form(a, b), form(a, c3), form(b, c3)};
                if (!best || k < *best) best = k;
            }
        }
    }
    QLIFT_CHECK(best.has_value(), "no reduced basis among short vectors");
    std::string s;
    for (const auto& r : *best) s += r.get_str() + ",";
    return s;
}

std::string IsERPOracle::label(const MatModN& M) {
    const QuatIdeal I = act(inst_, M);
    if (mode_ == OracleMode::IdealHnf) return ideal_label(I);
    return order_invariant_label(inst_.P, right_order(inst_.P, I.lattice));
}

bool oracle_partitions_agree(const IsERPInstance& inst, const std::vector<MatModN>& mats) {
    IsERPOracle a(inst, OracleMode::IdealHnf), b(inst, OracleMode::OrderInvariant);
    std::vector<std::string> la, lb;
    for (const auto& M : mats) {
        la.push_back(a(M));
        lb.push_back(b(M));
    }
    for (std::size_t i = 0; i < mats.size(); ++i) {
        for (std::size_t j = i + 1; j < mats.size(); ++j) {
            if ((la[i] == la[j]) != (lb[i] == lb[j])) return false;
        }
    }
    return true;
}

bool eichler_stabilizer_check(const IsERPInstance& inst, unsigned count, Rng& rng) {
    const QuatParams& P = inst.P;
    const Int n = inst.N.value();
    const auto basis = basis_elems(P, eichler_order(P, inst.ideal));
    unsigned done = 0;
    for (unsigned tries = 0; done < count; ++tries) {
        if (tries > 100 * count) throw BudgetExhausted("no Eichler elements of norm prime to N");
        QuatElem s = QuatElem::scalar(P.alg, 0);
        for (const auto& b : basis) s = s + b * Rat(rng.range(-4, 4));
        if (s.is_zero() || gcd(as_integer(s.norm()), n) != 1) continue;
        const auto c = inst.base.coords(P, s);
        QLIFT_CHECK(c.has_value(), "Eichler element lies in the base order");
        const MatModN M = matrix_of_element(inst.iso, *c);
        if (!(inst.secret.image(M) == inst.secret)) return false;
        ++done;
    }
    return true;
}

bool AttackTranscript::ok() const {
    return std::all_of(verdicts.begin(), verdicts.end(), [](const auto& kv) { return kv.second; });
}

AttackTranscript run_attack(const IsERPInstance& inst, std::uint64_t seed) {
    const auto start = std::chrono::steady_clock::now();
    AttackTranscript t;
    t.seed = seed;
    IsERPOracle oracle(inst, inst.mode);
    BorelConfig cfg;
    cfg.seed = seed;
    t.recovered = borel_solve(oracle, inst.N, cfg);
    t.oracle_calls = oracle.calls();
    t.recovered_ideal = kernel_ideal_in(inst.P, inst.base, inst.N, t.recovered, inst.iso);
    t.recovered_order = right_order(inst.P, t.recovered_ideal.lattice);

    t.verdicts["submodule"] = same_borel_subgroup(t.recovered, inst.secret);
    t.verdicts["ideal_hnf"] = t.recovered_ideal.lattice == inst.ideal.lattice;
    t.verdicts["right_order_hnf"] = t.recovered_order == right_order(inst.P, inst.ideal.lattice);
    t.verdicts["right_order_maximal"] =
        is_order(inst.P, t.recovered_order) &&
        order_discriminant(inst.P, t.recovered_order) == order_discriminant(inst.P, inst.base.lattice);
    Rng rng = Rng(seed).split(7);
    t.verdicts["eichler_stabilizer"] = eichler_stabilizer_check(inst, 20, rng);
    t.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return t;
}

RoundtripResult pqlp_roundtrip_demo(const IsERPInstance& inst, const MatModN& M, const LiftConfig& cfg) {
    const QuatParams& P = inst.P;
    if (!M.is_invertible()) throw MalformedInput("matrix is not invertible modulo N");
    RoundtripResult r;
    r.sigma0 = inst.base.element(P, element_of_matrix(inst.iso, M));
    r.lift = pqlp_lift(P, inst.N, inst.base.lattice, r.sigma0, cfg);
    const auto c = inst.base.coords(P, r.lift.sigma);
    r.matrix_ok = c.has_value() && matrix_of_element(inst.iso, *c) == M.scaled(r.lift.lambda);
    r.lift_ok = verify_lift(P, inst.N, inst.base.lattice, r.sigma0, r.lift, effective_bound(P, cfg));
    return r;
}

}  // namespace qlift
