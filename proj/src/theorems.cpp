#include "filtlab/theorems.hpp"

#include "filtlab/generate.hpp"
#include "filtlab/rng.hpp"

#include <algorithm>
#include <deque>

namespace filtlab {

namespace {

constexpr std::uint64_t kCountSaturated = UINT64_MAX / 4;

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
    if (a == 0 || b == 0) return 0;
    if (a > kCountSaturated / b) return kCountSaturated;
    return a * b;
}

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
    return (a > kCountSaturated - b) ? kCountSaturated : a + b;
}

// Sub-blocks of `block` inside the finer partition.
std::vector<std::vector<int>> children_of(const std::vector<int>& block, const Partition& finer) {
    std::vector<std::vector<int>> out;
    std::vector<int> seen;
    for (int w : block) {
        int b = finer.block_of(w);
        if (std::find(seen.begin(), seen.end(), b) == seen.end()) {
            seen.push_back(b);
            out.push_back(finer.block(b));
        }
    }
    return out;
}

std::uint64_t count_from(const Filtration& F, int t, const std::vector<int>& block) {
    if (t == F.horizon()) return 2;  // stop at T, or never
    std::uint64_t prod = 1;
    for (const auto& child : children_of(block, F.at(t + 1)))
        prod = sat_mul(prod, count_from(F, t + 1, child));
    return sat_add(1, prod);
}

struct EnumNode {
    int t;
    std::vector<int> block;
};

void enumerate_rec(const Filtration& F, std::deque<EnumNode> pending, std::vector<int>& tau,
                   std::uint64_t& emitted, std::uint64_t cap,
                   const std::function<void(const RandomTime&)>& visit) {
    if (pending.empty()) {
        if (++emitted > cap) throw EnumerationCapError(emitted, cap);
        visit(RandomTime(tau));
        return;
    }
    EnumNode node = std::move(pending.front());
    pending.pop_front();

    // Option 1: the whole atom stops now.
    for (int w : node.block) tau[w] = node.t;
    enumerate_rec(F, pending, tau, emitted, cap, visit);

    if (node.t == F.horizon()) {
        // Option 2 at the horizon: the atom never stops.
        for (int w : node.block) tau[w] = kTimeInf;
        enumerate_rec(F, std::move(pending), tau, emitted, cap, visit);
    } else {
        // Option 2 before the horizon: defer to the finer atoms at t+1.
        for (const auto& child : children_of(node.block, F.at(node.t + 1)))
            pending.push_back(EnumNode{node.t + 1, child});
        enumerate_rec(F, std::move(pending), tau, emitted, cap, visit);
    }
}

Witness make_witness(const std::string& cond, int t, int outcome, std::vector<std::string> values,
                     std::string detail = {}) {
    Witness w;
    w.condition = cond;
    w.t = t;
    w.outcome = outcome;
    w.values = std::move(values);
    w.detail = std::move(detail);
    return w;
}

// Pseudo-stopping test against a precomputed basis (with cached E[M_0]).
struct BasisCache {
    std::vector<Process> basis;
    std::vector<Rat> initial;  // E[M_0] per basis martingale

    BasisCache(const Filtration& F, const SampleSpace& space) : basis(basis_martingales(F, space)) {
        for (const Process& M : basis) {
            Rat e;
            for (int w = 0; w < F.n(); ++w) e += space.probs[w] * M.at(0)[w];
            initial.push_back(e);
        }
    }
};

PseudoVerdict pseudo_with_basis(const RandomTime& tau, const Filtration& F, const SampleSpace& space,
                                const BasisCache& cache) {
    PseudoVerdict out;
    out.pseudo = true;
    for (size_t b = 0; b < cache.basis.size(); ++b) {
        const Process& M = cache.basis[b];
        Rat stopped;
        for (int w = 0; w < F.n(); ++w)
            stopped += space.probs[w] * M.at(std::min(tau.at(w), F.horizon()))[w];
        if (stopped != cache.initial[b]) {
            out.pseudo = false;
            out.witness = make_witness("basis_expectation", -1, -1,
                                       {stopped.str(), cache.initial[b].str()},
                                       "terminal block #" + std::to_string(b));
            return out;
        }
    }
    return out;
}

// Two-valued stopping times t on C, t+1 off C (plus the constants). Against
// this family alone, "every member is pseudo-stopping" already forces
// immersion, so the sampling fallback stays conclusive.
std::vector<RandomTime> structured_g_family(const Filtration& G) {
    std::vector<RandomTime> out;
    const int T = G.horizon();
    const int n = G.n();
    for (int t = 0; t <= T; ++t) {
        out.emplace_back(std::vector<int>(n, t));
        if (t == T) break;
        for (const auto& block : G.at(t).blocks()) {
            std::vector<int> v(n, t + 1);
            for (int w : block) v[w] = t;
            out.emplace_back(std::move(v));
        }
    }
    out.emplace_back(std::vector<int>(n, kTimeInf));
    return out;
}

}  // namespace

PseudoVerdict is_pseudo_stopping(const RandomTime& tau, const Filtration& F, const SampleSpace& space) {
    tau.validate(F.n(), F.horizon());
    PseudoVerdict out;
    out.pseudo = true;
    const auto basis = basis_martingales(F, space);
    for (size_t b = 0; b < basis.size(); ++b) {
        const Process& M = basis[b];
        Rat stopped, initial;
        for (int w = 0; w < F.n(); ++w) {
            int t = std::min(tau.at(w), F.horizon());  // M_inf := M_T
            stopped += space.probs[w] * M.at(t)[w];
            initial += space.probs[w] * M.at(0)[w];
        }
        if (stopped != initial) {
            out.pseudo = false;
            out.witness = make_witness("basis_expectation", -1, -1, {stopped.str(), initial.str()},
                                       "terminal block #" + std::to_string(b));
            return out;
        }
    }
    return out;
}

ImmersionVerdict is_immersed(const FilteredPair& pair) {
    ImmersionVerdict out;
    out.immersed = true;
    const auto basis = basis_martingales(pair.F, pair.space);
    for (size_t b = 0; b < basis.size(); ++b) {
        const Process& M = basis[b];
        for (int t = 1; t <= pair.horizon(); ++t) {
            RatVec lhs = cond_expect(M.at(t), pair.G.at(t - 1), pair.space);
            for (int w = 0; w < pair.n(); ++w) {
                if (lhs[w] != M.at(t - 1)[w]) {
                    out.immersed = false;
                    out.witness = make_witness("basis_g_martingale", t, w,
                                               {lhs[w].str(), M.at(t - 1)[w].str()},
                                               "terminal block #" + std::to_string(b));
                    return out;
                }
            }
        }
    }
    return out;
}

bool immersion_cond_indep(const FilteredPair& pair) {
    for (const auto& block : pair.F.terminal().blocks()) {
        RatVec ind = indicator_vector(block, pair.n());
        for (int t = 0; t <= pair.horizon(); ++t) {
            if (cond_expect(ind, pair.G.at(t), pair.space) != cond_expect(ind, pair.F.at(t), pair.space))
                return false;
        }
    }
    return true;
}

std::uint64_t count_stopping_times(const Filtration& F) {
    std::uint64_t prod = 1;
    for (const auto& block : F.at(0).blocks()) prod = sat_mul(prod, count_from(F, 0, block));
    return prod;
}

std::uint64_t enumerate_stopping_times(const Filtration& F, std::uint64_t cap,
                                       const std::function<void(const RandomTime&)>& visit) {
    std::uint64_t total = count_stopping_times(F);
    if (total > cap) throw EnumerationCapError(total, cap);
    std::deque<EnumNode> pending;
    for (const auto& block : F.at(0).blocks()) pending.push_back(EnumNode{0, block});
    std::vector<int> tau(F.n());
    std::uint64_t emitted = 0;
    enumerate_rec(F, std::move(pending), tau, emitted, cap, visit);
    return emitted;
}

CheckReport ny2_check(const RandomTime& tau, const Filtration& F, const SampleSpace& space) {
    tau.validate(F.n(), F.horizon());
    CheckReport rep;
    rep.name = "ny2";
    const int T = F.horizon();
    const int n = F.n();
    AzemaBundle bundle = azema_bundle(tau, F, space);

    bool pseudo = is_pseudo_stopping(tau, F, space).pseudo;

    // (ii) terminal dual projection carries exactly the finite mass.
    std::vector<int> finite;
    for (int w = 0; w < n; ++w)
        if (tau.finite(w)) finite.push_back(w);
    RatVec finite_mass = cond_expect(indicator_vector(finite, n), F.terminal(), space);
    bool dual_terminal = bundle.Ao.at(T) == finite_mass;

    // (iii) m identically one.
    bool m_one = true;
    for (int t = 0; t <= T && m_one; ++t)
        for (int w = 0; w < n; ++w)
            if (bundle.m.at(t)[w] != Rat(1)) { m_one = false; break; }

    // (iv) stopped basis martingales remain martingales after enlargement.
    Filtration Ftau = progressive_enlargement(F, tau);
    bool stopped_martingale = true;
    for (const Process& M : basis_martingales(F, space)) {
        Process stopped(T, n);
        for (int t = 0; t <= T; ++t)
            for (int w = 0; w < n; ++w) stopped.at(t)[w] = M.at(std::min(t, tau.at(w)))[w];
        if (!is_martingale(stopped, Ftau, space)) { stopped_martingale = false; break; }
    }

    // (v) Ztilde predictable: Ztilde_t constant on each F_{t-1} atom.
    bool ztilde_predictable = true;
    for (int t = 1; t <= T && ztilde_predictable; ++t) {
        for (const auto& block : F.at(t - 1).blocks()) {
            const Rat& v = bundle.Ztilde.at(t)[block.front()];
            for (int w : block)
                if (bundle.Ztilde.at(t)[w] != v) { ztilde_predictable = false; break; }
            if (!ztilde_predictable) break;
        }
    }

    rep.add("pseudo_stopping", pseudo);
    rep.add("dual_terminal_mass", dual_terminal);
    rep.add("m_constant_one", m_one);
    rep.add("stopped_basis_martingale", stopped_martingale);
    rep.add("ztilde_predictable", ztilde_predictable);
    rep.settle();

    // With the equivalence in force, Ztilde must fall pointwise.
    if (rep.agree && pseudo) {
        for (int t = 1; t <= T; ++t)
            for (int w = 0; w < n; ++w)
                if (bundle.Ztilde.at(t)[w] > bundle.Ztilde.at(t - 1)[w]) {
                    rep.agree = false;
                    rep.witness = make_witness("ztilde_nonincreasing", t, w,
                                               {bundle.Ztilde.at(t - 1)[w].str(), bundle.Ztilde.at(t)[w].str()});
                    return rep;
                }
    }
    if (!rep.agree && !rep.witness)
        rep.witness = make_witness("condition_disagreement", -1, -1, {});
    return rep;
}

CheckReport pseudoH_check(const FilteredPair& pair, std::uint64_t cap, std::uint64_t sample_seed) {
    CheckReport rep;
    rep.name = "pseudoH";

    ImmersionVerdict imm = is_immersed(pair);
    BasisCache cache(pair.F, pair.space);

    bool fallback = false;
    std::uint64_t examined = 0;
    bool all_pseudo = true;
    bool projections_match = true;
    std::optional<Witness> witness;

    auto consider = [&](const RandomTime& nu) {
        ++examined;
        if (all_pseudo) {
            PseudoVerdict pv = pseudo_with_basis(nu, pair.F, pair.space, cache);
            if (!pv.pseudo) {
                all_pseudo = false;
                if (!witness && pv.witness) {
                    witness = pv.witness;
                    std::string vals;
                    for (int w = 0; w < nu.n(); ++w) vals += (w ? "," : "") + time_str(nu.at(w));
                    witness->detail += "; nu=(" + vals + ")";
                }
            }
        }
        if (projections_match) {
            Process A = indicator_process(nu, pair.horizon());
            if (!optional_equals_dual(A, pair.F, pair.space)) projections_match = false;
        }
    };

    std::uint64_t total = count_stopping_times(pair.G);
    if (total <= cap) {
        enumerate_stopping_times(pair.G, cap, consider);
    } else {
        // Exact enumeration is out of reach; fall back to the structured
        // two-valued family (conclusive for the immersion direction) plus a
        // seeded random sample.
        fallback = true;
        for (const RandomTime& nu : structured_g_family(pair.G)) consider(nu);
        Rng rng(Rng::mix(sample_seed, 0x5eedULL));
        const int kSamples = 2048;
        for (int i = 0; i < kSamples; ++i) consider(gen_stopping_time(pair.G, rng));
    }

    // Random G-adapted increasing processes widen the family beyond
    // stopping-time indicators.
    Rng rng(Rng::mix(sample_seed, total));
    for (int i = 0; i < 8 && projections_match; ++i) {
        Process V = gen_adapted_increasing(pair.G, rng);
        if (!optional_equals_dual(V, pair.F, pair.space)) projections_match = false;
    }

    rep.add("immersed", imm.immersed);
    rep.add("g_stopping_times_pseudo", all_pseudo);
    rep.add("dual_equals_optional_projection", projections_match);
    rep.settle();
    if (!imm.immersed && imm.witness && !witness) witness = imm.witness;
    rep.witness = witness;
    rep.note("stopping_time_count", std::to_string(total));
    rep.note("examined", std::to_string(examined));
    if (fallback) rep.note("sampled_fallback", "true");
    return rep;
}

std::optional<RandomTime> stopping_time_agreeing_on_finite(const RandomTime& tau, const Filtration& F) {
    tau.validate(F.n(), F.horizon());
    const int n = F.n();
    const int T = F.horizon();
    // sigma = t is forced on the whole F_t-atom of any outcome with tau = t;
    // a forced atom containing a different finite value, or an outcome forced
    // twice, makes agreement impossible.
    std::vector<int> sigma(n, kTimeInf);
    for (int t = 0; t <= T; ++t) {
        for (const auto& block : F.at(t).blocks()) {
            bool hit = false;
            for (int w : block)
                if (tau.at(w) == t) { hit = true; break; }
            if (!hit) continue;
            for (int w : block) {
                if (tau.finite(w) && tau.at(w) != t) return std::nullopt;
                if (sigma[w] != kTimeInf && sigma[w] != t) return std::nullopt;
                sigma[w] = t;
            }
        }
    }
    return RandomTime(std::move(sigma));
}

CheckReport honest_pseudo_check(const RandomTime& tau, const Filtration& F, const SampleSpace& space) {
    tau.validate(F.n(), F.horizon());
    CheckReport rep;
    rep.name = "honest";
    const int T = F.horizon();
    const int n = F.n();

    AzemaBundle bundle = azema_bundle(tau, F, space);

    std::optional<RandomTime> sigma = stopping_time_agreeing_on_finite(tau, F);

    std::vector<int> finite;
    for (int w = 0; w < n; ++w)
        if (tau.finite(w)) finite.push_back(w);
    bool terminal_mass = bundle.Ao.at(T) == cond_expect(indicator_vector(finite, n), F.terminal(), space);

    bool representable = sigma.has_value() && terminal_mass;
    bool honest = is_honest(tau, F);
    bool pseudo = is_pseudo_stopping(tau, F, space).pseudo;

    rep.add("stopping_representation", representable);
    rep.add("honest_and_pseudo", honest && pseudo);
    rep.settle();

    rep.note("sigma_exists", sigma ? "true" : "false");
    rep.note("terminal_mass_matches", terminal_mass ? "true" : "false");
    rep.note("honest", honest ? "true" : "false");
    rep.note("pseudo", pseudo ? "true" : "false");

    if (honest && pseudo) {
        // Canonical representative: first time the dual projection charges.
        for (int w = 0; w < n; ++w) {
            if (!tau.finite(w)) continue;
            int first = kTimeInf;
            for (int t = 0; t <= T; ++t)
                if (bundle.Ao.at(t)[w].sgn() > 0) { first = t; break; }
            if (first != tau.at(w)) {
                rep.agree = false;
                rep.witness = make_witness("canonical_hitting_time", first, w,
                                           {time_str(first), time_str(tau.at(w))},
                                           "inf{t: Ao_t > 0} != tau on {tau < inf}");
                return rep;
            }
        }
    }
    if (!rep.agree && !rep.witness)
        rep.witness = make_witness("equivalence", -1, -1, {},
                                   "stopping_representation vs honest_and_pseudo");
    return rep;
}

StoppingDecomposition decompose_stopping_time(const RandomTime& tau, const FilteredPair& pair) {
    if (!is_stopping_time(tau, pair.G))
        throw std::invalid_argument("decompose_stopping_time: tau is not a G-stopping time");
    AzemaBundle bundle = azema_bundle(tau, pair.F, pair.space);
    const int n = pair.n();
    const int T = pair.horizon();

    auto jump = [&](int t, int w) {
        Rat prev = (t == 0) ? Rat(0) : bundle.Ao.at(t - 1)[w];
        return bundle.Ao.at(t)[w] - prev;
    };

    StoppingDecomposition out;
    out.tau_c = RandomTime(std::vector<int>(n, kTimeInf));
    out.tau_d = RandomTime(std::vector<int>(n, kTimeInf));
    for (int w = 0; w < n; ++w) {
        if (!tau.finite(w)) continue;
        if (jump(tau.at(w), w).sgn() > 0) out.tau_d.values[w] = tau.at(w);
        else out.tau_c.values[w] = tau.at(w);
    }
    for (int t = 0; t <= T; ++t)
        for (int w = 0; w < n; ++w)
            if (jump(t, w).sgn() > 0) { out.jump_times.push_back(t); break; }
    return out;
}

CheckReport gstoping_d_check(const RandomTime& tau, const FilteredPair& pair) {
    if (!is_stopping_time(tau, pair.G))
        throw std::invalid_argument("gstoping_d_check: tau is not a G-stopping time");
    if (!is_immersed(pair).immersed)
        throw std::invalid_argument("gstoping_d_check: pair is not immersed");

    CheckReport rep;
    rep.name = "gstoping-d";
    const int n = pair.n();
    const int T = pair.horizon();
    AzemaBundle bundle = azema_bundle(tau, pair.F, pair.space);

    // Barrier levels realised by Ao_tau on {tau < inf}.
    std::vector<Rat> levels;
    for (int w = 0; w < n; ++w) {
        if (!tau.finite(w)) continue;
        Rat u = bundle.Ao.at(tau.at(w))[w];
        if (std::find(levels.begin(), levels.end(), u) == levels.end()) levels.push_back(u);
    }
    if (levels.empty()) {
        rep.add("empty_finite_range", true);
        rep.settle();
        return rep;
    }

    for (size_t li = 0; li < levels.size(); ++li) {
        const Rat& u = levels[li];
        std::vector<int> event;  // {Ao_tau = u, tau < inf}
        for (int w = 0; w < n; ++w)
            if (tau.finite(w) && bundle.Ao.at(tau.at(w))[w] == u) event.push_back(w);
        RatVec lhs = cond_expect(indicator_vector(event, n), pair.F.terminal(), pair.space);

        bool holds = true;
        for (int w = 0; w < n && holds; ++w) {
            Rat rhs;
            for (int t = 0; t <= T; ++t) {
                if (bundle.Ao.at(t)[w] != u) continue;
                Rat prev = (t == 0) ? Rat(0) : bundle.Ao.at(t - 1)[w];
                rhs += bundle.Ao.at(t)[w] - prev;
            }
            if (lhs[w] != rhs) {
                holds = false;
                if (!rep.witness)
                    rep.witness = make_witness("level_mass", -1, w, {lhs[w].str(), rhs.str()}, "u=" + u.str());
            }
        }
        rep.add("level_" + u.str(), holds);
    }
    rep.settle();
    return rep;
}

bool barrier_representation_check(const RandomTime& tau, const Filtration& F, const SampleSpace& space) {
    tau.validate(F.n(), F.horizon());
    AzemaBundle bundle = azema_bundle(tau, F, space);
    for (int w = 0; w < F.n(); ++w) {
        if (!tau.finite(w)) continue;
        const Rat& barrier = bundle.Ao.at(tau.at(w))[w];
        int hit = kTimeInf;
        for (int t = 0; t <= F.horizon(); ++t)
            if (bundle.Ao.at(t)[w] >= barrier) { hit = t; break; }
        if (hit != tau.at(w)) return false;
    }
    return true;
}

}  // namespace filtlab
