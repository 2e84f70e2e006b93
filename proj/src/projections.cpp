#include "filtlab/projections.hpp"

namespace filtlab {

namespace {

RatVec delta_row(const Process& V, int t) {
    if (t == 0) return V.at(0);
    RatVec d(V.n());
    for (int w = 0; w < V.n(); ++w) d[w] = V.at(t)[w] - V.at(t - 1)[w];
    return d;
}

}  // namespace

Process optional_projection(const Process& V, const Filtration& F, const SampleSpace& space) {
    Process out(V.horizon(), V.n());
    for (int t = 0; t <= V.horizon(); ++t) out.at(t) = cond_expect(V.at(t), F.at(t), space);
    return out;
}

Process dual_optional_projection(const Process& V, const Filtration& F, const SampleSpace& space) {
    if (!V.nondecreasing())
        throw std::invalid_argument("dual_optional_projection: input must be nondecreasing from 0");
    Process out(V.horizon(), V.n());
    RatVec acc(V.n());
    for (int t = 0; t <= V.horizon(); ++t) {
        RatVec proj = cond_expect(delta_row(V, t), F.at(t), space);
        for (int w = 0; w < V.n(); ++w) acc[w] += proj[w];
        out.at(t) = acc;
    }
    return out;
}

Process projection_martingale(const Process& V, const Filtration& F, const SampleSpace& space) {
    Process o = optional_projection(V, F, space);
    Process d = dual_optional_projection(V, F, space);
    Process N(V.horizon(), V.n());
    for (int t = 0; t <= V.horizon(); ++t)
        for (int w = 0; w < V.n(); ++w) N.at(t)[w] = o.at(t)[w] - d.at(t)[w];
    return N;
}

Process left_optional_projection(const Process& V, const Filtration& F, const SampleSpace& space) {
    Process out(V.horizon(), V.n());
    for (int t = 0; t <= V.horizon(); ++t) out.at(t) = cond_expect(V.prev(t), F.at(t), space);
    return out;
}

AzemaBundle azema_bundle(const RandomTime& tau, const Filtration& F, const SampleSpace& space) {
    AzemaBundle b;
    const int T = F.horizon();
    const int n = F.n();
    b.A = indicator_process(tau, T);
    b.oA = optional_projection(b.A, F, space);
    b.Ao = dual_optional_projection(b.A, F, space);
    Process oAminus = left_optional_projection(b.A, F, space);
    b.Z = Process(T, n);
    b.Ztilde = Process(T, n);
    b.m = Process(T, n);
    b.N = Process(T, n);
    for (int t = 0; t <= T; ++t) {
        for (int w = 0; w < n; ++w) {
            b.N.at(t)[w] = b.oA.at(t)[w] - b.Ao.at(t)[w];
            b.m.at(t)[w] = Rat(1) - b.N.at(t)[w];
            b.Z.at(t)[w] = Rat(1) - b.oA.at(t)[w];
            b.Ztilde.at(t)[w] = Rat(1) - oAminus.at(t)[w];
        }
    }
    return b;
}

bool optional_equals_dual(const Process& V, const Filtration& F, const SampleSpace& space) {
    if (!V.nondecreasing())
        throw std::invalid_argument("optional_equals_dual: input must be nondecreasing from 0");
    RatVec acc(V.n());
    for (int t = 0; t <= V.horizon(); ++t) {
        RatVec proj = cond_expect(delta_row(V, t), F.at(t), space);
        for (int w = 0; w < V.n(); ++w) acc[w] += proj[w];
        if (cond_expect(V.at(t), F.at(t), space) != acc) return false;
    }
    return true;
}

CheckReport hloc_check(const Process& V, const Filtration& F, const SampleSpace& space) {
    if (!V.nondecreasing())
        throw std::invalid_argument("hloc_check: input must be nondecreasing from 0");
    CheckReport rep;
    rep.name = "hloc";
    Process oV = optional_projection(V, F, space);
    Process Vo = dual_optional_projection(V, F, space);
    Process oVm = left_optional_projection(V, F, space);
    const int T = V.horizon();
    const int n = V.n();

    auto remember = [&rep](const std::string& cond, int t, int w, const Rat& a, const Rat& b) {
        if (rep.witness) return;
        Witness wit;
        wit.condition = cond;
        wit.t = t;
        wit.outcome = w;
        wit.values = {a.str(), b.str()};
        rep.witness = wit;
    };

    bool left_matches_dual = true;  // o(V_-)_t = V^o_{t-1}
    for (int t = 0; t <= T && left_matches_dual; ++t) {
        RatVec prev_dual = (t == 0) ? RatVec(n) : Vo.at(t - 1);
        for (int w = 0; w < n; ++w)
            if (oVm.at(t)[w] != prev_dual[w]) {
                left_matches_dual = false;
                remember("left_proj_equals_lagged_dual", t, w, oVm.at(t)[w], prev_dual[w]);
                break;
            }
    }

    bool left_predictable = true;  // o(V_-)_t = oV_{t-1}
    for (int t = 0; t <= T && left_predictable; ++t) {
        RatVec prev_opt = (t == 0) ? RatVec(n) : oV.at(t - 1);
        for (int w = 0; w < n; ++w)
            if (oVm.at(t)[w] != prev_opt[w]) {
                left_predictable = false;
                remember("left_proj_predictable", t, w, oVm.at(t)[w], prev_opt[w]);
                break;
            }
    }

    bool optional_equals_dual = true;  // oV = V^o
    for (int t = 0; t <= T && optional_equals_dual; ++t)
        for (int w = 0; w < n; ++w)
            if (oV.at(t)[w] != Vo.at(t)[w]) {
                optional_equals_dual = false;
                remember("optional_equals_dual", t, w, oV.at(t)[w], Vo.at(t)[w]);
                break;
            }

    rep.add("left_proj_equals_lagged_dual", left_matches_dual);
    rep.add("left_proj_predictable", left_predictable);
    rep.add("optional_equals_dual", optional_equals_dual);
    rep.settle();
    return rep;
}

}  // namespace filtlab
