#pragma once

#include "filtlab/report.hpp"
#include "filtlab/space.hpp"

namespace filtlab {

// Optional projection: (oV)_t = E[V_t | F_t]. Fixes adapted processes.
Process optional_projection(const Process& V, const Filtration& F, const SampleSpace& space);

// Dual optional projection of a nondecreasing raw process: each increment is
// credited at the information level available when it occurs,
//   V^o_t = sum_{s<=t} E[dV_s | F_s],  dV_0 = V_0.
// Throws on non-monotone input.
Process dual_optional_projection(const Process& V, const Filtration& F, const SampleSpace& space);

// N^V = oV - V^o: an exact martingale vanishing at 0.
Process projection_martingale(const Process& V, const Filtration& F, const SampleSpace& space);

// o(V_-)_t = E[V_{t-1} | F_t] with V_{-1} = 0.
Process left_optional_projection(const Process& V, const Filtration& F, const SampleSpace& space);

// The seven processes attached to a random time.
struct AzemaBundle {
    Process A;       // 1{tau <= t}
    Process oA;      // optional projection of A
    Process Ao;      // dual optional projection of A
    Process Z;       // survival supermartingale 1 - oA = P(tau > t | F_t)
    Process Ztilde;  // 1 - o(A_-) = P(tau >= t | F_t)
    Process m;       // 1 - (oA - Ao); martingale, m_0 = 1
    Process N;       // oA - Ao
};

AzemaBundle azema_bundle(const RandomTime& tau, const Filtration& F, const SampleSpace& space);

// Fast path for the third hloc condition alone, with early exit.
bool optional_equals_dual(const Process& V, const Filtration& F, const SampleSpace& space);

// Three-way equivalence for a nondecreasing raw V:
//   (i)   o(V_-)_t = V^o_{t-1} for all t,
//   (ii)  o(V_-)_t = oV_{t-1} for all t (o(V_-) is predictable),
//   (iii) oV = V^o.
// All three are evaluated independently; they always agree, and a
// disagreement is an implementation bug, not a property of the input.
CheckReport hloc_check(const Process& V, const Filtration& F, const SampleSpace& space);

}  // namespace filtlab
