#pragma once

#include "filtlab/projections.hpp"
#include "filtlab/report.hpp"
#include "filtlab/space.hpp"

#include <cstdint>
#include <functional>
#include <optional>

namespace filtlab {

// Thrown by the stopping-time enumerator when the exact count would exceed
// the requested cap. Carries the count known at abort time.
class EnumerationCapError : public std::runtime_error {
public:
    EnumerationCapError(std::uint64_t count, std::uint64_t cap)
        : std::runtime_error("stopping-time enumeration exceeds cap"), count_(count), cap_(cap) {}
    std::uint64_t count() const { return count_; }
    std::uint64_t cap() const { return cap_; }

private:
    std::uint64_t count_;
    std::uint64_t cap_;
};

struct PseudoVerdict {
    bool pseudo = false;
    std::optional<Witness> witness;  // first failing basis block with both expectations
};

// Pseudo-stopping test: E[M_tau] = E[M_0] for every basis martingale of F,
// with M_inf read as M_T. Linearity extends the verdict to the whole
// martingale class.
PseudoVerdict is_pseudo_stopping(const RandomTime& tau, const Filtration& F, const SampleSpace& space);

struct ImmersionVerdict {
    bool immersed = false;
    std::optional<Witness> witness;  // first failing (terminal block, t, outcome)
};

// F immersed in G: every basis F-martingale stays a G-martingale.
ImmersionVerdict is_immersed(const FilteredPair& pair);

// Independent route to immersion: E[1_B | G_t] = E[1_B | F_t] for every
// terminal F-atom B and every t.
bool immersion_cond_indep(const FilteredPair& pair);

// Exact number of F-stopping times (values in 0..T plus inf), saturating.
std::uint64_t count_stopping_times(const Filtration& F);

// Emits every F-stopping time exactly once, in a deterministic order, via
// recursion over the atom tree. Throws EnumerationCapError without emitting
// anything if the exact count exceeds cap.
std::uint64_t enumerate_stopping_times(const Filtration& F, std::uint64_t cap,
                                       const std::function<void(const RandomTime&)>& visit);

// Five-way equivalence around a single random time:
//   (i)   tau is pseudo-stopping,
//   (ii)  Ao_T = P(tau < inf | F_T) pointwise,
//   (iii) m == 1 (equivalently oA = Ao),
//   (iv)  stopped basis martingales stay martingales in the progressive
//         enlargement F^tau,
//   (v)   Ztilde_t is F_{t-1}-measurable for all t >= 1.
// When the sides agree and hold, Ztilde must also be pointwise
// non-increasing; a violation flips `agree` off with a witness.
CheckReport ny2_check(const RandomTime& tau, const Filtration& F, const SampleSpace& space);

// Immersion <-> pseudo-stopping <-> projections, quantified over all
// G-stopping times (exact enumeration under `cap`, seeded random sampling as
// a flagged fallback) plus a seeded sample of G-adapted increasing processes:
//   (i)   F immersed in G,
//   (ii)  every G-stopping time is F-pseudo-stopping,
//   (iii) optional projection = dual optional projection for the indicator
//         family and the sampled increasing processes.
CheckReport pseudoH_check(const FilteredPair& pair, std::uint64_t cap,
                          std::uint64_t sample_seed = 0x9E3779B97F4A7C15ULL);

// Stopping-time representation for honest pseudo-stopping times:
//   (a) tau agrees on {tau < inf} with some F-stopping time, and the
//       terminal dual projection carries exactly the mass P(tau<inf | F_T)
//       (the second clause is automatic for finite times);
//   (b) tau is honest and pseudo-stopping.
// The two sides always agree; when (b) holds the canonical representative
// inf{t : Ao_t > 0} must equal tau on {tau < inf}.
CheckReport honest_pseudo_check(const RandomTime& tau, const Filtration& F, const SampleSpace& space);

// Decides whether any F-stopping time agrees with tau on {tau < inf}, by
// forced closure over the atoms. Returns the stopping time when one exists.
std::optional<RandomTime> stopping_time_agreeing_on_finite(const RandomTime& tau, const Filtration& F);

struct StoppingDecomposition {
    RandomTime tau_c;            // part avoiding the dual-projection jumps (empty on finite grids)
    RandomTime tau_d;            // part carried by jumps of Ao
    std::vector<int> jump_times; // grid times where Ao jumps for some outcome
};

// Splits a G-stopping time along D = {dAo_tau > 0}. On a finite space with
// positive probabilities every finite value of tau charges a jump, so tau_d
// always swallows {tau < inf}; genuine avoidance needs continuous time.
StoppingDecomposition decompose_stopping_time(const RandomTime& tau, const FilteredPair& pair);

// Conditional law of Ao_tau on the jump part, for an immersed pair and a
// G-stopping tau: for every u in the range of Ao_tau on {tau < inf},
//   E[1{Ao_tau = u, tau < inf} | F_T] = sum_t 1{Ao_t = u} dAo_t  pointwise.
CheckReport gstoping_d_check(const RandomTime& tau, const FilteredPair& pair);

// Every random time is the hitting time of Ao at the barrier Ao_tau:
// inf{t : Ao_t >= Ao_tau} = tau pointwise on {tau < inf}.
bool barrier_representation_check(const RandomTime& tau, const Filtration& F, const SampleSpace& space);

}  // namespace filtlab
