#pragma once

#include "filtlab/rational.hpp"

#include <limits>
#include <string>
#include <vector>

namespace filtlab {

// Time value of a random time. Finite values live on the grid 0..T; the
// sentinel kTimeInf stands for "never". min/comparison against grid times
// behave correctly because the sentinel is larger than any horizon.
constexpr int kTimeInf = std::numeric_limits<int>::max();

inline std::string time_str(int t) { return t == kTimeInf ? "inf" : std::to_string(t); }

// Finite sample space: outcome indices 0..n-1 with strictly positive exact
// probabilities summing to one. No null sets, so every a.s. statement of the
// theory becomes a pointwise one here.
struct SampleSpace {
    RatVec probs;

    SampleSpace() = default;
    explicit SampleSpace(RatVec p);

    int size() const { return static_cast<int>(probs.size()); }
    static SampleSpace uniform(int n);
};

// Finite sigma-algebra, represented by the partition of outcomes into its
// atoms. Stored canonically: each block sorted ascending, blocks ordered by
// smallest element.
class Partition {
public:
    Partition() = default;
    Partition(int n, std::vector<std::vector<int>> blocks);

    static Partition trivial(int n);
    static Partition discrete(int n);
    // Partition induced by the level sets of an arbitrary labelling.
    static Partition from_labels(const std::vector<int>& labels);

    int n() const { return n_; }
    int num_blocks() const { return static_cast<int>(blocks_.size()); }
    const std::vector<std::vector<int>>& blocks() const { return blocks_; }
    const std::vector<int>& block(int b) const { return blocks_[b]; }
    int block_of(int outcome) const { return block_of_[outcome]; }

    bool refines(const Partition& coarse) const;
    static Partition common_refinement(const Partition& a, const Partition& b);

    friend bool operator==(const Partition& a, const Partition& b) {
        return a.n_ == b.n_ && a.blocks_ == b.blocks_;
    }
    friend bool operator!=(const Partition& a, const Partition& b) { return !(a == b); }

private:
    int n_ = 0;
    std::vector<std::vector<int>> blocks_;
    std::vector<int> block_of_;
};

// Discrete-time filtration on the grid 0..T: a refining chain of partitions.
// F_infinity is identified with parts[T].
struct Filtration {
    std::vector<Partition> parts;

    Filtration() = default;
    explicit Filtration(std::vector<Partition> p);

    int horizon() const { return static_cast<int>(parts.size()) - 1; }
    int n() const { return parts.empty() ? 0 : parts.front().n(); }
    const Partition& at(int t) const { return parts[t]; }
    const Partition& terminal() const { return parts.back(); }
};

// Two nested filtrations F subset G over one sample space.
struct FilteredPair {
    SampleSpace space;
    Filtration F;
    Filtration G;

    FilteredPair() = default;
    FilteredPair(SampleSpace s, Filtration f, Filtration g);

    int horizon() const { return F.horizon(); }
    int n() const { return space.size(); }
};

// Arbitrary map from outcomes to {0..T} plus "never". Whether it is a
// stopping time, honest, pseudo-stopping etc. is a property relative to a
// filtration, not an invariant of the type.
struct RandomTime {
    std::vector<int> values;

    RandomTime() = default;
    explicit RandomTime(std::vector<int> v) : values(std::move(v)) {}

    int n() const { return static_cast<int>(values.size()); }
    int at(int outcome) const { return values[outcome]; }
    bool finite(int outcome) const { return values[outcome] != kTimeInf; }
    void validate(int n, int horizon) const;
};

// Raw process: one value per (grid time, outcome). The value at time -1 is 0
// by convention and is never stored.
struct Process {
    std::vector<RatVec> rows;  // rows[t][outcome], t = 0..T

    Process() = default;
    Process(int horizon, int n) : rows(horizon + 1, RatVec(n)) {}
    explicit Process(std::vector<RatVec> r) : rows(std::move(r)) {}

    int horizon() const { return static_cast<int>(rows.size()) - 1; }
    int n() const { return rows.empty() ? 0 : static_cast<int>(rows.front().size()); }
    const RatVec& at(int t) const { return rows[t]; }
    RatVec& at(int t) { return rows[t]; }
    // Row at t-1 under the X_{0-} = 0 convention.
    RatVec prev(int t) const { return t == 0 ? RatVec(n()) : rows[t - 1]; }

    bool nondecreasing() const;

    friend bool operator==(const Process& a, const Process& b) { return a.rows == b.rows; }
    friend bool operator!=(const Process& a, const Process& b) { return !(a == b); }
};

// --- core operations ------------------------------------------------------

bool refines(const Partition& fine, const Partition& coarse);

// E[x | partition] as an outcome-indexed vector, exact.
RatVec cond_expect(const RatVec& x, const Partition& part, const SampleSpace& space);

bool is_adapted(const Process& X, const Filtration& F);

// Exact one-step martingale property; requires adaptedness.
bool is_martingale(const Process& X, const Filtration& F, const SampleSpace& space);

bool is_stopping_time(const RandomTime& tau, const Filtration& F);

// Smallest filtration containing F that makes tau a stopping time: at each t
// the atoms of F_t are split by the level sets {tau=0},...,{tau=t},{tau>t}.
Filtration progressive_enlargement(const Filtration& F, const RandomTime& tau);

// One closed martingale per terminal atom B: M^B_t = E[1_B | F_t]. Their
// terminal values span the F_T-measurable functions, so every F-martingale
// is an affine combination of these.
std::vector<Process> basis_martingales(const Filtration& F, const SampleSpace& space);

// Honest time test. tau is honest iff for every t the restriction of tau to
// {tau <= t} is measurable w.r.t. F_t blockwise, i.e. tau is constant on
// C & {tau <= t} for every atom C of F_t. The t = T level doubles as the
// t = infinity level since {tau <= T} = {tau < inf}.
bool is_honest(const RandomTime& tau, const Filtration& F);

// Indicator process A_t = 1{tau <= t}.
Process indicator_process(const RandomTime& tau, int horizon);

RatVec indicator_vector(const std::vector<int>& set, int n);

}  // namespace filtlab
