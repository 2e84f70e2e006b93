#include "filtlab/space.hpp"

#include <algorithm>
#include <map>

namespace filtlab {

SampleSpace::SampleSpace(RatVec p) : probs(std::move(p)) {
    if (probs.empty()) throw std::invalid_argument("SampleSpace: empty");
    for (const Rat& q : probs)
        if (q.sgn() <= 0) throw std::invalid_argument("SampleSpace: probabilities must be strictly positive");
    if (sum(probs) != Rat(1)) throw std::invalid_argument("SampleSpace: probabilities must sum to 1");
}

SampleSpace SampleSpace::uniform(int n) {
    RatVec p(n, Rat(1, n));
    return SampleSpace(std::move(p));
}

Partition::Partition(int n, std::vector<std::vector<int>> blocks) : n_(n), blocks_(std::move(blocks)) {
    if (n_ <= 0) throw std::invalid_argument("Partition: empty space");
    block_of_.assign(n_, -1);
    for (auto& b : blocks_) {
        if (b.empty()) throw std::invalid_argument("Partition: empty block");
        std::sort(b.begin(), b.end());
    }
    std::sort(blocks_.begin(), blocks_.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    for (int bi = 0; bi < static_cast<int>(blocks_.size()); ++bi) {
        for (int w : blocks_[bi]) {
            if (w < 0 || w >= n_) throw std::invalid_argument("Partition: outcome index out of range");
            if (block_of_[w] != -1) throw std::invalid_argument("Partition: blocks not disjoint");
            block_of_[w] = bi;
        }
    }
    for (int w = 0; w < n_; ++w)
        if (block_of_[w] == -1) throw std::invalid_argument("Partition: blocks do not cover the space");
}

Partition Partition::trivial(int n) {
    std::vector<int> all(n);
    for (int i = 0; i < n; ++i) all[i] = i;
    return Partition(n, {all});
}

Partition Partition::discrete(int n) {
    std::vector<std::vector<int>> blocks(n);
    for (int i = 0; i < n; ++i) blocks[i] = {i};
    return Partition(n, std::move(blocks));
}

Partition Partition::from_labels(const std::vector<int>& labels) {
    std::map<int, std::vector<int>> groups;
    for (int i = 0; i < static_cast<int>(labels.size()); ++i) groups[labels[i]].push_back(i);
    std::vector<std::vector<int>> blocks;
    blocks.reserve(groups.size());
    for (auto& [k, v] : groups) blocks.push_back(std::move(v));
    return Partition(static_cast<int>(labels.size()), std::move(blocks));
}

bool Partition::refines(const Partition& coarse) const {
    if (n_ != coarse.n_) throw std::invalid_argument("refines: partitions over different spaces");
    for (const auto& b : blocks_) {
        int target = coarse.block_of_[b.front()];
        for (int w : b)
            if (coarse.block_of_[w] != target) return false;
    }
    return true;
}

Partition Partition::common_refinement(const Partition& a, const Partition& b) {
    if (a.n_ != b.n_) throw std::invalid_argument("common_refinement: partitions over different spaces");
    std::vector<int> labels(a.n_);
    for (int w = 0; w < a.n_; ++w) labels[w] = a.block_of_[w] * b.num_blocks() + b.block_of_[w];
    return from_labels(labels);
}

Filtration::Filtration(std::vector<Partition> p) : parts(std::move(p)) {
    if (parts.empty()) throw std::invalid_argument("Filtration: needs at least the time-0 partition");
    for (size_t t = 0; t + 1 < parts.size(); ++t)
        if (!parts[t + 1].refines(parts[t]))
            throw std::invalid_argument("Filtration: parts[" + std::to_string(t + 1) +
                                        "] does not refine parts[" + std::to_string(t) + "]");
}

FilteredPair::FilteredPair(SampleSpace s, Filtration f, Filtration g)
    : space(std::move(s)), F(std::move(f)), G(std::move(g)) {
    if (F.horizon() != G.horizon()) throw std::invalid_argument("FilteredPair: horizons differ");
    if (F.n() != space.size() || G.n() != space.size())
        throw std::invalid_argument("FilteredPair: filtration over wrong space");
    for (int t = 0; t <= F.horizon(); ++t)
        if (!G.at(t).refines(F.at(t)))
            throw std::invalid_argument("FilteredPair: G does not refine F at t=" + std::to_string(t));
}

void RandomTime::validate(int n_outcomes, int horizon) const {
    if (n() != n_outcomes) throw std::invalid_argument("RandomTime: wrong length");
    for (int v : values)
        if (v != kTimeInf && (v < 0 || v > horizon))
            throw std::invalid_argument("RandomTime: value out of range 0..T,inf");
}

bool Process::nondecreasing() const {
    for (int w = 0; w < n(); ++w) {
        if (rows[0][w].sgn() < 0) return false;
        for (int t = 1; t <= horizon(); ++t)
            if (rows[t][w] < rows[t - 1][w]) return false;
    }
    return true;
}

bool refines(const Partition& fine, const Partition& coarse) { return fine.refines(coarse); }

RatVec cond_expect(const RatVec& x, const Partition& part, const SampleSpace& space) {
    if (static_cast<int>(x.size()) != part.n() || space.size() != part.n())
        throw std::invalid_argument("cond_expect: dimension mismatch");
    RatVec out(x.size());
    for (const auto& block : part.blocks()) {
        Rat weighted, mass;
        for (int w : block) {
            weighted += space.probs[w] * x[w];
            mass += space.probs[w];
        }
        Rat value = weighted / mass;
        for (int w : block) out[w] = value;
    }
    return out;
}

bool is_adapted(const Process& X, const Filtration& F) {
    if (X.horizon() != F.horizon() || X.n() != F.n())
        throw std::invalid_argument("is_adapted: dimension mismatch");
    for (int t = 0; t <= F.horizon(); ++t) {
        for (const auto& block : F.at(t).blocks()) {
            const Rat& v = X.at(t)[block.front()];
            for (int w : block)
                if (X.at(t)[w] != v) return false;
        }
    }
    return true;
}

bool is_martingale(const Process& X, const Filtration& F, const SampleSpace& space) {
    if (!is_adapted(X, F)) throw std::invalid_argument("is_martingale: process is not adapted");
    for (int t = 1; t <= F.horizon(); ++t)
        if (cond_expect(X.at(t), F.at(t - 1), space) != X.at(t - 1)) return false;
    return true;
}

bool is_stopping_time(const RandomTime& tau, const Filtration& F) {
    tau.validate(F.n(), F.horizon());
    // {tau = t} must be a union of atoms of F_t; {tau = inf} then needs
    // nothing beyond complementation at T.
    for (int t = 0; t <= F.horizon(); ++t) {
        for (const auto& block : F.at(t).blocks()) {
            bool any = false, all = true;
            for (int w : block) {
                if (tau.at(w) == t) any = true;
                else all = false;
            }
            if (any && !all) return false;
        }
    }
    return true;
}

Filtration progressive_enlargement(const Filtration& F, const RandomTime& tau) {
    tau.validate(F.n(), F.horizon());
    std::vector<Partition> parts;
    parts.reserve(F.horizon() + 1);
    for (int t = 0; t <= F.horizon(); ++t) {
        std::vector<int> labels(F.n());
        for (int w = 0; w < F.n(); ++w) labels[w] = std::min(tau.at(w), t + 1);
        parts.push_back(Partition::common_refinement(F.at(t), Partition::from_labels(labels)));
    }
    return Filtration(std::move(parts));
}

std::vector<Process> basis_martingales(const Filtration& F, const SampleSpace& space) {
    std::vector<Process> out;
    const Partition& terminal = F.terminal();
    out.reserve(terminal.num_blocks());
    for (const auto& block : terminal.blocks()) {
        RatVec ind = indicator_vector(block, F.n());
        Process m(F.horizon(), F.n());
        for (int t = 0; t <= F.horizon(); ++t) m.at(t) = cond_expect(ind, F.at(t), space);
        out.push_back(std::move(m));
    }
    return out;
}

bool is_honest(const RandomTime& tau, const Filtration& F) {
    tau.validate(F.n(), F.horizon());
    for (int t = 0; t <= F.horizon(); ++t) {
        for (const auto& block : F.at(t).blocks()) {
            int seen = -1;
            for (int w : block) {
                if (tau.at(w) > t) continue;
                if (seen == -1) seen = tau.at(w);
                else if (tau.at(w) != seen) return false;
            }
        }
    }
    return true;
}

Process indicator_process(const RandomTime& tau, int horizon) {
    Process A(horizon, tau.n());
    for (int t = 0; t <= horizon; ++t)
        for (int w = 0; w < tau.n(); ++w)
            A.at(t)[w] = Rat(tau.at(w) <= t ? 1 : 0);
    return A;
}

RatVec indicator_vector(const std::vector<int>& set, int n) {
    RatVec v(n);
    for (int w : set) v[w] = Rat(1);
    return v;
}

}  // namespace filtlab
