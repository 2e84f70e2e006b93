#include "filtlab/generate.hpp"

#include <algorithm>
#include <stdexcept>

namespace filtlab {

namespace {

SampleSpace random_space(int n, Rng& rng) {
    RatVec probs(n);
    long total = 0;
    std::vector<long> weights(n);
    for (int i = 0; i < n; ++i) {
        weights[i] = 1 + static_cast<long>(rng.below(9));
        total += weights[i];
    }
    for (int i = 0; i < n; ++i) probs[i] = Rat(weights[i], total);
    return SampleSpace(std::move(probs));
}

// Randomly split some blocks of `base`, relabelling each element of a chosen
// block into up to `ways` groups.
Partition random_refinement(const Partition& base, Rng& rng, int split_num, int split_den) {
    std::vector<int> labels(base.n());
    int next_label = 0;
    for (const auto& block : base.blocks()) {
        if (block.size() > 1 && rng.chance(split_num, split_den)) {
            int ways = 2 + static_cast<int>(rng.below(2));
            int base_label = next_label;
            for (int w : block) labels[w] = base_label + static_cast<int>(rng.below(ways));
            next_label += ways;
        } else {
            for (int w : block) labels[w] = next_label;
            ++next_label;
        }
    }
    return Partition::from_labels(labels);
}

Filtration random_filtration(int n, int horizon, Rng& rng) {
    std::vector<Partition> parts;
    Partition cur = rng.chance(2, 3) ? Partition::trivial(n) : random_refinement(Partition::trivial(n), rng, 1, 1);
    parts.push_back(cur);
    for (int t = 1; t <= horizon; ++t) {
        cur = random_refinement(cur, rng, 1, 2);
        parts.push_back(cur);
    }
    return Filtration(std::move(parts));
}

Filtration random_filtration_above(const Filtration& F, Rng& rng) {
    std::vector<Partition> parts;
    Partition cur = random_refinement(F.at(0), rng, 1, 2);
    parts.push_back(cur);
    for (int t = 1; t <= F.horizon(); ++t) {
        cur = random_refinement(Partition::common_refinement(F.at(t), cur), rng, 1, 2);
        parts.push_back(cur);
    }
    return Filtration(std::move(parts));
}

RandomTime random_free_time(int n, int horizon, Rng& rng) {
    std::vector<int> values(n);
    for (int w = 0; w < n; ++w) {
        int v = static_cast<int>(rng.below(static_cast<std::uint64_t>(horizon) + 2));
        values[w] = (v == horizon + 1) ? kTimeInf : v;
    }
    return RandomTime(std::move(values));
}

void stopping_rec(const Filtration& G, int t, const std::vector<int>& block, Rng& rng,
                  std::vector<int>& tau) {
    if (t == G.horizon()) {
        int v = rng.chance(1, 2) ? t : kTimeInf;
        for (int w : block) tau[w] = v;
        return;
    }
    if (rng.chance(1, 3)) {
        for (int w : block) tau[w] = t;
        return;
    }
    std::vector<int> seen;
    for (int w : block) {
        int b = G.at(t + 1).block_of(w);
        if (std::find(seen.begin(), seen.end(), b) == seen.end()) {
            seen.push_back(b);
            stopping_rec(G, t + 1, G.at(t + 1).block(b), rng, tau);
        }
    }
}

Instance gen_product(int omega_max, int horizon_max, Rng& rng) {
    int n1 = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(std::max(1, omega_max / 2 - 1))));
    int max2 = std::max(2, omega_max / n1);
    int n2 = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max2 - 1)));
    int T = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(horizon_max)));
    int n = n1 * n2;

    SampleSpace s1 = random_space(n1, rng);
    SampleSpace s2 = random_space(n2, rng);
    RatVec probs(n);
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j) probs[i * n2 + j] = s1.probs[i] * s2.probs[j];
    SampleSpace space{std::move(probs)};

    Filtration P1 = random_filtration(n1, T, rng);
    Filtration P2 = random_filtration(n2, T, rng);

    std::vector<Partition> fparts, gparts;
    for (int t = 0; t <= T; ++t) {
        std::vector<int> flabels(n), glabels(n);
        for (int i = 0; i < n1; ++i)
            for (int j = 0; j < n2; ++j) {
                flabels[i * n2 + j] = P1.at(t).block_of(i);
                glabels[i * n2 + j] = P1.at(t).block_of(i) * n2 + P2.at(t).block_of(j);
            }
        fparts.push_back(Partition::from_labels(flabels));
        gparts.push_back(Partition::from_labels(glabels));
    }
    FilteredPair pair(std::move(space), Filtration(std::move(fparts)), Filtration(std::move(gparts)));
    RandomTime tau = gen_stopping_time(pair.G, rng);
    return Instance{std::move(pair), std::move(tau)};
}

}  // namespace

std::string to_string(GenMode m) {
    switch (m) {
        case GenMode::kFree: return "free";
        case GenMode::kRefining: return "refining";
        case GenMode::kProductImmersed: return "product_immersed";
    }
    return "?";
}

GenMode gen_mode_from_string(const std::string& s) {
    if (s == "free") return GenMode::kFree;
    if (s == "refining") return GenMode::kRefining;
    if (s == "product_immersed") return GenMode::kProductImmersed;
    throw std::invalid_argument("unknown mode '" + s + "'");
}

void GeneratorParams::validate() const {
    if (omega_max < 2) throw std::invalid_argument("omega_max must be >= 2");
    if (horizon_max < 1) throw std::invalid_argument("horizon_max must be >= 1");
}

RandomTime gen_stopping_time(const Filtration& G, Rng& rng) {
    std::vector<int> tau(G.n());
    for (const auto& block : G.at(0).blocks()) stopping_rec(G, 0, block, rng, tau);
    return RandomTime(std::move(tau));
}

Process gen_raw_increasing(int horizon, int n, Rng& rng) {
    static const Rat steps[] = {Rat(0), Rat(1, 4), Rat(1, 2), Rat(1), Rat(3, 2), Rat(2)};
    Process V(horizon, n);
    RatVec acc(n);
    for (int t = 0; t <= horizon; ++t) {
        for (int w = 0; w < n; ++w) acc[w] += steps[rng.below(6)];
        V.at(t) = acc;
    }
    return V;
}

Process gen_adapted_increasing(const Filtration& G, Rng& rng) {
    static const Rat steps[] = {Rat(0), Rat(0), Rat(1, 3), Rat(1, 2), Rat(1), Rat(2)};
    Process V(G.horizon(), G.n());
    RatVec acc(G.n());
    for (int t = 0; t <= G.horizon(); ++t) {
        for (const auto& block : G.at(t).blocks()) {
            const Rat& inc = steps[rng.below(6)];
            for (int w : block) acc[w] += inc;
        }
        V.at(t) = acc;
    }
    return V;
}

Instance gen_random_instance(const GeneratorParams& params) {
    params.validate();
    Rng rng(Rng::mix(params.seed, 0xF117AB5ULL));
    if (params.mode == GenMode::kProductImmersed)
        return gen_product(params.omega_max, params.horizon_max, rng);

    int n = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(params.omega_max - 1)));
    int T = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(params.horizon_max)));
    SampleSpace space = random_space(n, rng);
    Filtration F = random_filtration(n, T, rng);
    Filtration G = random_filtration_above(F, rng);
    FilteredPair pair(std::move(space), std::move(F), std::move(G));
    RandomTime tau = (params.mode == GenMode::kRefining) ? gen_stopping_time(pair.G, rng)
                                                         : random_free_time(n, T, rng);
    return Instance{std::move(pair), std::move(tau)};
}

}  // namespace filtlab
