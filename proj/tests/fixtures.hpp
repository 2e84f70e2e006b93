#pragma once

#include "filtlab/space.hpp"

// Shared small instances used across the suites. Outcomes are 0-based.
//
// fix_a: n=4 uniform, T=2; F = (trivial, {{0,1},{2,3}}, {{0,1},{2,3}}),
//        G = (trivial, discrete, discrete). F is immersed in G.
// fix_b: same but F_2 discrete. F is NOT immersed in G.
// fix_c: tau = (1, 2, inf, 1) — pseudo-stopping for fix_a's F, G-stopping.
// fix_d: tau = (2, 1, 1, 2) — honest for fix_b's F, not pseudo-stopping.
namespace fixtures {

inline filtlab::Partition half(int) {
    return filtlab::Partition(4, {{0, 1}, {2, 3}});
}

inline filtlab::FilteredPair fix_a() {
    using namespace filtlab;
    Filtration F({Partition::trivial(4), half(1), half(2)});
    Filtration G({Partition::trivial(4), Partition::discrete(4), Partition::discrete(4)});
    return FilteredPair(SampleSpace::uniform(4), std::move(F), std::move(G));
}

inline filtlab::FilteredPair fix_b() {
    using namespace filtlab;
    Filtration F({Partition::trivial(4), half(1), Partition::discrete(4)});
    Filtration G({Partition::trivial(4), Partition::discrete(4), Partition::discrete(4)});
    return FilteredPair(SampleSpace::uniform(4), std::move(F), std::move(G));
}

inline filtlab::RandomTime fix_c() { return filtlab::RandomTime({1, 2, filtlab::kTimeInf, 1}); }

inline filtlab::RandomTime fix_d() { return filtlab::RandomTime({2, 1, 1, 2}); }

}  // namespace fixtures
