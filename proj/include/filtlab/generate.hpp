#pragma once

#include "filtlab/rng.hpp"
#include "filtlab/space.hpp"

#include <cstdint>
#include <string>

namespace filtlab {

enum class GenMode { kFree, kRefining, kProductImmersed };

std::string to_string(GenMode m);
GenMode gen_mode_from_string(const std::string& s);

struct GeneratorParams {
    int omega_max = 8;
    int horizon_max = 4;
    GenMode mode = GenMode::kFree;
    std::uint64_t seed = 0;

    void validate() const;
};

struct Instance {
    FilteredPair pair;
    RandomTime tau;
};

// Deterministic in params.seed:
//  - free:             random refining F, random G refining F, arbitrary tau;
//  - refining:         free, with tau resampled as a G-stopping time;
//  - product_immersed: product space with independent coordinates, F from
//                      coordinate 1, G the product filtration (immersion by
//                      construction), tau a random G-stopping time.
Instance gen_random_instance(const GeneratorParams& params);

// Random G-stopping time by a seeded walk down the atom tree.
RandomTime gen_stopping_time(const Filtration& G, Rng& rng);

// Random nondecreasing raw process (not adapted in general).
Process gen_raw_increasing(int horizon, int n, Rng& rng);

// Random nondecreasing G-adapted process.
Process gen_adapted_increasing(const Filtration& G, Rng& rng);

}  // namespace filtlab
