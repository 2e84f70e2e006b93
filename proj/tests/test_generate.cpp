#include "filtlab/generate.hpp"

#include <doctest.h>

#include "filtlab/io.hpp"
#include "filtlab/theorems.hpp"

using namespace filtlab;

namespace {

std::string instance_bytes(const Instance& inst) {
    io::InstanceFile f;
    f.space = inst.pair.space;
    f.horizon = inst.pair.horizon();
    f.filtrations.emplace("F", inst.pair.F);
    f.filtrations.emplace("G", inst.pair.G);
    f.times.emplace("tau", inst.tau);
    return io::serialize_instance(f);
}

}  // namespace

TEST_CASE("generator determinism") {
    GeneratorParams gp;
    gp.seed = 424242;
    CHECK(instance_bytes(gen_random_instance(gp)) == instance_bytes(gen_random_instance(gp)));
    gp.seed = 424243;
    GeneratorParams gp2 = gp;
    CHECK(instance_bytes(gen_random_instance(gp)) == instance_bytes(gen_random_instance(gp2)));
}

TEST_CASE("generator modes satisfy their postconditions") {
    Rng rng(1);
    for (int rep = 0; rep < 80; ++rep) {
        GeneratorParams gp;
        gp.seed = rng.next();

        gp.mode = GenMode::kProductImmersed;
        Instance prod = gen_random_instance(gp);
        CHECK(is_immersed(prod.pair).immersed);
        CHECK(is_stopping_time(prod.tau, prod.pair.G));
        CHECK(prod.pair.n() <= gp.omega_max);

        gp.mode = GenMode::kRefining;
        Instance ref = gen_random_instance(gp);
        CHECK(is_stopping_time(ref.tau, ref.pair.G));

        gp.mode = GenMode::kFree;
        Instance free = gen_random_instance(gp);
        CHECK(free.pair.n() >= 2);
        CHECK(free.pair.horizon() >= 1);
        CHECK(free.pair.horizon() <= gp.horizon_max);
        free.tau.validate(free.pair.n(), free.pair.horizon());
    }
}

TEST_CASE("generator parameter validation") {
    GeneratorParams bad;
    bad.omega_max = 1;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad.omega_max = 4;
    bad.horizon_max = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
