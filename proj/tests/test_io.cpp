#include "filtlab/io.hpp"

#include <doctest.h>

#include "filtlab/generate.hpp"
#include "filtlab/rng.hpp"

#include <fstream>
#include <sstream>

using namespace filtlab;

namespace {

const char* kFixAWithC = R"({
  "omega": 4,
  "probs": ["1/4", "1/4", "1/4", "1/4"],
  "horizon": 2,
  "filtrations": {
    "F": [[[0,1,2,3]], [[0,1],[2,3]], [[0,1],[2,3]]],
    "G": [[[0,1,2,3]], [[0],[1],[2],[3]], [[0],[1],[2],[3]]]
  },
  "times": {"tau": [1, 2, "inf", 1]}
})";

const char* kFixBWithNu = R"({
  "omega": 4,
  "probs": ["1/4", "1/4", "1/4", "1/4"],
  "horizon": 2,
  "filtrations": {
    "F": [[[0,1,2,3]], [[0,1],[2,3]], [[0],[1],[2],[3]]],
    "G": [[[0,1,2,3]], [[0],[1],[2],[3]], [[0],[1],[2],[3]]]
  },
  "times": {"nu": [1, 2, 2, 2]}
})";

std::string fuzz_bytes(const io::FuzzParams& p) {
    std::ostringstream out, err;
    io::run_fuzz(p, out, err);
    return out.str();
}

}  // namespace

TEST_CASE("instance round-trip") {
    io::InstanceFile f = io::parse_instance(kFixAWithC);
    CHECK(f.space.size() == 4);
    CHECK(f.horizon == 2);
    CHECK(f.filtrations.count("F") == 1);
    CHECK(f.times.at("tau").at(2) == kTimeInf);

    std::string once = io::serialize_instance(f);
    io::InstanceFile g = io::parse_instance(once);
    CHECK(io::serialize_instance(g) == once);
    CHECK(io::digest(once) == io::digest(io::serialize_instance(g)));

    // Round-trip over generated instances.
    Rng rng(55);
    for (int rep = 0; rep < 60; ++rep) {
        GeneratorParams gp;
        gp.seed = rng.next();
        Instance inst = gen_random_instance(gp);
        io::InstanceFile file;
        file.space = inst.pair.space;
        file.horizon = inst.pair.horizon();
        file.filtrations.emplace("F", inst.pair.F);
        file.filtrations.emplace("G", inst.pair.G);
        file.times.emplace("tau", inst.tau);
        std::string a = io::serialize_instance(file);
        CHECK(io::serialize_instance(io::parse_instance(a)) == a);
    }
}

TEST_CASE("instance parse rejections") {
    CHECK_THROWS_AS(io::parse_instance("not json"), io::ParseError);
    CHECK_THROWS_AS(io::parse_instance(R"({"omega": 2, "horizon": 1,
        "probs": ["1", "1"],
        "filtrations": {"F": [[[0,1]], [[0,1]]]}})"),
                    io::ParseError);  // probs sum to 2
    CHECK_THROWS_AS(io::parse_instance(R"({"omega": 2, "horizon": 1,
        "probs": ["1/2", "1/2"],
        "filtrations": {"F": [[[0],[1]], [[0,1]]]}})"),
                    io::ParseError);  // partitions do not refine
    CHECK_THROWS_AS(io::parse_instance(R"({"omega": 2, "horizon": 1,
        "probs": ["1/2", "1/2"],
        "filtrations": {"F": [[[0,1]], [[0,1]]]},
        "times": {"tau": [5, 0]}})"),
                    io::ParseError);  // time out of range
    CHECK_THROWS_AS(io::parse_instance(R"({"omega": 2, "horizon": 1,
        "probs": ["1/2", "0"],
        "filtrations": {"F": [[[0,1]], [[0,1]]]}})"),
                    io::ParseError);  // zero probability
}

TEST_CASE("run_check exit codes") {
    {
        std::ofstream f("/tmp/filtlab_fix_a.json");
        f << kFixAWithC;
    }
    {
        std::ofstream f("/tmp/filtlab_fix_b.json");
        f << kFixBWithNu;
    }
    {
        std::ofstream f("/tmp/filtlab_bad.json");
        f << R"({"omega": 2, "horizon": 1, "probs": ["1", "1"], "filtrations": {"F": [[[0,1]], [[0,1]]]}})";
    }

    std::ostringstream out, err;
    CHECK(io::run_check("/tmp/filtlab_fix_a.json", {}, 100000, out, err) == 0);
    CHECK(out.str().find("\"check\":\"pseudoH\"") != std::string::npos);

    std::ostringstream out2, err2;
    CHECK(io::run_check("/tmp/filtlab_fix_b.json", {}, 100000, out2, err2) == 1);
    CHECK(out2.str().find("\"witness\"") != std::string::npos);

    std::ostringstream out3, err3;
    CHECK(io::run_check("/tmp/filtlab_bad.json", {}, 100000, out3, err3) == 2);
    CHECK(err3.str().find("probs") != std::string::npos);

    std::ostringstream out4, err4;
    CHECK(io::run_check("/tmp/filtlab_fix_a.json", {"ny2", "barrier"}, 100000, out4, err4) == 0);

    std::ostringstream out5, err5;
    CHECK(io::run_check("/tmp/filtlab_fix_a.json", {"nope"}, 100000, out5, err5) == 2);

    std::ostringstream out6, err6;
    CHECK(io::run_check("/tmp/filtlab_missing.json", {}, 100000, out6, err6) == 2);
}

TEST_CASE("run_fuzz is deterministic and clean") {
    io::FuzzParams p;
    p.trials = 40;
    p.seed = 90001;
    p.omega_max = 6;
    p.horizon_max = 3;
    p.cap = 20000;

    std::string a = fuzz_bytes(p);
    std::string b = fuzz_bytes(p);
    CHECK(a == b);
    CHECK(a.find("\"failures\":0") != std::string::npos);

    p.mode = GenMode::kProductImmersed;
    std::string c = fuzz_bytes(p);
    CHECK(c.find("\"failures\":0") != std::string::npos);
    CHECK(c.find("immersed_by_construction") != std::string::npos);

    std::ostringstream out, err;
    io::FuzzParams bad;
    bad.trials = 0;
    CHECK(io::run_fuzz(bad, out, err) == 2);
}

TEST_CASE("run_mc exit codes") {
    std::ostringstream out, err;
    CHECK(io::run_mc("cox", 20000, 0, 0, 9, out, err) == 0);
    std::ostringstream out2, err2;
    CHECK(io::run_mc("poisson", 20000, 0, 1.0, 9, out2, err2) == 0);
    std::ostringstream out3, err3;
    CHECK(io::run_mc("nope", 10, 0, 0, 9, out3, err3) == 2);
    std::ostringstream out4, err4;
    CHECK(io::run_mc("cox", 5, 0, 0, 9, out4, err4) == 2);
}
