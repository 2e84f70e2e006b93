#pragma once

#include "filtlab/generate.hpp"
#include "filtlab/montecarlo.hpp"
#include "filtlab/report.hpp"
#include "filtlab/space.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace filtlab::io {

// Parse/validation failure carrying a human-readable location.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Contents of an instance file: one sample space, named filtrations over it,
// named random times and optional named raw processes. Rationals travel as
// "p/q" strings, outcome indices are 0-based, "inf" marks a never-occurring
// time.
struct InstanceFile {
    SampleSpace space;
    int horizon = 0;
    std::map<std::string, Filtration> filtrations;
    std::map<std::string, RandomTime> times;
    std::map<std::string, Process> processes;
};

InstanceFile parse_instance(const std::string& text);
std::string serialize_instance(const InstanceFile& f);

// FNV-1a over the canonical serialization; stable across whitespace.
std::string digest(const std::string& canonical_text);

std::string report_line(const CheckReport& rep, bool pass);
std::string mc_report_line(const mc::McReport& rep);

// Whether a report counts as a failure for exit codes and fuzz footers:
// a disagreement between equivalence sides, a violated always-true identity,
// or a refuted immersion.
bool report_fails(const CheckReport& rep);

struct FuzzParams {
    long trials = 0;
    std::uint64_t seed = 0;
    int omega_max = 8;
    int horizon_max = 4;
    GenMode mode = GenMode::kFree;
    std::uint64_t cap = 100000;
};

// Full theorem suite over one generated instance; appends records and
// returns the number of failing ones.
int run_instance_suite(const Instance& inst, std::uint64_t cap, std::uint64_t sample_seed,
                       GenMode mode, std::ostream& out);

int run_check(const std::string& path, std::vector<std::string> checks, std::uint64_t cap,
              std::ostream& out, std::ostream& err);
int run_fuzz(const FuzzParams& params, std::ostream& out, std::ostream& err);
int run_mc(const std::string& which, long paths, double dt, double lambda, std::uint64_t seed,
           std::ostream& out, std::ostream& err);

}  // namespace filtlab::io
