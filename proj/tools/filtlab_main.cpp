#include "filtlab/io.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

int main(int argc, char** argv) {
    CLI::App app{"filtlab - exact checks and Monte Carlo for random times under filtration enlargement"};
    app.require_subcommand(1);

    // check <file> [--checks ...] [--cap K]
    std::string check_path;
    std::string checks_csv;
    std::uint64_t check_cap = 100000;
    CLI::App* check = app.add_subcommand("check", "run theorem checks on an instance file");
    check->add_option("file", check_path, "instance file (JSON)")->required();
    check->add_option("--checks", checks_csv, "comma-separated subset of ny2,hloc,pseudoH,honest,barrier,gstoping-d");
    check->add_option("--cap", check_cap, "stopping-time enumeration cap");

    // fuzz --trials N --seed S [--omega-max] [--horizon-max] [--mode] [--cap]
    filtlab::io::FuzzParams fuzz;
    std::string mode_str = "free";
    CLI::App* fz = app.add_subcommand("fuzz", "run the theorem suite on generated instances");
    fz->add_option("--trials", fuzz.trials, "number of instances")->required();
    fz->add_option("--seed", fuzz.seed, "campaign seed")->required();
    fz->add_option("--omega-max", fuzz.omega_max, "max outcomes (default 8)");
    fz->add_option("--horizon-max", fuzz.horizon_max, "max horizon (default 4)");
    fz->add_option("--mode", mode_str, "free|refining|product_immersed");
    fz->add_option("--cap", fuzz.cap, "stopping-time enumeration cap (default 100000)");

    // mc williams|poisson|cox
    CLI::App* mc = app.add_subcommand("mc", "Monte Carlo reproductions");
    mc->require_subcommand(1);
    long paths = 0;
    double dt = 1e-3;
    double lambda = 1.0;
    std::uint64_t seed = 0;
    CLI::App* wil = mc->add_subcommand("williams", "last-zero maximum time of Brownian motion");
    wil->add_option("--paths", paths, "number of paths")->required();
    wil->add_option("--dt", dt, "base grid step")->required();
    wil->add_option("--seed", seed, "seed");
    CLI::App* poi = mc->add_subcommand("poisson", "midpoint of the first two Poisson jumps");
    poi->add_option("--lambda", lambda, "intensity")->required();
    poi->add_option("--paths", paths, "number of paths")->required();
    poi->add_option("--seed", seed, "seed");
    CLI::App* cox = mc->add_subcommand("cox", "independent-barrier construction, uniform barrier law");
    cox->add_option("--paths", paths, "number of paths")->required();
    cox->add_option("--seed", seed, "seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (check->parsed()) {
        std::vector<std::string> checks;
        std::stringstream ss(checks_csv);
        std::string item;
        while (std::getline(ss, item, ','))
            if (!item.empty()) checks.push_back(item);
        return filtlab::io::run_check(check_path, checks, check_cap, std::cout, std::cerr);
    }
    if (fz->parsed()) {
        try {
            fuzz.mode = filtlab::gen_mode_from_string(mode_str);
        } catch (const std::invalid_argument& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 2;
        }
        return filtlab::io::run_fuzz(fuzz, std::cout, std::cerr);
    }
    if (mc->parsed()) {
        std::string which = wil->parsed() ? "williams" : poi->parsed() ? "poisson" : "cox";
        return filtlab::io::run_mc(which, paths, dt, lambda, seed, std::cout, std::cerr);
    }
    return 2;
}
