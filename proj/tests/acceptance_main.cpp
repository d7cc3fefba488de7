// Acceptance gate: runs every criterion at its stated tolerance and prints
// one PASS/FAIL line per criterion. Exits nonzero if any criterion fails.

#include <cstdlib>
#include <iostream>

#include "mfbm/acceptance.hpp"

int main(int argc, char** argv) {
    mfbm::AcceptanceOptions opt;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--seed" && i + 1 < argc) opt.seed = std::strtoull(argv[++i], nullptr, 10);
        if (arg == "--R" && i + 1 < argc) opt.mc_replications = std::strtol(argv[++i], nullptr, 10);
        if (arg == "--lan-R" && i + 1 < argc) opt.lan_replications = std::strtol(argv[++i], nullptr, 10);
    }
    const auto results = mfbm::run_acceptance(opt, std::cout);
    return mfbm::all_passed(results) ? 0 : 1;
}
