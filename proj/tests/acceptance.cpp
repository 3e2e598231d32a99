// Acceptance gate: runs every criterion of the embedded suite and prints one
// PASS/FAIL line per criterion.  Exit status is the number of failures.

#include <cstring>
#include <iostream>
#include <string>

#include "unitsum/selftest.hpp"
#include "util.hpp"

int main(int argc, char** argv) {
    unitsum::SelftestOptions opts;
    opts.seed = test_seed();
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--seed") == 0 && i + 1 < argc)
            opts.seed = std::strtoull(argv[++i], nullptr, 10);
        else if (std::strcmp(argv[i], "--filter") == 0 && i + 1 < argc)
            opts.filter = argv[++i];
        else if (std::strcmp(argv[i], "--mutate") == 0)
            opts.mutate_degree_law = true;
        else {
            std::cerr << "usage: acceptance [--seed N] [--filter NAME] "
                         "[--mutate]\n";
            return 2;
        }
    }
    try {
        return unitsum::run_selftest(std::cout, opts);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
