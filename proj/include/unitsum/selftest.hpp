#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

namespace unitsum {

struct SelftestOptions {
    std::string filter;            // substring of criterion names; empty = all
    std::uint64_t seed = 0xC0FFEE; // drives the randomized criteria
    bool mutate_degree_law = false; // negative control: corrupt the recursion
};

// Runs the acceptance suite and prints one line per criterion:
// "PASS <name>" or "FAIL <name>: <detail>".  Returns the number of failed
// criteria.  Throws Error when the filter matches nothing.
int run_selftest(std::ostream& out, const SelftestOptions& opts = {});

} // namespace unitsum
