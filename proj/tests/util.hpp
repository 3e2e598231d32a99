#pragma once

#include <cstdint>
#include <cstdio>
#include <cstdlib>

// UNITSUM_TEST_SEED pins the property-test RNG; the default keeps plain runs
// reproducible.  The chosen seed is echoed so a failing run can be replayed.
inline std::uint64_t test_seed() {
    static std::uint64_t s = [] {
        const char* e = std::getenv("UNITSUM_TEST_SEED");
        std::uint64_t v = e ? std::strtoull(e, nullptr, 10) : 0xC0FFEEull;
        std::fprintf(stderr, "property-test seed: %llu\n",
                     static_cast<unsigned long long>(v));
        return v;
    }();
    return s;
}
