// Runs every acceptance criterion and prints one PASS/FAIL line each.
// Usage: acceptance [id ...]
#include "suites.hpp"

#include <cstdio>
#include <cstdlib>
#include <vector>

int main(int argc, char** argv)
{
    std::vector<int> ids;
    for (int i = 1; i < argc; ++i) ids.push_back(std::atoi(argv[i]));
    if (ids.empty())
        for (int i = 1; i <= suites::kCount; ++i) ids.push_back(i);

    int failed = 0;
    for (int id : ids) {
        if (id < 1 || id > suites::kCount) {
            std::fprintf(stderr, "unknown criterion %d\n", id);
            return 2;
        }
        auto o = suites::run_suite(id);
        failed += !o.pass();
        std::printf("%s [%2d] %s: %s (%.1fs, limit %.0fs)\n", o.pass() ? "PASS" : "FAIL", o.id, o.name.c_str(),
                    o.detail.c_str(), o.seconds, o.limit_seconds);
        std::fflush(stdout);
    }
    return failed ? 1 : 0;
}
