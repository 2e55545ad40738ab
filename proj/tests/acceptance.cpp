// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure.  Pass --quick (or set ZGKN_ACCEPT_QUICK=1) for the reduced run.

#include <cstdio>
#include <cstdlib>
#include <cstring>

#include "zgkn/verify.hpp"

int main(int argc, char** argv) {
    bool quick = false;
    for (int i = 1; i < argc; ++i)
        if (std::strcmp(argv[i], "--quick") == 0) quick = true;
    if (const char* q = std::getenv("ZGKN_ACCEPT_QUICK"))
        if (std::atoi(q) != 0) quick = true;

    const auto results = zgkn::run_acceptance(quick);
    int failed = 0;
    for (const auto& r : results)
        if (!r.pass) ++failed;
    std::printf("%zu criteria, %d failed%s\n", results.size(), failed,
                quick ? " (quick mode)" : "");
    return failed == 0 ? 0 : 1;
}
