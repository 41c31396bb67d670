// Acceptance criteria 1..10: one PASS/FAIL line per criterion.
#include <cstdio>
#include <cstdlib>
#include <string>

#include "nf/harness.hpp"

int main(int argc, char** argv) {
    bool verbose = false;
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        std::string a = argv[i];
        if (a == "-v") verbose = true;
        else only = std::atoi(argv[i]);
    }
    int failed = 0;
    for (int n = 1; n <= 10; ++n) {
        if (only && n != only) continue;
        nf::SuiteResult S;
        try {
            S = nf::criterion(n);
        } catch (const std::exception& e) {
            std::printf("criterion %2d: FAIL  %s (exception: %s)\n", n, nf::criterion_title(n).c_str(), e.what());
            ++failed;
            continue;
        }
        int bad = 0;
        for (auto& c : S.checks) bad += !c.pass;
        std::printf("criterion %2d: %s  %s  [%zu checks, %d failed, %.2fs of %.0fs]\n", n, S.pass() ? "PASS" : "FAIL",
                    nf::criterion_title(n).c_str(), S.checks.size(), bad, S.seconds, S.target_seconds);
        for (auto& c : S.checks)
            if (verbose || !c.pass)
                std::printf("    %s %s  %s\n", c.pass ? "ok  " : "FAIL", c.name.c_str(), c.detail.c_str());
        std::fflush(stdout);
        failed += !S.pass();
    }
    return failed ? 1 : 0;
}
