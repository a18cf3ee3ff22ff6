// Acceptance gate: runs every criterion at its pinned tolerance and prints
// one pass/fail line per criterion. Exit 0 iff all pass.

#include <cstring>
#include <iostream>
#include <string>

#include "extlab/acceptance.hpp"

int main(int argc, char** argv) {
    using namespace extlab::acceptance;
    Suite suite = Suite::full;
    std::string outdir = "acceptance_artifacts";
    if (argc > 1 && std::strcmp(argv[1], "fast") == 0) suite = Suite::fast;
    if (argc > 2) outdir = argv[2];
    const auto results = run_suite(suite, std::cout, outdir);
    bool all = true;
    for (const auto& r : results) all = all && r.pass;
    std::cout << (all ? "ALL CRITERIA PASS" : "CRITERIA FAILED") << '\n';
    return all ? 0 : 1;
}
