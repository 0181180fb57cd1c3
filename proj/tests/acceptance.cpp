// Runs every acceptance battery and prints one PASS/FAIL line per criterion.

#include <kw/suites.hpp>

#include <chrono>
#include <cstdio>
#include <string>

namespace {

struct Target {
    const char *name;
    double budget_seconds;
    const char *statement;
};

constexpr Target targets[] = {
    {"lemma71", 60, "carry decomposition exists iff the congruence holds; reconstruction exact"},
    {"lemma73", 120, "h(J) = h(J^c) iff r in P and J satisfies the adjacency rules"},
    {"prop74-reduce", 300, "reduction meets the degree bounds and is certified by the coboundary oracle"},
    {"thm75-counts", 120, "crystalline class counts within q^|J| (or q^(|J|+1)); degree-p term only when exceptional"},
    {"jmax", 60, "J_max preserves h, is idempotent; raising reaches J_max in <= f steps; G-hat uniqueness"},
    {"rebalance", 60, "worked f=4 example verbatim; exhaustive p=3 f=2 rebalancing"},
    {"cross-char", 60, "rank-one constituent characters agree with niveau-1 witnesses"},
};

} // namespace

int main() {
    int failed = 0;
    for (const auto &t : targets) {
        const auto start = std::chrono::steady_clock::now();
        kw::suites::Report rep;
        std::string error;
        try {
            rep = kw::suites::run(t.name);
        } catch (const std::exception &ex) {
            error = ex.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool ok = error.empty() && rep.passed() && secs < t.budget_seconds;
        failed += !ok;
        std::printf("[%s] criterion %d %-14s checks=%llu failures=%llu time=%.2fs (budget %.0fs) : %s\n", ok ? "PASS" : "FAIL",
                    rep.criterion, t.name, static_cast<unsigned long long>(rep.checks),
                    static_cast<unsigned long long>(rep.failure_count), secs, t.budget_seconds, t.statement);
        if (!error.empty()) std::printf("    error: %s\n", error.c_str());
        for (const auto &c : rep.counterexamples) std::printf("    counterexample: %s\n", c.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(targets)) - failed, std::size(targets));
    return failed == 0 ? 0 : 1;
}
