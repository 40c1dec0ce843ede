// Acceptance suite: one pass/fail line per criterion, exit 0 iff all pass.

#include <cstdio>
#include <cstdlib>
#include <string>

#include "entrostat/verify.hpp"

int main() {
    const char* env_workers = std::getenv("ENTROSTAT_WORKERS");
    const int workers = env_workers ? std::max(1, std::atoi(env_workers)) : 2;
    const auto results = entrostat::verify::run_acceptance(20240817, workers);
    int failures = 0;
    for (const auto& r : results) {
        std::printf("%s %-12s %s (measured=%.10g target=%.10g tol=%.3g%s%s)\n",
                    r.pass ? "PASS" : "FAIL", r.id.c_str(), r.description.c_str(),
                    r.measured, r.target, r.tol, r.note.empty() ? "" : "; ",
                    r.note.c_str());
        if (!r.pass) ++failures;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(results.size()) - failures,
                results.size());
    return failures == 0 ? 0 : 1;
}
