#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace entrostat::verify {

struct CheckResult {
    std::string id;
    std::string description;
    bool pass;
    double measured;
    double target;
    double tol;
    double seconds;
    std::string note;
};

enum class Suite { Analytic, Moments, Sampling, Coulomb, All };
enum class Budget { Quick, Full };

Suite parse_suite(const std::string& s);
Budget parse_budget(const std::string& s);

// Runs the requested invariant suite; Suite::All with Budget::Full appends
// the full acceptance-criteria battery.
std::vector<CheckResult> run(Suite suite, Budget budget, std::uint64_t seed,
                             int workers);

// The acceptance battery alone (criteria A01..A13).
std::vector<CheckResult> run_acceptance(std::uint64_t seed, int workers);

}  // namespace entrostat::verify
