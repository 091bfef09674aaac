#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace telsim::verify {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct SuiteResult {
    std::string suite;
    std::vector<CheckResult> checks;
    bool passed = false;
    double seconds = 0.0;
};

struct Options {
    std::uint64_t seed = 20260809;
    std::uint64_t mc_trials = 100000;   // montecarlo / determinism suites
    std::uint64_t qubit_trials = 10000; // per channel in the qubit suite
    int threads = 0;                    // 0 = auto
    bool printed_matrices = false;      // debug: check the as-printed matrices
};

// Suites, in run_all order:
//   basis        measurement-basis orthonormality and completeness
//   unitarity    U1, U2 and the twelve correction matrices
//   channel      circuit vs direct channel construction
//   probability  closed-form outcome probabilities vs brute force
//   correction   corrected states vs their closed-form targets and weights
//   totals       total-success formulas, state independence, continuity
//   montecarlo   seeded end-to-end runs vs analytics
//   qubit        qubit-reduction totals and sampling
//   determinism  bit-identical reports across reruns and thread counts
const std::vector<std::string>& suite_names();

SuiteResult run_suite(const std::string& name, const Options& options);
std::vector<SuiteResult> run_all(const Options& options);
bool all_passed(const std::vector<SuiteResult>& results);

}  // namespace telsim::verify
