#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "telsim/analytics.hpp"
#include "telsim/correction.hpp"
#include "telsim/measurement.hpp"
#include "telsim/qutrit.hpp"
#include "telsim/schmidt.hpp"

namespace telsim {

// Full record of one protocol run.
struct ProtocolTrace {
    std::uint64_t seed = 0;  // stream seed; replaying it reproduces the trace
    int outcome = 0;         // 1..12
    Regime regime;
    std::optional<int> aux_result;  // absent when no aux measurement happened
    bool success = false;
    std::optional<double> fidelity_on_success;
    std::optional<QutritState> final_state;

    bool operator==(const ProtocolTrace& other) const;
};

struct ZScores {
    double success_rate = 0.0;
    std::array<double, 12> outcome{};
};

struct EmpiricalReport {
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    std::array<std::uint64_t, 12> outcome_counts{};
    std::uint64_t success_count = 0;
    double success_rate = 0.0;
    double mean_fidelity_on_success = 0.0;  // 0 when nothing succeeded
    double min_fidelity_on_success = 0.0;   // 0 when nothing succeeded
    ZScores z;  // standardized deviations against the analytic values

    bool operator==(const EmpiricalReport& other) const;
};

// Immutable per-(state, channel) context: channel, total state, sampler and
// all correction plans are built once; each run only consumes randomness.
// In qubit mode (alpha must be 0) outcomes 9..12 get two-level corrections
// instead of terminating the protocol.
class ProtocolRunner {
public:
    ProtocolRunner(const QutritState& psi, const SchmidtVector& a, bool qubit_mode = false);

    ProtocolTrace run(RandomStream& rng) const;

    const Regime& regime() const { return regime_; }
    const OutcomeDistribution& analytic_outcomes() const { return analytic_outcomes_; }
    double analytic_success() const { return analytic_success_; }
    bool qubit_mode() const { return qubit_mode_; }

private:
    QutritState psi_;
    SchmidtVector a_;
    bool qubit_mode_;
    Regime regime_;
    OutcomeSampler sampler_;

    struct Arm {
        CorrectionPlan plan;
        std::optional<StateVector> joint;  // corrected state, cached
    };
    struct QubitArm {
        QubitCorrectionPlan plan;
        std::optional<StateVector> joint;
    };
    std::vector<Arm> arms_;            // outcomes 1..8
    std::vector<QubitArm> qubit_arms_; // outcomes 9..12, qubit mode only

    OutcomeDistribution analytic_outcomes_;
    double analytic_success_ = 0.0;
};

ProtocolTrace run_once(const QutritState& psi, const SchmidtVector& a, RandomStream& rng);

// N independent runs. Trial i always uses the stream derived from
// (seed, i), and aggregation happens in trial order, so the report is
// bit-identical for every thread count. threads <= 0 picks a default.
EmpiricalReport run_many(const QutritState& psi, const SchmidtVector& a,
                         std::uint64_t trials, std::uint64_t seed, int threads = 0);

// Qubit reduction (alpha = 0): all twelve outcomes are corrected; z-scores
// are computed against qubit_mode_total.
ProtocolTrace run_once_qubit(cplx beta, cplx gamma, const SchmidtVector& a, RandomStream& rng);
EmpiricalReport run_many_qubit(cplx beta, cplx gamma, const SchmidtVector& a,
                               std::uint64_t trials, std::uint64_t seed, int threads = 0);

// (observed - p) / sqrt(p (1-p) / n); 0 when sigma and the deviation both
// vanish.
double binomial_z(double observed_rate, double p, double n);

}  // namespace telsim
