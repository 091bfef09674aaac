#include "telsim/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "telsim/channel.hpp"
#include "telsim/errors.hpp"

namespace telsim {

bool ProtocolTrace::operator==(const ProtocolTrace& other) const {
    return seed == other.seed && outcome == other.outcome && regime == other.regime &&
           aux_result == other.aux_result && success == other.success &&
           fidelity_on_success == other.fidelity_on_success && final_state == other.final_state;
}

bool EmpiricalReport::operator==(const EmpiricalReport& other) const {
    return trials == other.trials && seed == other.seed &&
           outcome_counts == other.outcome_counts && success_count == other.success_count &&
           success_rate == other.success_rate &&
           mean_fidelity_on_success == other.mean_fidelity_on_success &&
           min_fidelity_on_success == other.min_fidelity_on_success &&
           z.success_rate == other.z.success_rate && z.outcome == other.z.outcome;
}

double binomial_z(double observed_rate, double p, double n) {
    const double sigma = std::sqrt(p * (1.0 - p) / n);
    const double diff = observed_rate - p;
    if (sigma > 0.0) return diff / sigma;
    return diff == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::max(), diff);
}

ProtocolRunner::ProtocolRunner(const QutritState& psi, const SchmidtVector& a, bool qubit_mode)
    : psi_(psi),
      a_(a),
      qubit_mode_(qubit_mode),
      regime_(classify_regime(a)),
      sampler_(tensor(psi.to_state_vector(), prepare_channel(a))) {
    if (qubit_mode_ && std::abs(psi_.alpha()) > 1e-12)
        throw ValidationError("ProtocolRunner: qubit mode requires alpha = 0");

    arms_.reserve(8);
    for (int j = 1; j <= 8; ++j) {
        Arm arm{correction_plan(j, a_, regime_), std::nullopt};
        if (!arm.plan.deterministic_failure() && sampler_.leaf_probability(j) > 0.0)
            arm.joint = apply_correction(sampler_.residual(j), arm.plan);
        arms_.push_back(std::move(arm));
    }
    if (qubit_mode_) {
        qubit_arms_.reserve(4);
        for (int j = 9; j <= 12; ++j) {
            QubitArm arm{qubit_correction_plan(j, a_), std::nullopt};
            if (!arm.plan.deterministic_failure() && sampler_.leaf_probability(j) > 0.0)
                arm.joint = apply_qubit_correction(sampler_.residual(j), arm.plan);
            qubit_arms_.push_back(std::move(arm));
        }
    }

    analytic_outcomes_ = outcome_probabilities(psi_, a_);
    analytic_success_ = qubit_mode_ ? qubit_mode_total(psi_.beta(), psi_.gamma(), a_)
                                    : decompose_total(psi_, a_).p_total;
}

ProtocolTrace ProtocolRunner::run(RandomStream& rng) const {
    ProtocolTrace trace;
    trace.seed = rng.seed();
    trace.regime = regime_;
    trace.outcome = sampler_.sample_index(rng);

    if (trace.outcome <= 8) {
        const Arm& arm = arms_[static_cast<std::size_t>(trace.outcome - 1)];
        if (!arm.joint) return trace;  // deterministic failure, no aux measurement
        const AuxMeasurement m = measure_aux(*arm.joint, arm.plan, rng);
        trace.aux_result = m.aux_result;
        trace.success = m.success;
        if (m.success) {
            const QutritState recovered = canonicalize(m.particle3, arm.plan);
            trace.final_state = recovered;
            trace.fidelity_on_success = fidelity(recovered, psi_);
        }
        return trace;
    }

    if (!qubit_mode_) return trace;  // outcomes 9..12 terminate the qutrit protocol

    const QubitArm& arm = qubit_arms_[static_cast<std::size_t>(trace.outcome - 9)];
    if (!arm.joint) return trace;
    const AuxMeasurement m = measure_aux(*arm.joint, arm.plan, rng);
    trace.aux_result = m.aux_result;
    trace.success = m.success;
    if (m.success) {
        const QutritState recovered = canonicalize(m.particle3, arm.plan);
        trace.final_state = recovered;
        trace.fidelity_on_success = fidelity(recovered, psi_);
    }
    return trace;
}

namespace {

struct TrialRecord {
    std::uint8_t outcome = 0;
    std::uint8_t success = 0;
    double fidelity = 0.0;
};

EmpiricalReport aggregate(const ProtocolRunner& runner, std::uint64_t trials,
                          std::uint64_t seed, int threads) {
    if (trials < 1) throw ValidationError("run_many: at least one trial required");
    int worker_count = threads;
    if (worker_count <= 0) {
        worker_count = static_cast<int>(std::thread::hardware_concurrency());
        if (worker_count < 1) worker_count = 1;
        worker_count = std::min(worker_count, 8);
    }
    worker_count = static_cast<int>(
        std::min<std::uint64_t>(static_cast<std::uint64_t>(worker_count), trials));

    std::vector<TrialRecord> records(trials);
    auto work = [&](std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t i = begin; i < end; ++i) {
            RandomStream stream = RandomStream::substream(seed, i);
            const ProtocolTrace trace = runner.run(stream);
            records[i] = TrialRecord{static_cast<std::uint8_t>(trace.outcome),
                                     static_cast<std::uint8_t>(trace.success ? 1 : 0),
                                     trace.fidelity_on_success.value_or(0.0)};
        }
    };

    if (worker_count == 1) {
        work(0, trials);
    } else {
        const std::uint64_t chunk = (trials + static_cast<std::uint64_t>(worker_count) - 1) /
                                    static_cast<std::uint64_t>(worker_count);
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(static_cast<std::size_t>(worker_count));
        for (int w = 0; w < worker_count; ++w) {
            const std::uint64_t begin = static_cast<std::uint64_t>(w) * chunk;
            const std::uint64_t end = std::min(trials, begin + chunk);
            pool.emplace_back([&, w, begin, end] {
                try {
                    work(begin, end);
                } catch (...) {
                    errors[static_cast<std::size_t>(w)] = std::current_exception();
                }
            });
        }
        for (auto& t : pool) t.join();
        for (const auto& err : errors)
            if (err) std::rethrow_exception(err);
    }

    // Reduction runs serially in trial order: counts are order-insensitive
    // anyway, and the fidelity sum becomes independent of the worker count.
    EmpiricalReport report;
    report.trials = trials;
    report.seed = seed;
    double fidelity_sum = 0.0;
    double fidelity_min = 2.0;
    for (const TrialRecord& rec : records) {
        report.outcome_counts[static_cast<std::size_t>(rec.outcome - 1)] += 1;
        if (rec.success) {
            report.success_count += 1;
            fidelity_sum += rec.fidelity;
            fidelity_min = std::min(fidelity_min, rec.fidelity);
        }
    }
    const double n = static_cast<double>(trials);
    report.success_rate = static_cast<double>(report.success_count) / n;
    report.mean_fidelity_on_success =
        report.success_count > 0 ? fidelity_sum / static_cast<double>(report.success_count) : 0.0;
    report.min_fidelity_on_success = report.success_count > 0 ? fidelity_min : 0.0;

    report.z.success_rate = binomial_z(report.success_rate, runner.analytic_success(), n);
    for (int j = 1; j <= 12; ++j) {
        const double observed =
            static_cast<double>(report.outcome_counts[static_cast<std::size_t>(j - 1)]) / n;
        report.z.outcome[static_cast<std::size_t>(j - 1)] =
            binomial_z(observed, runner.analytic_outcomes().probability(j), n);
    }
    return report;
}

}  // namespace

ProtocolTrace run_once(const QutritState& psi, const SchmidtVector& a, RandomStream& rng) {
    return ProtocolRunner(psi, a).run(rng);
}

EmpiricalReport run_many(const QutritState& psi, const SchmidtVector& a, std::uint64_t trials,
                         std::uint64_t seed, int threads) {
    return aggregate(ProtocolRunner(psi, a), trials, seed, threads);
}

ProtocolTrace run_once_qubit(cplx beta, cplx gamma, const SchmidtVector& a, RandomStream& rng) {
    return ProtocolRunner(QutritState::normalized(0.0, beta, gamma), a, true).run(rng);
}

EmpiricalReport run_many_qubit(cplx beta, cplx gamma, const SchmidtVector& a,
                               std::uint64_t trials, std::uint64_t seed, int threads) {
    return aggregate(ProtocolRunner(QutritState::normalized(0.0, beta, gamma), a, true), trials,
                     seed, threads);
}

}  // namespace telsim
