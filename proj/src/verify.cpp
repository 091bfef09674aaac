#include "telsim/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <sstream>

#include "telsim/analytics.hpp"
#include "telsim/channel.hpp"
#include "telsim/correction.hpp"
#include "telsim/errors.hpp"
#include "telsim/measurement.hpp"
#include "telsim/montecarlo.hpp"
#include "telsim/report_io.hpp"

namespace telsim::verify {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v) { return format_double(v); }

// The four pinned channels spanning all regime combinations.
const std::array<SchmidtVector, 4>& pinned_channels() {
    static const std::array<SchmidtVector, 4> channels = {
        SchmidtVector::create(0.1, 0.2, 0.4, std::sqrt(0.79)),      // unprimed-unprimed
        SchmidtVector::create(0.2, 0.25, 0.4, std::sqrt(0.7375)),   // primed-unprimed
        SchmidtVector::create(0.1, 0.3, 0.35, std::sqrt(0.7775)),   // unprimed-primed
        SchmidtVector::create(0.5, 0.5, 0.5, 0.5),                  // primed-primed
    };
    return channels;
}

const std::array<double, 4> kPinnedTotals = {0.06, 0.13375, 0.08125, 0.5};

struct Checker {
    std::vector<CheckResult> checks;

    void record(const std::string& name, bool passed, const std::string& detail = "") {
        checks.push_back(CheckResult{name, passed, detail});
    }
    // Passes when `worst` stays within `bound`.
    void record_bound(const std::string& name, double worst, double bound) {
        record(name, worst <= bound, "worst " + fmt(worst) + ", bound " + fmt(bound));
    }
};

// ---------------------------------------------------------------- basis --

std::vector<CheckResult> suite_basis(const Options&) {
    Checker c;
    const MeasurementBasis basis = build_basis();

    double worst_gram = 0.0;
    for (int i = 1; i <= 12; ++i) {
        for (int j = 1; j <= 12; ++j) {
            const cplx overlap = inner(basis.state(i), basis.state(j));
            const cplx expected = (i == j) ? cplx{1.0, 0.0} : cplx{0.0, 0.0};
            worst_gram = std::max(worst_gram, std::abs(overlap - expected));
        }
    }
    c.record_bound("gram-matrix-identity", worst_gram, 1e-12);

    Operator sum(12, "sum of leaf projectors");
    for (int j = 1; j <= 12; ++j)
        sum = add(sum, ket_bra(basis.state(j).amps, basis.state(j).amps));
    c.record_bound("completeness", max_entry_deviation(sum, identity_op(12)), 1e-12);
    return c.checks;
}

// ------------------------------------------------------------ unitarity --

std::vector<CheckResult> suite_unitarity(const Options& options) {
    Checker c;
    RandomStream rng(options.seed);
    const MatrixEdition edition =
        options.printed_matrices ? MatrixEdition::as_printed : MatrixEdition::repaired;

    double worst_u1 = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const SchmidtVector a = SchmidtVector::random(rng);
        worst_u1 = std::max(worst_u1, check_unitary(build_u1(a), 1e-12).max_deviation);
    }
    c.record_bound("u1-random-channels", worst_u1, 1e-12);
    c.record_bound("u2", check_unitary(build_u2(), 1e-12).max_deviation, 1e-12);

    // All twelve correction-matrix forms over 100 random channels plus the
    // pinned ones (which guarantee both families for outcomes 1..4).
    double worst_corr = 0.0;
    std::string worst_label;
    std::map<std::string, int> coverage;
    auto test_matrix = [&](int j, Branch branch, const SchmidtVector& a) {
        Operator u = correction_matrix(j, branch, a, edition);
        const UnitaryCheck result = check_unitary(u, 1e-12);
        coverage[(branch == Branch::primed ? "U'(" : "U(") + std::to_string(j) + ")"] += 1;
        if (result.max_deviation > worst_corr) {
            worst_corr = result.max_deviation;
            worst_label = u.label;
        }
    };
    auto test_channel = [&](const SchmidtVector& a) {
        const Regime regime = classify_regime(a);
        for (int j = 1; j <= 8; ++j) {
            const Branch branch = (j <= 2)   ? regime.branch01
                                  : (j <= 4) ? regime.branch23
                                             : Branch::unprimed;
            try {
                test_matrix(j, branch, a);
            } catch (const ContractError&) {
                // degenerate channel: zero divisor, no matrix to check
            }
        }
    };
    for (int trial = 0; trial < 100; ++trial) test_channel(SchmidtVector::random(rng));
    for (const SchmidtVector& a : pinned_channels()) test_channel(a);
    const bool all_forms = coverage.size() == 12;
    c.record("correction-matrices",
             worst_corr <= 1e-12 && all_forms,
             all_forms ? ("worst " + fmt(worst_corr) + " at " + worst_label)
                       : "not all 12 matrix forms exercised");

    // The printed fourth row of the primed outcome-4 matrix is all zeros;
    // the check must catch it.
    const Operator printed =
        correction_matrix(4, Branch::primed, pinned_channels()[3], MatrixEdition::as_printed);
    const UnitaryCheck detection = check_unitary(printed, 1e-12);
    c.record("printed-u4-primed-detected", !detection.unitary,
             printed.label + " deviation " + fmt(detection.max_deviation));
    return c.checks;
}

// -------------------------------------------------------------- channel --

std::vector<CheckResult> suite_channel(const Options& options) {
    Checker c;
    RandomStream rng(options.seed + 1);
    double worst = 0.0;
    bool threw = false;
    for (int trial = 0; trial < 200; ++trial) {
        const SchmidtVector a = SchmidtVector::random(rng);
        try {
            worst = std::max(worst,
                             max_amp_deviation(prepare_channel(a), channel_state_direct(a)));
        } catch (const ContractError&) {
            threw = true;
        }
    }
    c.record("circuit-vs-direct", !threw && worst <= 1e-12,
             "worst " + fmt(worst) + ", bound 1e-12");
    return c.checks;
}

// ---------------------------------------------------------- probability --

std::vector<CheckResult> suite_probability(const Options& options) {
    Checker c;
    RandomStream rng(options.seed + 2);
    const MeasurementBasis basis = build_basis();
    const std::vector<int> alice{0, 1};

    double worst_match = 0.0;
    double worst_sum = 0.0;
    for (int trial = 0; trial < 500; ++trial) {
        const SchmidtVector a = SchmidtVector::random(rng);
        const QutritState psi = QutritState::random(rng);
        const OutcomeDistribution closed = outcome_probabilities(psi, a);
        const StateVector total = tensor(psi.to_state_vector(), channel_state_direct(a));
        for (int j = 1; j <= 12; ++j) {
            const Operator leaf = ket_bra(basis.state(j).amps, basis.state(j).amps);
            const double brute = project(total, leaf, alice, false).probability;
            worst_match = std::max(worst_match, std::abs(brute - closed.probability(j)));
        }
        worst_sum = std::max(worst_sum, std::abs(closed.sum() - 1.0));
    }
    c.record_bound("closed-form-vs-brute-force", worst_match, 1e-12);
    c.record_bound("probabilities-sum-to-one", worst_sum, 1e-10);
    return c.checks;
}

// ----------------------------------------------------------- correction --

// Literal transcription of the post-correction states: the |0>_b component
// carries amp * (alpha, beta, gamma) on the support, the |1>_b component the
// residues. Basis order is support ascending x aux; entries divided by
// sqrt(D) with D the outcome-pair denominator.
std::vector<cplx> expected_corrected(int j, Branch branch, const QutritState& psi,
                                     const SchmidtVector& a) {
    const cplx al = psi.alpha(), be = psi.beta(), ga = psi.gamma();
    const double a0 = a.a0(), a1 = a.a1(), a2 = a.a2(), a3 = a.a3();
    const double s0 = a0 * a0, s1 = a1 * a1, s2 = a2 * a2, s3 = a3 * a3;
    auto res = [](double radicand) { return std::sqrt(std::max(0.0, radicand)); };
    const double sqrt2 = std::sqrt(2.0);

    // slot s of the ascending support, aux bit x -> index 2s + x
    std::vector<cplx> v(6, cplx{0.0, 0.0});
    double denom = 0.0;
    switch (j) {
        case 1:
        case 2: {
            denom = 2.0 * std::norm(al) * s0 + std::norm(be) * s1 + std::norm(ga) * s2;
            const double sign = (j == 1) ? -1.0 : 1.0;  // residue sign flips between the pair
            if (branch == Branch::unprimed) {
                v[0] = sqrt2 * a0 * al;
                v[2] = sqrt2 * a0 * be;
                v[4] = sqrt2 * a0 * ga;
                v[3] = sign * be * res(s1 - 2.0 * s0);
                v[5] = sign * ga * res(s2 - 2.0 * s0);
            } else {
                v[0] = a1 * al;
                v[2] = a1 * be;
                v[4] = a1 * ga;
                v[1] = -al * res(2.0 * s0 - s1);
                v[5] = sign * ga * res(s2 - s1);
            }
            break;
        }
        case 3:
        case 4: {
            denom = 2.0 * std::norm(al) * s1 + std::norm(be) * s2 + std::norm(ga) * s3;
            const double sign = (j == 3) ? -1.0 : 1.0;
            if (branch == Branch::unprimed) {
                v[0] = sqrt2 * a1 * al;
                v[2] = sqrt2 * a1 * be;
                v[4] = sqrt2 * a1 * ga;
                v[3] = sign * be * res(s2 - 2.0 * s1);
                v[5] = sign * ga * res(s3 - 2.0 * s1);
            } else {
                v[0] = a2 * al;
                v[2] = a2 * be;
                v[4] = a2 * ga;
                v[1] = -al * res(2.0 * s1 - s2);
                v[5] = sign * ga * res(s3 - s2);
            }
            break;
        }
        case 5:
        case 6: {
            // support (0,2,3); target a0 (alpha|0> + beta|2> + gamma|3>)
            denom = 2.0 * std::norm(al) * s2 + std::norm(be) * s3 + std::norm(ga) * s0;
            const double sign = (j == 5) ? -1.0 : 1.0;
            v[0] = a0 * al;
            v[2] = a0 * be;
            v[4] = a0 * ga;
            v[1] = -al * res(2.0 * s2 - s0);
            v[3] = sign * be * res(s3 - s0);
            break;
        }
        case 7:
        case 8: {
            // support (0,1,3); target a0 (alpha|0> + beta|1> + gamma|3>)
            denom = 2.0 * std::norm(al) * s3 + std::norm(be) * s0 + std::norm(ga) * s1;
            const double sign = (j == 7) ? -1.0 : 1.0;
            v[0] = a0 * al;
            v[2] = a0 * be;
            v[4] = a0 * ga;
            v[1] = -al * res(2.0 * s3 - s0);
            v[5] = sign * ga * res(s1 - s0);
            break;
        }
        default:
            throw DimensionError("expected_corrected: outcome index out of range");
    }
    const double scale = 1.0 / std::sqrt(denom);
    for (cplx& amp : v) amp *= scale;
    return v;
}

std::vector<CheckResult> suite_correction(const Options& options) {
    Checker c;
    RandomStream rng(options.seed + 3);

    double worst_state = 0.0;
    double worst_weight = 0.0;
    std::map<std::string, int> coverage;

    auto exercise = [&](const QutritState& psi, const SchmidtVector& a) {
        const Regime regime = classify_regime(a);
        const OutcomeDistribution dist = outcome_probabilities(psi, a);
        for (int j = 1; j <= 8; ++j) {
            if (dist.probability(j) <= 0.0) continue;
            const CorrectionPlan plan = correction_plan(j, a, regime);
            if (plan.deterministic_failure()) continue;
            const Branch branch = (j <= 2)   ? regime.branch01
                                  : (j <= 4) ? regime.branch23
                                             : Branch::unprimed;
            coverage[std::to_string(j) + (branch == Branch::primed ? "p" : "u")] += 1;

            const StateVector collapsed = collapsed_state(j, psi, a);
            const StateVector corrected = apply_correction(collapsed, plan);
            const std::vector<cplx> expected = expected_corrected(j, branch, psi, a);
            for (int i = 0; i < 6; ++i)
                worst_state = std::max(
                    worst_state,
                    std::abs(corrected.amps[static_cast<std::size_t>(i)] -
                             expected[static_cast<std::size_t>(i)]));

            double weight = 0.0;
            for (int s = 0; s < 3; ++s)
                weight += std::norm(corrected.amps[static_cast<std::size_t>(2 * s)]);
            worst_weight = std::max(
                worst_weight, std::abs(weight - conditional_success(j, psi, a, regime)));
        }
    };

    for (int trial = 0; trial < 200; ++trial)
        exercise(QutritState::random(rng), SchmidtVector::random(rng));
    for (const SchmidtVector& a : pinned_channels()) exercise(QutritState::random(rng), a);
    // Exact regime boundary: both families coincide there.
    {
        const double t = 0.25;
        const double rest = std::sqrt((1.0 - 3.0 * t * t) / 2.0);
        exercise(QutritState::random(rng),
                 SchmidtVector::create(t, std::sqrt(2.0) * t, rest, rest));
    }

    c.record_bound("corrected-state-vs-target", worst_state, 1e-10);
    c.record_bound("success-weight-vs-closed-form", worst_weight, 1e-10);
    c.record("regime-coverage", coverage.size() == 12,
             std::to_string(coverage.size()) + " of 12 (outcome, family) pairs exercised");
    return c.checks;
}

// --------------------------------------------------------------- totals --

std::vector<CheckResult> suite_totals(const Options& options) {
    Checker c;
    RandomStream rng(options.seed + 4);

    double worst_pinned = 0.0;
    for (std::size_t i = 0; i < pinned_channels().size(); ++i) {
        const double p = total_success(pinned_channels()[i]).p_total;
        worst_pinned = std::max(worst_pinned, std::abs(p - kPinnedTotals[i]));
    }
    c.record_bound("pinned-channel-values", worst_pinned, 1e-12);

    double worst_assembled = 0.0;
    for (int trial = 0; trial < 500; ++trial) {
        const SchmidtVector a = SchmidtVector::random(rng);
        const QutritState psi = QutritState::random(rng);
        const AnalyticReport report = decompose_total(psi, a);
        worst_assembled =
            std::max(worst_assembled, std::abs(report.p_total - total_success(a).p_total));
    }
    c.record_bound("assembled-vs-closed-form", worst_assembled, 1e-12);

    double worst_spread = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const SchmidtVector a = SchmidtVector::random(rng);
        double lo = 2.0, hi = -1.0;
        for (int s = 0; s < 20; ++s) {
            const double p = decompose_total(QutritState::random(rng), a).p_total;
            lo = std::min(lo, p);
            hi = std::max(hi, p);
        }
        worst_spread = std::max(worst_spread, hi - lo);
    }
    c.record_bound("state-independence", worst_spread, 1e-10);

    // Adjacent closed forms agree wherever their regimes meet.
    double worst_boundary = 0.0;
    for (int step = 1; step <= 10; ++step) {
        {
            const double t = 0.03 * step;  // sqrt(2) a0 == a1 boundary
            const double s0 = t * t, s1 = 2.0 * t * t;
            worst_boundary = std::max(worst_boundary,
                                      std::abs((2.0 * s0 + s1) - (s0 + 1.5 * s1)));
            const double s2 = 0.04;  // representative a2^2 for forms 3 vs 4
            worst_boundary = std::max(
                worst_boundary,
                std::abs((2.0 * s0 + 0.5 * s2) - (s0 + 0.5 * s1 + 0.5 * s2)));
        }
        {
            const double t = 0.03 * step;  // sqrt(2) a1 == a2 boundary
            const double s1 = t * t, s2 = 2.0 * t * t;
            const double s0 = 0.0004;
            worst_boundary = std::max(
                worst_boundary, std::abs((2.0 * s0 + s1) - (2.0 * s0 + 0.5 * s2)));
            worst_boundary = std::max(
                worst_boundary,
                std::abs((s0 + 1.5 * s1) - (s0 + 0.5 * s1 + 0.5 * s2)));
        }
    }
    c.record_bound("regime-boundary-continuity", worst_boundary, 1e-12);
    return c.checks;
}

// ----------------------------------------------------------- montecarlo --

std::vector<CheckResult> suite_montecarlo(const Options& options) {
    Checker c;
    RandomStream rng(options.seed + 5);
    const QutritState psi = QutritState::random(rng);
    const double n = static_cast<double>(options.mc_trials);

    for (std::size_t i = 0; i < pinned_channels().size(); ++i) {
        const SchmidtVector& a = pinned_channels()[i];
        const auto start = Clock::now();
        const EmpiricalReport report =
            run_many(psi, a, options.mc_trials, options.seed + i, options.threads);
        const double elapsed = seconds_since(start);

        const double p = total_success(a).p_total;
        const double band = 4.0 * std::sqrt(p * (1.0 - p) / n);
        const std::string tag = "channel-" + std::to_string(i + 1);
        c.record(tag + "-success-rate-4sigma",
                 std::abs(report.success_rate - p) <= band,
                 "rate " + fmt(report.success_rate) + " vs p " + fmt(p) + ", band " + fmt(band));
        c.record(tag + "-success-fidelity",
                 report.success_count == 0 || report.min_fidelity_on_success >= 1.0 - 1e-9,
                 "min fidelity " + fmt(report.min_fidelity_on_success));
        c.record(tag + "-runtime-under-5s", elapsed < 5.0, fmt(elapsed) + " s");
    }
    return c.checks;
}

// ---------------------------------------------------------------- qubit --

std::vector<CheckResult> suite_qubit(const Options& options) {
    Checker c;
    RandomStream rng(options.seed + 6);

    double worst_gap = -1.0;  // most negative (qubit - qutrit) observed
    bool bands_ok = true;
    bool fidelity_ok = true;
    std::string band_detail;
    const double n = static_cast<double>(options.qubit_trials);
    for (int trial = 0; trial < 50; ++trial) {
        const SchmidtVector a = SchmidtVector::random(rng);
        const QutritState two = QutritState::random(rng);
        // project the random state to alpha = 0
        const double w = std::sqrt(std::norm(two.beta()) + std::norm(two.gamma()));
        cplx beta = w > 1e-9 ? two.beta() / w : cplx{1.0, 0.0};
        cplx gamma = w > 1e-9 ? two.gamma() / w : cplx{0.0, 0.0};

        const double qubit_total = qubit_mode_total(beta, gamma, a);
        const double qutrit_total = total_success(a).p_total;
        worst_gap = std::max(worst_gap, qutrit_total - qubit_total);

        const EmpiricalReport report = run_many_qubit(beta, gamma, a, options.qubit_trials,
                                                      options.seed + 100 + trial,
                                                      options.threads);
        const double band = 4.0 * std::sqrt(qubit_total * (1.0 - qubit_total) / n);
        if (std::abs(report.success_rate - qubit_total) > band) {
            bands_ok = false;
            band_detail = "trial " + std::to_string(trial) + ": rate " +
                          fmt(report.success_rate) + " vs p " + fmt(qubit_total);
        }
        if (report.success_count > 0 && report.min_fidelity_on_success < 1.0 - 1e-9)
            fidelity_ok = false;
    }
    c.record_bound("qubit-total-dominates-qutrit", worst_gap, 1e-12);
    c.record("qubit-montecarlo-4sigma", bands_ok, band_detail);
    c.record("qubit-success-fidelity", fidelity_ok, "");
    return c.checks;
}

// ---------------------------------------------------------- determinism --

std::vector<CheckResult> suite_determinism(const Options& options) {
    Checker c;
    RandomStream rng(options.seed + 7);
    const QutritState psi = QutritState::random(rng);
    const SchmidtVector a = pinned_channels()[0];
    const std::uint64_t trials = std::max<std::uint64_t>(options.mc_trials / 2, 1000);

    const EmpiricalReport serial = run_many(psi, a, trials, options.seed, 1);
    const EmpiricalReport serial_again = run_many(psi, a, trials, options.seed, 1);
    c.record("serial-rerun-identical", serial == serial_again);

    bool parallel_ok = true;
    for (int threads : {2, 3, 4}) {
        if (!(run_many(psi, a, trials, options.seed, threads) == serial)) parallel_ok = false;
    }
    c.record("parallel-matches-serial", parallel_ok, "thread counts 2, 3, 4");

    RandomStream s1 = RandomStream::substream(options.seed, 17);
    RandomStream s2 = RandomStream::substream(options.seed, 17);
    c.record("trace-replay-identical", run_once(psi, a, s1) == run_once(psi, a, s2));
    return c.checks;
}

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {
        "basis",  "unitarity",  "channel", "probability", "correction",
        "totals", "montecarlo", "qubit",   "determinism",
    };
    return names;
}

SuiteResult run_suite(const std::string& name, const Options& options) {
    SuiteResult result;
    result.suite = name;
    const auto start = Clock::now();
    if (name == "basis") result.checks = suite_basis(options);
    else if (name == "unitarity") result.checks = suite_unitarity(options);
    else if (name == "channel") result.checks = suite_channel(options);
    else if (name == "probability") result.checks = suite_probability(options);
    else if (name == "correction") result.checks = suite_correction(options);
    else if (name == "totals") result.checks = suite_totals(options);
    else if (name == "montecarlo") result.checks = suite_montecarlo(options);
    else if (name == "qubit") result.checks = suite_qubit(options);
    else if (name == "determinism") result.checks = suite_determinism(options);
    else throw ValidationError("unknown verification suite '" + name + "'");
    result.seconds = seconds_since(start);
    result.passed = std::all_of(result.checks.begin(), result.checks.end(),
                                [](const CheckResult& check) { return check.passed; });
    return result;
}

std::vector<SuiteResult> run_all(const Options& options) {
    std::vector<SuiteResult> results;
    for (const std::string& name : suite_names()) results.push_back(run_suite(name, options));
    return results;
}

bool all_passed(const std::vector<SuiteResult>& results) {
    return std::all_of(results.begin(), results.end(),
                       [](const SuiteResult& suite) { return suite.passed; });
}

}  // namespace telsim::verify
