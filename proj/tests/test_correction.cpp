#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "telsim/analytics.hpp"
#include "telsim/correction.hpp"
#include "telsim/errors.hpp"
#include "telsim/measurement.hpp"

using namespace telsim;

namespace {

const SchmidtVector kGeneric = SchmidtVector::create(0.1, 0.2, 0.4, std::sqrt(0.79));
const SchmidtVector kUniform = SchmidtVector::create(0.5, 0.5, 0.5, 0.5);

}  // namespace

TEST_CASE("regime classification") {
    const Regime uu = classify_regime(kGeneric);
    CHECK(uu.branch01 == Branch::unprimed);
    CHECK(uu.branch23 == Branch::unprimed);

    const Regime pp = classify_regime(kUniform);
    CHECK(pp.branch01 == Branch::primed);
    CHECK(pp.branch23 == Branch::primed);

    const Regime pu = classify_regime(SchmidtVector::create(0.2, 0.25, 0.4, std::sqrt(0.7375)));
    CHECK(pu.branch01 == Branch::primed);
    CHECK(pu.branch23 == Branch::unprimed);

    // boundary maps to unprimed
    const double t = 0.25;
    const double rest = std::sqrt((1.0 - 3.0 * t * t) / 2.0);
    const Regime boundary =
        classify_regime(SchmidtVector::create(t, std::sqrt(2.0) * t, rest, rest));
    CHECK(boundary.branch01 == Branch::unprimed);
}

TEST_CASE("regime round-trips through its string form") {
    for (Branch b01 : {Branch::unprimed, Branch::primed})
        for (Branch b23 : {Branch::unprimed, Branch::primed}) {
            const Regime r{b01, b23};
            CHECK(parse_regime(to_string(r)) == r);
        }
}

TEST_CASE("plan layout: supports and slot order") {
    const Regime regime = classify_regime(kGeneric);
    const CorrectionPlan p1 = correction_plan(1, kGeneric, regime);
    CHECK(p1.support == std::array<int, 3>{0, 1, 2});
    CHECK(p1.slot_levels == std::array<int, 3>{0, 1, 2});

    const CorrectionPlan p3 = correction_plan(3, kGeneric, regime);
    CHECK(p3.support == std::array<int, 3>{1, 2, 3});
    CHECK(p3.slot_levels == std::array<int, 3>{1, 2, 3});

    // After correction the target carries (alpha, beta, gamma) on the
    // ascending support levels, e.g. alpha|0> + beta|2> + gamma|3> for
    // outcome 5.
    const CorrectionPlan p5 = correction_plan(5, kGeneric, regime);
    CHECK(p5.support == std::array<int, 3>{0, 2, 3});
    CHECK(p5.slot_levels == std::array<int, 3>{0, 2, 3});

    const CorrectionPlan p7 = correction_plan(7, kGeneric, regime);
    CHECK(p7.support == std::array<int, 3>{0, 1, 3});
    CHECK(p7.slot_levels == std::array<int, 3>{0, 1, 3});
    CHECK(p7.relabel(0) == 0);
    CHECK(p7.relabel(1) == 1);
    CHECK(p7.relabel(3) == 2);
}

TEST_CASE("outcome-1 unprimed matrix carries sqrt(2) a0 / a1") {
    const Operator u = correction_matrix(1, Branch::unprimed, kGeneric);
    CHECK(u.at(2, 2).real() == doctest::Approx(std::sqrt(2.0) * 0.1 / 0.2).epsilon(1e-14));
    CHECK(u.at(0, 0) == cplx{1.0, 0.0});
    CHECK(check_unitary(u, 1e-12).unitary);
}

TEST_CASE("the two printed forms of the outcome-1 ratio agree") {
    RandomStream rng(41);
    for (int trial = 0; trial < 100; ++trial) {
        const SchmidtVector a = SchmidtVector::random(rng);
        if (a.a1() == 0.0 || a.a2() == 0.0) continue;
        // sqrt(2) a0 / a1 versus 2 a0 / (sqrt(2) a1), and the same for a2
        CHECK(std::abs(std::sqrt(2.0) * a.a0() / a.a1() -
                       2.0 * a.a0() / (std::sqrt(2.0) * a.a1())) <= 1e-15);
        CHECK(std::abs(std::sqrt(2.0) * a.a0() / a.a2() -
                       2.0 * a.a0() / (std::sqrt(2.0) * a.a2())) <= 1e-15);
    }
}

TEST_CASE("all twelve correction matrices are unitary on random channels") {
    RandomStream rng(42);
    for (int trial = 0; trial < 100; ++trial) {
        const SchmidtVector a = SchmidtVector::random(rng);
        const Regime regime = classify_regime(a);
        for (int j = 1; j <= 8; ++j) {
            const Branch branch = (j <= 2)   ? regime.branch01
                                  : (j <= 4) ? regime.branch23
                                             : Branch::unprimed;
            CHECK(check_unitary(correction_matrix(j, branch, a), 1e-12).unitary);
        }
    }
    // primed families on a channel where they apply
    for (int j = 1; j <= 4; ++j)
        CHECK(check_unitary(correction_matrix(j, Branch::primed, kUniform), 1e-12).unitary);
}

TEST_CASE("printed matrix defects are detected") {
    SUBCASE("primed outcome-4 has an all-zero row") {
        const Operator printed =
            correction_matrix(4, Branch::primed, kUniform, MatrixEdition::as_printed);
        const UnitaryCheck check = check_unitary(printed, 1e-12);
        CHECK_FALSE(check.unitary);
        for (int c = 0; c < 6; ++c) CHECK(printed.at(3, c) == cplx{0.0, 0.0});
        // the repaired edition restores the unit row
        const Operator repaired = correction_matrix(4, Branch::primed, kUniform);
        CHECK(repaired.at(3, 3) == cplx{1.0, 0.0});
        CHECK(check_unitary(repaired, 1e-12).unitary);
    }
    SUBCASE("unprimed outcome-4 drops two diagonal signs") {
        const SchmidtVector a = kGeneric;  // sqrt(2) a1 < a2 so the family applies
        const Operator printed =
            correction_matrix(4, Branch::unprimed, a, MatrixEdition::as_printed);
        CHECK_FALSE(check_unitary(printed, 1e-12).unitary);
        CHECK(check_unitary(correction_matrix(4, Branch::unprimed, a), 1e-12).unitary);
    }
    SUBCASE("outcome-6 printed block is unitary but misses the gamma sign") {
        // The printed matrix is unitary, so only the state comparison can
        // expose it: the success branch acquires a wrong relative sign.
        const Operator printed =
            correction_matrix(6, Branch::unprimed, kGeneric, MatrixEdition::as_printed);
        CHECK(check_unitary(printed, 1e-12).unitary);

        const QutritState psi = QutritState::normalized(0.5, 0.5, std::sqrt(0.5));
        const StateVector collapsed = collapsed_state(6, psi, kGeneric);
        CorrectionPlan plan = correction_plan(6, kGeneric, classify_regime(kGeneric));
        const StateVector good = apply_correction(collapsed, plan);
        plan.unitary = printed;
        const StateVector bad = apply_correction(collapsed, plan);

        // gamma lives on support level 3 (slot 2): |0>_b component flips sign
        CHECK(std::abs(good.amps[4] - cplx{-1.0, 0.0} * bad.amps[4]) <= 1e-12);
        CHECK(std::abs(good.amps[4] - bad.amps[4]) > 1e-3);
    }
}

TEST_CASE("outcome-1 correction reproduces the worked example") {
    // alpha-heavy input through the generic channel, unprimed family
    const QutritState psi = QutritState::normalized(cplx{0.6, 0.0}, cplx{0.0, 0.5}, cplx{0.4, 0.3});
    const Regime regime = classify_regime(kGeneric);
    const CorrectionPlan plan = correction_plan(1, kGeneric, regime);
    const StateVector collapsed = collapsed_state(1, psi, kGeneric);
    const StateVector corrected = apply_correction(collapsed, plan);

    const double a0 = 0.1, a1 = 0.2, a2 = 0.4;
    const double denom = std::sqrt(2.0 * std::norm(psi.alpha()) * a0 * a0 +
                                   std::norm(psi.beta()) * a1 * a1 +
                                   std::norm(psi.gamma()) * a2 * a2);
    const double amp = std::sqrt(2.0) * a0;
    CHECK(std::abs(corrected.amps[0] - psi.alpha() * amp / denom) <= 1e-12);
    CHECK(std::abs(corrected.amps[2] - psi.beta() * amp / denom) <= 1e-12);
    CHECK(std::abs(corrected.amps[4] - psi.gamma() * amp / denom) <= 1e-12);
    CHECK(std::abs(corrected.amps[1]) <= 1e-15);
    CHECK(std::abs(corrected.amps[3] -
                   -psi.beta() * std::sqrt(a1 * a1 - 2.0 * a0 * a0) / denom) <= 1e-12);
    CHECK(std::abs(corrected.amps[5] -
                   -psi.gamma() * std::sqrt(a2 * a2 - 2.0 * a0 * a0) / denom) <= 1e-12);
}

TEST_CASE("alpha-only input is already aligned for outcome 1") {
    const QutritState psi = QutritState::create(1.0, 0.0, 0.0);
    const CorrectionPlan plan = correction_plan(1, kGeneric, classify_regime(kGeneric));
    const StateVector corrected = apply_correction(collapsed_state(1, psi, kGeneric), plan);
    CHECK(std::abs(corrected.amps[0] - cplx{1.0, 0.0}) <= 1e-12);
    for (int i = 1; i < 6; ++i) CHECK(std::abs(corrected.amps[static_cast<std::size_t>(i)]) <= 1e-12);
}

TEST_CASE("success weight matches the closed form for every outcome and family") {
    RandomStream rng(43);
    for (int trial = 0; trial < 50; ++trial) {
        const SchmidtVector a = SchmidtVector::random(rng);
        const QutritState psi = QutritState::random(rng);
        const Regime regime = classify_regime(a);
        const OutcomeDistribution dist = outcome_probabilities(psi, a);
        for (int j = 1; j <= 8; ++j) {
            if (dist.probability(j) <= 0.0) continue;
            const CorrectionPlan plan = correction_plan(j, a, regime);
            if (plan.deterministic_failure()) continue;
            const StateVector corrected = apply_correction(collapsed_state(j, psi, a), plan);
            double weight = 0.0;
            for (int s = 0; s < 3; ++s)
                weight += std::norm(corrected.amps[static_cast<std::size_t>(2 * s)]);
            CHECK(std::abs(weight - conditional_success(j, psi, a, regime)) <= 1e-10);
        }
    }
}

TEST_CASE("apply_correction contract violations") {
    const CorrectionPlan plan = correction_plan(3, kGeneric, classify_regime(kGeneric));
    // support of outcome 3 is (1,2,3); an amplitude on level 0 violates it
    StateVector off_support{RegisterShape({4}), {1.0, 0.0, 0.0, 0.0}};
    CHECK_THROWS_AS(apply_correction(off_support, plan), ContractError);

    StateVector zero{RegisterShape({4})};
    CHECK_THROWS_AS(apply_correction(zero, plan), ContractError);
}

TEST_CASE("measure_aux: aligned state always succeeds") {
    const QutritState psi = QutritState::create(1.0, 0.0, 0.0);
    const CorrectionPlan plan = correction_plan(1, kGeneric, classify_regime(kGeneric));
    const StateVector joint = apply_correction(collapsed_state(1, psi, kGeneric), plan);
    RandomStream rng(44);
    for (int draw = 0; draw < 20; ++draw) {
        const AuxMeasurement m = measure_aux(joint, plan, rng);
        CHECK(m.success);
        CHECK(m.aux_result == 0);
        CHECK(std::abs(m.particle3.amps[0] - cplx{1.0, 0.0}) <= 1e-12);
    }
}

TEST_CASE("measure_aux success rate tracks the closed form") {
    const QutritState psi =
        QutritState::normalized(cplx{0.5, 0.1}, cplx{0.4, -0.2}, cplx{0.6, 0.3});
    const Regime regime = classify_regime(kGeneric);
    const CorrectionPlan plan = correction_plan(1, kGeneric, regime);
    const StateVector joint = apply_correction(collapsed_state(1, psi, kGeneric), plan);

    const double expected = conditional_success(1, psi, kGeneric, regime);
    const int n = 100000;
    int successes = 0;
    RandomStream rng(45);
    for (int i = 0; i < n; ++i)
        if (measure_aux(joint, plan, rng).success) ++successes;
    const double sigma = std::sqrt(expected * (1.0 - expected) / n);
    CHECK(std::abs(successes / static_cast<double>(n) - expected) <= 4.0 * sigma);
}

TEST_CASE("success and failure branches decompose the corrected state") {
    RandomStream rng(46);
    for (int trial = 0; trial < 20; ++trial) {
        const SchmidtVector a = SchmidtVector::random(rng);
        const QutritState psi = QutritState::random(rng);
        const Regime regime = classify_regime(a);
        const OutcomeDistribution dist = outcome_probabilities(psi, a);
        for (int j = 1; j <= 8; ++j) {
            if (dist.probability(j) <= 0.0) continue;
            const CorrectionPlan plan = correction_plan(j, a, regime);
            if (plan.deterministic_failure()) continue;
            const StateVector joint = apply_correction(collapsed_state(j, psi, a), plan);

            StateVector branch0(joint.shape), branch1(joint.shape);
            for (int s = 0; s < 3; ++s) {
                branch0.amps[static_cast<std::size_t>(2 * s)] =
                    joint.amps[static_cast<std::size_t>(2 * s)];
                branch1.amps[static_cast<std::size_t>(2 * s + 1)] =
                    joint.amps[static_cast<std::size_t>(2 * s + 1)];
            }
            // the branches live on distinct aux levels: orthogonal, complete
            CHECK(std::abs(inner(branch0, branch1)) <= 1e-10);
            CHECK(std::abs(norm_squared(branch0) + norm_squared(branch1) - 1.0) <= 1e-12);
        }
    }
}

TEST_CASE("canonicalize undoes the relabeling") {
    SUBCASE("outcome 3 maps levels (1,2,3) back to slots") {
        const CorrectionPlan plan = correction_plan(3, kGeneric, classify_regime(kGeneric));
        StateVector final3{RegisterShape({4}), {0.0, cplx{0.1, 0.2}, cplx{0.3, -0.1}, cplx{0.4, 0.5}}};
        const QutritState q = canonicalize(final3, plan);
        // fidelity with the relabeled normalized triple is 1
        const QutritState expected =
            QutritState::normalized(cplx{0.1, 0.2}, cplx{0.3, -0.1}, cplx{0.4, 0.5});
        CHECK(fidelity(q, expected) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("outcome 1 is the identity relabel") {
        const CorrectionPlan plan = correction_plan(1, kGeneric, classify_regime(kGeneric));
        StateVector final3{RegisterShape({4}), {0.6, 0.8, 0.0, 0.0}};
        const QutritState q = canonicalize(final3, plan);
        CHECK(q.alpha().real() == doctest::Approx(0.6).epsilon(1e-12));
        CHECK(q.beta().real() == doctest::Approx(0.8).epsilon(1e-12));
    }
    SUBCASE("support violation throws") {
        const CorrectionPlan plan = correction_plan(3, kGeneric, classify_regime(kGeneric));
        StateVector bad{RegisterShape({4}), {1.0, 0.0, 0.0, 0.0}};
        CHECK_THROWS_AS(canonicalize(bad, plan), ContractError);
    }
}

TEST_CASE("end-to-end success recovers the input with unit fidelity") {
    RandomStream rng(47);
    for (int trial = 0; trial < 30; ++trial) {
        const SchmidtVector a = SchmidtVector::random(rng);
        const QutritState psi = QutritState::random(rng);
        const Regime regime = classify_regime(a);
        const OutcomeDistribution dist = outcome_probabilities(psi, a);
        for (int j = 1; j <= 8; ++j) {
            if (dist.probability(j) <= 0.0) continue;
            const CorrectionPlan plan = correction_plan(j, a, regime);
            if (plan.deterministic_failure()) continue;
            const StateVector joint = apply_correction(collapsed_state(j, psi, a), plan);
            // condition on aux = 0 deterministically
            StateVector success_part{RegisterShape({4})};
            double weight = 0.0;
            for (int s = 0; s < 3; ++s) {
                const cplx amp = joint.amps[static_cast<std::size_t>(2 * s)];
                success_part.amps[static_cast<std::size_t>(plan.support[static_cast<std::size_t>(s)])] = amp;
                weight += std::norm(amp);
            }
            if (weight <= 1e-20) continue;
            const QutritState recovered = canonicalize(success_part, plan);
            CHECK(fidelity(recovered, psi) >= 1.0 - 1e-10);
        }
    }
}

TEST_CASE("degenerate channels produce deterministic-failure plans") {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const SchmidtVector rank2 = SchmidtVector::create(0.0, 0.0, inv_sqrt2, inv_sqrt2);
    const Regime regime = classify_regime(rank2);

    for (int j : {1, 2, 7, 8}) {
        const CorrectionPlan plan = correction_plan(j, rank2, regime);
        CHECK(plan.deterministic_failure());
        CHECK(plan.success_amplitude == 0.0);
    }
    for (int j : {3, 4, 5, 6}) {
        const CorrectionPlan plan = correction_plan(j, rank2, regime);
        CHECK_FALSE(plan.deterministic_failure());
        CHECK(plan.success_amplitude == 0.0);
    }
}

TEST_CASE("qubit plans rotate onto the smaller coefficient") {
    RandomStream rng(48);
    for (int trial = 0; trial < 30; ++trial) {
        const SchmidtVector a = SchmidtVector::random(rng);
        const QutritState two = QutritState::random(rng);
        const double w = std::sqrt(std::norm(two.beta()) + std::norm(two.gamma()));
        if (w <= 1e-9) continue;
        const QutritState psi = QutritState::normalized(0.0, two.beta() / w, two.gamma() / w);

        const OutcomeDistribution dist = outcome_probabilities(psi, a);
        for (int j = 9; j <= 12; ++j) {
            const QubitCorrectionPlan plan = qubit_correction_plan(j, a);
            if (plan.deterministic_failure()) {
                CHECK(plan.success_amplitude == 0.0);
                continue;
            }
            CHECK(check_unitary(*plan.unitary, 1e-12).unitary);
            if (dist.probability(j) <= 0.0) continue;

            const StateVector collapsed = collapsed_state(j, psi, a);
            const StateVector joint = apply_qubit_correction(collapsed, plan);
            // |0>_b branch must be proportional to beta|~1> + gamma|~2>
            double weight = 0.0;
            for (int s = 0; s < 2; ++s) weight += std::norm(joint.amps[static_cast<std::size_t>(2 * s)]);
            const double expected =
                plan.success_amplitude * plan.success_amplitude / (2.0 * dist.probability(j));
            CHECK(std::abs(weight - expected) <= 1e-10);

            StateVector success_part{RegisterShape({4})};
            for (int s = 0; s < 2; ++s)
                success_part.amps[static_cast<std::size_t>(plan.support[static_cast<std::size_t>(s)])] =
                    joint.amps[static_cast<std::size_t>(2 * s)];
            if (weight > 1e-20) {
                const QutritState recovered = canonicalize(success_part, plan);
                CHECK(fidelity(recovered, psi) >= 1.0 - 1e-10);
            }
        }
    }
}

TEST_CASE("qubit plan on a degenerate channel") {
    const SchmidtVector degenerate = SchmidtVector::create(0.0, 0.0, 0.0, 1.0);
    const QubitCorrectionPlan plan = qubit_correction_plan(11, degenerate);  // levels (3,0)
    CHECK(plan.deterministic_failure());
    CHECK(plan.success_amplitude == 0.0);
}
