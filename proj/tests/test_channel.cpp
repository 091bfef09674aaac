#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "telsim/channel.hpp"
#include "telsim/errors.hpp"
#include "telsim/schmidt.hpp"

using namespace telsim;

TEST_CASE("schmidt vector validation") {
    CHECK_THROWS_AS(SchmidtVector::create(0.5, 0.4, 0.3, 0.2), ValidationError);   // ordering
    CHECK_THROWS_AS(SchmidtVector::create(0.1, 0.2, 0.3, 0.4), ValidationError);   // norm
    CHECK_THROWS_AS(SchmidtVector::create(-0.1, 0.2, 0.4, std::sqrt(0.79)), ValidationError);
    CHECK_NOTHROW(SchmidtVector::create(0.5, 0.5, 0.5, 0.5));
}

TEST_CASE("random schmidt vectors satisfy both invariants") {
    RandomStream rng(21);
    for (int trial = 0; trial < 200; ++trial) {
        const SchmidtVector a = SchmidtVector::random(rng);
        CHECK(a.a0() >= 0.0);
        CHECK(a.a0() <= a.a1());
        CHECK(a.a1() <= a.a2());
        CHECK(a.a2() <= a.a3());
        const double sum =
            a.a0() * a.a0() + a.a1() * a.a1() + a.a2() * a.a2() + a.a3() * a.a3();
        CHECK(std::abs(sum - 1.0) <= 1e-12);
    }
}

TEST_CASE("u1 loads the coefficients") {
    SUBCASE("uniform channel: first row") {
        const Operator u = build_u1(SchmidtVector::create(0.5, 0.5, 0.5, 0.5));
        for (int c = 0; c < 4; ++c) CHECK(u.at(0, c) == cplx{0.5, 0.0});
        CHECK(check_unitary(u, 1e-12).unitary);
    }
    SUBCASE("degenerate channel: first column") {
        const Operator u = build_u1(SchmidtVector::create(0.0, 0.0, 0.0, 1.0));
        CHECK(u.at(3, 0) == cplx{1.0, 0.0});
        CHECK(u.at(0, 0) == cplx{0.0, 0.0});
        CHECK(check_unitary(u, 1e-12).unitary);
    }
    SUBCASE("U1|0> equals the coefficient vector") {
        RandomStream rng(22);
        const SchmidtVector a = SchmidtVector::random(rng);
        const StateVector out =
            apply_to_subsystems(make_basis_state(RegisterShape({4}), {0}), build_u1(a), {0});
        for (int i = 0; i < 4; ++i)
            CHECK(std::abs(out.amps[static_cast<std::size_t>(i)] - cplx{a.coeff(i), 0.0}) <=
                  1e-15);
    }
}

TEST_CASE("u2 block actions") {
    const Operator u2 = build_u2();
    CHECK(check_unitary(u2, 1e-12).unitary);
    const RegisterShape pair({4, 4});

    auto action = [&](int ctrl, int target) {
        return apply_to_subsystems(make_basis_state(pair, {ctrl, target}), u2, {0, 1});
    };

    // V-dagger block: |1,0> -> |1,1>
    CHECK(action(1, 0).amps[static_cast<std::size_t>(pair.encode({1, 1}))] == cplx{1.0, 0.0});
    // W block: |2,0> -> |2,2>
    CHECK(action(2, 0).amps[static_cast<std::size_t>(pair.encode({2, 2}))] == cplx{1.0, 0.0});
    // identity block: |0,k> unchanged for every k
    for (int k = 0; k < 4; ++k)
        CHECK(action(0, k).amps[static_cast<std::size_t>(pair.encode({0, k}))] ==
              cplx{1.0, 0.0});
}

TEST_CASE("prepare_channel pinned examples") {
    SUBCASE("single schmidt term gives |33>") {
        const StateVector state = prepare_channel(SchmidtVector::create(0.0, 0.0, 0.0, 1.0));
        CHECK(std::abs(state.amps[15] - cplx{1.0, 0.0}) <= 1e-15);
    }
    SUBCASE("uniform channel") {
        const StateVector state = prepare_channel(SchmidtVector::create(0.5, 0.5, 0.5, 0.5));
        for (int i = 0; i < 4; ++i)
            CHECK(std::abs(state.amps[static_cast<std::size_t>(5 * i)] - cplx{0.5, 0.0}) <=
                  1e-15);
    }
    SUBCASE("generic channel diagonal") {
        const SchmidtVector a = SchmidtVector::create(0.1, 0.2, 0.4, std::sqrt(0.79));
        const StateVector state = prepare_channel(a);
        CHECK(state.amps[0].real() == doctest::Approx(0.1).epsilon(1e-12));
        CHECK(state.amps[5].real() == doctest::Approx(0.2).epsilon(1e-12));
        CHECK(state.amps[10].real() == doctest::Approx(0.4).epsilon(1e-12));
        CHECK(state.amps[15].real() == doctest::Approx(0.888819).epsilon(1e-6));
    }
}

TEST_CASE("circuit and direct construction agree on random channels") {
    RandomStream rng(23);
    for (int trial = 0; trial < 200; ++trial) {
        const SchmidtVector a = SchmidtVector::random(rng);
        const StateVector circuit = prepare_channel(a);
        CHECK(max_amp_deviation(circuit, channel_state_direct(a)) <= 1e-12);
        CHECK(std::abs(norm(circuit) - 1.0) <= 1e-12);
    }
}

TEST_CASE("reduced populations match the squared coefficients") {
    RandomStream rng(24);
    for (int trial = 0; trial < 20; ++trial) {
        const SchmidtVector a = SchmidtVector::random(rng);
        const StateVector state = prepare_channel(a);
        for (int level = 0; level < 4; ++level) {
            double population = 0.0;
            for (int z = 0; z < 4; ++z)
                population += std::norm(state.amps[static_cast<std::size_t>(level * 4 + z)]);
            CHECK(std::abs(population - a.coeff(level) * a.coeff(level)) <= 1e-12);
        }
    }
}
