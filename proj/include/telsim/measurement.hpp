#pragma once

#include <array>
#include <utility>
#include <vector>

#include "telsim/operators.hpp"
#include "telsim/qutrit.hpp"
#include "telsim/rng.hpp"
#include "telsim/schmidt.hpp"
#include "telsim/state.hpp"

namespace telsim {

// Alice's joint measurement basis on particles (1,2): twelve orthonormal
// states over the [3,4] register. Outcomes are numbered 1..12; the first
// eight lead to recoverable collapses, the last four terminate the qutrit
// protocol.
struct MeasurementBasis {
    std::vector<StateVector> states;  // exactly 12

    const StateVector& state(int j) const;  // j = 1..12
};

MeasurementBasis build_basis();

// Three-stage discrimination of one coarse subspace:
//   coarse    rank-3 subspace projector (stage 1)
//   diff      rank-1 projector onto the difference ket -> outcome 8+k
//   rest      coarse - diff (stage 2 complement within the subspace)
//   leaf_plus/leaf_minus   rank-1 projectors onto the +/- basis states
//                          -> outcomes 2k-1 / 2k (stage 3)
struct ProjectorBranch {
    Operator coarse;
    Operator diff;
    Operator rest;
    Operator leaf_plus;
    Operator leaf_minus;
};

struct ProjectorTree {
    std::array<ProjectorBranch, 4> branches;
};

ProjectorTree build_projector_tree();
ProjectorTree build_projector_tree(const MeasurementBasis& basis);

// Closed-form outcome probabilities P_1..P_12.
struct OutcomeDistribution {
    std::array<double, 12> p{};

    double probability(int j) const { return p[static_cast<std::size_t>(j - 1)]; }
    double sum() const;
};

OutcomeDistribution outcome_probabilities(const QutritState& psi, const SchmidtVector& a);

// Unnormalized particle-3 state left behind by outcome j; its squared norm
// equals the closed-form P_j.
StateVector collapsed_state(int j, const QutritState& psi, const SchmidtVector& a);

// Samples the three-stage projector hierarchy on a fixed total state.
//
// Every node probability and every leaf residual is determined by the total
// state alone, so they are computed once (literally via project()) at
// construction; sampling then only consumes uniforms. One sample draws up to
// three: stage 1 over the four coarse subspaces, stage 2 difference-ket
// versus complement, stage 3 between the +/- pair.
class OutcomeSampler {
public:
    explicit OutcomeSampler(const StateVector& total);
    OutcomeSampler(const StateVector& total, const MeasurementBasis& basis,
                   const ProjectorTree& tree);

    int sample_index(RandomStream& rng) const;        // outcome 1..12
    const StateVector& residual(int j) const;         // normalized, dim 4

    struct Sample {
        int outcome;
        StateVector residual;
    };
    Sample sample(RandomStream& rng) const;

    // Node probabilities, exposed for verification.
    double stage1_probability(int k) const;           // k = 1..4
    double stage2_diff_probability(int k) const;      // conditional on stage 1
    double stage3_plus_probability(int k) const;      // conditional on stage 2 rest
    double leaf_probability(int j) const;             // product over the path

private:
    std::array<double, 4> stage1_{};
    std::array<double, 4> diff_cond_{};
    std::array<double, 4> plus_cond_{};
    std::array<double, 4> minus_cond_{};
    std::array<double, 12> leaf_{};
    std::vector<StateVector> residuals_;  // 12 entries; zero vector for dead leaves

    void walk(const StateVector& total, const MeasurementBasis& basis,
              const ProjectorTree& tree);
};

// One-shot convenience matching the protocol step: builds the basis, the
// tree and the sampler, then draws a single outcome.
std::pair<int, StateVector> sample_outcome(const StateVector& total, RandomStream& rng);

}  // namespace telsim
