#include "telsim/measurement.hpp"

#include <cmath>

#include "telsim/errors.hpp"

namespace telsim {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

// Particle-2 column paired with particle-1 row r inside coarse subspace k:
// branch k spans { |0, k-1>, |1, k mod 4>, |2, (k+1) mod 4> }.
int branch_column(int k, int r) { return (k - 1 + r) % 4; }

void check_outcome(int j) {
    if (j < 1 || j > 12) throw DimensionError("outcome index out of range (1..12)");
}

}  // namespace

const StateVector& MeasurementBasis::state(int j) const {
    check_outcome(j);
    return states[static_cast<std::size_t>(j - 1)];
}

MeasurementBasis build_basis() {
    const RegisterShape shape({3, 4});
    MeasurementBasis basis;
    basis.states.reserve(12);
    // The paper-style coefficients (1/sqrt(3))*(sqrt(3/2), sqrt(3)/2, sqrt(3)/2)
    // simplify to (1/sqrt(2), 1/2, 1/2); stored simplified to avoid compounded
    // rounding.
    for (int k = 1; k <= 4; ++k) {
        for (int sign : {+1, -1}) {
            StateVector phi(shape);
            phi.amps[static_cast<std::size_t>(shape.encode({0, branch_column(k, 0)}))] = kInvSqrt2;
            phi.amps[static_cast<std::size_t>(shape.encode({1, branch_column(k, 1)}))] = 0.5 * sign;
            phi.amps[static_cast<std::size_t>(shape.encode({2, branch_column(k, 2)}))] = 0.5 * sign;
            basis.states.push_back(std::move(phi));
        }
    }
    for (int k = 1; k <= 4; ++k) {
        StateVector phi(shape);
        phi.amps[static_cast<std::size_t>(shape.encode({1, branch_column(k, 1)}))] = kInvSqrt2;
        phi.amps[static_cast<std::size_t>(shape.encode({2, branch_column(k, 2)}))] = -kInvSqrt2;
        basis.states.push_back(std::move(phi));
    }
    return basis;
}

ProjectorTree build_projector_tree() { return build_projector_tree(build_basis()); }

ProjectorTree build_projector_tree(const MeasurementBasis& basis) {
    const RegisterShape shape({3, 4});
    ProjectorTree tree;
    for (int k = 1; k <= 4; ++k) {
        ProjectorBranch& branch = tree.branches[static_cast<std::size_t>(k - 1)];

        Operator coarse(12, "M" + std::to_string(k));
        for (int r = 0; r < 3; ++r) {
            const int idx = shape.encode({r, branch_column(k, r)});
            coarse.at(idx, idx) = 1.0;
        }
        branch.coarse = coarse;

        branch.diff = ket_bra(basis.state(8 + k).amps, basis.state(8 + k).amps,
                              "Q1[M" + std::to_string(k) + "]");
        branch.rest = subtract(coarse, branch.diff);
        branch.rest.label = "Q2[M" + std::to_string(k) + "]";

        branch.leaf_plus = ket_bra(basis.state(2 * k - 1).amps, basis.state(2 * k - 1).amps,
                                   "R" + std::to_string(2 * k - 1));
        branch.leaf_minus = ket_bra(basis.state(2 * k).amps, basis.state(2 * k).amps,
                                    "R" + std::to_string(2 * k));
    }
    return tree;
}

double OutcomeDistribution::sum() const {
    double s = 0.0;
    for (double v : p) s += v;
    return s;
}

OutcomeDistribution outcome_probabilities(const QutritState& psi, const SchmidtVector& a) {
    const double al = std::norm(psi.alpha());
    const double be = std::norm(psi.beta());
    const double ga = std::norm(psi.gamma());
    const double s0 = a.a0() * a.a0(), s1 = a.a1() * a.a1();
    const double s2 = a.a2() * a.a2(), s3 = a.a3() * a.a3();

    OutcomeDistribution dist;
    dist.p[0] = dist.p[1] = 0.5 * (al * s0 + be * s1 / 2.0 + ga * s2 / 2.0);
    dist.p[2] = dist.p[3] = 0.5 * (al * s1 + be * s2 / 2.0 + ga * s3 / 2.0);
    dist.p[4] = dist.p[5] = 0.5 * (al * s2 + be * s3 / 2.0 + ga * s0 / 2.0);
    dist.p[6] = dist.p[7] = 0.5 * (al * s3 + be * s0 / 2.0 + ga * s1 / 2.0);
    dist.p[8] = 0.5 * (be * s1 + ga * s2);
    dist.p[9] = 0.5 * (be * s2 + ga * s3);
    dist.p[10] = 0.5 * (be * s3 + ga * s0);
    dist.p[11] = 0.5 * (be * s0 + ga * s1);
    return dist;
}

StateVector collapsed_state(int j, const QutritState& psi, const SchmidtVector& a) {
    check_outcome(j);
    StateVector state{RegisterShape({4})};
    if (j <= 8) {
        const int k = (j + 1) / 2;
        const double sign = (j % 2 == 1) ? 1.0 : -1.0;
        const int la = branch_column(k, 0), lb = branch_column(k, 1), lg = branch_column(k, 2);
        state.amps[static_cast<std::size_t>(la)] = psi.alpha() * (kInvSqrt2 * a.coeff(la));
        state.amps[static_cast<std::size_t>(lb)] = psi.beta() * (sign * 0.5 * a.coeff(lb));
        state.amps[static_cast<std::size_t>(lg)] = psi.gamma() * (sign * 0.5 * a.coeff(lg));
    } else {
        const int k = j - 8;
        const int lb = branch_column(k, 1), lg = branch_column(k, 2);
        state.amps[static_cast<std::size_t>(lb)] = psi.beta() * (kInvSqrt2 * a.coeff(lb));
        state.amps[static_cast<std::size_t>(lg)] = -psi.gamma() * (kInvSqrt2 * a.coeff(lg));
    }
    return state;
}

namespace {

// Residual of particle 3 after the (1,2) factor has collapsed onto |phi>:
// v[z] = sum_{x,y} conj(phi[x,y]) * state[x,y,z].
StateVector contract_alice(const StateVector& state, const StateVector& phi) {
    StateVector residual{RegisterShape({4})};
    for (int xy = 0; xy < 12; ++xy) {
        const cplx weight = std::conj(phi.amps[static_cast<std::size_t>(xy)]);
        if (weight == cplx{0.0, 0.0}) continue;
        for (int z = 0; z < 4; ++z)
            residual.amps[static_cast<std::size_t>(z)] +=
                weight * state.amps[static_cast<std::size_t>(xy * 4 + z)];
    }
    return residual;
}

}  // namespace

OutcomeSampler::OutcomeSampler(const StateVector& total)
    : OutcomeSampler(total, build_basis(), build_projector_tree()) {}

OutcomeSampler::OutcomeSampler(const StateVector& total, const MeasurementBasis& basis,
                               const ProjectorTree& tree)
    : residuals_(12, StateVector{RegisterShape({4})}) {
    if (total.shape != RegisterShape({3, 4, 4}))
        throw DimensionError("OutcomeSampler: total state must have shape [3,4,4]");
    walk(total, basis, tree);
}

void OutcomeSampler::walk(const StateVector& total, const MeasurementBasis& basis,
                          const ProjectorTree& tree) {
    const std::vector<int> alice{0, 1};
    for (int k = 1; k <= 4; ++k) {
        const ProjectorBranch& branch = tree.branches[static_cast<std::size_t>(k - 1)];
        auto [coarse_state, p_coarse] = project(total, branch.coarse, alice, false);
        stage1_[static_cast<std::size_t>(k - 1)] = p_coarse;
        if (p_coarse <= 0.0) continue;
        const StateVector s1 = normalized(coarse_state);

        auto [diff_state, p_diff] = project(s1, branch.diff, alice, false);
        diff_cond_[static_cast<std::size_t>(k - 1)] = p_diff;
        leaf_[static_cast<std::size_t>(8 + k - 1)] = p_coarse * p_diff;
        if (p_diff > 0.0)
            residuals_[static_cast<std::size_t>(8 + k - 1)] =
                normalized(contract_alice(normalized(diff_state), basis.state(8 + k)));

        auto [rest_state, p_rest] = project(s1, branch.rest, alice, false);
        if (p_rest > 0.0) {
            const StateVector s2 = normalized(rest_state);
            auto [plus_state, p_plus] = project(s2, branch.leaf_plus, alice, false);
            plus_cond_[static_cast<std::size_t>(k - 1)] = p_plus;
            leaf_[static_cast<std::size_t>(2 * k - 2)] = p_coarse * p_rest * p_plus;
            if (p_plus > 0.0)
                residuals_[static_cast<std::size_t>(2 * k - 2)] =
                    normalized(contract_alice(normalized(plus_state), basis.state(2 * k - 1)));

            auto [minus_state, p_minus] = project(s2, branch.leaf_minus, alice, false);
            minus_cond_[static_cast<std::size_t>(k - 1)] = p_minus;
            leaf_[static_cast<std::size_t>(2 * k - 1)] = p_coarse * p_rest * p_minus;
            if (p_minus > 0.0)
                residuals_[static_cast<std::size_t>(2 * k - 1)] =
                    normalized(contract_alice(normalized(minus_state), basis.state(2 * k)));
        }
    }
}

int OutcomeSampler::sample_index(RandomStream& rng) const {
    // Draw order is pinned: stage 1 cumulative over M1..M4, stage 2
    // difference-ket first, stage 3 plus-leaf first. Zero-probability
    // branches are never selected.
    const double u1 = rng.uniform();
    int k = 0;
    double cum = 0.0;
    int last_alive = 0;
    for (int i = 1; i <= 4; ++i) {
        const double p = stage1_[static_cast<std::size_t>(i - 1)];
        if (p <= 0.0) continue;
        last_alive = i;
        cum += p;
        if (u1 < cum) {
            k = i;
            break;
        }
    }
    if (k == 0) k = last_alive;  // cumulative rounded below 1

    const double p_diff = diff_cond_[static_cast<std::size_t>(k - 1)];
    if (p_diff >= 1.0) return 8 + k;
    if (p_diff > 0.0 && rng.uniform() < p_diff) return 8 + k;

    const double p_plus = plus_cond_[static_cast<std::size_t>(k - 1)];
    const double p_minus = minus_cond_[static_cast<std::size_t>(k - 1)];
    if (p_minus <= 0.0) return 2 * k - 1;
    if (p_plus <= 0.0) return 2 * k;
    return (rng.uniform() < p_plus) ? 2 * k - 1 : 2 * k;
}

const StateVector& OutcomeSampler::residual(int j) const {
    check_outcome(j);
    return residuals_[static_cast<std::size_t>(j - 1)];
}

OutcomeSampler::Sample OutcomeSampler::sample(RandomStream& rng) const {
    const int j = sample_index(rng);
    return Sample{j, residual(j)};
}

double OutcomeSampler::stage1_probability(int k) const {
    return stage1_[static_cast<std::size_t>(k - 1)];
}

double OutcomeSampler::stage2_diff_probability(int k) const {
    return diff_cond_[static_cast<std::size_t>(k - 1)];
}

double OutcomeSampler::stage3_plus_probability(int k) const {
    return plus_cond_[static_cast<std::size_t>(k - 1)];
}

double OutcomeSampler::leaf_probability(int j) const {
    check_outcome(j);
    return leaf_[static_cast<std::size_t>(j - 1)];
}

std::pair<int, StateVector> sample_outcome(const StateVector& total, RandomStream& rng) {
    const OutcomeSampler sampler(total);
    auto drawn = sampler.sample(rng);
    return {drawn.outcome, std::move(drawn.residual)};
}

}  // namespace telsim
