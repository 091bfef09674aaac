#include "telsim/correction.hpp"

#include <algorithm>
#include <cmath>

#include "telsim/errors.hpp"

namespace telsim {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;
constexpr double kSupportTol = 1e-12;

}  // namespace

std::string to_string(Branch b) { return b == Branch::unprimed ? "unprimed" : "primed"; }

std::string to_string(const Regime& r) {
    return to_string(r.branch01) + "-" + to_string(r.branch23);
}

Regime parse_regime(const std::string& text) {
    const auto dash = text.find('-');
    if (dash == std::string::npos) throw ValidationError("parse_regime: expected '<b01>-<b23>'");
    auto parse_branch = [](const std::string& token) {
        if (token == "unprimed") return Branch::unprimed;
        if (token == "primed") return Branch::primed;
        throw ValidationError("parse_regime: unknown branch '" + token + "'");
    };
    return Regime{parse_branch(text.substr(0, dash)), parse_branch(text.substr(dash + 1))};
}

Regime classify_regime(const SchmidtVector& a) {
    Regime r;
    r.branch01 = (kSqrt2 * a.a0() <= a.a1()) ? Branch::unprimed : Branch::primed;
    r.branch23 = (kSqrt2 * a.a1() <= a.a2()) ? Branch::unprimed : Branch::primed;
    return r;
}

namespace {

// 2x2 building blocks of the collective unitaries. A rotation block with
// cosine num/den has sine sqrt(1 - num^2/den^2) = sqrt(radicand)/den; the
// radicand is passed as the explicit coefficient difference (e.g.
// a1^2 - 2 a0^2), which stays well-conditioned at exact regime boundaries
// where 1 - c^2 would cancel.
struct Block {
    double m00, m01, m10, m11;
};

double rot_sine(double radicand, double den) {
    if (radicand < -1e-12)
        throw ContractError("correction matrix: branch not applicable (radicand < 0)");
    return std::sqrt(std::max(0.0, radicand)) / den;
}

double checked_ratio(double num, double den) {
    if (den == 0.0) throw ContractError("correction matrix: zero divisor coefficient");
    return num / den;
}

Block block_identity() { return {1.0, 0.0, 0.0, 1.0}; }
Block block_neg_first() { return {-1.0, 0.0, 0.0, 1.0}; }
Block block_zero_second_row() { return {-1.0, 0.0, 0.0, 0.0}; }  // printed U'(4) defect

Block block_rot(double num, double den, double radicand) {
    const double c = checked_ratio(num, den);
    const double s = rot_sine(radicand, den);
    return {c, s, -s, c};
}

Block block_mrot(double num, double den, double radicand) {
    const double c = checked_ratio(num, den);
    const double s = rot_sine(radicand, den);
    return {-c, s, -s, -c};
}

// Printed U(4) defect: the diagonal signs of the mrot blocks are dropped,
// which breaks column orthogonality.
Block block_mrot_printed(double num, double den, double radicand) {
    const double c = checked_ratio(num, den);
    const double s = rot_sine(radicand, den);
    return {-c, s, -s, c};
}

// Places three 2x2 blocks into a 6x6 matrix; placement[p] gives the column
// pair receiving row pair p.
Operator assemble(const std::array<Block, 3>& blocks, const std::array<int, 3>& placement,
                  std::string label) {
    Operator u(6, std::move(label));
    for (int p = 0; p < 3; ++p) {
        const Block& b = blocks[static_cast<std::size_t>(p)];
        const int r = 2 * p;
        const int c = 2 * placement[static_cast<std::size_t>(p)];
        u.at(r, c) = b.m00;
        u.at(r, c + 1) = b.m01;
        u.at(r + 1, c) = b.m10;
        u.at(r + 1, c + 1) = b.m11;
    }
    return u;
}

struct OutcomeLayout {
    std::array<int, 3> support;      // ascending
    std::array<int, 3> slot_levels;  // level carrying alpha, beta, gamma after correction
};

// The collective unitary permutes the collapsed amplitudes into ascending
// order, so the post-correction target always carries (alpha, beta, gamma)
// on the ascending support levels.
OutcomeLayout layout_for(int j) {
    switch ((j + 1) / 2) {
        case 1: return {{0, 1, 2}, {0, 1, 2}};
        case 2: return {{1, 2, 3}, {1, 2, 3}};
        case 3: return {{0, 2, 3}, {0, 2, 3}};
        case 4: return {{0, 1, 3}, {0, 1, 3}};
        default: throw DimensionError("outcome index out of range (1..8)");
    }
}

// Divisor coefficients appearing in the selected matrix.
std::array<double, 2> divisors_for(int j, Branch branch, const SchmidtVector& a) {
    switch ((j + 1) / 2) {
        case 1: return branch == Branch::unprimed ? std::array{a.a1(), a.a2()}
                                                  : std::array{a.a0(), a.a2()};
        case 2: return branch == Branch::unprimed ? std::array{a.a2(), a.a3()}
                                                  : std::array{a.a1(), a.a3()};
        case 3: return {a.a2(), a.a3()};
        case 4: return {a.a3(), a.a1()};
        default: throw DimensionError("outcome index out of range (1..8)");
    }
}

double success_amplitude_for(int j, Branch branch, const SchmidtVector& a) {
    switch ((j + 1) / 2) {
        case 1: return branch == Branch::unprimed ? kSqrt2 * a.a0() : a.a1();
        case 2: return branch == Branch::unprimed ? kSqrt2 * a.a1() : a.a2();
        case 3: return a.a0();
        case 4: return a.a0();
        default: throw DimensionError("outcome index out of range (1..8)");
    }
}

}  // namespace

Operator correction_matrix(int j, Branch branch, const SchmidtVector& a, MatrixEdition edition) {
    if (j < 1 || j > 8) throw DimensionError("correction_matrix: outcome index out of range");
    if (j >= 5 && branch == Branch::primed)
        throw ContractError("correction_matrix: outcomes 5..8 have no primed family");
    const bool printed = edition == MatrixEdition::as_printed;
    const double a0 = a.a0(), a1 = a.a1(), a2 = a.a2(), a3 = a.a3();
    const double s0 = a0 * a0, s1 = a1 * a1, s2 = a2 * a2, s3 = a3 * a3;

    std::string label = (branch == Branch::primed ? "U'(" : "U(") + std::to_string(j) + ")";
    if (printed) label += " as printed";

    std::array<Block, 3> blocks{};
    std::array<int, 3> placement{0, 1, 2};

    switch (j) {
        case 1:
            blocks = branch == Branch::unprimed
                         ? std::array{block_identity(),
                                      block_rot(kSqrt2 * a0, a1, s1 - 2.0 * s0),
                                      block_rot(kSqrt2 * a0, a2, s2 - 2.0 * s0)}
                         : std::array{block_rot(a1, kSqrt2 * a0, 2.0 * s0 - s1),
                                      block_identity(),
                                      block_rot(a1, a2, s2 - s1)};
            break;
        case 2:
            blocks = branch == Branch::unprimed
                         ? std::array{block_identity(),
                                      block_mrot(kSqrt2 * a0, a1, s1 - 2.0 * s0),
                                      block_mrot(kSqrt2 * a0, a2, s2 - 2.0 * s0)}
                         : std::array{block_rot(a1, kSqrt2 * a0, 2.0 * s0 - s1),
                                      block_neg_first(),
                                      block_mrot(a1, a2, s2 - s1)};
            break;
        case 3:
            blocks = branch == Branch::unprimed
                         ? std::array{block_identity(),
                                      block_rot(kSqrt2 * a1, a2, s2 - 2.0 * s1),
                                      block_rot(kSqrt2 * a1, a3, s3 - 2.0 * s1)}
                         : std::array{block_rot(a2, kSqrt2 * a1, 2.0 * s1 - s2),
                                      block_identity(),
                                      block_rot(a2, a3, s3 - s2)};
            break;
        case 4:
            if (branch == Branch::unprimed) {
                auto mk = printed ? block_mrot_printed : block_mrot;
                blocks = {block_identity(), mk(kSqrt2 * a1, a2, s2 - 2.0 * s1),
                          mk(kSqrt2 * a1, a3, s3 - 2.0 * s1)};
            } else {
                blocks = {block_rot(a2, kSqrt2 * a1, 2.0 * s1 - s2),
                          printed ? block_zero_second_row() : block_neg_first(),
                          block_mrot(a2, a3, s3 - s2)};
            }
            break;
        case 5:
            blocks = {block_rot(a0, kSqrt2 * a2, 2.0 * s2 - s0),
                      block_rot(a0, a3, s3 - s0), block_identity()};
            placement = {1, 2, 0};
            break;
        case 6:
            blocks = {block_rot(a0, kSqrt2 * a2, 2.0 * s2 - s0),
                      block_mrot(a0, a3, s3 - s0),
                      printed ? block_identity() : block_neg_first()};
            placement = {1, 2, 0};
            break;
        case 7:
            blocks = {block_rot(a0, kSqrt2 * a3, 2.0 * s3 - s0), block_identity(),
                      block_rot(a0, a1, s1 - s0)};
            placement = {2, 0, 1};
            break;
        case 8:
            blocks = {block_rot(a0, kSqrt2 * a3, 2.0 * s3 - s0), block_neg_first(),
                      block_mrot(a0, a1, s1 - s0)};
            placement = {2, 0, 1};
            break;
    }
    return assemble(blocks, placement, std::move(label));
}

int CorrectionPlan::relabel(int level) const {
    for (int slot = 0; slot < 3; ++slot)
        if (slot_levels[static_cast<std::size_t>(slot)] == level) return slot;
    throw ContractError("CorrectionPlan::relabel: level outside support");
}

CorrectionPlan correction_plan(int j, const SchmidtVector& a, const Regime& regime) {
    if (j < 1 || j > 8) throw DimensionError("correction_plan: outcome index out of range");
    const Branch branch = (j <= 2)   ? regime.branch01
                          : (j <= 4) ? regime.branch23
                                     : Branch::unprimed;
    const OutcomeLayout layout = layout_for(j);

    CorrectionPlan plan;
    plan.outcome = j;
    plan.support = layout.support;
    plan.slot_levels = layout.slot_levels;
    plan.success_amplitude = success_amplitude_for(j, branch, a);

    const auto divisors = divisors_for(j, branch, a);
    if (divisors[0] == 0.0 || divisors[1] == 0.0) {
        if (plan.success_amplitude != 0.0)
            throw ContractError("correction_plan: zero divisor with nonzero success amplitude");
        return plan;  // deterministic failure: no unitary, success probability 0
    }
    plan.unitary = correction_matrix(j, branch, a);
    return plan;
}

namespace {

// Shared by the qutrit (3-level support) and qubit (2-level support) paths.

void check_support(const StateVector& collapsed3, const int* support, int count,
                   const char* who) {
    if (collapsed3.shape != RegisterShape({4}))
        throw DimensionError(std::string(who) + ": collapsed state must have dimension 4");
    for (int level = 0; level < 4; ++level) {
        bool in_support = false;
        for (int s = 0; s < count; ++s) in_support |= (support[s] == level);
        if (!in_support && std::abs(collapsed3.amps[static_cast<std::size_t>(level)]) > kSupportTol)
            throw ContractError(std::string(who) + ": amplitude outside plan support");
    }
}

StateVector embed_and_apply(const StateVector& collapsed3, const Operator& unitary,
                            const int* support, int count) {
    const int dim = 2 * count;
    std::vector<cplx> v(static_cast<std::size_t>(dim), cplx{0.0, 0.0});
    for (int s = 0; s < count; ++s)
        v[static_cast<std::size_t>(2 * s)] = collapsed3.amps[static_cast<std::size_t>(support[s])];

    std::vector<cplx> w(static_cast<std::size_t>(dim), cplx{0.0, 0.0});
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) w[static_cast<std::size_t>(r)] += unitary.at(r, c) * v[static_cast<std::size_t>(c)];

    StateVector joint(RegisterShape({count, 2}), std::move(w));
    return normalized(joint);
}

AuxMeasurement measure_aux_impl(const StateVector& joint, const int* support, int count,
                                RandomStream& rng) {
    if (joint.shape != RegisterShape({count, 2}))
        throw DimensionError("measure_aux: joint state shape does not match plan");
    double p0 = 0.0;
    for (int s = 0; s < count; ++s) p0 += std::norm(joint.amps[static_cast<std::size_t>(2 * s)]);
    p0 = std::clamp(p0, 0.0, 1.0);

    int aux = (rng.uniform() < p0) ? 0 : 1;

    double branch_norm_sq = 0.0;
    for (int s = 0; s < count; ++s)
        branch_norm_sq += std::norm(joint.amps[static_cast<std::size_t>(2 * s + aux)]);
    if (branch_norm_sq <= 0.0) {  // rounding placed the draw on a dead branch
        aux = 1 - aux;
        branch_norm_sq = 0.0;
        for (int s = 0; s < count; ++s)
            branch_norm_sq += std::norm(joint.amps[static_cast<std::size_t>(2 * s + aux)]);
    }
    const double scale = 1.0 / std::sqrt(branch_norm_sq);

    AuxMeasurement result{aux == 0, aux, StateVector{RegisterShape({4})}};
    for (int s = 0; s < count; ++s)
        result.particle3.amps[static_cast<std::size_t>(support[s])] =
            joint.amps[static_cast<std::size_t>(2 * s + aux)] * scale;
    return result;
}

}  // namespace

StateVector apply_correction(const StateVector& collapsed3, const CorrectionPlan& plan) {
    if (plan.deterministic_failure())
        throw ContractError("apply_correction: plan is a deterministic failure");
    check_support(collapsed3, plan.support.data(), 3, "apply_correction");
    if (norm_squared(collapsed3) <= 0.0)
        throw ContractError("apply_correction: zero collapsed state");
    return embed_and_apply(collapsed3, *plan.unitary, plan.support.data(), 3);
}

AuxMeasurement measure_aux(const StateVector& joint, const CorrectionPlan& plan,
                           RandomStream& rng) {
    return measure_aux_impl(joint, plan.support.data(), 3, rng);
}

QutritState canonicalize(const StateVector& final3, const CorrectionPlan& plan) {
    check_support(final3, plan.support.data(), 3, "canonicalize");
    std::array<cplx, 3> slots{};
    for (int slot = 0; slot < 3; ++slot)
        slots[static_cast<std::size_t>(slot)] =
            final3.amps[static_cast<std::size_t>(plan.slot_levels[static_cast<std::size_t>(slot)])];

    for (const cplx& amp : slots) {
        const double mag = std::abs(amp);
        if (mag > kSupportTol) {
            const cplx phase = std::conj(amp) / mag;
            for (cplx& s : slots) s *= phase;
            break;
        }
    }
    return QutritState::normalized(slots[0], slots[1], slots[2]);
}

QubitCorrectionPlan qubit_correction_plan(int j, const SchmidtVector& a) {
    if (j < 9 || j > 12) throw DimensionError("qubit_correction_plan: outcome must be 9..12");
    const int k = j - 8;
    const int beta_level = k % 4;
    const int gamma_level = (k + 1) % 4;
    const double cb = a.coeff(beta_level);
    const double cg = a.coeff(gamma_level);

    QubitCorrectionPlan plan;
    plan.outcome = j;
    plan.beta_level = beta_level;
    plan.gamma_level = gamma_level;
    plan.support = {std::min(beta_level, gamma_level), std::max(beta_level, gamma_level)};
    plan.success_amplitude = std::min(cb, cg);
    if (plan.success_amplitude == 0.0) return plan;  // deterministic failure

    // Rotation on the beta level, sign-absorbing rotation on the gamma
    // level (the collapsed state carries -gamma).
    const double m = plan.success_amplitude;
    const Block bb = block_rot(m, cb, cb * cb - m * m);
    const Block bg = block_mrot(m, cg, cg * cg - m * m);
    const Block first = (plan.support[0] == beta_level) ? bb : bg;
    const Block second = (plan.support[0] == beta_level) ? bg : bb;

    Operator u(4, "U_qubit(" + std::to_string(j) + ")");
    u.at(0, 0) = first.m00;
    u.at(0, 1) = first.m01;
    u.at(1, 0) = first.m10;
    u.at(1, 1) = first.m11;
    u.at(2, 2) = second.m00;
    u.at(2, 3) = second.m01;
    u.at(3, 2) = second.m10;
    u.at(3, 3) = second.m11;
    plan.unitary = std::move(u);
    return plan;
}

StateVector apply_qubit_correction(const StateVector& collapsed3,
                                   const QubitCorrectionPlan& plan) {
    if (plan.deterministic_failure())
        throw ContractError("apply_qubit_correction: plan is a deterministic failure");
    check_support(collapsed3, plan.support.data(), 2, "apply_qubit_correction");
    if (norm_squared(collapsed3) <= 0.0)
        throw ContractError("apply_qubit_correction: zero collapsed state");
    return embed_and_apply(collapsed3, *plan.unitary, plan.support.data(), 2);
}

AuxMeasurement measure_aux(const StateVector& joint, const QubitCorrectionPlan& plan,
                           RandomStream& rng) {
    return measure_aux_impl(joint, plan.support.data(), 2, rng);
}

QutritState canonicalize(const StateVector& final3, const QubitCorrectionPlan& plan) {
    check_support(final3, plan.support.data(), 2, "canonicalize");
    std::array<cplx, 3> slots{};
    slots[1] = final3.amps[static_cast<std::size_t>(plan.beta_level)];
    slots[2] = final3.amps[static_cast<std::size_t>(plan.gamma_level)];

    for (const cplx& amp : slots) {
        const double mag = std::abs(amp);
        if (mag > kSupportTol) {
            const cplx phase = std::conj(amp) / mag;
            for (cplx& s : slots) s *= phase;
            break;
        }
    }
    return QutritState::normalized(slots[0], slots[1], slots[2]);
}

}  // namespace telsim
