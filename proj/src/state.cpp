#include "telsim/state.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "telsim/errors.hpp"

namespace telsim {

RegisterShape::RegisterShape(std::vector<int> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) throw DimensionError("RegisterShape: at least one subsystem required");
    for (int d : dims_) {
        if (d < 2) throw DimensionError("RegisterShape: every dimension must be >= 2");
        total_ *= d;
    }
}

int RegisterShape::encode(const std::vector<int>& levels) const {
    if (static_cast<int>(levels.size()) != subsystem_count())
        throw DimensionError("encode: level count does not match subsystem count");
    int index = 0;
    for (int k = 0; k < subsystem_count(); ++k) {
        const int lvl = levels[static_cast<std::size_t>(k)];
        if (lvl < 0 || lvl >= dim(k)) throw DimensionError("encode: level out of range");
        index = index * dim(k) + lvl;
    }
    return index;
}

std::vector<int> RegisterShape::decode(int index) const {
    if (index < 0 || index >= total_) throw DimensionError("decode: index out of range");
    std::vector<int> levels(static_cast<std::size_t>(subsystem_count()));
    for (int k = subsystem_count() - 1; k >= 0; --k) {
        levels[static_cast<std::size_t>(k)] = index % dim(k);
        index /= dim(k);
    }
    return levels;
}

StateVector::StateVector(RegisterShape s, std::vector<cplx> a)
    : shape(std::move(s)), amps(std::move(a)) {
    if (static_cast<int>(amps.size()) != shape.total())
        throw DimensionError("StateVector: amplitude count does not match shape");
}

double norm_squared(const StateVector& state) {
    double n = 0.0;
    for (const cplx& amp : state.amps) n += std::norm(amp);
    return n;
}

double norm(const StateVector& state) { return std::sqrt(norm_squared(state)); }

bool is_normalized(const StateVector& state, double tol) {
    return std::abs(norm(state) - 1.0) <= tol;
}

StateVector normalized(const StateVector& state) {
    const double n = norm(state);
    if (n <= 0.0) throw ContractError("normalized: zero vector");
    StateVector out = state;
    for (cplx& amp : out.amps) amp /= n;
    return out;
}

cplx inner(const StateVector& a, const StateVector& b) {
    if (a.shape != b.shape) throw DimensionError("inner: shape mismatch");
    cplx sum{0.0, 0.0};
    for (std::size_t i = 0; i < a.amps.size(); ++i) sum += std::conj(a.amps[i]) * b.amps[i];
    return sum;
}

StateVector fix_global_phase(const StateVector& state, double tol) {
    for (const cplx& amp : state.amps) {
        const double mag = std::abs(amp);
        if (mag > tol) {
            const cplx phase = std::conj(amp) / mag;
            StateVector out = state;
            for (cplx& a : out.amps) a *= phase;
            return out;
        }
    }
    return state;
}

double max_amp_deviation(const StateVector& a, const StateVector& b) {
    if (a.shape != b.shape) throw DimensionError("max_amp_deviation: shape mismatch");
    double worst = 0.0;
    for (std::size_t i = 0; i < a.amps.size(); ++i)
        worst = std::max(worst, std::abs(a.amps[i] - b.amps[i]));
    return worst;
}

StateVector make_basis_state(const RegisterShape& shape, const std::vector<int>& levels) {
    StateVector state(shape);
    state.amps[static_cast<std::size_t>(shape.encode(levels))] = 1.0;
    return state;
}

StateVector tensor(const StateVector& a, const StateVector& b) {
    std::vector<int> dims = a.shape.dims();
    dims.insert(dims.end(), b.shape.dims().begin(), b.shape.dims().end());
    StateVector out{RegisterShape(std::move(dims))};
    const std::size_t nb = b.amps.size();
    for (std::size_t i = 0; i < a.amps.size(); ++i)
        for (std::size_t j = 0; j < nb; ++j) out.amps[i * nb + j] = a.amps[i] * b.amps[j];
    return out;
}

namespace {

// Precomputed index plan for applying an operator to a subset of subsystems:
// every full index splits as base + local, where local runs over the target
// subspace and base over everything else.
struct SubsystemPlan {
    std::vector<int> local_offsets;  // target-subspace index -> amp offset
    std::vector<int> base_offsets;   // one per assignment of non-target levels
};

SubsystemPlan make_plan(const RegisterShape& shape, const std::vector<int>& targets) {
    const int n = shape.subsystem_count();
    std::vector<int> strides(static_cast<std::size_t>(n));
    int s = 1;
    for (int k = n - 1; k >= 0; --k) {
        strides[static_cast<std::size_t>(k)] = s;
        s *= shape.dim(k);
    }

    std::vector<bool> is_target(static_cast<std::size_t>(n), false);
    for (int t : targets) is_target[static_cast<std::size_t>(t)] = true;

    SubsystemPlan plan;
    plan.local_offsets = {0};
    for (int t : targets) {
        std::vector<int> next;
        next.reserve(plan.local_offsets.size() * static_cast<std::size_t>(shape.dim(t)));
        for (int off : plan.local_offsets)
            for (int lvl = 0; lvl < shape.dim(t); ++lvl)
                next.push_back(off + lvl * strides[static_cast<std::size_t>(t)]);
        plan.local_offsets = std::move(next);
    }

    plan.base_offsets = {0};
    for (int k = 0; k < n; ++k) {
        if (is_target[static_cast<std::size_t>(k)]) continue;
        std::vector<int> next;
        next.reserve(plan.base_offsets.size() * static_cast<std::size_t>(shape.dim(k)));
        for (int off : plan.base_offsets)
            for (int lvl = 0; lvl < shape.dim(k); ++lvl)
                next.push_back(off + lvl * strides[static_cast<std::size_t>(k)]);
        plan.base_offsets = std::move(next);
    }
    return plan;
}

void validate_targets(const RegisterShape& shape, const Operator& op,
                      const std::vector<int>& targets) {
    if (targets.empty()) throw DimensionError("apply_to_subsystems: no targets");
    int product = 1;
    for (std::size_t i = 0; i < targets.size(); ++i) {
        const int t = targets[i];
        if (t < 0 || t >= shape.subsystem_count())
            throw DimensionError("apply_to_subsystems: target out of range");
        if (i > 0 && targets[i - 1] >= t)
            throw DimensionError("apply_to_subsystems: targets must be distinct and ascending");
        product *= shape.dim(t);
    }
    if (product != op.dim)
        throw DimensionError("apply_to_subsystems: operator dimension does not match targets");
}

}  // namespace

StateVector apply_to_subsystems(const StateVector& state, const Operator& op,
                                const std::vector<int>& targets) {
    validate_targets(state.shape, op, targets);
    const SubsystemPlan plan = make_plan(state.shape, targets);
    const int m = op.dim;

    StateVector out(state.shape);
    std::vector<cplx> x(static_cast<std::size_t>(m));
    for (int base : plan.base_offsets) {
        for (int l = 0; l < m; ++l)
            x[static_cast<std::size_t>(l)] =
                state.amps[static_cast<std::size_t>(base + plan.local_offsets[static_cast<std::size_t>(l)])];
        for (int r = 0; r < m; ++r) {
            cplx acc{0.0, 0.0};
            const cplx* row = &op.entries[static_cast<std::size_t>(r) * m];
            for (int c = 0; c < m; ++c) acc += row[c] * x[static_cast<std::size_t>(c)];
            out.amps[static_cast<std::size_t>(base + plan.local_offsets[static_cast<std::size_t>(r)])] = acc;
        }
    }
    return out;
}

ProjectionResult project(const StateVector& state, const Operator& projector,
                         const std::vector<int>& targets, bool validate) {
    if (validate) {
        if (!is_hermitian(projector, 1e-12))
            throw ContractError("project: projector is not Hermitian");
        if (!is_idempotent(projector, 1e-12))
            throw ContractError("project: projector is not idempotent");
    }
    StateVector projected = apply_to_subsystems(state, projector, targets);
    double p = inner(state, projected).real();
    p = std::clamp(p, 0.0, 1.0);
    return ProjectionResult{std::move(projected), p};
}

double fidelity(const StateVector& a, const StateVector& b) {
    if (a.shape != b.shape) throw DimensionError("fidelity: shape mismatch");
    const double f = std::norm(inner(a, b));
    return std::clamp(f, 0.0, 1.0);
}

}  // namespace telsim
