#pragma once

#include <vector>

#include "telsim/operators.hpp"

namespace telsim {

// Register of subsystems with (possibly unequal) dimensions, e.g. [3,4,4,2]
// for qutrit x ququart x ququart x qubit. Basis indices are row-major with
// the leftmost subsystem most significant, so a ket written |0 3 3> reads
// directly off the amplitude array.
class RegisterShape {
public:
    explicit RegisterShape(std::vector<int> dims);

    int subsystem_count() const { return static_cast<int>(dims_.size()); }
    int dim(int k) const { return dims_[static_cast<std::size_t>(k)]; }
    const std::vector<int>& dims() const { return dims_; }
    int total() const { return total_; }

    // Basis index of |levels[0] levels[1] ...>. Out-of-range levels throw.
    int encode(const std::vector<int>& levels) const;
    std::vector<int> decode(int index) const;

    bool operator==(const RegisterShape& other) const { return dims_ == other.dims_; }
    bool operator!=(const RegisterShape& other) const { return !(*this == other); }

private:
    std::vector<int> dims_;
    int total_ = 1;
};

// Pure state over a register: one complex amplitude per basis index.
struct StateVector {
    RegisterShape shape;
    std::vector<cplx> amps;

    explicit StateVector(RegisterShape s)
        : shape(std::move(s)), amps(static_cast<std::size_t>(shape.total()), cplx{0.0, 0.0}) {}
    StateVector(RegisterShape s, std::vector<cplx> a);
};

double norm(const StateVector& state);
double norm_squared(const StateVector& state);
bool is_normalized(const StateVector& state, double tol = 1e-12);
StateVector normalized(const StateVector& state);  // zero vector throws

// <a|b>; shapes must match.
cplx inner(const StateVector& a, const StateVector& b);

// Multiplies by a unit phase making the first amplitude above `tol` real and
// non-negative. Physically irrelevant, but it makes state comparisons exact.
StateVector fix_global_phase(const StateVector& state, double tol = 1e-12);

double max_amp_deviation(const StateVector& a, const StateVector& b);

StateVector make_basis_state(const RegisterShape& shape, const std::vector<int>& levels);

// Kronecker product; the result's register is the concatenation of the two.
StateVector tensor(const StateVector& a, const StateVector& b);

// op acting on the listed subsystems (distinct, ascending), identity on the
// rest. op.dim must equal the product of the target dimensions, and its
// basis is the row-major order of the target levels.
StateVector apply_to_subsystems(const StateVector& state, const Operator& op,
                                const std::vector<int>& targets);

struct ProjectionResult {
    StateVector state;   // P|state>, unnormalized
    double probability;  // <state|P|state>, clamped to [0,1]
};

// `validate` checks the projector contract (Hermitian, idempotent within
// 1e-12) and throws ContractError on violation. Callers holding projectors
// already validated at construction may turn it off.
ProjectionResult project(const StateVector& state, const Operator& projector,
                         const std::vector<int>& targets, bool validate = true);

// |<a|b>|^2 for same-shape states.
double fidelity(const StateVector& a, const StateVector& b);

}  // namespace telsim
