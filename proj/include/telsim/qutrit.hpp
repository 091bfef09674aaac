#pragma once

#include <array>

#include "telsim/rng.hpp"
#include "telsim/state.hpp"

namespace telsim {

// The unknown three-level input state alpha|0> + beta|1> + gamma|2>.
class QutritState {
public:
    // Requires |norm - 1| <= 1e-12.
    static QutritState create(cplx alpha, cplx beta, cplx gamma);

    // Scales an arbitrary nonzero triple to unit norm.
    static QutritState normalized(cplx alpha, cplx beta, cplx gamma);

    // Haar-ish random state (complex Gaussian components, normalized).
    static QutritState random(RandomStream& rng);

    cplx alpha() const { return amps_[0]; }
    cplx beta() const { return amps_[1]; }
    cplx gamma() const { return amps_[2]; }
    const std::array<cplx, 3>& amps() const { return amps_; }

    StateVector to_state_vector() const;  // shape [3]

    bool operator==(const QutritState& other) const { return amps_ == other.amps_; }

private:
    explicit QutritState(std::array<cplx, 3> amps) : amps_(amps) {}
    std::array<cplx, 3> amps_{};
};

double fidelity(const QutritState& a, const QutritState& b);

}  // namespace telsim
