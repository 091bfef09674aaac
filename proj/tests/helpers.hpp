#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "telsim/operators.hpp"
#include "telsim/rng.hpp"
#include "telsim/state.hpp"

namespace telsim::testing {

// Random unitary via Gram-Schmidt on a random complex matrix.
inline Operator random_unitary(int dim, RandomStream& rng) {
    std::vector<std::vector<cplx>> cols(static_cast<std::size_t>(dim),
                                        std::vector<cplx>(static_cast<std::size_t>(dim)));
    for (auto& col : cols)
        for (cplx& v : col) v = cplx{rng.gaussian(), rng.gaussian()};

    for (int c = 0; c < dim; ++c) {
        auto& col = cols[static_cast<std::size_t>(c)];
        for (int prev = 0; prev < c; ++prev) {
            const auto& other = cols[static_cast<std::size_t>(prev)];
            cplx overlap{0.0, 0.0};
            for (int r = 0; r < dim; ++r)
                overlap += std::conj(other[static_cast<std::size_t>(r)]) *
                           col[static_cast<std::size_t>(r)];
            for (int r = 0; r < dim; ++r)
                col[static_cast<std::size_t>(r)] -= overlap * other[static_cast<std::size_t>(r)];
        }
        double n = 0.0;
        for (const cplx& v : col) n += std::norm(v);
        n = std::sqrt(n);
        for (cplx& v : col) v /= n;
    }

    Operator u(dim, "random unitary");
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c)
            u.at(r, c) = cols[static_cast<std::size_t>(c)][static_cast<std::size_t>(r)];
    return u;
}

inline StateVector random_state(const RegisterShape& shape, RandomStream& rng) {
    StateVector state(shape);
    for (cplx& amp : state.amps) amp = cplx{rng.gaussian(), rng.gaussian()};
    return normalized(state);
}

}  // namespace telsim::testing
