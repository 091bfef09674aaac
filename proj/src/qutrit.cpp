#include "telsim/qutrit.hpp"

#include <cmath>

#include "telsim/errors.hpp"

namespace telsim {

namespace {
double norm_of(cplx a, cplx b, cplx c) {
    return std::sqrt(std::norm(a) + std::norm(b) + std::norm(c));
}
}  // namespace

QutritState QutritState::create(cplx alpha, cplx beta, cplx gamma) {
    const double n = norm_of(alpha, beta, gamma);
    if (std::abs(n - 1.0) > 1e-12)
        throw ValidationError("QutritState: amplitudes are not normalized");
    return QutritState({alpha, beta, gamma});
}

QutritState QutritState::normalized(cplx alpha, cplx beta, cplx gamma) {
    const double n = norm_of(alpha, beta, gamma);
    if (n <= 0.0) throw ValidationError("QutritState: zero state");
    return QutritState({alpha / n, beta / n, gamma / n});
}

QutritState QutritState::random(RandomStream& rng) {
    std::array<cplx, 3> a{};
    double n = 0.0;
    do {
        for (cplx& amp : a) amp = cplx{rng.gaussian(), rng.gaussian()};
        n = std::sqrt(std::norm(a[0]) + std::norm(a[1]) + std::norm(a[2]));
    } while (n <= 1e-6);
    for (cplx& amp : a) amp /= n;
    return QutritState(a);
}

StateVector QutritState::to_state_vector() const {
    return StateVector(RegisterShape({3}), {amps_[0], amps_[1], amps_[2]});
}

double fidelity(const QutritState& a, const QutritState& b) {
    cplx overlap{0.0, 0.0};
    for (int i = 0; i < 3; ++i)
        overlap += std::conj(a.amps()[static_cast<std::size_t>(i)]) *
                   b.amps()[static_cast<std::size_t>(i)];
    const double f = std::norm(overlap);
    return f > 1.0 ? 1.0 : f;
}

}  // namespace telsim
