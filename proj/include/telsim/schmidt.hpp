#pragma once

#include <array>

#include "telsim/rng.hpp"

namespace telsim {

// The four channel coefficients of a two-ququart state sum_i a_i |ii>.
// Construction enforces 0 <= a0 <= a1 <= a2 <= a3 and sum a_i^2 = 1
// (within 1e-12); ordering violations are rejected rather than sorted,
// because the correction-regime logic depends on the documented order.
class SchmidtVector {
public:
    static SchmidtVector create(double a0, double a1, double a2, double a3);
    static SchmidtVector create(const std::array<double, 4>& a);

    // Test/sweep helper: four uniform draws, square-normalized, sorted.
    static SchmidtVector random(RandomStream& rng);

    double a0() const { return a_[0]; }
    double a1() const { return a_[1]; }
    double a2() const { return a_[2]; }
    double a3() const { return a_[3]; }
    double coeff(int i) const { return a_[static_cast<std::size_t>(i)]; }
    const std::array<double, 4>& coeffs() const { return a_; }

    bool operator==(const SchmidtVector& other) const { return a_ == other.a_; }

private:
    explicit SchmidtVector(std::array<double, 4> a) : a_(a) {}
    std::array<double, 4> a_{};
};

}  // namespace telsim
