#include "telsim/schmidt.hpp"

#include <algorithm>
#include <cmath>

#include "telsim/errors.hpp"

namespace telsim {

SchmidtVector SchmidtVector::create(double a0, double a1, double a2, double a3) {
    return create(std::array<double, 4>{a0, a1, a2, a3});
}

SchmidtVector SchmidtVector::create(const std::array<double, 4>& a) {
    for (double v : a) {
        if (!std::isfinite(v)) throw ValidationError("SchmidtVector: non-finite coefficient");
        if (v < 0.0) throw ValidationError("SchmidtVector: negative coefficient");
    }
    for (int i = 0; i < 3; ++i) {
        if (a[static_cast<std::size_t>(i)] > a[static_cast<std::size_t>(i) + 1])
            throw ValidationError("SchmidtVector: ordering violated (need a0 <= a1 <= a2 <= a3)");
    }
    double sum_sq = 0.0;
    for (double v : a) sum_sq += v * v;
    if (std::abs(sum_sq - 1.0) > 1e-12)
        throw ValidationError("SchmidtVector: coefficients are not normalized");
    return SchmidtVector(a);
}

SchmidtVector SchmidtVector::random(RandomStream& rng) {
    std::array<double, 4> a{};
    double sum_sq = 0.0;
    do {
        sum_sq = 0.0;
        for (double& v : a) {
            v = rng.uniform();
            sum_sq += v * v;
        }
    } while (sum_sq <= 0.0);
    const double n = std::sqrt(sum_sq);
    for (double& v : a) v /= n;
    std::sort(a.begin(), a.end());
    return SchmidtVector(a);
}

}  // namespace telsim
