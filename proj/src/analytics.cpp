#include "telsim/analytics.hpp"

#include <algorithm>
#include <cmath>

#include "telsim/errors.hpp"

namespace telsim {

namespace {

// Denominator 2|alpha|^2 a_x^2 + |beta|^2 a_y^2 + |gamma|^2 a_z^2 for the
// outcome pair containing j; equals 4 P_j.
double denominator(int j, const QutritState& psi, const SchmidtVector& a) {
    const double al = std::norm(psi.alpha());
    const double be = std::norm(psi.beta());
    const double ga = std::norm(psi.gamma());
    switch ((j + 1) / 2) {
        case 1: return 2.0 * al * a.a0() * a.a0() + be * a.a1() * a.a1() + ga * a.a2() * a.a2();
        case 2: return 2.0 * al * a.a1() * a.a1() + be * a.a2() * a.a2() + ga * a.a3() * a.a3();
        case 3: return 2.0 * al * a.a2() * a.a2() + be * a.a3() * a.a3() + ga * a.a0() * a.a0();
        case 4: return 2.0 * al * a.a3() * a.a3() + be * a.a0() * a.a0() + ga * a.a1() * a.a1();
        default: throw DimensionError("conditional_success: outcome index out of range");
    }
}

double numerator(int j, const SchmidtVector& a, const Regime& regime) {
    switch ((j + 1) / 2) {
        case 1:
            return regime.branch01 == Branch::unprimed ? 2.0 * a.a0() * a.a0()
                                                       : a.a1() * a.a1();
        case 2:
            return regime.branch23 == Branch::unprimed ? 2.0 * a.a1() * a.a1()
                                                       : a.a2() * a.a2();
        case 3: return a.a0() * a.a0();
        case 4: return a.a0() * a.a0();
        default: throw DimensionError("conditional_success: outcome index out of range");
    }
}

}  // namespace

double conditional_success(int j, const QutritState& psi, const SchmidtVector& a,
                           const Regime& regime) {
    if (j < 1 || j > 8) throw DimensionError("conditional_success: outcome index out of range");
    const double den = denominator(j, psi, a);
    if (den <= 0.0) return 0.0;  // outcome unreachable
    return std::clamp(numerator(j, a, regime) / den, 0.0, 1.0);
}

TotalSuccess total_success(const SchmidtVector& a) {
    const Regime regime = classify_regime(a);
    const double s0 = a.a0() * a.a0(), s1 = a.a1() * a.a1(), s2 = a.a2() * a.a2();
    double p = 0.0;
    if (regime.branch01 == Branch::unprimed && regime.branch23 == Branch::unprimed)
        p = 2.0 * s0 + s1;
    else if (regime.branch01 == Branch::primed && regime.branch23 == Branch::unprimed)
        p = s0 + 1.5 * s1;
    else if (regime.branch01 == Branch::unprimed && regime.branch23 == Branch::primed)
        p = 2.0 * s0 + 0.5 * s2;
    else
        p = s0 + 0.5 * s1 + 0.5 * s2;
    return TotalSuccess{p, regime};
}

AnalyticReport decompose_total(const QutritState& psi, const SchmidtVector& a) {
    AnalyticReport report;
    report.regime = classify_regime(a);
    report.p_outcome = outcome_probabilities(psi, a);
    for (int j = 1; j <= 8; ++j) {
        const double cond = conditional_success(j, psi, a, report.regime);
        report.p_success_given_outcome[static_cast<std::size_t>(j - 1)] = cond;
        report.per_outcome_contribution[static_cast<std::size_t>(j - 1)] =
            report.p_outcome.probability(j) * cond;
        report.p_total += report.per_outcome_contribution[static_cast<std::size_t>(j - 1)];
    }
    return report;
}

double qubit_mode_total(cplx beta, cplx gamma, const SchmidtVector& a) {
    if (std::abs(std::sqrt(std::norm(beta) + std::norm(gamma)) - 1.0) > 1e-9)
        throw ValidationError("qubit_mode_total: |beta|^2 + |gamma|^2 must be 1");
    double p = total_success(a).p_total;
    for (int j = 9; j <= 12; ++j) {
        const int k = j - 8;
        const double m = std::min(a.coeff(k % 4), a.coeff((k + 1) % 4));
        p += 0.5 * m * m;
    }
    return p;
}

std::vector<SweepRow> sweep(int resolution) {
    if (resolution < 2) throw ValidationError("sweep: resolution must be >= 2");
    const double k = resolution;
    std::vector<SweepRow> rows;
    for (int n0 = 0; n0 <= resolution; ++n0) {
        for (int n1 = n0; n0 + n1 <= resolution; ++n1) {
            for (int n2 = n1; n0 + n1 + n2 <= resolution; ++n2) {
                const int n3 = resolution - n0 - n1 - n2;
                if (n3 < n2) continue;
                const SchmidtVector a = SchmidtVector::create(
                    std::sqrt(n0 / k), std::sqrt(n1 / k), std::sqrt(n2 / k), std::sqrt(n3 / k));
                const TotalSuccess total = total_success(a);
                rows.push_back(SweepRow{a, total.regime, total.p_total});
            }
        }
    }
    return rows;
}

}  // namespace telsim
