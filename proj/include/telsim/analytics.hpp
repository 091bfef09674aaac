#pragma once

#include <array>
#include <vector>

#include "telsim/correction.hpp"
#include "telsim/measurement.hpp"
#include "telsim/qutrit.hpp"
#include "telsim/schmidt.hpp"

namespace telsim {

// Conditional probability that the aux measurement succeeds after outcome
// j in 1..8, for the correction family selected by `regime`. Returns 0 when
// the outcome itself has probability 0.
double conditional_success(int j, const QutritState& psi, const SchmidtVector& a,
                           const Regime& regime);

struct TotalSuccess {
    double p_total = 0.0;
    Regime regime;
};

// Closed-form total success probability of the qutrit protocol:
//   unprimed-unprimed  2*a0^2 + a1^2
//   primed-unprimed    a0^2 + 3*a1^2/2
//   unprimed-primed    2*a0^2 + a2^2/2
//   primed-primed      a0^2 + a1^2/2 + a2^2/2
TotalSuccess total_success(const SchmidtVector& a);

struct AnalyticReport {
    OutcomeDistribution p_outcome;                       // P_1..P_12
    std::array<double, 8> p_success_given_outcome{};     // outcomes 1..8
    std::array<double, 8> per_outcome_contribution{};    // P_j * P_success|j
    double p_total = 0.0;                                // sum of contributions
    Regime regime;
};

// Assembles the full probability table; p_total here is the per-outcome sum,
// which must agree with total_success() and be independent of psi.
AnalyticReport decompose_total(const QutritState& psi, const SchmidtVector& a);

// Total success probability of the qubit reduction (alpha = 0): outcomes
// 1..8 contribute as in the qutrit protocol, and outcomes 9..12 are also
// corrected, each contributing min(coeff pair)^2 / 2. Never below
// total_success(a). |beta|^2 + |gamma|^2 must be 1; the value does not
// depend on beta and gamma.
double qubit_mode_total(cplx beta, cplx gamma, const SchmidtVector& a);

struct SweepRow {
    SchmidtVector schmidt;
    Regime regime;
    double p_total = 0.0;
};

// Channels on a resolution-K grid over the ordered simplex of squared
// coefficients (a_i = sqrt(n_i / K), n0 <= n1 <= n2 <= n3, sum n_i = K),
// in lexicographic coefficient order. K >= 2.
std::vector<SweepRow> sweep(int resolution);

}  // namespace telsim
