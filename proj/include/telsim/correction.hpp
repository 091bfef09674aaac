#pragma once

#include <array>
#include <optional>
#include <string>

#include "telsim/operators.hpp"
#include "telsim/qutrit.hpp"
#include "telsim/rng.hpp"
#include "telsim/schmidt.hpp"
#include "telsim/state.hpp"

namespace telsim {

enum class Branch { unprimed, primed };

// Which of the four correction families applies to a channel:
// branch01 compares sqrt(2)*a0 with a1 (governs outcomes 1,2),
// branch23 compares sqrt(2)*a1 with a2 (governs outcomes 3,4).
// Equality maps to unprimed: there the rotation blocks degenerate to the
// identity and both families coincide, while the primed divisor can vanish.
struct Regime {
    Branch branch01 = Branch::unprimed;
    Branch branch23 = Branch::unprimed;

    bool operator==(const Regime& other) const {
        return branch01 == other.branch01 && branch23 == other.branch23;
    }
};

std::string to_string(Branch b);
std::string to_string(const Regime& r);
Regime parse_regime(const std::string& text);  // "unprimed-primed" etc.

Regime classify_regime(const SchmidtVector& a);

// The source prints three of the finished matrices with defects; the
// repaired edition is what the protocol uses, the printed edition is kept
// for the detection checks.
enum class MatrixEdition { repaired, as_printed };

// 6x6 collective unitary on (particle-3 support (x) aux qubit) for outcome
// j in 1..8. The basis is support levels ascending, each paired with aux
// |0>, |1>. For j in 1..4 `branch` selects the unprimed/primed family; for
// j in 5..8 only the unprimed family exists. Throws ContractError when the
// requested family is not applicable to `a` (negative radicand) or a
// divisor coefficient vanishes.
Operator correction_matrix(int j, Branch branch, const SchmidtVector& a,
                           MatrixEdition edition = MatrixEdition::repaired);

// Everything Bob needs for outcome j: which three particle-3 levels carry
// the state, the collective unitary, the level->qutrit-slot relabeling and
// the success amplitude (the coefficient of the |0>_b target component).
struct CorrectionPlan {
    int outcome = 0;                  // 1..8
    std::array<int, 3> support{};     // ascending particle-3 levels
    std::array<int, 3> slot_levels{}; // level carrying alpha, beta, gamma
    std::optional<Operator> unitary;  // empty: deterministic failure
    double success_amplitude = 0.0;

    bool deterministic_failure() const { return !unitary.has_value(); }
    int relabel(int level) const;     // support level -> qutrit slot 0..2
};

CorrectionPlan correction_plan(int j, const SchmidtVector& a, const Regime& regime);

// Embeds collapsed3 (x) |0>_b into the plan's 6-dim basis, applies the
// unitary and normalizes. Result shape is [3,2]: (support slot, aux).
StateVector apply_correction(const StateVector& collapsed3, const CorrectionPlan& plan);

struct AuxMeasurement {
    bool success = false;   // aux collapsed to |0>_b
    int aux_result = 0;     // 0 or 1
    StateVector particle3;  // normalized, re-embedded in dim 4
};

// Von Neumann measurement of the aux qubit; |0>_b flags success.
AuxMeasurement measure_aux(const StateVector& joint, const CorrectionPlan& plan,
                           RandomStream& rng);

// Undoes the support relabeling and fixes the global phase, recovering the
// qutrit Bob holds after a successful run.
QutritState canonicalize(const StateVector& final3, const CorrectionPlan& plan);

// Two-level analogues for outcomes 9..12, used by the qubit reduction
// (alpha = 0). The collapsed state has two terms; the correction rotates the
// larger-coefficient amplitude down to the smaller coefficient, pushing the
// residue onto aux |1>_b.
struct QubitCorrectionPlan {
    int outcome = 0;                  // 9..12
    std::array<int, 2> support{};     // ascending particle-3 levels
    int beta_level = 0;
    int gamma_level = 0;
    std::optional<Operator> unitary;  // 4x4; empty: deterministic failure
    double success_amplitude = 0.0;   // min of the two coefficients

    bool deterministic_failure() const { return !unitary.has_value(); }
};

QubitCorrectionPlan qubit_correction_plan(int j, const SchmidtVector& a);

StateVector apply_qubit_correction(const StateVector& collapsed3,
                                   const QubitCorrectionPlan& plan);  // shape [2,2]

AuxMeasurement measure_aux(const StateVector& joint, const QubitCorrectionPlan& plan,
                           RandomStream& rng);

QutritState canonicalize(const StateVector& final3, const QubitCorrectionPlan& plan);

}  // namespace telsim
