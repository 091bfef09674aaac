#pragma once

#include "telsim/operators.hpp"
#include "telsim/schmidt.hpp"
#include "telsim/state.hpp"

namespace telsim {

// 4x4 preparation unitary; its first column is (a0, a1, a2, a3), so
// U1|0> loads the channel coefficients onto particle 2.
Operator build_u1(const SchmidtVector& a);

// 16x16 controlled shift on particles 2 (x) 3:
//   |0><0| (x) I  +  |1><1| (x) V†  +  |2><2| (x) W  +  |3><3| (x) V
// with V the 4-cycle |k> -> |k-1 mod 4| read columnwise and W the 3-cycle
// fixing |3>.
Operator build_u2();

// Direct construction sum_i a_i |ii>, shape [4,4].
StateVector channel_state_direct(const SchmidtVector& a);

// Circuit construction U2 (U1 (x) I) |00>. Cross-checked against the direct
// construction on every call (mismatch beyond 1e-12 would be a library bug
// and throws).
StateVector prepare_channel(const SchmidtVector& a);

}  // namespace telsim
