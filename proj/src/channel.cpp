#include "telsim/channel.hpp"

#include "telsim/errors.hpp"

namespace telsim {

Operator build_u1(const SchmidtVector& a) {
    const double a0 = a.a0(), a1 = a.a1(), a2 = a.a2(), a3 = a.a3();
    Operator u(4, "U1");
    const double rows[4][4] = {
        {a0, a1, a2, a3},
        {a1, -a0, -a3, a2},
        {a2, a3, -a0, -a1},
        {a3, -a2, a1, -a0},
    };
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) u.at(r, c) = rows[r][c];
    return u;
}

namespace {

// V|k> = |k-1 mod 4>, i.e. V = |0><1| + |1><2| + |2><3| + |3><0|.
Operator cyclic_shift_v() {
    Operator v(4, "V");
    v.at(0, 1) = 1.0;
    v.at(1, 2) = 1.0;
    v.at(2, 3) = 1.0;
    v.at(3, 0) = 1.0;
    return v;
}

// W = |0><1| + |1><2| + |2><0| + |3><3|: a 3-cycle on {0,1,2}, fixing |3>.
Operator three_cycle_w() {
    Operator w(4, "W");
    w.at(0, 1) = 1.0;
    w.at(1, 2) = 1.0;
    w.at(2, 0) = 1.0;
    w.at(3, 3) = 1.0;
    return w;
}

}  // namespace

Operator build_u2() {
    const Operator blocks[4] = {
        identity_op(4),
        adjoint(cyclic_shift_v()),
        three_cycle_w(),
        cyclic_shift_v(),
    };
    Operator u2(16, "U2");
    for (int ctrl = 0; ctrl < 4; ++ctrl)
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c)
                u2.at(ctrl * 4 + r, ctrl * 4 + c) = blocks[ctrl].at(r, c);
    return u2;
}

StateVector channel_state_direct(const SchmidtVector& a) {
    StateVector state{RegisterShape({4, 4})};
    for (int i = 0; i < 4; ++i) state.amps[static_cast<std::size_t>(i * 4 + i)] = a.coeff(i);
    return state;
}

StateVector prepare_channel(const SchmidtVector& a) {
    StateVector state = make_basis_state(RegisterShape({4, 4}), {0, 0});
    state = apply_to_subsystems(state, build_u1(a), {0});
    state = apply_to_subsystems(state, build_u2(), {0, 1});
    if (max_amp_deviation(state, channel_state_direct(a)) > 1e-12)
        throw ContractError("prepare_channel: circuit and direct construction disagree");
    return state;
}

}  // namespace telsim
