#include "telsim/operators.hpp"

#include <cmath>
#include <utility>

#include "telsim/errors.hpp"

namespace telsim {

Operator::Operator(int d, std::string lbl)
    : dim(d), entries(static_cast<std::size_t>(d) * d, cplx{0.0, 0.0}), label(std::move(lbl)) {
    if (d <= 0) throw DimensionError("Operator: dimension must be positive");
}

Operator identity_op(int dim, std::string label) {
    Operator op(dim, std::move(label));
    for (int i = 0; i < dim; ++i) op.at(i, i) = 1.0;
    return op;
}

Operator ket_bra(const std::vector<cplx>& u, const std::vector<cplx>& v, std::string label) {
    if (u.size() != v.size()) throw DimensionError("ket_bra: vector length mismatch");
    const int d = static_cast<int>(u.size());
    Operator op(d, std::move(label));
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) op.at(r, c) = u[r] * std::conj(v[c]);
    return op;
}

Operator adjoint(const Operator& op) {
    Operator out(op.dim, op.label.empty() ? "" : op.label + "^dag");
    for (int r = 0; r < op.dim; ++r)
        for (int c = 0; c < op.dim; ++c) out.at(c, r) = std::conj(op.at(r, c));
    return out;
}

Operator multiply(const Operator& a, const Operator& b) {
    if (a.dim != b.dim) throw DimensionError("multiply: dimension mismatch");
    Operator out(a.dim, "");
    for (int r = 0; r < a.dim; ++r) {
        for (int k = 0; k < a.dim; ++k) {
            const cplx ark = a.at(r, k);
            if (ark == cplx{0.0, 0.0}) continue;
            for (int c = 0; c < a.dim; ++c) out.at(r, c) += ark * b.at(k, c);
        }
    }
    return out;
}

Operator add(const Operator& a, const Operator& b) {
    if (a.dim != b.dim) throw DimensionError("add: dimension mismatch");
    Operator out = a;
    for (std::size_t i = 0; i < out.entries.size(); ++i) out.entries[i] += b.entries[i];
    return out;
}

Operator subtract(const Operator& a, const Operator& b) {
    if (a.dim != b.dim) throw DimensionError("subtract: dimension mismatch");
    Operator out = a;
    for (std::size_t i = 0; i < out.entries.size(); ++i) out.entries[i] -= b.entries[i];
    return out;
}

Operator scale(const Operator& a, cplx factor) {
    Operator out = a;
    for (auto& e : out.entries) e *= factor;
    return out;
}

double max_entry_deviation(const Operator& a, const Operator& b) {
    if (a.dim != b.dim) throw DimensionError("max_entry_deviation: dimension mismatch");
    double worst = 0.0;
    for (std::size_t i = 0; i < a.entries.size(); ++i)
        worst = std::max(worst, std::abs(a.entries[i] - b.entries[i]));
    return worst;
}

UnitaryCheck check_unitary(const Operator& op, double tol) {
    UnitaryCheck result;
    for (int r = 0; r < op.dim; ++r) {
        for (int c = 0; c < op.dim; ++c) {
            cplx sum{0.0, 0.0};
            for (int k = 0; k < op.dim; ++k) sum += std::conj(op.at(k, r)) * op.at(k, c);
            const double dev = std::abs(sum - (r == c ? cplx{1.0, 0.0} : cplx{0.0, 0.0}));
            if (dev > result.max_deviation) {
                result.max_deviation = dev;
                result.row = r;
                result.col = c;
            }
        }
    }
    result.unitary = result.max_deviation <= tol;
    return result;
}

bool is_hermitian(const Operator& op, double tol) {
    for (int r = 0; r < op.dim; ++r)
        for (int c = r; c < op.dim; ++c)
            if (std::abs(op.at(r, c) - std::conj(op.at(c, r))) > tol) return false;
    return true;
}

bool is_idempotent(const Operator& op, double tol) {
    return max_entry_deviation(multiply(op, op), op) <= tol;
}

}  // namespace telsim
