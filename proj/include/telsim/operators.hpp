#pragma once

#include <complex>
#include <string>
#include <vector>

namespace telsim {

using cplx = std::complex<double>;

// Dense square complex matrix, row-major. All gates, projectors and
// correction unitaries in this library are at most 16x16, so dense storage
// is the right tool.
struct Operator {
    int dim = 0;
    std::vector<cplx> entries;  // dim*dim, row-major
    std::string label;

    Operator() = default;
    Operator(int d, std::string lbl);

    cplx& at(int row, int col) { return entries[static_cast<std::size_t>(row) * dim + col]; }
    const cplx& at(int row, int col) const {
        return entries[static_cast<std::size_t>(row) * dim + col];
    }
};

Operator identity_op(int dim, std::string label = "I");

// |u><v| on the span the vectors live in; u and v must have equal length.
Operator ket_bra(const std::vector<cplx>& u, const std::vector<cplx>& v,
                 std::string label = "");

Operator adjoint(const Operator& op);
Operator multiply(const Operator& a, const Operator& b);
Operator add(const Operator& a, const Operator& b);
Operator subtract(const Operator& a, const Operator& b);
Operator scale(const Operator& a, cplx factor);

// Largest |entry| of a - b. Dimension mismatch throws.
double max_entry_deviation(const Operator& a, const Operator& b);

struct UnitaryCheck {
    bool unitary = false;
    double max_deviation = 0.0;  // worst entry of |U†U - I|
    int row = 0;
    int col = 0;
};

UnitaryCheck check_unitary(const Operator& op, double tol);

bool is_hermitian(const Operator& op, double tol);
bool is_idempotent(const Operator& op, double tol);

}  // namespace telsim
