#pragma once

#include "selfcorrect/errors.hpp"
#include "selfcorrect/f2.hpp"

namespace selfcorrect {

// Phase-free Pauli operator on n qubits in symplectic form. Commutation is
// the symplectic product only; CSS analyses never need phases.
struct PauliOperator {
    F2Vector x;
    F2Vector z;

    PauliOperator() = default;
    PauliOperator(F2Vector xpart, F2Vector zpart) : x(std::move(xpart)), z(std::move(zpart)) {
        if (x.size() != z.size()) throw ContractError("PauliOperator: x/z length mismatch");
    }

    static PauliOperator identity(size_t n) { return {F2Vector(n), F2Vector(n)}; }
    static PauliOperator x_type(F2Vector xpart) {
        F2Vector zero(xpart.size());
        return {std::move(xpart), std::move(zero)};
    }
    static PauliOperator z_type(F2Vector zpart) {
        F2Vector zero(zpart.size());
        return {std::move(zero), std::move(zpart)};
    }
    // single-qubit X_q / Z_q
    static PauliOperator single_x(size_t n, size_t q) {
        F2Vector v(n);
        v.set(q, true);
        return x_type(std::move(v));
    }
    static PauliOperator single_z(size_t n, size_t q) {
        F2Vector v(n);
        v.set(q, true);
        return z_type(std::move(v));
    }

    size_t n() const { return x.size(); }
    bool is_identity() const { return x.is_zero() && z.is_zero(); }
    bool is_x_type() const { return z.is_zero(); }
    bool is_z_type() const { return x.is_zero(); }

    PauliOperator& operator*=(const PauliOperator& o) {
        x ^= o.x;
        z ^= o.z;
        return *this;
    }
    friend PauliOperator operator*(PauliOperator a, const PauliOperator& b) { return a *= b; }
    bool operator==(const PauliOperator&) const = default;
};

// true iff <p.x, q.z> + <p.z, q.x> = 0 mod 2
inline bool symplectic_commute(const PauliOperator& p, const PauliOperator& q) {
    if (p.n() != q.n()) throw ContractError("symplectic_commute: operator size mismatch");
    return !(p.x.dot(q.z) ^ p.z.dot(q.x));
}

}  // namespace selfcorrect
