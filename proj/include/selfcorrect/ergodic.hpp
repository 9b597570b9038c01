#pragma once

#include <vector>

#include "selfcorrect/css.hpp"
#include "selfcorrect/f2.hpp"
#include "selfcorrect/pauli.hpp"

namespace selfcorrect {

// Tripartition (L, R_X, R_Z) of the qubits of a CSS code together with the
// conjugate single-pivot operators that make single-qubit noise on
// R_X u L (X type) and R_Z u L (Z type) ergodic alongside the stabilizers.
//
// set_rx[j] is the pivot qubit of transformed_hz row j and ax_ops[j] is the
// X-type operator anticommuting with exactly that row; likewise set_l[i] for
// z_logicals row i (ax_ops[num_z_independent + i]) and set_rz[j] for
// transformed_hx row j (az_ops[j]). The transformed generator matrices are
// row-equivalent to the input check matrices and carry the identity on their
// pivot columns.
struct ErgodicDecomposition {
    std::vector<size_t> set_l;
    std::vector<size_t> set_rx;
    std::vector<size_t> set_rz;
    std::vector<PauliOperator> ax_ops;  // size |R_X| + |L|
    std::vector<PauliOperator> az_ops;  // size |R_Z|
    F2Matrix transformed_hz;            // |R_X| x n, row j = Z_{set_rx[j]} U_j
    F2Matrix transformed_hx;            // |R_Z| x n
    F2Matrix z_logicals;                // |L| x n, row i = Z_{set_l[i]} (support off R_X u L)
};

// Constructive pivot algorithm; deterministic (lowest-index pivot choice).
ErgodicDecomposition decompose(const CssCode& code);

// True iff the group generated by s_alpha together with the stabilizer
// generators spans the full Pauli group modulo phases: the stacked 2n-column
// symplectic matrix has rank 2n.
bool verify_ergodicity(const CssCode& code, const std::vector<PauliOperator>& s_alpha);

// Single-qubit coupling set induced by a decomposition: X on R_X u L and
// Z on R_Z u L.
std::vector<PauliOperator> minimal_couplings(const CssCode& code, const ErgodicDecomposition& d);

enum class Sector { X, Z };

// Classical spin model governing one error sector: for sector Z the terms are
// the canonical Z_j U_j generators whose pivots sweep R_X and whose
// single-spin-flip dynamics on R_X u L bounds the quantum memory time.
struct ReducedClassicalModel {
    Sector sector = Sector::Z;
    std::vector<size_t> qubits;                        // flip region, pivots first then L
    std::vector<size_t> pivots;                        // pivot qubit of each term
    std::vector<PauliOperator> terms;                  // canonical generators
    std::vector<std::pair<size_t, size_t>> couplings;  // flip-region qubits sharing a term
};

ReducedClassicalModel reduced_classical_model(const CssCode& code, const ErgodicDecomposition& d,
                                              Sector sector);

}  // namespace selfcorrect
