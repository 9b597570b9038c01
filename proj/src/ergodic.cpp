#include "selfcorrect/ergodic.hpp"

#include <algorithm>
#include <set>

#include "selfcorrect/errors.hpp"

namespace selfcorrect {

namespace {

// Independent subset of the rows of m, in original order.
std::vector<F2Vector> independent_rows(const F2Matrix& m) {
    RowBasis basis(m.cols());
    std::vector<F2Vector> out;
    for (size_t i = 0; i < m.rows(); ++i)
        if (basis.insert(m.row(i))) out.push_back(m.row(i));
    return out;
}

// The inductive pivot sweep. rows[j] is consumed in order; for each one a
// fresh pivot qubit from its support (lowest index, excluding `forbidden`) is
// selected, the conjugate operator is built from earlier pivots, and later
// rows are multiplied by the current row to restore commutation. On return,
// rows[j] anticommutes with conjugate[j] only, and the pivot columns of the
// row list form an invertible submatrix.
struct SweepResult {
    std::vector<size_t> pivots;
    // conjugate[j] as x-support over pivot qubits (combination of single-qubit
    // operators on pivots[0..j])
    std::vector<F2Vector> conjugates;
};

SweepResult pivot_sweep(std::vector<F2Vector>& rows, size_t n, const std::set<size_t>& forbidden) {
    SweepResult res;
    for (size_t j = 0; j < rows.size(); ++j) {
        size_t pivot = n;
        for (size_t q = 0; q < n; ++q)
            if (rows[j].get(q) && !forbidden.count(q) &&
                std::find(res.pivots.begin(), res.pivots.end(), q) == res.pivots.end()) {
                pivot = q;
                break;
            }
        if (pivot == n)
            throw InvalidCodeError("decompose: no available pivot qubit (generators dependent?)");

        F2Vector conj(n);
        conj.set(pivot, true);
        // restore commutation with the earlier rows
        for (size_t i = 0; i < j; ++i)
            if (rows[i].dot(conj)) conj ^= res.conjugates[i];
        // restore commutation of the later rows with the new conjugate
        for (size_t i = j + 1; i < rows.size(); ++i)
            if (rows[i].dot(conj)) rows[i] ^= rows[j];

        res.pivots.push_back(pivot);
        res.conjugates.push_back(std::move(conj));
    }
    return res;
}

// Row-reduce rows[begin..begin+count) so the submatrix on the matching pivot
// columns becomes the identity. Only rows inside the block participate, so
// stabilizer products stay stabilizer products; the block submatrix is
// invertible by construction.
void reduce_block(std::vector<F2Vector>& rows, size_t begin, size_t count,
                  const std::vector<size_t>& pivot_cols) {
    for (size_t j = 0; j < count; ++j) {
        size_t c = pivot_cols[begin + j];
        if (!rows[begin + j].get(c)) {
            size_t sel = SIZE_MAX;
            for (size_t i = j + 1; i < count; ++i)
                if (rows[begin + i].get(c)) {
                    sel = i;
                    break;
                }
            if (sel == SIZE_MAX) throw InvalidCodeError("decompose: pivot submatrix is singular");
            std::swap(rows[begin + j], rows[begin + sel]);
        }
        for (size_t i = 0; i < count; ++i)
            if (i != j && rows[begin + i].get(c)) rows[begin + i] ^= rows[begin + j];
    }
}

}  // namespace

ErgodicDecomposition decompose(const CssCode& code) {
    const size_t n = code.n();
    ErgodicDecomposition d;

    // X side: sweep the independent Z generators extended by the Z logicals.
    std::vector<F2Vector> zrows = independent_rows(code.hz());
    const size_t nz = zrows.size();
    LogicalBasis logicals = logical_basis(code);
    for (const auto& op : logicals.z_ops) zrows.push_back(op.z);
    const size_t k = zrows.size() - nz;

    SweepResult zsweep = pivot_sweep(zrows, n, {});
    d.set_rx.assign(zsweep.pivots.begin(), zsweep.pivots.begin() + nz);
    d.set_l.assign(zsweep.pivots.begin() + nz, zsweep.pivots.end());

    // canonical Z_j U_j form: identity on the pivot columns, block by block
    // (stabilizer rows may only absorb stabilizer rows)
    reduce_block(zrows, 0, nz, zsweep.pivots);
    for (size_t i = nz; i < zrows.size(); ++i)
        for (size_t j = 0; j < nz; ++j)
            if (zrows[i].get(zsweep.pivots[j])) zrows[i] ^= zrows[j];
    reduce_block(zrows, nz, k, zsweep.pivots);

    d.transformed_hz = F2Matrix(0, n);
    for (size_t j = 0; j < nz; ++j) d.transformed_hz.append_row(zrows[j]);
    d.z_logicals = F2Matrix(0, n);
    for (size_t j = nz; j < zrows.size(); ++j) d.z_logicals.append_row(zrows[j]);

    // Conjugate operators from the canonical form: a single-qubit X on the
    // pivot flips exactly its own generator; the logical conjugates pick up
    // a correction for stabilizer rows whose tail crosses the L pivot.
    for (size_t j = 0; j < nz; ++j)
        d.ax_ops.push_back(PauliOperator::single_x(n, d.set_rx[j]));
    for (size_t i = 0; i < k; ++i) {
        F2Vector conj(n);
        conj.set(d.set_l[i], true);
        for (size_t j = 0; j < nz; ++j)
            if (zrows[j].get(d.set_l[i])) conj.flip(d.set_rx[j]);
        d.ax_ops.push_back(PauliOperator::x_type(std::move(conj)));
    }

    // Z side: sweep the independent X generators, pivots restricted to the
    // complement of R_X u L so the three regions stay disjoint.
    std::set<size_t> forbidden(d.set_rx.begin(), d.set_rx.end());
    forbidden.insert(d.set_l.begin(), d.set_l.end());
    std::vector<F2Vector> xrows = independent_rows(code.hx());
    SweepResult xsweep = pivot_sweep(xrows, n, forbidden);
    d.set_rz = xsweep.pivots;
    reduce_block(xrows, 0, xrows.size(), xsweep.pivots);
    d.transformed_hx = F2Matrix(0, n);
    for (auto& r : xrows) d.transformed_hx.append_row(std::move(r));
    for (size_t j = 0; j < d.set_rz.size(); ++j)
        d.az_ops.push_back(PauliOperator::single_z(n, d.set_rz[j]));

    return d;
}

bool verify_ergodicity(const CssCode& code, const std::vector<PauliOperator>& s_alpha) {
    const size_t n = code.n();
    RowBasis basis(2 * n);
    auto stack = [&](const F2Vector& x, const F2Vector& z) {
        F2Vector row(2 * n);
        for (size_t q = 0; q < n; ++q) {
            if (x.get(q)) row.set(q, true);
            if (z.get(q)) row.set(n + q, true);
        }
        basis.insert(std::move(row));
    };
    for (size_t i = 0; i < code.num_x(); ++i) stack(code.hx().row(i), F2Vector(n));
    for (size_t i = 0; i < code.num_z(); ++i) stack(F2Vector(n), code.hz().row(i));
    for (const auto& op : s_alpha) {
        if (op.n() != n) throw ContractError("verify_ergodicity: operator size mismatch");
        stack(op.x, op.z);
    }
    return basis.dimension() == 2 * n;
}

std::vector<PauliOperator> minimal_couplings(const CssCode& code, const ErgodicDecomposition& d) {
    std::vector<PauliOperator> ops;
    for (size_t q : d.set_rx) ops.push_back(PauliOperator::single_x(code.n(), q));
    for (size_t q : d.set_l) ops.push_back(PauliOperator::single_x(code.n(), q));
    for (size_t q : d.set_rz) ops.push_back(PauliOperator::single_z(code.n(), q));
    for (size_t q : d.set_l) ops.push_back(PauliOperator::single_z(code.n(), q));
    return ops;
}

ReducedClassicalModel reduced_classical_model(const CssCode& code, const ErgodicDecomposition& d,
                                              Sector sector) {
    ReducedClassicalModel model;
    model.sector = sector;
    const size_t n = code.n();

    const F2Matrix& terms = (sector == Sector::Z) ? d.transformed_hz : d.transformed_hx;
    const std::vector<size_t>& pivots = (sector == Sector::Z) ? d.set_rx : d.set_rz;
    if (terms.rows() != pivots.size())
        throw ContractError("reduced_classical_model: decomposition does not match sector");

    model.qubits = pivots;
    for (size_t q : d.set_l) model.qubits.push_back(q);
    model.pivots = pivots;
    for (size_t j = 0; j < terms.rows(); ++j) {
        model.terms.push_back(sector == Sector::Z ? PauliOperator::z_type(terms.row(j))
                                                  : PauliOperator::x_type(terms.row(j)));
    }

    // coupling edges: flip-region qubits appearing in a common term
    std::vector<char> in_region(n, 0);
    for (size_t q : model.qubits) in_region[q] = 1;
    std::set<std::pair<size_t, size_t>> edges;
    for (size_t j = 0; j < terms.rows(); ++j) {
        std::vector<size_t> touched;
        for (size_t q = 0; q < n; ++q)
            if (terms.get(j, q) && in_region[q]) touched.push_back(q);
        for (size_t a = 0; a < touched.size(); ++a)
            for (size_t b = a + 1; b < touched.size(); ++b)
                edges.insert({touched[a], touched[b]});
    }
    model.couplings.assign(edges.begin(), edges.end());
    return model;
}

}  // namespace selfcorrect
