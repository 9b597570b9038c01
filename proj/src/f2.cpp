#include "selfcorrect/f2.hpp"

#include <algorithm>
#include <bit>

#include "selfcorrect/errors.hpp"

namespace selfcorrect {

F2Vector F2Vector::from_bits(std::initializer_list<int> bits) {
    F2Vector v(bits.size());
    size_t i = 0;
    for (int b : bits) v.set(i++, b != 0);
    return v;
}

F2Vector F2Vector::from_string(const std::string& bits) {
    F2Vector v(bits.size());
    for (size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] != '0' && bits[i] != '1') throw ContractError("bit string must be 0/1");
        v.set(i, bits[i] == '1');
    }
    return v;
}

F2Vector& F2Vector::operator^=(const F2Vector& o) {
    if (o.n_ != n_) throw ContractError("F2Vector xor: length mismatch");
    for (size_t i = 0; i < w_.size(); ++i) w_[i] ^= o.w_[i];
    return *this;
}

bool F2Vector::dot(const F2Vector& o) const {
    if (o.n_ != n_) throw ContractError("F2Vector dot: length mismatch");
    uint64_t acc = 0;
    for (size_t i = 0; i < w_.size(); ++i) acc ^= w_[i] & o.w_[i];
    return std::popcount(acc) & 1;
}

size_t F2Vector::weight() const {
    size_t w = 0;
    for (uint64_t word : w_) w += std::popcount(word);
    return w;
}

bool F2Vector::is_zero() const {
    for (uint64_t word : w_)
        if (word) return false;
    return true;
}

size_t F2Vector::lowest_set() const {
    for (size_t i = 0; i < w_.size(); ++i)
        if (w_[i]) return i * 64 + std::countr_zero(w_[i]);
    return n_;
}

std::string F2Vector::to_string() const {
    std::string s(n_, '0');
    for (size_t i = 0; i < n_; ++i)
        if (get(i)) s[i] = '1';
    return s;
}

F2Matrix F2Matrix::from_strings(std::initializer_list<std::string> rows) {
    F2Matrix m;
    for (const auto& r : rows) m.append_row(F2Vector::from_string(r));
    return m;
}

F2Matrix F2Matrix::from_rows(std::vector<F2Vector> rows) {
    F2Matrix m;
    for (auto& r : rows) m.append_row(std::move(r));
    return m;
}

F2Matrix F2Matrix::identity(size_t n) {
    F2Matrix m(n, n);
    for (size_t i = 0; i < n; ++i) m.set(i, i, true);
    return m;
}

void F2Matrix::append_row(F2Vector r) {
    if (rows_.empty() && cols_ == 0) cols_ = r.size();
    if (r.size() != cols_) throw ContractError("F2Matrix: row length mismatch");
    rows_.push_back(std::move(r));
}

F2Matrix F2Matrix::transposed() const {
    F2Matrix t(cols_, rows());
    for (size_t i = 0; i < rows(); ++i)
        for (size_t j = 0; j < cols_; ++j)
            if (get(i, j)) t.set(j, i, true);
    return t;
}

F2Matrix F2Matrix::multiply(const F2Matrix& o) const {
    if (cols_ != o.rows()) throw ContractError("F2Matrix multiply: inner dimension mismatch");
    F2Matrix out(rows(), o.cols());
    for (size_t i = 0; i < rows(); ++i) {
        F2Vector& dst = out.row(i);
        for (size_t j = 0; j < cols_; ++j)
            if (get(i, j)) dst ^= o.row(j);
    }
    return out;
}

F2Vector F2Matrix::apply(const F2Vector& x) const {
    if (x.size() != cols_) throw ContractError("F2Matrix apply: dimension mismatch");
    F2Vector out(rows());
    for (size_t i = 0; i < rows(); ++i) out.set(i, rows_[i].dot(x));
    return out;
}

namespace {

// In-place elimination; returns pivot columns. Rows end up in echelon order.
std::vector<size_t> eliminate(std::vector<F2Vector>& rows, size_t cols) {
    std::vector<size_t> pivots;
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows.size(); ++c) {
        size_t sel = r;
        while (sel < rows.size() && !rows[sel].get(c)) ++sel;
        if (sel == rows.size()) continue;
        std::swap(rows[r], rows[sel]);
        for (size_t i = 0; i < rows.size(); ++i)
            if (i != r && rows[i].get(c)) rows[i] ^= rows[r];
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

}  // namespace

size_t rank(F2Matrix m) {
    std::vector<F2Vector> rows;
    rows.reserve(m.rows());
    for (size_t i = 0; i < m.rows(); ++i) rows.push_back(m.row(i));
    return eliminate(rows, m.cols()).size();
}

F2Matrix kernel_basis(const F2Matrix& m) {
    std::vector<F2Vector> rows;
    rows.reserve(m.rows());
    for (size_t i = 0; i < m.rows(); ++i) rows.push_back(m.row(i));
    std::vector<size_t> pivots = eliminate(rows, m.cols());

    std::vector<bool> is_pivot(m.cols(), false);
    for (size_t c : pivots) is_pivot[c] = true;

    F2Matrix basis(0, m.cols());
    for (size_t c = 0; c < m.cols(); ++c) {
        if (is_pivot[c]) continue;
        F2Vector v(m.cols());
        v.set(c, true);
        for (size_t i = 0; i < pivots.size(); ++i)
            if (rows[i].get(c)) v.set(pivots[i], true);
        basis.append_row(std::move(v));
    }
    return basis;
}

std::optional<F2Vector> solve_linear(const F2Matrix& m, const F2Vector& b) {
    if (b.size() != m.rows()) throw ContractError("solve_linear: rhs length != rows");
    // Augmented elimination with the rhs carried per row.
    std::vector<F2Vector> rows;
    std::vector<bool> rhs(m.rows());
    rows.reserve(m.rows());
    for (size_t i = 0; i < m.rows(); ++i) {
        rows.push_back(m.row(i));
        rhs[i] = b.get(i);
    }
    std::vector<size_t> pivots;
    size_t r = 0;
    for (size_t c = 0; c < m.cols() && r < rows.size(); ++c) {
        size_t sel = r;
        while (sel < rows.size() && !rows[sel].get(c)) ++sel;
        if (sel == rows.size()) continue;
        std::swap(rows[r], rows[sel]);
        std::swap(rhs[r], rhs[sel]);
        for (size_t i = 0; i < rows.size(); ++i)
            if (i != r && rows[i].get(c)) {
                rows[i] ^= rows[r];
                rhs[i] = rhs[i] != rhs[r];
            }
        pivots.push_back(c);
        ++r;
    }
    for (size_t i = r; i < rows.size(); ++i)
        if (rhs[i]) return std::nullopt;
    F2Vector x(m.cols());
    for (size_t i = 0; i < pivots.size(); ++i) x.set(pivots[i], rhs[i]);
    return x;
}

RowBasis::RowBasis(const F2Matrix& m) : cols_(m.cols()) {
    for (size_t i = 0; i < m.rows(); ++i) insert(m.row(i));
}

F2Vector RowBasis::reduce(F2Vector v) const {
    for (size_t i = 0; i < rows_.size(); ++i)
        if (v.get(pivots_[i])) v ^= rows_[i];
    return v;
}

bool RowBasis::insert(F2Vector v) {
    if (v.size() != cols_) throw ContractError("RowBasis insert: length mismatch");
    v = reduce(std::move(v));
    size_t p = v.lowest_set();
    if (p == v.size()) return false;
    // keep existing rows reduced against the new one
    for (size_t i = 0; i < rows_.size(); ++i)
        if (rows_[i].get(p)) rows_[i] ^= v;
    auto it = std::lower_bound(pivots_.begin(), pivots_.end(), p);
    size_t idx = static_cast<size_t>(it - pivots_.begin());
    pivots_.insert(it, p);
    rows_.insert(rows_.begin() + static_cast<long>(idx), std::move(v));
    return true;
}

}  // namespace selfcorrect
