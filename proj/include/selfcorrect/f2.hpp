#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace selfcorrect {

// Bit-packed binary vector over GF(2).
class F2Vector {
  public:
    F2Vector() = default;
    explicit F2Vector(size_t n) : n_(n), w_((n + 63) / 64, 0) {}

    static F2Vector from_bits(std::initializer_list<int> bits);
    static F2Vector from_string(const std::string& bits);  // e.g. "0110"

    size_t size() const { return n_; }
    bool get(size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1; }
    void set(size_t i, bool v) {
        uint64_t mask = 1ULL << (i & 63);
        if (v)
            w_[i >> 6] |= mask;
        else
            w_[i >> 6] &= ~mask;
    }
    void flip(size_t i) { w_[i >> 6] ^= 1ULL << (i & 63); }

    F2Vector& operator^=(const F2Vector& o);
    friend F2Vector operator^(F2Vector a, const F2Vector& b) { return a ^= b; }

    // parity of the overlap <a,b> mod 2
    bool dot(const F2Vector& o) const;
    size_t weight() const;
    bool is_zero() const;
    // index of lowest set bit, or size() if zero
    size_t lowest_set() const;

    bool operator==(const F2Vector&) const = default;

    std::span<const uint64_t> words() const { return w_; }
    std::span<uint64_t> words() { return w_; }
    std::string to_string() const;

  private:
    size_t n_ = 0;
    std::vector<uint64_t> w_;
};

// Dense bit-packed matrix over GF(2), row-major.
class F2Matrix {
  public:
    F2Matrix() = default;
    F2Matrix(size_t rows, size_t cols) : cols_(cols), rows_(rows, F2Vector(cols)) {}

    static F2Matrix from_strings(std::initializer_list<std::string> rows);
    static F2Matrix from_rows(std::vector<F2Vector> rows);
    static F2Matrix identity(size_t n);

    size_t rows() const { return rows_.size(); }
    size_t cols() const { return cols_; }
    const F2Vector& row(size_t i) const { return rows_[i]; }
    F2Vector& row(size_t i) { return rows_[i]; }
    bool get(size_t i, size_t j) const { return rows_[i].get(j); }
    void set(size_t i, size_t j, bool v) { rows_[i].set(j, v); }

    void append_row(F2Vector r);

    F2Matrix transposed() const;
    // matrix product over GF(2); cols() must equal o.rows()
    F2Matrix multiply(const F2Matrix& o) const;
    // M * x with x of length cols()
    F2Vector apply(const F2Vector& x) const;

    bool operator==(const F2Matrix&) const = default;

  private:
    size_t cols_ = 0;
    std::vector<F2Vector> rows_;
};

// GF(2) row rank by Gaussian elimination.
size_t rank(F2Matrix m);

// Rows form a basis of {x : m x = 0}. Row count = cols - rank.
F2Matrix kernel_basis(const F2Matrix& m);

// Some x with m x = b if the system is consistent (free variables set to 0).
std::optional<F2Vector> solve_linear(const F2Matrix& m, const F2Vector& b);

// Row echelon form helper used to reduce vectors against a row space.
class RowBasis {
  public:
    RowBasis() = default;
    explicit RowBasis(size_t cols) : cols_(cols) {}
    explicit RowBasis(const F2Matrix& m);

    // Reduces v against the basis; returns the remainder.
    F2Vector reduce(F2Vector v) const;
    // Reduces v and inserts the remainder if nonzero. Returns true if inserted.
    bool insert(F2Vector v);
    bool contains(const F2Vector& v) const { return reduce(v).is_zero(); }
    size_t dimension() const { return rows_.size(); }
    size_t cols() const { return cols_; }
    const std::vector<F2Vector>& rows() const { return rows_; }

  private:
    size_t cols_ = 0;
    std::vector<F2Vector> rows_;    // echelon rows, sorted by pivot
    std::vector<size_t> pivots_;
};

}  // namespace selfcorrect
