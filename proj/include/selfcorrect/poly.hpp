#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace selfcorrect {

// Trivariate polynomial over GF(2) with periodic exponents: x^L = y^L = z^L = 1.
// The support is kept sorted and duplicate-free; addition is symmetric
// difference (characteristic 2). One period L shared by all three axes.
class F2Poly3 {
  public:
    using Term = std::array<uint16_t, 3>;

    explicit F2Poly3(unsigned period);
    static F2Poly3 zero(unsigned period) { return F2Poly3(period); }
    static F2Poly3 one(unsigned period);
    static F2Poly3 monomial(unsigned period, long i, long j, long k);
    // exponents reduced mod period, repeated terms cancel in pairs
    static F2Poly3 from_terms(unsigned period, const std::vector<std::array<long, 3>>& terms);
    // univariate helper: coeffs[d] is the coefficient of x^d
    static F2Poly3 from_x_coeffs(unsigned period, const std::vector<int>& coeffs);

    unsigned period() const { return period_; }
    const std::vector<Term>& terms() const { return terms_; }
    size_t term_count() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    bool has(long i, long j, long k) const;
    // true when every term is a power of x only
    bool is_x_only() const;
    // largest x-exponent over the support (0 for the zero polynomial)
    unsigned max_x_degree() const;

    F2Poly3 operator+(const F2Poly3& o) const;
    F2Poly3 operator*(const F2Poly3& o) const;
    // exponent negation mod L on every term; an involution
    F2Poly3 dual() const;
    // e-fold product; pow(a, 0) = 1
    F2Poly3 pow(uint64_t e) const;

    bool operator==(const F2Poly3&) const = default;
    std::string to_string() const;

  private:
    unsigned period_;
    std::vector<Term> terms_;
    void normalize();
};

}  // namespace selfcorrect
