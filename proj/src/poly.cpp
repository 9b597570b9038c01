#include "selfcorrect/poly.hpp"

#include <algorithm>

#include "selfcorrect/errors.hpp"

namespace selfcorrect {

namespace {

uint16_t reduce_mod(long e, unsigned period) {
    long r = e % static_cast<long>(period);
    if (r < 0) r += period;
    return static_cast<uint16_t>(r);
}

}  // namespace

F2Poly3::F2Poly3(unsigned period) : period_(period) {
    if (period == 0 || period > 0xffff) throw ContractError("F2Poly3: period must be in [1, 65535]");
}

F2Poly3 F2Poly3::one(unsigned period) { return monomial(period, 0, 0, 0); }

F2Poly3 F2Poly3::monomial(unsigned period, long i, long j, long k) {
    F2Poly3 p(period);
    p.terms_.push_back({reduce_mod(i, period), reduce_mod(j, period), reduce_mod(k, period)});
    return p;
}

F2Poly3 F2Poly3::from_terms(unsigned period, const std::vector<std::array<long, 3>>& terms) {
    F2Poly3 p(period);
    p.terms_.reserve(terms.size());
    for (const auto& t : terms)
        p.terms_.push_back({reduce_mod(t[0], period), reduce_mod(t[1], period), reduce_mod(t[2], period)});
    p.normalize();
    return p;
}

F2Poly3 F2Poly3::from_x_coeffs(unsigned period, const std::vector<int>& coeffs) {
    F2Poly3 p(period);
    for (size_t d = 0; d < coeffs.size(); ++d)
        if (coeffs[d]) p.terms_.push_back({reduce_mod(static_cast<long>(d), period), 0, 0});
    p.normalize();
    return p;
}

void F2Poly3::normalize() {
    std::sort(terms_.begin(), terms_.end());
    // cancel pairs mod 2
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (size_t i = 0; i < terms_.size();) {
        size_t j = i;
        while (j < terms_.size() && terms_[j] == terms_[i]) ++j;
        if ((j - i) & 1) out.push_back(terms_[i]);
        i = j;
    }
    terms_ = std::move(out);
}

bool F2Poly3::has(long i, long j, long k) const {
    Term t{reduce_mod(i, period_), reduce_mod(j, period_), reduce_mod(k, period_)};
    return std::binary_search(terms_.begin(), terms_.end(), t);
}

bool F2Poly3::is_x_only() const {
    for (const auto& t : terms_)
        if (t[1] != 0 || t[2] != 0) return false;
    return true;
}

unsigned F2Poly3::max_x_degree() const {
    unsigned d = 0;
    for (const auto& t : terms_) d = std::max<unsigned>(d, t[0]);
    return d;
}

F2Poly3 F2Poly3::operator+(const F2Poly3& o) const {
    if (o.period_ != period_) throw ContractError("F2Poly3 add: period mismatch");
    F2Poly3 out(period_);
    std::set_symmetric_difference(terms_.begin(), terms_.end(), o.terms_.begin(), o.terms_.end(),
                                  std::back_inserter(out.terms_));
    return out;
}

F2Poly3 F2Poly3::operator*(const F2Poly3& o) const {
    if (o.period_ != period_) throw ContractError("F2Poly3 mul: period mismatch");
    F2Poly3 out(period_);
    out.terms_.reserve(terms_.size() * o.terms_.size());
    for (const auto& a : terms_)
        for (const auto& b : o.terms_)
            out.terms_.push_back({reduce_mod(long(a[0]) + b[0], period_),
                                  reduce_mod(long(a[1]) + b[1], period_),
                                  reduce_mod(long(a[2]) + b[2], period_)});
    out.normalize();
    return out;
}

F2Poly3 F2Poly3::dual() const {
    F2Poly3 out(period_);
    out.terms_.reserve(terms_.size());
    for (const auto& t : terms_)
        out.terms_.push_back({reduce_mod(-long(t[0]), period_), reduce_mod(-long(t[1]), period_),
                              reduce_mod(-long(t[2]), period_)});
    out.normalize();
    return out;
}

F2Poly3 F2Poly3::pow(uint64_t e) const {
    F2Poly3 acc = one(period_);
    F2Poly3 base = *this;
    while (e) {
        if (e & 1) acc = acc * base;
        base = base * base;
        e >>= 1;
    }
    return acc;
}

std::string F2Poly3::to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    auto append_var = [&s](char v, uint16_t e) {
        if (e == 0) return;
        s.push_back(v);
        if (e > 1) s += "^" + std::to_string(e);
    };
    for (size_t i = 0; i < terms_.size(); ++i) {
        if (i) s += " + ";
        const auto& t = terms_[i];
        if (t[0] == 0 && t[1] == 0 && t[2] == 0) {
            s += "1";
            continue;
        }
        append_var('x', t[0]);
        append_var('y', t[1]);
        append_var('z', t[2]);
    }
    return s;
}

}  // namespace selfcorrect
