#include "selfcorrect/thermal.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "selfcorrect/errors.hpp"
#include "selfcorrect/rng.hpp"

namespace selfcorrect {

double removal_probability(double beta, unsigned d) {
    if (beta < 0 || std::isnan(beta)) throw ContractError("removal_probability: beta must be >= 0");
    if (d < 2) throw ContractError("removal_probability: d must be >= 2");
    return double(d) / (std::expm1(beta) + double(d));
}

ImperfectMask sample_imperfect(const CssCode& code, double beta, uint64_t seed) {
    ImperfectMask mask;
    mask.beta = beta;
    mask.p = removal_probability(beta);
    mask.seed = seed;
    size_t total = code.num_x() + code.num_z();
    mask.kept = F2Vector(total);
    Rng rng(stream_seed(seed, {0x6d61736bu}));
    for (size_t i = 0; i < total; ++i) mask.kept.set(i, !rng.bernoulli(mask.p));
    return mask;
}

GridPartition GridPartition::build(unsigned L, double c) {
    double area = c * std::log(double(L));
    if (area < 1.0) throw ContractError("GridPartition: cell side below one site");
    GridPartition g;
    g.L = L;
    g.nominal_side = std::sqrt(area);
    size_t sites = size_t(L) * L;
    size_t count = std::max<size_t>(1, size_t(std::llround(double(sites) / area)));
    count = std::min(count, sites);
    // row-major runs of floor/ceil(sites/count) sites
    size_t base = sites / count, extra = sites % count;
    g.cells.reserve(count);
    uint32_t next = 0;
    for (size_t i = 0; i < count; ++i) {
        size_t len = base + (i < extra ? 1 : 0);
        std::vector<uint32_t> cell(len);
        for (size_t j = 0; j < len; ++j) cell[j] = next++;
        g.cells.push_back(std::move(cell));
    }
    return g;
}

SinkProbability grid_sink_probability(unsigned L, double p, double c, uint64_t trials,
                                      uint64_t seed) {
    if (L < 4) throw ContractError("grid_sink_probability: L must be >= 4");
    if (!(p > 0) || !(p < 1)) throw ContractError("grid_sink_probability: p must be in (0,1)");
    if (!(c > 0)) throw ContractError("grid_sink_probability: c must be > 0");
    GridPartition grid = GridPartition::build(L, c);

    uint64_t covered = 0;
    std::vector<char> removed(size_t(L) * L);
    for (uint64_t t = 0; t < trials; ++t) {
        Rng rng(stream_seed(seed, {0x70657263u, t}));
        for (auto& s : removed) s = rng.bernoulli(p);
        bool all = true;
        for (const auto& cell : grid.cells) {
            bool has_sink = false;
            for (uint32_t site : cell)
                if (removed[site]) {
                    has_sink = true;
                    break;
                }
            if (!has_sink) {
                all = false;
                break;
            }
        }
        if (all) ++covered;
    }

    SinkProbability out;
    out.trials = trials;
    out.empirical = trials ? double(covered) / double(trials) : 0.0;
    double logl = std::log(double(L));
    double cell_fail = std::pow(double(L), c * std::log1p(-p));  // = (1-p)^{c ln L}
    double cell_count = double(L) * L / (c * logl);
    out.formula = std::pow(1.0 - cell_fail, cell_count);
    out.lower_bound = 1.0 - cell_count * cell_fail;
    out.stderr_ = trials ? std::sqrt(std::max(out.formula * (1.0 - out.formula), 0.0) /
                                     double(trials))
                         : 0.0;
    return out;
}

namespace {

int wrapped_abs(int d, int period) {
    if (period <= 0) return std::abs(d);
    d = ((d % period) + period) % period;
    return std::min(d, period - d);
}

int chebyshev(const std::array<int, 3>& a, const std::array<int, 3>& b,
              const std::array<int, 3>& period, int dim) {
    int m = 0;
    for (int axis = 0; axis < dim; ++axis)
        m = std::max(m, wrapped_abs(a[axis] - b[axis], period[axis]));
    return m;
}

}  // namespace

std::optional<PauliOperator> find_remover(const CssCode& code, const ImperfectMask& mask, size_t j,
                                          int r_box) {
    if (j >= code.num_x()) throw ContractError("find_remover: X generator index out of range");
    if (!mask.x_kept(j)) throw ContractError("find_remover: target generator is not present");
    const auto& geom = code.geometry();
    if (!geom || geom->x_anchors.size() != code.num_x() || geom->qubit_coords.size() != code.n())
        throw ContractError("find_remover: code has no generator geometry");

    const auto& anchor = geom->x_anchors[j];
    int reach = r_box * geom->scale;
    std::vector<size_t> box;
    for (size_t q = 0; q < code.n(); ++q)
        if (chebyshev(geom->qubit_coords[q], anchor, geom->period, geom->dim) <= reach)
            box.push_back(q);
    if (box.empty()) return std::nullopt;

    // present X generators restricted to the box; rhs selects the target
    F2Matrix system(0, box.size());
    std::vector<char> rhs_bits;
    for (size_t i = 0; i < code.num_x(); ++i) {
        if (!mask.x_kept(i)) continue;
        F2Vector row(box.size());
        for (size_t c = 0; c < box.size(); ++c) row.set(c, code.hx().get(i, box[c]));
        system.append_row(std::move(row));
        rhs_bits.push_back(i == j);
    }
    F2Vector rhs(rhs_bits.size());
    for (size_t i = 0; i < rhs_bits.size(); ++i) rhs.set(i, rhs_bits[i]);

    auto sol = solve_linear(system, rhs);
    if (!sol) return std::nullopt;
    F2Vector z(code.n());
    for (size_t c = 0; c < box.size(); ++c)
        if (sol->get(c)) z.set(box[c], true);
    return PauliOperator::z_type(std::move(z));
}

ClassicalizeResult classicalize(const CssCode& code, const ImperfectMask& mask, int r_box) {
    ClassicalizeResult res;
    for (size_t j = 0; j < code.num_x(); ++j) {
        if (!mask.x_kept(j)) continue;
        auto v = find_remover(code, mask, j, r_box);
        if (!v) {
            res.ok = false;
            res.first_failed = j;
            res.removers.clear();
            return res;
        }
        res.removers.emplace_back(j, std::move(*v));
    }
    res.ok = true;
    return res;
}

// ---------------------------------------------------------------------------
// span growth

namespace {

// GF(2) polynomials in x as raw bit vectors with an echelon basis indexed by
// lowest set bit.
class BitPolyBasis {
  public:
    explicit BitPolyBasis(size_t width)
        : width_(width), words_((width + 63) / 64), slot_(width, uint32_t(-1)) {}

    size_t dimension() const { return rows_.size(); }

    // reduce v against the basis and insert the remainder; true if inserted
    bool insert(std::vector<uint64_t> v) {
        for (;;) {
            size_t lead = lowest_bit(v);
            if (lead == SIZE_MAX) return false;
            uint32_t s = slot_[lead];
            if (s == uint32_t(-1)) {
                slot_[lead] = uint32_t(rows_.size());
                rows_.push_back(std::move(v));
                return true;
            }
            const auto& row = rows_[s];
            for (size_t w = 0; w < words_; ++w) v[w] ^= row[w];
        }
    }

    void clear() {
        rows_.clear();
        std::fill(slot_.begin(), slot_.end(), uint32_t(-1));
    }

  private:
    size_t lowest_bit(const std::vector<uint64_t>& v) const {
        for (size_t w = 0; w < words_; ++w)
            if (v[w]) return w * 64 + size_t(std::countr_zero(v[w]));
        return SIZE_MAX;
    }
    size_t width_, words_;
    std::vector<std::vector<uint64_t>> rows_;
    std::vector<uint32_t> slot_;
};

std::vector<uint64_t> shifted(const std::vector<uint64_t>& poly, size_t shift, size_t words) {
    std::vector<uint64_t> out(words, 0);
    size_t word_shift = shift / 64, bit_shift = shift % 64;
    for (size_t w = 0; w + word_shift < words; ++w) {
        out[w + word_shift] |= poly[w] << bit_shift;
        if (bit_shift && w + word_shift + 1 < words) out[w + word_shift + 1] |= poly[w] >> (64 - bit_shift);
    }
    return out;
}

}  // namespace

SpanGrowthStats simulate_span_growth(const F2Poly3& f, double p, unsigned r, uint64_t trials,
                                     uint64_t seed) {
    if (!f.is_x_only()) throw ContractError("simulate_span_growth: f must be a polynomial in x only");
    if (!f.has(0, 0, 0)) throw ContractError("simulate_span_growth: f must have a constant term");
    unsigned m = f.max_x_degree();
    if (m < 1) throw ContractError("simulate_span_growth: f must have degree >= 1");
    if (!(p > 0) || p > 1) throw ContractError("simulate_span_growth: p must be in (0,1]");
    if (r < 1) throw ContractError("simulate_span_growth: r must be >= 1");
    if (f.period() <= size_t(m) * r)
        throw ContractError("simulate_span_growth: period too small, exponents would wrap");

    const size_t width = size_t(m) * r;
    const size_t words = (width + 63) / 64;

    // f^0 .. f^{r-1}; degree of f^j is m*j < width
    std::vector<std::vector<uint64_t>> fpow(r, std::vector<uint64_t>(words, 0));
    fpow[0][0] = 1;
    F2Poly3 acc = F2Poly3::one(f.period());
    for (unsigned j = 1; j < r; ++j) {
        acc = acc * f;
        for (const auto& t : acc.terms()) fpow[j][t[0] / 64] |= 1ull << (t[0] % 64);
    }

    SpanGrowthStats stats;
    stats.m = m;
    stats.r = r;
    stats.p = p;
    stats.trials = trials;
    stats.samples_maximal.assign(r, 0);
    stats.stay_maximal.assign(r, 0);
    stats.samples_submaximal.assign(r, 0);
    stats.bigjump_submaximal.assign(r, 0);

    BitPolyBasis basis(width);
    for (uint64_t trial = 0; trial < trials; ++trial) {
        Rng rng(stream_seed(seed, {0x7370616eu, trial}));
        basis.clear();
        size_t d_prev = 0;
        for (unsigned t = 1; t <= r; ++t) {
            bool was_maximal = (d_prev == size_t(m) * (t - 1));
            if (was_maximal)
                ++stats.samples_maximal[t - 1];
            else
                ++stats.samples_submaximal[t - 1];
            // layer t: columns [width - m*t, width - m*t + m), powers 0..t-1
            size_t col0 = width - size_t(m) * t;
            for (unsigned dc = 0; dc < m; ++dc)
                for (unsigned jp = 0; jp < t; ++jp)
                    if (rng.bernoulli(p)) basis.insert(shifted(fpow[jp], col0 + dc, words));
            size_t d = basis.dimension();
            size_t delta = d - d_prev;
            // from a maximal state the span can grow by at most m per layer;
            // submaximal states may jump further but never past m*t
            if ((was_maximal && delta > m) || d > size_t(m) * t)
                throw std::logic_error("span growth invariant violated");
            if (was_maximal && delta == 0) ++stats.stay_maximal[t - 1];
            if (!was_maximal && delta > m) ++stats.bigjump_submaximal[t - 1];
            d_prev = d;
        }
        if (d_prev == size_t(m) * r) ++stats.final_maximal;
    }
    return stats;
}

bool span_contains(const F2Poly3& f, const std::vector<std::pair<unsigned, unsigned>>& sites,
                   const F2Poly3& query) {
    if (!f.is_x_only() || !query.is_x_only())
        throw ContractError("span_contains: polynomials must be in x only");
    unsigned m = f.max_x_degree();
    unsigned max_shift = 0, max_pow = 0;
    for (const auto& [shift, power] : sites) {
        max_shift = std::max(max_shift, shift);
        max_pow = std::max(max_pow, power);
    }
    size_t width = std::max<size_t>(size_t(max_shift) + size_t(m) * max_pow + 1,
                                    query.max_x_degree() + 1);
    size_t words = (width + 63) / 64;
    if (f.period() <= size_t(m) * max_pow + max_shift)
        throw ContractError("span_contains: period too small, exponents would wrap");

    std::vector<std::vector<uint64_t>> fpow(max_pow + 1, std::vector<uint64_t>(words, 0));
    fpow[0][0] = 1;
    F2Poly3 acc = F2Poly3::one(f.period());
    for (unsigned j = 1; j <= max_pow; ++j) {
        acc = acc * f;
        for (const auto& t : acc.terms()) fpow[j][t[0] / 64] |= 1ull << (t[0] % 64);
    }
    BitPolyBasis basis(width);
    for (const auto& [shift, power] : sites) basis.insert(shifted(fpow[power], shift, words));

    std::vector<uint64_t> q(words, 0);
    for (const auto& t : query.terms()) q[t[0] / 64] |= 1ull << (t[0] % 64);
    // reduce without inserting: member iff the remainder is zero
    BitPolyBasis probe = basis;
    return !probe.insert(std::move(q));
}

std::vector<BoxScalingRow> min_box_scaling(const F2Poly3& f, const std::vector<double>& ps,
                                           double eps, uint64_t trials_per_r, uint64_t seed) {
    if (!(eps > 0) || !(eps < 1)) throw ContractError("min_box_scaling: eps must be in (0,1)");
    std::vector<BoxScalingRow> rows;
    const unsigned r_cap = 4096;
    for (double p : ps) {
        unsigned r_star = 0;
        for (unsigned r = 1; r <= r_cap; ++r) {
            // fresh polynomial with a safely large period for this r
            unsigned m = f.max_x_degree();
            std::vector<std::array<long, 3>> terms;
            for (const auto& t : f.terms()) terms.push_back({long(t[0]), long(t[1]), long(t[2])});
            F2Poly3 wide = F2Poly3::from_terms(std::max<unsigned>(m * r + 2, f.period()), terms);
            SpanGrowthStats st =
                simulate_span_growth(wide, p, r, trials_per_r, stream_seed(seed, {uint64_t(r)}));
            if (st.final_maximal_fraction() >= 1.0 - eps) {
                r_star = r;
                break;
            }
        }
        if (r_star == 0) throw ContractError("min_box_scaling: no r below cap reached confidence");
        rows.push_back({p, r_star});
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Gibbs vs free ensemble

namespace {

// Expresses each generator over an independent GF(2) basis of its own type
// block. X-type and Z-type generators never mix in a dependency.
struct GeneratorAlgebra {
    size_t rank = 0;                     // total independent generators
    std::vector<F2Vector> coeffs;        // per generator, length = rank
};

GeneratorAlgebra build_algebra(const CssCode& code) {
    // Row-reduce per block while tracking how each generator decomposes over
    // the independent ones encountered so far.
    auto run_block = [](const F2Matrix& h) {
        std::vector<F2Vector> reps;           // coefficient vector per row (over basis)
        std::vector<F2Vector> basis_rows;     // echelon rows
        std::vector<size_t> basis_pivot;
        std::vector<F2Vector> basis_coeff;    // expression of each echelon row over basis gens
        size_t independent = 0;
        size_t nrows = h.rows();
        for (size_t i = 0; i < nrows; ++i) {
            F2Vector v = h.row(i);
            F2Vector c(nrows);  // coefficients over independent generator slots
            for (size_t b = 0; b < basis_rows.size(); ++b)
                if (v.get(basis_pivot[b])) {
                    v ^= basis_rows[b];
                    c ^= basis_coeff[b];
                }
            if (!v.is_zero()) {
                c.set(independent, true);
                basis_rows.push_back(v);
                basis_pivot.push_back(v.lowest_set());
                basis_coeff.push_back(c);
                ++independent;
                // re-reduce existing echelon rows to keep pivots unique
                for (size_t b = 0; b + 1 < basis_rows.size(); ++b)
                    if (basis_rows[b].get(basis_pivot.back())) {
                        basis_rows[b] ^= basis_rows.back();
                        basis_coeff[b] ^= basis_coeff.back();
                    }
            }
            reps.push_back(std::move(c));
        }
        return std::make_pair(reps, independent);
    };

    auto [xreps, xrank] = run_block(code.hx());
    auto [zreps, zrank] = run_block(code.hz());
    GeneratorAlgebra alg;
    alg.rank = xrank + zrank;
    for (auto& c : xreps) {
        F2Vector full(alg.rank);
        for (size_t b = 0; b < xrank; ++b)
            if (c.get(b)) full.set(b, true);
        alg.coeffs.push_back(std::move(full));
    }
    for (auto& c : zreps) {
        F2Vector full(alg.rank);
        for (size_t b = 0; b < zrank; ++b)
            if (c.get(b)) full.set(xrank + b, true);
        alg.coeffs.push_back(std::move(full));
    }
    return alg;
}

// Adds Prob(mask) * 2^{rank(kept) - n} to every syndrome sector satisfying the
// kept generators (sectors orthogonal to the kept coefficient span).
void accumulate_mask(const GeneratorAlgebra& alg, size_t n, const std::vector<size_t>& kept,
                     double prob, std::vector<double>& free_lambda) {
    RowBasis span(alg.rank);
    for (size_t j : kept) span.insert(alg.coeffs[j]);
    size_t rk = span.dimension();
    double eig = prob * std::ldexp(1.0, int(rk) - int(n));

    // enumerate the kernel of the span: sectors sigma with <c, sigma> = 0
    F2Matrix span_m(0, alg.rank);
    for (const auto& row : span.rows()) span_m.append_row(row);
    F2Matrix ker = kernel_basis(span_m);
    size_t kd = ker.rows();
    F2Vector sigma(alg.rank);
    auto index_of = [&](const F2Vector& s) {
        size_t idx = 0;
        for (size_t b = 0; b < alg.rank; ++b)
            if (s.get(b)) idx |= size_t(1) << b;
        return idx;
    };
    free_lambda[index_of(sigma)] += eig;
    uint64_t gray_prev = 0;
    for (uint64_t i = 1; i < (uint64_t(1) << kd); ++i) {
        uint64_t gray = i ^ (i >> 1);
        uint64_t changed = gray ^ gray_prev;
        sigma ^= ker.row(size_t(std::countr_zero(changed)));
        gray_prev = gray;
        free_lambda[index_of(sigma)] += eig;
    }
}

std::vector<double> gibbs_lambda(const GeneratorAlgebra& alg, size_t num_gens, double beta) {
    size_t sectors = size_t(1) << alg.rank;
    std::vector<double> lam(sectors, 0.0);
    double zsum = 0;
    for (size_t idx = 0; idx < sectors; ++idx) {
        F2Vector sigma(alg.rank);
        for (size_t b = 0; b < alg.rank; ++b)
            if (idx & (size_t(1) << b)) sigma.set(b, true);
        int sum_signs = 0;
        for (size_t j = 0; j < num_gens; ++j) sum_signs += alg.coeffs[j].dot(sigma) ? -1 : 1;
        // shifted by the ground-sector value so exp never overflows
        lam[idx] = std::exp(0.5 * beta * double(sum_signs - int(num_gens)));
        zsum += lam[idx];
    }
    for (auto& v : lam) v /= zsum;
    return lam;
}

}  // namespace

GibbsFreeResult gibbs_free_distance(const CssCode& code, double beta, uint64_t mc_samples,
                                    uint64_t seed, unsigned exact_mask_limit) {
    if (code.n() > 12) throw ContractError("gibbs_free_distance: n must be <= 12");
    if (beta < 0) throw ContractError("gibbs_free_distance: beta must be >= 0");
    const size_t n = code.n();
    const size_t N = code.num_x() + code.num_z();
    GeneratorAlgebra alg = build_algebra(code);
    const size_t sectors = size_t(1) << alg.rank;
    const double dim_per_sector = std::ldexp(1.0, int(n) - int(alg.rank));
    const double p = removal_probability(beta);

    // Gibbs eigenvalue per sector, normalized so sum(dim * lambda) = 1.
    std::vector<double> gibbs = gibbs_lambda(alg, N, beta);
    for (auto& v : gibbs) v /= dim_per_sector;

    GibbsFreeResult out;
    if (N <= exact_mask_limit) {
        std::vector<double> free_lambda(sectors, 0.0);
        std::vector<size_t> kept;
        for (uint64_t mask = 0; mask < (uint64_t(1) << N); ++mask) {
            kept.clear();
            double prob = 1;
            for (size_t j = 0; j < N; ++j) {
                if (mask & (uint64_t(1) << j)) {
                    kept.push_back(j);
                    prob *= 1.0 - p;
                } else {
                    prob *= p;
                }
            }
            accumulate_mask(alg, n, kept, prob, free_lambda);
        }
        double dist = 0;
        for (size_t idx = 0; idx < sectors; ++idx)
            dist += dim_per_sector * std::abs(gibbs[idx] - free_lambda[idx]);
        out.distance = dist;
        out.exact = true;
        return out;
    }

    // Monte Carlo over masks, batched for a standard error.
    const int batches = 20;
    uint64_t per_batch = std::max<uint64_t>(1, mc_samples / batches);
    std::vector<double> batch_dist;
    std::vector<size_t> kept;
    for (int b = 0; b < batches; ++b) {
        std::vector<double> free_lambda(sectors, 0.0);
        Rng rng(stream_seed(seed, {0x67696262u, uint64_t(b)}));
        for (uint64_t s = 0; s < per_batch; ++s) {
            kept.clear();
            for (size_t j = 0; j < N; ++j)
                if (!rng.bernoulli(p)) kept.push_back(j);
            accumulate_mask(alg, n, kept, 1.0 / double(per_batch), free_lambda);
        }
        double dist = 0;
        for (size_t idx = 0; idx < sectors; ++idx)
            dist += dim_per_sector * std::abs(gibbs[idx] - free_lambda[idx]);
        batch_dist.push_back(dist);
    }
    double mean = 0;
    for (double d : batch_dist) mean += d;
    mean /= batches;
    double var = 0;
    for (double d : batch_dist) var += (d - mean) * (d - mean);
    var /= (batches - 1);
    out.distance = mean;
    out.stderr_ = std::sqrt(var / batches);
    out.exact = false;
    out.samples = per_batch * batches;
    return out;
}

}  // namespace selfcorrect
