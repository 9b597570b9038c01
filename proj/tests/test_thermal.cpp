#include <cmath>
#include <numeric>
#include <set>

#include "doctest.h"
#include "selfcorrect/css.hpp"
#include "selfcorrect/errors.hpp"
#include "selfcorrect/poly.hpp"
#include "selfcorrect/rng.hpp"
#include "selfcorrect/thermal.hpp"
#include "support/dense_gibbs_oracle.hpp"
#include "support/test_support.hpp"

using namespace selfcorrect;
namespace sct = selfcorrect::testing;

namespace {

CssCode toric2d(unsigned L) {
    CodeSpec spec;
    spec.variant = CodeSpec::Variant::toric2d;
    spec.L = L;
    return catalog_build(spec);
}

ImperfectMask all_kept_mask(const CssCode& code) {
    ImperfectMask mask;
    mask.kept = F2Vector(code.num_x() + code.num_z());
    for (size_t i = 0; i < mask.kept.size(); ++i) mask.kept.set(i, true);
    return mask;
}

// every present X generator must commute with the remover except the target
void check_remover_contract(const CssCode& code, const ImperfectMask& mask, size_t target,
                            const PauliOperator& v) {
    REQUIRE(v.is_z_type());
    for (size_t i = 0; i < code.num_x(); ++i) {
        if (!mask.x_kept(i)) continue;
        CHECK(code.hx().row(i).dot(v.z) == (i == target));
    }
}

F2Poly3 univariate(unsigned period, const std::vector<int>& coeffs) {
    return F2Poly3::from_x_coeffs(period, coeffs);
}

}  // namespace

TEST_SUITE_BEGIN("thermal");

TEST_CASE("removal probability formula") {
    CHECK(removal_probability(0.0) == doctest::Approx(1.0));
    CHECK(removal_probability(std::log(3.0)) == doctest::Approx(0.5));
    CHECK(removal_probability(0.0, 3) == doctest::Approx(1.0));
    // strictly decreasing in beta, in (0, 1]
    double prev = removal_probability(0.0);
    for (double beta : {0.25, 0.5, 1.0, 2.0, 4.0}) {
        double p = removal_probability(beta);
        CHECK(p < prev);
        CHECK(p > 0);
        prev = p;
    }
    CHECK_THROWS_AS(removal_probability(-0.1), ContractError);
}

TEST_CASE("imperfect mask sampling") {
    CssCode code = toric2d(3);
    ImperfectMask frozen = sample_imperfect(code, 60.0, 7);
    CHECK(frozen.kept.weight() == code.num_x() + code.num_z());

    ImperfectMask molten = sample_imperfect(code, 0.0, 7);
    CHECK(molten.kept.weight() == 0);

    // kept fraction at beta = 1 within 3 sigma of 1 - 2/(e+1)
    uint64_t kept = 0, total = 0;
    for (uint64_t s = 0; s < 4000; ++s) {
        ImperfectMask m = sample_imperfect(code, 1.0, stream_seed(99, {s}));
        kept += m.kept.weight();
        total += m.kept.size();
    }
    double expect = 1.0 - removal_probability(1.0);
    double sigma = std::sqrt(expect * (1 - expect) / double(total));
    CHECK(std::abs(double(kept) / double(total) - expect) < 3 * sigma);

    // reproducible from the seed
    ImperfectMask a = sample_imperfect(code, 1.0, 42), b = sample_imperfect(code, 1.0, 42);
    CHECK(a.kept == b.kept);
}

TEST_CASE("grid partition covers the lattice in near-equal cells") {
    for (unsigned L : {16u, 32u, 64u})
        for (double c : {4.0, 6.0}) {
            GridPartition g = GridPartition::build(L, c);
            double target = c * std::log(double(L));
            CHECK(g.cells.size() ==
                  size_t(std::llround(double(L) * L / target)));
            std::set<uint32_t> seen;
            size_t min_sz = SIZE_MAX, max_sz = 0;
            for (const auto& cell : g.cells) {
                min_sz = std::min(min_sz, cell.size());
                max_sz = std::max(max_sz, cell.size());
                for (uint32_t s : cell) CHECK(seen.insert(s).second);
            }
            CHECK(seen.size() == size_t(L) * L);
            CHECK(max_sz - min_sz <= 1);
        }
    CHECK_THROWS_AS(GridPartition::build(4, 0.1), ContractError);
}

TEST_CASE("sink coverage formula value") {
    SinkProbability sp = grid_sink_probability(64, 0.5, 6.0, 10, 5);
    CHECK(sp.formula == doctest::Approx(1.0 - 5.0529e-6).epsilon(1e-6));
    // the union bound sits below the product form
    CHECK(sp.lower_bound <= sp.formula);
    CHECK(sp.lower_bound == doctest::Approx(sp.formula).epsilon(1e-4));
    SinkProbability wide = grid_sink_probability(16, 0.3, 4.0, 10, 5);
    CHECK(wide.lower_bound <= wide.formula);
}

TEST_CASE("sink coverage: empirical matches the closed form") {
    // spot checks; the full parameter grid runs in the acceptance suite
    for (auto [L, p, c] : {std::tuple{16u, 0.3, 4.0}, {32u, 0.5, 6.0}}) {
        SinkProbability sp = grid_sink_probability(L, p, c, 4000, 2024);
        double sigma = std::max(sp.stderr_, 1e-4);
        CHECK(std::abs(sp.empirical - sp.formula) < 3 * sigma);
    }
}

TEST_CASE("sink coverage limits") {
    SinkProbability hi = grid_sink_probability(16, 0.999, 4.0, 500, 3);
    CHECK(hi.empirical == doctest::Approx(1.0));
    CHECK(hi.formula == doctest::Approx(1.0));
    SinkProbability lo = grid_sink_probability(16, 0.001, 4.0, 500, 3);
    CHECK(lo.empirical == doctest::Approx(0.0));
    CHECK(lo.formula == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("find_remover pulls a string to an adjacent sink") {
    CssCode code = toric2d(8);
    // vertex index layout is row-major: vertex (i, j) -> j * 8 + i
    size_t target = 3 * 8 + 3;
    size_t sink = 3 * 8 + 4;  // adjacent vertex
    ImperfectMask mask = all_kept_mask(code);
    mask.kept.set(sink, false);

    auto v = find_remover(code, mask, target, 1);
    REQUIRE(v.has_value());
    check_remover_contract(code, mask, target, *v);

    // a larger box still solves
    auto v4 = find_remover(code, mask, target, 4);
    REQUIRE(v4.has_value());
    check_remover_contract(code, mask, target, *v4);
}

TEST_CASE("find_remover on the intact torus has no solution at any radius") {
    CssCode code = toric2d(8);
    ImperfectMask mask = all_kept_mask(code);
    for (int r : {0, 1, 2, 4, 7, 8}) CHECK(!find_remover(code, mask, 5, r).has_value());
}

TEST_CASE("find_remover with an empty box returns nothing") {
    CssCode code = toric2d(8);
    ImperfectMask mask = all_kept_mask(code);
    mask.kept.set(1, false);
    CHECK(!find_remover(code, mask, 0, 0).has_value());
}

TEST_CASE("find_remover requires geometry and a present target") {
    CssCode bare = make_css(F2Matrix::from_strings({"11"}), F2Matrix(0, 2));
    ImperfectMask mask = all_kept_mask(bare);
    CHECK_THROWS_AS(find_remover(bare, mask, 0, 1), ContractError);

    CssCode code = toric2d(4);
    ImperfectMask dropped = all_kept_mask(code);
    dropped.kept.set(2, false);
    CHECK_THROWS_AS(find_remover(code, dropped, 2, 1), ContractError);
}

TEST_CASE("classicalize") {
    CssCode code = toric2d(8);

    // all X terms removed: vacuously classical
    ImperfectMask none = all_kept_mask(code);
    for (size_t i = 0; i < code.num_x(); ++i) none.kept.set(i, false);
    ClassicalizeResult empty = classicalize(code, none, 1);
    CHECK(empty.ok);
    CHECK(empty.removers.empty());

    // one sink per 4x4 cell of the vertex array, box radius the cell size
    ImperfectMask grid = all_kept_mask(code);
    for (unsigned cy : {1u, 5u})
        for (unsigned cx : {1u, 5u}) grid.kept.set(cy * 8 + cx, false);
    ClassicalizeResult ok = classicalize(code, grid, 4);
    CHECK(ok.ok);
    CHECK(ok.removers.size() == code.num_x() - 4);
    for (const auto& [j, v] : ok.removers) check_remover_contract(code, grid, j, v);

    // intact torus: fails at the first generator
    ClassicalizeResult bad = classicalize(code, all_kept_mask(code), 4);
    CHECK(!bad.ok);
    REQUIRE(bad.first_failed.has_value());
    CHECK(*bad.first_failed == 0);
}

TEST_CASE("span growth is deterministic and maximal at p = 1") {
    SpanGrowthStats st = simulate_span_growth(univariate(64, {1, 1}), 1.0, 12, 50, 11);
    CHECK(st.m == 1);
    CHECK(st.final_maximal == 50);
    for (unsigned t = 0; t < st.r; ++t) {
        CHECK(st.samples_maximal[t] == 50);
        CHECK(st.stay_maximal[t] == 0);
    }
}

TEST_CASE("span growth stay probability matches the branch statistic") {
    // conditioned on d_t maximal, the span stalls iff no site of the next
    // layer is selected: probability (1-p)^{t+1} for degree-1 f
    double p = 0.5;
    SpanGrowthStats st = simulate_span_growth(univariate(64, {1, 1}), p, 10, 60000, 17);
    unsigned t = 3;
    REQUIRE(st.samples_maximal[t] >= 10000);
    double rate = double(st.stay_maximal[t]) / double(st.samples_maximal[t]);
    double theory = std::pow(1 - p, t + 1);  // 0.0625
    double sigma = std::sqrt(theory * (1 - theory) / double(st.samples_maximal[t]));
    CHECK(std::abs(rate - theory) < 3 * sigma);
}

TEST_CASE("span growth submaximal jumps beat the p^(m+1) bound") {
    for (double p : {0.3, 0.5}) {
        SpanGrowthStats st = simulate_span_growth(univariate(64, {1, 1, 1}), p, 12, 20000, 23);
        CHECK(st.m == 2);
        uint64_t samples = std::accumulate(st.samples_submaximal.begin(),
                                           st.samples_submaximal.end(), uint64_t(0));
        uint64_t jumps = std::accumulate(st.bigjump_submaximal.begin(),
                                         st.bigjump_submaximal.end(), uint64_t(0));
        REQUIRE(samples >= 5000);
        double bound = std::pow(p, 3);
        double rate = double(jumps) / double(samples);
        double sigma = std::sqrt(bound * (1 - bound) / double(samples));
        CHECK(rate > bound - 3 * sigma);  // one-sided: the bound is a lower bound
    }
}

TEST_CASE("span growth validates its inputs") {
    CHECK_THROWS_AS(simulate_span_growth(univariate(64, {0, 1}), 0.5, 8, 10, 1), ContractError);
    CHECK_THROWS_AS(simulate_span_growth(univariate(64, {1}), 0.5, 8, 10, 1), ContractError);
    CHECK_THROWS_AS(simulate_span_growth(univariate(8, {1, 1}), 0.5, 10, 10, 1), ContractError);
    F2Poly3 not_x = F2Poly3::from_terms(64, {{0, 0, 0}, {0, 1, 0}});
    CHECK_THROWS_AS(simulate_span_growth(not_x, 0.5, 8, 10, 1), ContractError);
}

TEST_CASE("span growth is reproducible from the seed") {
    SpanGrowthStats a = simulate_span_growth(univariate(64, {1, 1}), 0.4, 9, 500, 5);
    SpanGrowthStats b = simulate_span_growth(univariate(64, {1, 1}), 0.4, 9, 500, 5);
    CHECK(a.final_maximal == b.final_maximal);
    CHECK(a.stay_maximal == b.stay_maximal);
}

TEST_CASE("minimal box table is monotone in p") {
    std::vector<BoxScalingRow> rows =
        min_box_scaling(univariate(8, {1, 1}), {0.9999, 0.5, 0.25}, 0.1, 400, 31);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].r_star == 1);  // p ~ 1: a single layer already spans
    CHECK(rows[2].r_star >= rows[1].r_star);
}

TEST_CASE("span membership: polynomial route agrees with the bit basis") {
    Rng rng(4242);
    for (const std::vector<int>& coeffs : {std::vector<int>{1, 1}, {1, 1, 1}}) {
        unsigned period = 512;
        F2Poly3 f = univariate(period, coeffs);
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<std::pair<unsigned, unsigned>> sites;
            size_t count = 1 + rng.next_below(8);
            for (size_t i = 0; i < count; ++i)
                sites.push_back({unsigned(rng.next_below(12)), unsigned(rng.next_below(6))});

            // polynomial-algebra route: reduce by lowest monomial
            std::vector<F2Poly3> basis;
            auto lowest = [](const F2Poly3& q) { return q.terms().front()[0]; };
            auto reduce = [&](F2Poly3 q) {
                bool changed = true;
                while (changed && !q.is_zero()) {
                    changed = false;
                    for (const auto& b : basis)
                        if (!q.is_zero() && lowest(b) == lowest(q)) {
                            q = q + b;
                            changed = true;
                        }
                }
                return q;
            };
            for (const auto& [shift, power] : sites) {
                F2Poly3 q = reduce(F2Poly3::monomial(period, shift, 0, 0) * f.pow(power));
                if (!q.is_zero()) basis.push_back(q);
            }

            for (int probe = 0; probe < 8; ++probe) {
                F2Poly3 query(period);
                if (rng.bernoulli(0.5)) {
                    // random combination of span elements
                    for (const auto& [shift, power] : sites)
                        if (rng.bernoulli(0.5))
                            query = query + F2Poly3::monomial(period, shift, 0, 0) * f.pow(power);
                } else {
                    std::vector<std::array<long, 3>> terms;
                    size_t nt = 1 + rng.next_below(5);
                    for (size_t i = 0; i < nt; ++i) terms.push_back({long(rng.next_below(20)), 0, 0});
                    query = F2Poly3::from_terms(period, terms);
                }
                bool poly_route = reduce(query).is_zero();
                bool bit_route = span_contains(f, sites, query);
                CHECK(poly_route == bit_route);
            }
        }
    }
}

TEST_CASE("gibbs vs free ensemble: zero at beta = 0") {
    CssCode ring = sct::make_ising_ring(4);
    GibbsFreeResult r = gibbs_free_distance(ring, 0.0);
    CHECK(r.exact);
    CHECK(r.distance < 1e-12);
}

TEST_CASE("gibbs vs free ensemble: exact match for independent generators") {
    Rng rng(5151);
    for (int trial = 0; trial < 4; ++trial) {
        size_t n = 4 + rng.next_below(5);
        CssCode code = sct::random_independent_css_code(rng, n, 1 + rng.next_below(4),
                                                        1 + rng.next_below(3));
        RedundancySummary red = redundancy_analysis(code);
        REQUIRE(red.m_x == 0);
        REQUIRE(red.m_z == 0);
        for (double beta : {0.5, 1.0, 2.0}) {
            GibbsFreeResult r = gibbs_free_distance(code, beta);
            CHECK(r.exact);
            CHECK(r.distance <= 1e-10);
        }
    }
}

TEST_CASE("gibbs vs free ensemble: ring redundancy obeys the tail bound") {
    CssCode ring = sct::make_ising_ring(6);
    RedundancySummary red = redundancy_analysis(ring);
    CHECK(red.m_z == 1);
    REQUIRE(red.min_weight_z.has_value());
    CHECK(*red.min_weight_z == 6);

    double p = removal_probability(1.0);
    double bound = 2.0 * std::pow(1.0 - p, 6.0);  // 2^M (1-p)^w with M = 1, w = 6
    GibbsFreeResult r = gibbs_free_distance(ring, 1.0);
    CHECK(r.exact);
    CHECK(r.distance > 0);
    CHECK(r.distance <= bound);
}

TEST_CASE("gibbs vs free ensemble agrees with the dense matrix oracle") {
    Rng rng(6161);
    for (int trial = 0; trial < 3; ++trial) {
        size_t n = 3 + rng.next_below(2);  // n in {3, 4}
        CssCode code = sct::random_css_code(rng, n, 1 + rng.next_below(3), 1);
        for (double beta : {0.7, 1.3}) {
            GibbsFreeResult fast = gibbs_free_distance(code, beta);
            double oracle = sct::dense_gibbs_free_distance(code, beta);
            CHECK(fast.distance == doctest::Approx(oracle).epsilon(1e-8));
        }
    }
    CssCode ring = sct::make_ising_ring(4);
    GibbsFreeResult fast = gibbs_free_distance(ring, 1.0);
    CHECK(fast.distance == doctest::Approx(sct::dense_gibbs_free_distance(ring, 1.0)).epsilon(1e-8));
}

TEST_CASE("gibbs vs free ensemble: Monte Carlo branch tracks the exact value") {
    // 22 generators on 4 qubits forces sampling at the default limit
    F2Matrix hz(0, 4);
    for (int rep = 0; rep < 22; ++rep) {
        F2Vector row(4);
        row.set(rep % 4, true);
        row.set((rep + 1) % 4, true);
        hz.append_row(std::move(row));
    }
    CssCode code = make_css(F2Matrix(0, 4), std::move(hz));
    GibbsFreeResult exact = gibbs_free_distance(code, 1.0, 0, 1, 22);
    CHECK(exact.exact);
    GibbsFreeResult mc = gibbs_free_distance(code, 1.0, 200000, 9);
    CHECK(!mc.exact);
    CHECK(mc.stderr_ > 0);
    CHECK(std::abs(mc.distance - exact.distance) < std::max(5 * mc.stderr_, 2e-3));

    GibbsFreeResult mc2 = gibbs_free_distance(code, 1.0, 200000, 9);
    CHECK(mc.distance == mc2.distance);  // deterministic from the seed

    CHECK_THROWS_AS(gibbs_free_distance(sct::make_ising_ring(13), 1.0), ContractError);
}

TEST_SUITE_END();
