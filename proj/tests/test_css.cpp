#include <set>

#include "doctest.h"
#include "selfcorrect/css.hpp"
#include "selfcorrect/errors.hpp"
#include "selfcorrect/poly.hpp"
#include "selfcorrect/rng.hpp"
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

CssCode fractal_code(unsigned L, const F2Poly3& alpha, const F2Poly3& beta) {
    CodeSpec spec;
    spec.variant = CodeSpec::Variant::fractal;
    spec.L = L;
    spec.alpha = alpha;
    spec.beta = beta;
    return catalog_build(spec);
}

// f-code polynomials alpha = 1 + f(x) y, beta = 1 + g(x) z
std::pair<F2Poly3, F2Poly3> f_code_polys(unsigned L, const std::vector<int>& f,
                                         const std::vector<int>& g) {
    F2Poly3 fp = F2Poly3::from_x_coeffs(L, f);
    F2Poly3 gp = F2Poly3::from_x_coeffs(L, g);
    F2Poly3 alpha = F2Poly3::one(L) + fp * F2Poly3::monomial(L, 0, 1, 0);
    F2Poly3 beta = F2Poly3::one(L) + gp * F2Poly3::monomial(L, 0, 0, 1);
    return {alpha, beta};
}

void check_all_generators_commute(const CssCode& code) {
    for (size_t i = 0; i < code.num_x(); ++i)
        for (size_t j = 0; j < code.num_z(); ++j)
            CHECK(!code.hx().row(i).dot(code.hz().row(j)));
}

}  // namespace

TEST_SUITE_BEGIN("css");

TEST_CASE("make_css validates and counts logical qubits") {
    // Z-check chain on three qubits
    CssCode chain = sct::make_repetition_chain(3);
    CHECK(chain.k() == 1);

    // XX and ZZ share two qubits: valid, k = 0
    CssCode bell = make_css(F2Matrix::from_strings({"11"}), F2Matrix::from_strings({"11"}));
    CHECK(bell.k() == 0);

    // X1 against Z1 anticommutes
    CHECK_THROWS_AS(make_css(F2Matrix::from_strings({"1"}), F2Matrix::from_strings({"1"})),
                    InvalidCodeError);
}

TEST_CASE("make_css names the offending pair") {
    F2Matrix hx = F2Matrix::from_strings({"110", "011"});
    F2Matrix hz = F2Matrix::from_strings({"110", "010"});
    try {
        make_css(hx, hz);
        FAIL("expected InvalidCodeError");
    } catch (const InvalidCodeError& e) {
        std::string msg = e.what();
        CHECK(msg.find("0") != std::string::npos);
        CHECK(msg.find("1") != std::string::npos);
    }
}

TEST_CASE("toric2d catalog") {
    CssCode code = toric2d(2);
    CHECK(code.n() == 8);
    CHECK(code.k() == 2);
    CHECK(code.num_x() == 4);
    CHECK(code.num_z() == 4);
    check_all_generators_commute(code);
    REQUIRE(code.geometry().has_value());
    CHECK(code.geometry()->qubit_coords.size() == 8);
    CHECK(code.geometry()->x_anchors.size() == 4);
}

TEST_CASE("toric3d catalog") {
    CodeSpec spec;
    spec.variant = CodeSpec::Variant::toric3d;
    spec.L = 2;
    CssCode code = catalog_build(spec);
    CHECK(code.n() == 24);
    CHECK(code.num_x() == 8);
    CHECK(code.num_z() == 24);
    CHECK(code.k() == 3);
    check_all_generators_commute(code);
}

TEST_CASE("cubic code generators commute and k is computed exactly") {
    auto [alpha, beta] = cubic_code_polynomials(2);
    CssCode code = fractal_code(2, alpha, beta);
    CHECK(code.n() == 16);
    check_all_generators_commute(code);
    // logical count of this family at L = 2^m is 4L - 2, not the generic 2L
    CHECK(code.k() == 6);

    auto [alpha4, beta4] = cubic_code_polynomials(4);
    CHECK(fractal_code(4, alpha4, beta4).k() == 14);
}

TEST_CASE("f-codes with closing fractal generators have k = 2L") {
    for (unsigned L : {2u, 4u, 8u}) {
        auto [alpha, beta] = f_code_polys(L, {1, 1, 1}, {1, 1, 1});
        CssCode code = fractal_code(L, alpha, beta);
        CHECK(code.n() == 2 * L * L * L);
        CHECK(code.k() == 2 * L);
    }
    // f = 1+x does not close on the torus (f^L = 0): no logical qubits
    auto [alpha, beta] = f_code_polys(4, {1, 1}, {1, 1});
    CHECK(fractal_code(4, alpha, beta).k() == 0);
}

TEST_CASE("fractal commutation holds for random alpha, beta") {
    Rng rng(707);
    for (unsigned L : {2u, 4u, 8u}) {
        for (int trial = 0; trial < 3; ++trial) {
            std::vector<std::array<long, 3>> at, bt;
            size_t na = 1 + rng.next_below(6), nb = 1 + rng.next_below(6);
            for (size_t i = 0; i < na; ++i)
                at.push_back({long(rng.next_below(L)), long(rng.next_below(L)),
                              long(rng.next_below(L))});
            for (size_t i = 0; i < nb; ++i)
                bt.push_back({long(rng.next_below(L)), long(rng.next_below(L)),
                              long(rng.next_below(L))});
            F2Poly3 alpha = F2Poly3::from_terms(L, at);
            F2Poly3 beta = F2Poly3::from_terms(L, bt);
            if (alpha.is_zero() || beta.is_zero()) continue;
            CssCode code = fractal_code(L, alpha, beta);  // make_css validates
            CHECK(code.n() == 2 * L * L * L);
        }
    }
}

TEST_CASE("fractal spec requires power-of-two L") {
    auto [alpha, beta] = f_code_polys(6, {1, 1, 1}, {1, 1, 1});
    CHECK_THROWS_AS(fractal_code(6, alpha, beta), ContractError);
}

TEST_CASE("symplectic_commute basics") {
    size_t n = 2;
    CHECK(!symplectic_commute(PauliOperator::single_x(1, 0), PauliOperator::single_z(1, 0)));
    PauliOperator xx = PauliOperator::x_type(F2Vector::from_string("11"));
    PauliOperator zz = PauliOperator::z_type(F2Vector::from_string("11"));
    CHECK(symplectic_commute(xx, zz));
    CHECK(symplectic_commute(PauliOperator::identity(n), xx));
    CHECK_THROWS_AS(symplectic_commute(PauliOperator::identity(1), xx), ContractError);
}

TEST_CASE("logical_basis satisfies its contracts") {
    auto check_contract = [](const CssCode& code) {
        LogicalBasis basis = logical_basis(code);
        REQUIRE(basis.z_ops.size() == code.k());
        REQUIRE(basis.x_ops.size() == code.k());
        RowBasis hz_span(code.hz());
        RowBasis hx_span(code.hx());
        for (size_t i = 0; i < code.k(); ++i) {
            // commutes with every generator
            for (size_t g = 0; g < code.num_x(); ++g)
                CHECK(!code.hx().row(g).dot(basis.z_ops[i].z));
            for (size_t g = 0; g < code.num_z(); ++g)
                CHECK(!code.hz().row(g).dot(basis.x_ops[i].x));
            // not a stabilizer element
            CHECK(!hz_span.contains(basis.z_ops[i].z));
            CHECK(!hx_span.contains(basis.x_ops[i].x));
            // pairing is exactly diagonal
            for (size_t j = 0; j < code.k(); ++j)
                CHECK(basis.z_ops[i].z.dot(basis.x_ops[j].x) == (i == j));
        }
    };
    check_contract(toric2d(2));
    check_contract(toric2d(3));
    check_contract(sct::make_steane());

    // repetition chain: X logical is forced to be the full X string
    CssCode rep = sct::make_repetition_chain(3);
    LogicalBasis basis = logical_basis(rep);
    REQUIRE(basis.x_ops.size() == 1);
    CHECK(basis.x_ops[0].x == F2Vector::from_string("111"));
    CHECK(basis.z_ops[0].z.weight() >= 1);

    // k = 0 gives empty lists
    CssCode bell = make_css(F2Matrix::from_strings({"11"}), F2Matrix::from_strings({"11"}));
    LogicalBasis none = logical_basis(bell);
    CHECK(none.z_ops.empty());
    CHECK(none.x_ops.empty());
}

TEST_CASE("logical count matches representative count on random codes") {
    Rng rng(808);
    for (int trial = 0; trial < 20; ++trial) {
        size_t n = 4 + rng.next_below(8);
        CssCode code = sct::random_css_code(rng, n, 1 + rng.next_below(4), 1 + rng.next_below(3));
        LogicalBasis basis = logical_basis(code);
        CHECK(basis.z_ops.size() == code.k());
        CHECK(basis.x_ops.size() == code.k());
    }
}

TEST_CASE("redundancy analysis") {
    // toric2d(3): one dependency per sector, the product of all nine terms
    RedundancySummary r = redundancy_analysis(toric2d(3));
    CHECK(r.m_x == 1);
    CHECK(r.m_z == 1);
    REQUIRE(r.min_weight_x.has_value());
    CHECK(*r.min_weight_x == 9);
    REQUIRE(r.min_weight_z.has_value());
    CHECK(*r.min_weight_z == 9);
    CHECK(!r.approximate_x);

    // independent generators: no dependencies, no weights
    RedundancySummary r2 = redundancy_analysis(sct::make_steane());
    CHECK(r2.m_x == 0);
    CHECK(r2.m_z == 0);
    CHECK(!r2.min_weight_x.has_value());
    CHECK(!r2.min_weight_z.has_value());

    // toric2d(L) is (2,0)-free: minimum dependency weight = L^2
    RedundancySummary r4 = redundancy_analysis(toric2d(4));
    CHECK(*r4.min_weight_x == 16);
}

TEST_CASE("weld with empty pairing is a direct sum") {
    auto [a, rough_a] = planar_patch(1, 1);
    auto [b, rough_b] = planar_patch(1, 1);
    CssCode welded = weld_x(a, b, {});
    CHECK(welded.n() == a.n() + b.n());
    CHECK(welded.k() == a.k() + b.k());
}

TEST_CASE("weld of two patches along rough boundary qubits") {
    auto [a, rough_a] = planar_patch(1, 1);
    auto [b, rough_b] = planar_patch(1, 1);
    std::vector<std::pair<size_t, size_t>> pairing;
    for (size_t i = 0; i < rough_a.size(); ++i) pairing.emplace_back(rough_a[i], rough_b[i]);
    CssCode welded = weld_x(a, b, pairing);  // make_css validates hx hz^T = 0
    CHECK(welded.n() == a.n() + b.n() - pairing.size());
    CHECK(welded.k() == 2);

    // every input Z generator (rewritten) lies in the welded Z row space
    RowBasis zspan(welded.hz());
    for (size_t i = 0; i < a.num_z(); ++i) {
        F2Vector r(welded.n());
        for (size_t q = 0; q < a.n(); ++q)
            if (a.hz().get(i, q)) r.set(q, true);
        CHECK(zspan.contains(r));
    }

    CHECK_THROWS_AS(weld_x(a, b, {{0, 0}, {0, 1}}), ContractError);
    CHECK_THROWS_AS(weld_x(a, b, {{a.n(), 0}}), ContractError);
}

TEST_CASE("triple weld: seam vertex flips only exist as triple-boundary fusions") {
    auto [a, rough_a] = planar_patch(1, 1);
    auto [b, rough_b] = planar_patch(1, 1);
    auto [c, rough_c] = planar_patch(1, 1);
    // one simultaneous weld of the three rough boundaries
    std::vector<std::vector<std::pair<size_t, size_t>>> classes;
    for (size_t i = 0; i < rough_a.size(); ++i)
        classes.push_back({{0, rough_a[i]}, {1, rough_b[i]}, {2, rough_c[i]}});
    CssCode abc = weld_x_multi({&a, &b, &c}, classes);
    CHECK(abc.n() == 3 * a.n() - 2 * rough_a.size());

    // rewrite an original X generator of one copy into the welded index
    // space, mirroring the weld's slot order (copy 0 keeps its indices,
    // later copies flow past the identified qubits)
    size_t na = a.n();
    size_t nb_bulk = b.n() - rough_b.size();
    auto map_b = [&](size_t q) {
        for (size_t i = 0; i < rough_b.size(); ++i)
            if (q == rough_b[i]) return rough_a[i];
        size_t out = na;
        for (size_t p = 0; p < q; ++p) {
            bool paired = false;
            for (size_t rb : rough_b) paired |= (p == rb);
            if (!paired) ++out;
        }
        return out;
    };
    auto map_c = [&](size_t q) {
        for (size_t i = 0; i < rough_c.size(); ++i)
            if (q == rough_c[i]) return rough_a[i];
        size_t out = na + nb_bulk;
        for (size_t p = 0; p < q; ++p) {
            bool paired = false;
            for (size_t rc : rough_c) paired |= (p == rc);
            if (!paired) ++out;
        }
        return out;
    };
    auto embed = [&](const CssCode& src, size_t row, auto&& qmap) {
        F2Vector out(abc.n());
        for (size_t q = 0; q < src.n(); ++q)
            if (src.hx().get(row, q)) out.flip(qmap(q));
        return out;
    };
    auto identity_map = [](size_t q) { return q; };

    // right-boundary vertex terms of the (1,1) patch: rows are (i,j)-major,
    // so i = 1 gives rows 1 and 3
    RowBasis xgroup(abc.hx());
    for (size_t row : {size_t(1), size_t(3)}) {
        F2Vector va = embed(a, row, identity_map);
        F2Vector vb = embed(b, row, map_b);
        F2Vector vc = embed(c, row, map_c);
        // single copies and pairs are not stabilizers of the welded code
        CHECK(!xgroup.contains(va));
        CHECK(!xgroup.contains(vb));
        CHECK(!xgroup.contains(va ^ vb));
        CHECK(!xgroup.contains(va ^ vc));
        // the triple-boundary fusion is
        CHECK(xgroup.contains(va ^ vb ^ vc));
    }

    // and the excluded ones fail for the physical reason: they anticommute
    // with some welded Z generator
    auto anticommutes_somewhere = [&](const F2Vector& x) {
        for (size_t i = 0; i < abc.num_z(); ++i)
            if (abc.hz().row(i).dot(x)) return true;
        return false;
    };
    CHECK(anticommutes_somewhere(embed(a, 1, identity_map)));
    CHECK(anticommutes_somewhere(embed(a, 1, identity_map) ^ embed(b, 1, map_b)));
    CHECK(!anticommutes_somewhere(embed(a, 1, identity_map) ^ embed(b, 1, map_b) ^
                                  embed(c, 1, map_c)));

    // chaining binary welds is still a valid code but its X group omits the
    // single-site fusions
    std::vector<std::pair<size_t, size_t>> pair_ab, pair_abc;
    for (size_t i = 0; i < rough_a.size(); ++i) pair_ab.emplace_back(rough_a[i], rough_b[i]);
    CssCode ab = weld_x(a, b, pair_ab);
    for (size_t i = 0; i < rough_a.size(); ++i) pair_abc.emplace_back(rough_a[i], rough_c[i]);
    CssCode chained = weld_x(ab, c, pair_abc);
    CHECK(chained.n() == abc.n());
    CHECK(rank(chained.hx()) < rank(abc.hx()));
}

TEST_CASE("maximal weld rule absorbs logical qubits on toy codes") {
    auto [a, rough_a] = planar_patch(1, 1);
    auto [b, rough_b] = planar_patch(1, 1);
    std::vector<std::pair<size_t, size_t>> pairing;
    for (size_t i = 0; i < rough_a.size(); ++i) pairing.emplace_back(rough_a[i], rough_b[i]);
    WeldOptions opt;
    opt.rule = WeldOptions::XGroupRule::maximal;
    CssCode welded = weld_x(a, b, pairing, opt);
    CHECK(welded.k() == 0);

    // protecting a Z logical makes the maximal rule keep it
    CssCode direct = weld_x(a, b, pairing);
    LogicalBasis basis = logical_basis(direct);
    REQUIRE(!basis.z_ops.empty());
    opt.protected_z = {basis.z_ops[0].z};
    CssCode guarded = weld_x(a, b, pairing, opt);
    CHECK(guarded.k() >= 1);
}

TEST_CASE("weld contract on random codes and pairings") {
    Rng rng(2718);
    for (int trial = 0; trial < 10; ++trial) {
        size_t na = 5 + rng.next_below(5), nb = 5 + rng.next_below(5);
        CssCode a = sct::random_css_code(rng, na, 1 + rng.next_below(3), 1 + rng.next_below(2));
        CssCode b = sct::random_css_code(rng, nb, 1 + rng.next_below(3), 1 + rng.next_below(2));
        size_t count = rng.next_below(std::min(na, nb));
        // random injective pairing
        std::vector<size_t> qa(na), qb(nb);
        for (size_t i = 0; i < na; ++i) qa[i] = i;
        for (size_t i = 0; i < nb; ++i) qb[i] = i;
        for (size_t i = 0; i + 1 < na; ++i) std::swap(qa[i], qa[i + rng.next_below(na - i)]);
        for (size_t i = 0; i + 1 < nb; ++i) std::swap(qb[i], qb[i + rng.next_below(nb - i)]);
        std::vector<std::pair<size_t, size_t>> pairing;
        std::vector<size_t> b_slot(nb, SIZE_MAX);
        for (size_t i = 0; i < count; ++i) {
            pairing.emplace_back(qa[i], qb[i]);
            b_slot[qb[i]] = qa[i];
        }
        size_t next = na;
        for (size_t q = 0; q < nb; ++q)
            if (b_slot[q] == SIZE_MAX) b_slot[q] = next++;

        CssCode welded = weld_x(a, b, pairing);  // validation inside make_css
        CHECK(welded.n() == na + nb - count);

        // every input Z generator, rewritten, lies in the welded Z row space
        RowBasis zspan(welded.hz());
        for (size_t i = 0; i < a.num_z(); ++i) {
            F2Vector r(welded.n());
            for (size_t q = 0; q < na; ++q)
                if (a.hz().get(i, q)) r.flip(q);
            CHECK(zspan.contains(r));
        }
        for (size_t i = 0; i < b.num_z(); ++i) {
            F2Vector r(welded.n());
            for (size_t q = 0; q < nb; ++q)
                if (b.hz().get(i, q)) r.flip(b_slot[q]);
            CHECK(zspan.contains(r));
        }
        // the X group is drawn from the generated group: each welded X row is
        // a combination of the rewritten input X generators
        F2Matrix pool(0, welded.n());
        for (size_t i = 0; i < a.num_x(); ++i) {
            F2Vector r(welded.n());
            for (size_t q = 0; q < na; ++q)
                if (a.hx().get(i, q)) r.flip(q);
            pool.append_row(std::move(r));
        }
        for (size_t i = 0; i < b.num_x(); ++i) {
            F2Vector r(welded.n());
            for (size_t q = 0; q < nb; ++q)
                if (b.hx().get(i, q)) r.flip(b_slot[q]);
            pool.append_row(std::move(r));
        }
        RowBasis pool_span(pool);
        for (size_t i = 0; i < welded.num_x(); ++i) CHECK(pool_span.contains(welded.hx().row(i)));
    }
}

TEST_CASE("k equals n minus ranks on random codes") {
    Rng rng(909);
    for (int trial = 0; trial < 20; ++trial) {
        size_t n = 4 + rng.next_below(9);
        CssCode code = sct::random_css_code(rng, n, 1 + rng.next_below(5), 1 + rng.next_below(3));
        CHECK(code.k() == code.n() - code.rank_hx() - code.rank_hz());
    }
}

TEST_SUITE_END();
