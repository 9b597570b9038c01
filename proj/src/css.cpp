#include "selfcorrect/css.hpp"

#include <algorithm>
#include <bit>
#include <string>
#include <unordered_set>

#include "selfcorrect/errors.hpp"
#include "selfcorrect/rng.hpp"

namespace selfcorrect {

CssCode make_css(F2Matrix hx, F2Matrix hz, std::optional<Geometry> geom) {
    if (hx.rows() > 0 && hz.rows() > 0 && hx.cols() != hz.cols())
        throw ContractError("make_css: hx and hz act on different qubit counts");
    size_t n = std::max(hx.cols(), hz.cols());
    if (hx.cols() == 0) hx = F2Matrix(0, n);
    if (hz.cols() == 0) hz = F2Matrix(0, n);

    for (size_t i = 0; i < hx.rows(); ++i)
        for (size_t j = 0; j < hz.rows(); ++j)
            if (hx.row(i).dot(hz.row(j)))
                throw InvalidCodeError("make_css: X generator " + std::to_string(i) +
                                       " anticommutes with Z generator " + std::to_string(j));

    CssCode code;
    code.n_ = n;
    code.rank_hx_ = rank(hx);
    code.rank_hz_ = rank(hz);
    code.k_ = n - code.rank_hx_ - code.rank_hz_;
    code.hx_ = std::move(hx);
    code.hz_ = std::move(hz);
    code.geom_ = std::move(geom);
    return code;
}

namespace {

CssCode build_toric2d(unsigned L) {
    if (L < 2) throw ContractError("toric2d: L must be >= 2");
    size_t n = 2ull * L * L;
    auto edge = [L](unsigned i, unsigned j, unsigned o) {
        return 2 * (size_t(j % L) * L + (i % L)) + o;  // o: 0 = east, 1 = north
    };
    F2Matrix hx(0, n), hz(0, n);
    Geometry geom;
    geom.dim = 2;
    geom.scale = 2;
    geom.period = {2 * int(L), 2 * int(L), 0};
    geom.qubit_coords.resize(n);
    for (unsigned j = 0; j < L; ++j)
        for (unsigned i = 0; i < L; ++i) {
            geom.qubit_coords[edge(i, j, 0)] = {2 * int(i) + 1, 2 * int(j), 0};
            geom.qubit_coords[edge(i, j, 1)] = {2 * int(i), 2 * int(j) + 1, 0};
        }
    for (unsigned j = 0; j < L; ++j)
        for (unsigned i = 0; i < L; ++i) {
            F2Vector vertex(n);  // star at vertex (i, j)
            vertex.flip(edge(i, j, 0));
            vertex.flip(edge(i + L - 1, j, 0));
            vertex.flip(edge(i, j, 1));
            vertex.flip(edge(i, j + L - 1, 1));
            hx.append_row(std::move(vertex));
            geom.x_anchors.push_back({2 * int(i), 2 * int(j), 0});

            F2Vector face(n);  // plaquette north-east of vertex (i, j)
            face.flip(edge(i, j, 0));
            face.flip(edge(i, j + 1, 0));
            face.flip(edge(i, j, 1));
            face.flip(edge(i + 1, j, 1));
            hz.append_row(std::move(face));
            geom.z_anchors.push_back({2 * int(i) + 1, 2 * int(j) + 1, 0});
        }
    return make_css(std::move(hx), std::move(hz), std::move(geom));
}

CssCode build_toric3d(unsigned L) {
    if (L < 2) throw ContractError("toric3d: L must be >= 2");
    size_t n = 3ull * L * L * L;
    auto edge = [L](unsigned i, unsigned j, unsigned k, unsigned dir) {
        size_t site = (size_t(k % L) * L + (j % L)) * L + (i % L);
        return 3 * site + dir;  // dir: 0 = +x, 1 = +y, 2 = +z
    };
    F2Matrix hx(0, n), hz(0, n);
    Geometry geom;
    geom.dim = 3;
    geom.scale = 2;
    geom.period = {2 * int(L), 2 * int(L), 2 * int(L)};
    geom.qubit_coords.resize(n);
    for (unsigned k = 0; k < L; ++k)
        for (unsigned j = 0; j < L; ++j)
            for (unsigned i = 0; i < L; ++i) {
                geom.qubit_coords[edge(i, j, k, 0)] = {2 * int(i) + 1, 2 * int(j), 2 * int(k)};
                geom.qubit_coords[edge(i, j, k, 1)] = {2 * int(i), 2 * int(j) + 1, 2 * int(k)};
                geom.qubit_coords[edge(i, j, k, 2)] = {2 * int(i), 2 * int(j), 2 * int(k) + 1};
            }
    for (unsigned k = 0; k < L; ++k)
        for (unsigned j = 0; j < L; ++j)
            for (unsigned i = 0; i < L; ++i) {
                F2Vector vertex(n);
                vertex.flip(edge(i, j, k, 0));
                vertex.flip(edge(i + L - 1, j, k, 0));
                vertex.flip(edge(i, j, k, 1));
                vertex.flip(edge(i, j + L - 1, k, 1));
                vertex.flip(edge(i, j, k, 2));
                vertex.flip(edge(i, j, k + L - 1, 2));
                hx.append_row(std::move(vertex));
                geom.x_anchors.push_back({2 * int(i), 2 * int(j), 2 * int(k)});

                F2Vector fxy(n);
                fxy.flip(edge(i, j, k, 0));
                fxy.flip(edge(i, j + 1, k, 0));
                fxy.flip(edge(i, j, k, 1));
                fxy.flip(edge(i + 1, j, k, 1));
                hz.append_row(std::move(fxy));
                geom.z_anchors.push_back({2 * int(i) + 1, 2 * int(j) + 1, 2 * int(k)});

                F2Vector fyz(n);
                fyz.flip(edge(i, j, k, 1));
                fyz.flip(edge(i, j, k + 1, 1));
                fyz.flip(edge(i, j, k, 2));
                fyz.flip(edge(i, j + 1, k, 2));
                hz.append_row(std::move(fyz));
                geom.z_anchors.push_back({2 * int(i), 2 * int(j) + 1, 2 * int(k) + 1});

                F2Vector fzx(n);
                fzx.flip(edge(i, j, k, 2));
                fzx.flip(edge(i + 1, j, k, 2));
                fzx.flip(edge(i, j, k, 0));
                fzx.flip(edge(i, j, k + 1, 0));
                hz.append_row(std::move(fzx));
                geom.z_anchors.push_back({2 * int(i) + 1, 2 * int(j), 2 * int(k) + 1});
            }
    return make_css(std::move(hx), std::move(hz), std::move(geom));
}

void scatter_poly(F2Vector& dst, const F2Poly3& p, unsigned L, unsigned sub) {
    for (const auto& t : p.terms()) dst.flip(fractal_qubit_index(L, t[0], t[1], t[2], sub));
}

CssCode build_fractal(unsigned L, const F2Poly3& alpha, const F2Poly3& beta) {
    if (L < 2 || !std::has_single_bit(L)) throw ContractError("fractal: L must be a power of two >= 2");
    if (alpha.period() != L || beta.period() != L)
        throw ContractError("fractal: alpha/beta period must equal L");
    size_t n = 2ull * L * L * L;
    F2Matrix hx(0, n), hz(0, n);
    Geometry geom;
    geom.dim = 3;
    geom.scale = 2;
    geom.period = {2 * int(L), 2 * int(L), 2 * int(L)};
    geom.qubit_coords.resize(n);
    const F2Poly3 beta_dual = beta.dual();
    const F2Poly3 alpha_dual = alpha.dual();
    for (unsigned k = 0; k < L; ++k)
        for (unsigned j = 0; j < L; ++j)
            for (unsigned i = 0; i < L; ++i) {
                geom.qubit_coords[fractal_qubit_index(L, i, j, k, 0)] = {2 * int(i), 2 * int(j), 2 * int(k)};
                geom.qubit_coords[fractal_qubit_index(L, i, j, k, 1)] = {2 * int(i), 2 * int(j), 2 * int(k)};
                F2Poly3 shift = F2Poly3::monomial(L, i, j, k);
                F2Vector zrow(n);
                scatter_poly(zrow, shift * alpha, L, 0);
                scatter_poly(zrow, shift * beta, L, 1);
                hz.append_row(std::move(zrow));
                geom.z_anchors.push_back({2 * int(i), 2 * int(j), 2 * int(k)});
                F2Vector xrow(n);
                scatter_poly(xrow, shift * beta_dual, L, 0);
                scatter_poly(xrow, shift * alpha_dual, L, 1);
                hx.append_row(std::move(xrow));
                geom.x_anchors.push_back({2 * int(i), 2 * int(j), 2 * int(k)});
            }
    return make_css(std::move(hx), std::move(hz), std::move(geom));
}

}  // namespace

std::pair<F2Poly3, F2Poly3> cubic_code_polynomials(unsigned L) {
    F2Poly3 alpha = F2Poly3::from_terms(L, {{0, 0, 0}, {0, 1, 0}, {1, 1, 0}, {2, 1, 0}});
    F2Poly3 beta =
        F2Poly3::from_terms(L, {{0, 0, 0}, {0, 0, 1}, {1, 0, 1}, {0, 0, 2}, {1, 0, 2}, {2, 0, 2}});
    return {alpha, beta};
}

CssCode catalog_build(const CodeSpec& spec) {
    switch (spec.variant) {
        case CodeSpec::Variant::toric2d:
            return build_toric2d(spec.L);
        case CodeSpec::Variant::toric3d:
            return build_toric3d(spec.L);
        case CodeSpec::Variant::fractal: {
            if (!spec.alpha || !spec.beta) throw ContractError("fractal spec requires alpha and beta");
            return build_fractal(spec.L, *spec.alpha, *spec.beta);
        }
        case CodeSpec::Variant::explicit_code: {
            if (!spec.hx || !spec.hz) throw ContractError("explicit spec requires hx and hz");
            return make_css(*spec.hx, *spec.hz);
        }
    }
    throw ContractError("catalog_build: unsupported spec");
}

LogicalBasis logical_basis(const CssCode& code) {
    LogicalBasis out;
    if (code.k() == 0) return out;

    auto quotient_reps = [](const F2Matrix& commutant_of, const F2Matrix& modulo) {
        F2Matrix kernel = kernel_basis(commutant_of);
        RowBasis stab(modulo);
        RowBasis picked(kernel.cols());
        std::vector<F2Vector> reps;
        for (size_t i = 0; i < kernel.rows(); ++i) {
            F2Vector r = stab.reduce(kernel.row(i));
            if (picked.insert(r) && !r.is_zero()) reps.push_back(std::move(r));
        }
        return reps;
    };

    std::vector<F2Vector> zreps = quotient_reps(code.hx(), code.hz());
    std::vector<F2Vector> xreps = quotient_reps(code.hz(), code.hx());
    if (zreps.size() != code.k() || xreps.size() != code.k())
        throw InvalidCodeError("logical_basis: representative count does not match k");

    // Pair the bases: transform X representatives so the anticommutation
    // matrix becomes the identity.
    size_t k = code.k();
    F2Matrix pairing(k, k);
    for (size_t i = 0; i < k; ++i)
        for (size_t j = 0; j < k; ++j) pairing.set(i, j, zreps[i].dot(xreps[j]));

    // invert the pairing over GF(2)
    F2Matrix aug = pairing;
    F2Matrix inv = F2Matrix::identity(k);
    for (size_t c = 0, r = 0; c < k; ++c) {
        size_t sel = r;
        while (sel < k && !aug.get(sel, c)) ++sel;
        if (sel == k) throw InvalidCodeError("logical_basis: degenerate logical pairing");
        std::swap(aug.row(r), aug.row(sel));
        std::swap(inv.row(r), inv.row(sel));
        for (size_t i = 0; i < k; ++i)
            if (i != r && aug.get(i, c)) {
                aug.row(i) ^= aug.row(r);
                inv.row(i) ^= inv.row(r);
            }
        ++r;
    }
    std::vector<F2Vector> xpaired(k, F2Vector(code.n()));
    for (size_t j = 0; j < k; ++j)
        for (size_t m = 0; m < k; ++m)
            if (inv.get(m, j)) xpaired[j] ^= xreps[m];

    for (size_t i = 0; i < k; ++i) {
        out.z_ops.push_back(PauliOperator::z_type(zreps[i]));
        out.x_ops.push_back(PauliOperator::x_type(xpaired[i]));
    }
    return out;
}

namespace {

// Minimum weight over the nonzero span of the kernel rows. Exhaustive by
// Gray-code walk when the dimension allows it, sampled otherwise.
std::pair<std::optional<size_t>, bool> min_dependency_weight(const F2Matrix& kernel,
                                                             unsigned limit) {
    size_t dim = kernel.rows();
    if (dim == 0) return {std::nullopt, false};
    if (dim <= limit) {
        F2Vector cur(kernel.cols());
        size_t best = SIZE_MAX;
        uint64_t count = 1ull << dim;
        uint64_t gray_prev = 0;
        for (uint64_t i = 1; i < count; ++i) {
            uint64_t gray = i ^ (i >> 1);
            uint64_t changed = gray ^ gray_prev;
            cur ^= kernel.row(static_cast<size_t>(std::countr_zero(changed)));
            gray_prev = gray;
            best = std::min(best, cur.weight());
        }
        return {best, false};
    }
    // sampled upper bound on the minimum weight
    size_t best = SIZE_MAX;
    for (size_t i = 0; i < dim; ++i) best = std::min(best, kernel.row(i).weight());
    Rng rng(0x5eedu ^ (dim * 0x9e37u));
    for (int s = 0; s < 50000; ++s) {
        F2Vector cur(kernel.cols());
        bool any = false;
        for (size_t i = 0; i < dim; ++i)
            if (rng.bernoulli(0.5)) {
                cur ^= kernel.row(i);
                any = true;
            }
        if (any && !cur.is_zero()) best = std::min(best, cur.weight());
    }
    return {best, true};
}

}  // namespace

RedundancySummary redundancy_analysis(const CssCode& code, unsigned weight_search_limit) {
    RedundancySummary out;
    out.m_x = code.num_x() - code.rank_hx();
    out.m_z = code.num_z() - code.rank_hz();
    F2Matrix kx = kernel_basis(code.hx().transposed());
    F2Matrix kz = kernel_basis(code.hz().transposed());
    auto [wx, ax] = min_dependency_weight(kx, weight_search_limit);
    auto [wz, az] = min_dependency_weight(kz, weight_search_limit);
    out.min_weight_x = wx;
    out.min_weight_z = wz;
    out.approximate_x = ax;
    out.approximate_z = az;
    return out;
}

CssCode weld_x_multi(const std::vector<const CssCode*>& codes,
                     const std::vector<std::vector<std::pair<size_t, size_t>>>& identifications,
                     const WeldOptions& options) {
    if (codes.empty()) throw ContractError("weld_x_multi: no codes");
    for (const CssCode* c : codes)
        if (!c) throw ContractError("weld_x_multi: null code");

    // slot map: (code, qubit) -> contracted index. Identified qubits share the
    // slot of the first class member in (code, qubit) order.
    std::vector<std::vector<size_t>> slot(codes.size());
    std::vector<std::vector<char>> identified(codes.size());
    for (size_t c = 0; c < codes.size(); ++c) {
        slot[c].assign(codes[c]->n(), SIZE_MAX);
        identified[c].assign(codes[c]->n(), 0);
    }
    for (const auto& group : identifications) {
        if (group.size() < 2) throw ContractError("weld_x_multi: identification class needs >= 2 members");
        for (const auto& [c, q] : group) {
            if (c >= codes.size() || q >= codes[c]->n())
                throw ContractError("weld_x_multi: identification out of range");
            if (identified[c][q]) throw ContractError("weld_x_multi: qubit identified twice");
            identified[c][q] = 1;
        }
    }
    // assign slots in code-major, qubit-major order; identification classes
    // claim their slot at the first member
    size_t n = 0;
    std::vector<size_t> class_slot(identifications.size(), SIZE_MAX);
    std::vector<std::vector<int>> class_at(codes.size());
    for (size_t c = 0; c < codes.size(); ++c) class_at[c].assign(codes[c]->n(), -1);
    for (size_t g = 0; g < identifications.size(); ++g)
        for (const auto& [c, q] : identifications[g]) class_at[c][q] = int(g);
    for (size_t c = 0; c < codes.size(); ++c)
        for (size_t q = 0; q < codes[c]->n(); ++q) {
            int g = class_at[c][q];
            if (g < 0) {
                slot[c][q] = n++;
            } else if (class_slot[size_t(g)] == SIZE_MAX) {
                class_slot[size_t(g)] = n;
                slot[c][q] = n++;
            } else {
                slot[c][q] = class_slot[size_t(g)];
            }
        }

    auto rewrite = [&](size_t c, const F2Vector& v) {
        F2Vector out(n);
        for (size_t q = 0; q < v.size(); ++q)
            if (v.get(q)) out.flip(slot[c][q]);
        return out;
    };

    F2Matrix hz(0, n);
    for (size_t c = 0; c < codes.size(); ++c)
        for (size_t i = 0; i < codes[c]->num_z(); ++i) hz.append_row(rewrite(c, codes[c]->hz().row(i)));

    F2Matrix constraints = hz;  // rows every X generator must commute with
    for (const auto& p : options.protected_z) {
        if (p.size() != n) throw ContractError("weld_x: protected operator has wrong length");
        constraints.append_row(p);
    }

    F2Matrix hx(0, n);
    if (options.rule == WeldOptions::XGroupRule::maximal) {
        hx = kernel_basis(constraints);
    } else {
        F2Matrix gens(0, n);  // rewritten X generators of every input code
        for (size_t c = 0; c < codes.size(); ++c)
            for (size_t i = 0; i < codes[c]->num_x(); ++i)
                gens.append_row(rewrite(c, codes[c]->hx().row(i)));
        // coefficient vectors lambda with (lambda^T gens) orthogonal to the
        // constraint rows: kernel of constraints * gens^T
        F2Matrix coeff_kernel = kernel_basis(constraints.multiply(gens.transposed()));
        RowBasis rows(n);
        for (size_t i = 0; i < coeff_kernel.rows(); ++i) {
            F2Vector op(n);
            for (size_t j = 0; j < gens.rows(); ++j)
                if (coeff_kernel.row(i).get(j)) op ^= gens.row(j);
            rows.insert(std::move(op));
        }
        for (const auto& r : rows.rows()) hx.append_row(r);
    }
    return make_css(std::move(hx), std::move(hz));
}

CssCode weld_x(const CssCode& a, const CssCode& b,
               const std::vector<std::pair<size_t, size_t>>& pairing, const WeldOptions& options) {
    std::unordered_set<size_t> used_a, used_b;
    for (const auto& [qa, qb] : pairing) {
        if (qa >= a.n() || qb >= b.n()) throw ContractError("weld_x: pairing out of range");
        if (!used_a.insert(qa).second || !used_b.insert(qb).second)
            throw ContractError("weld_x: pairing must be injective on both sides");
    }
    std::vector<std::vector<std::pair<size_t, size_t>>> classes;
    for (const auto& [qa, qb] : pairing) classes.push_back({{0, qa}, {1, qb}});
    return weld_x_multi({&a, &b}, classes, options);
}

std::pair<CssCode, std::vector<size_t>> planar_patch(unsigned w, unsigned h) {
    if (w < 1 || h < 1) throw ContractError("planar_patch: w and h must be >= 1");
    // qubit layout: left dangling column, interior horizontals, verticals,
    // right dangling column
    size_t dl0 = 0;
    size_t h0 = dl0 + (h + 1);
    size_t v0 = h0 + size_t(w) * (h + 1);
    size_t dr0 = v0 + size_t(w + 1) * h;
    size_t n = dr0 + (h + 1);
    auto dl = [&](unsigned j) { return dl0 + j; };
    auto hq = [&](unsigned i, unsigned j) { return h0 + size_t(j) * w + i; };
    auto vq = [&](unsigned i, unsigned j) { return v0 + size_t(j) * (w + 1) + i; };
    auto dr = [&](unsigned j) { return dr0 + j; };

    F2Matrix hx(0, n), hz(0, n);
    for (unsigned j = 0; j <= h; ++j)
        for (unsigned i = 0; i <= w; ++i) {
            F2Vector star(n);
            star.flip(i == 0 ? dl(j) : hq(i - 1, j));
            star.flip(i == w ? dr(j) : hq(i, j));
            if (j > 0) star.flip(vq(i, j - 1));
            if (j < h) star.flip(vq(i, j));
            hx.append_row(std::move(star));
        }
    for (unsigned j = 0; j < h; ++j) {
        for (unsigned i = 0; i < w; ++i) {
            F2Vector face(n);
            face.flip(hq(i, j));
            face.flip(hq(i, j + 1));
            face.flip(vq(i, j));
            face.flip(vq(i + 1, j));
            hz.append_row(std::move(face));
        }
        F2Vector left(n);  // half-plaquette outside the rough boundary
        left.flip(dl(j));
        left.flip(dl(j + 1));
        left.flip(vq(0, j));
        hz.append_row(std::move(left));
        F2Vector right(n);
        right.flip(dr(j));
        right.flip(dr(j + 1));
        right.flip(vq(w, j));
        hz.append_row(std::move(right));
    }
    std::vector<size_t> rough;
    for (unsigned j = 0; j <= h; ++j) rough.push_back(dr(j));
    return {make_css(std::move(hx), std::move(hz)), rough};
}

}  // namespace selfcorrect
