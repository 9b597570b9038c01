#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "selfcorrect/f2.hpp"
#include "selfcorrect/pauli.hpp"
#include "selfcorrect/poly.hpp"

namespace selfcorrect {

// Integer coordinates for locality queries. Coordinates are stored doubled
// (scale = 2) for lattice codes so that edge midpoints and plaquette centers
// are integral; period is the torus period in stored units (0 = open).
struct Geometry {
    int dim = 0;
    int scale = 1;
    std::array<int, 3> period{0, 0, 0};
    std::vector<std::array<int, 3>> qubit_coords;
    std::vector<std::array<int, 3>> x_anchors;  // one per X generator, may be empty
    std::vector<std::array<int, 3>> z_anchors;  // one per Z generator, may be empty
};

// CSS stabilizer code: X-type and Z-type check matrices over n qubits with
// hx hz^T = 0. Immutable after construction.
class CssCode {
  public:
    size_t n() const { return n_; }
    const F2Matrix& hx() const { return hx_; }
    const F2Matrix& hz() const { return hz_; }
    size_t num_x() const { return hx_.rows(); }
    size_t num_z() const { return hz_.rows(); }
    size_t rank_hx() const { return rank_hx_; }
    size_t rank_hz() const { return rank_hz_; }
    // logical qubit count k = n - rank(hx) - rank(hz)
    size_t k() const { return k_; }
    const std::optional<Geometry>& geometry() const { return geom_; }

    PauliOperator x_generator(size_t i) const { return PauliOperator::x_type(hx_.row(i)); }
    PauliOperator z_generator(size_t i) const { return PauliOperator::z_type(hz_.row(i)); }

    friend CssCode make_css(F2Matrix hx, F2Matrix hz, std::optional<Geometry> geom);

  private:
    CssCode() = default;
    size_t n_ = 0, k_ = 0, rank_hx_ = 0, rank_hz_ = 0;
    F2Matrix hx_, hz_;
    std::optional<Geometry> geom_;
};

// Validates commutation (throws InvalidCodeError naming the offending pair)
// and caches ranks and k.
CssCode make_css(F2Matrix hx, F2Matrix hz, std::optional<Geometry> geom = {});

struct CodeSpec {
    enum class Variant { toric2d, toric3d, fractal, explicit_code };
    Variant variant = Variant::toric2d;
    unsigned L = 2;
    std::optional<F2Poly3> alpha, beta;   // fractal variant
    std::optional<F2Matrix> hx, hz;       // explicit variant
};

// Builds the translation-invariant catalog codes:
//  - toric2d(L): qubits on edges of an L x L torus, vertex X / plaquette Z terms
//  - toric3d(L): qubits on edges of an L^3 torus, vertex X / plaquette Z terms
//  - fractal(alpha, beta, L): two qubits per site of an L^3 torus, one
//    Z(alpha,beta) and one X(dual beta, dual alpha) generator per site;
//    requires L a power of two
CssCode catalog_build(const CodeSpec& spec);

// Polynomials of the cubic code: alpha = 1 + (1+x+x^2) y,
// beta = 1 + (1+x) z + (1+x+x^2) z^2.
std::pair<F2Poly3, F2Poly3> cubic_code_polynomials(unsigned L);

// Site-major qubit index for fractal codes: two qubits per site, sublattice
// index last.
inline size_t fractal_qubit_index(unsigned L, unsigned i, unsigned j, unsigned k, unsigned sub) {
    return 2 * ((size_t(k) * L + j) * L + i) + sub;
}

struct LogicalBasis {
    std::vector<PauliOperator> z_ops;  // k Z-type representatives
    std::vector<PauliOperator> x_ops;  // k X-type representatives, paired so that
                                       // z_ops[i] anticommutes with x_ops[j] iff i == j
};

// Representatives of the centralizer modulo the stabilizer, one conjugate
// pair per logical qubit. Representatives are not canonical.
LogicalBasis logical_basis(const CssCode& code);

struct RedundancySummary {
    size_t m_x = 0, m_z = 0;  // dependency-space dimensions N - rank
    std::optional<size_t> min_weight_x, min_weight_z;
    bool approximate_x = false, approximate_z = false;  // weight searched by sampling
};

// Dimensions of the generator-dependency spaces and the minimum Hamming
// weight of a nonzero dependency; exhaustive when the kernel dimension is at
// most weight_search_limit, sampled (and flagged approximate) beyond that.
RedundancySummary redundancy_analysis(const CssCode& code, unsigned weight_search_limit = 20);

struct WeldOptions {
    // generated: X group restricted to products of the input codes' X
    // generators rewritten on the contracted qubit set (keeps disjoint welds
    // a direct sum). maximal: every X operator commuting with the new Z
    // generators (absorbs logical qubits for toy codes).
    enum class XGroupRule { generated, maximal };
    XGroupRule rule = XGroupRule::generated;
    // X rows anticommuting with any of these Z supports (on the contracted
    // qubit set) are dropped.
    std::vector<F2Vector> protected_z;
};

// X-type weld: the paired qubits (qubit-in-a, qubit-in-b) are identified and
// contracted; Z generators of both codes are kept (rewritten), and the X
// generators are the commuting X group selected by WeldOptions. Qubit order
// of the result: all qubits of a, then the unpaired qubits of b.
CssCode weld_x(const CssCode& a, const CssCode& b,
               const std::vector<std::pair<size_t, size_t>>& pairing,
               const WeldOptions& options = {});

// Simultaneous weld of several codes. Each identification class lists
// (code index, qubit) pairs contracted to a single qubit. Welding three
// boundaries must use one simultaneous weld: chaining binary welds rebuilds
// the X group from the already-reduced basis and loses the cross-seam
// fusions. Qubit order: code 0's qubits, then the unidentified qubits of
// code 1, and so on; a contracted qubit sits at its first member's slot.
CssCode weld_x_multi(const std::vector<const CssCode*>& codes,
                     const std::vector<std::vector<std::pair<size_t, size_t>>>& identifications,
                     const WeldOptions& options = {});

// Planar surface-code patch with w x h faces; qubits on edges, X terms on
// interior vertices, Z terms on faces. The left and right columns of
// horizontal edges dangle (rough boundaries); Z strings terminate there.
// Returns the code plus the list of right-rough-boundary qubits, top to
// bottom, for welding.
std::pair<CssCode, std::vector<size_t>> planar_patch(unsigned w, unsigned h);

}  // namespace selfcorrect
