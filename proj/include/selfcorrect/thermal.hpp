#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "selfcorrect/css.hpp"
#include "selfcorrect/f2.hpp"
#include "selfcorrect/pauli.hpp"
#include "selfcorrect/poly.hpp"

namespace selfcorrect {

// Probability that an interaction term is removed at inverse temperature
// beta: p = d / (e^beta - 1 + d); for qubits (d = 2) this is 2 / (e^beta + 1).
double removal_probability(double beta, unsigned d = 2);

// Kept/removed bit per stabilizer generator. Index order: the N_X X-type
// generators first, then the N_Z Z-type generators.
struct ImperfectMask {
    F2Vector kept;
    double p = 0;
    double beta = 0;
    uint64_t seed = 0;

    bool x_kept(size_t i) const { return kept.get(i); }
    bool z_kept(size_t num_x, size_t i) const { return kept.get(num_x + i); }
};

// Each generator is independently kept with probability 1 - p(beta).
ImperfectMask sample_imperfect(const CssCode& code, double beta, uint64_t seed);

// Partition of the L x L vertex array into cells of ~ c ln(L) sites each
// (nominal side sqrt(c ln L)). Cells are row-major runs of near-equal size so
// the cell population matches the nominal area as closely as integer cells
// allow.
struct GridPartition {
    unsigned L = 0;
    double nominal_side = 0;
    std::vector<std::vector<uint32_t>> cells;

    static GridPartition build(unsigned L, double c);
};

struct SinkProbability {
    double empirical = 0;
    double formula = 0;
    double lower_bound = 0;  // 1 - (L^2 / c ln L) L^{c ln(1-p)}, below the formula
    double stderr_ = 0;      // binomial standard error at the formula value
    uint64_t trials = 0;
};

// Empirical probability that every grid cell contains at least one removed
// vertex term, against the closed form (1 - L^{c ln(1-p)})^{L^2 / (c ln L)}.
// Natural logarithm throughout.
SinkProbability grid_sink_probability(unsigned L, double p, double c, uint64_t trials,
                                      uint64_t seed);

// A Z-type operator supported inside the box of radius r_box (lattice units)
// around X generator j that anticommutes with it and commutes with every
// other present X generator; nullopt when the linear system is infeasible.
std::optional<PauliOperator> find_remover(const CssCode& code, const ImperfectMask& mask, size_t j,
                                          int r_box);

struct ClassicalizeResult {
    bool ok = false;
    std::vector<std::pair<size_t, PauliOperator>> removers;  // (generator index, V_j)
    std::optional<size_t> first_failed;
};

// Removers for every present X generator; the certificate that the masked
// Hamiltonian is conjugate to a classical one by a range-r_box circuit.
ClassicalizeResult classicalize(const CssCode& code, const ImperfectMask& mask, int r_box);

// Site-dilution growth of the span F_t = <x^i f^j> over the staircase region
// with m columns per step. Layer t contributes m*t candidate sites, each kept
// independently with probability p; d_t is the GF(2) dimension after layer t.
struct SpanGrowthStats {
    unsigned m = 0;
    unsigned r = 0;
    double p = 0;
    uint64_t trials = 0;
    uint64_t final_maximal = 0;  // trials with d_r = m*r

    // transition t -> t+1 indexed by t (size r; index 0 is the start state)
    std::vector<uint64_t> samples_maximal;     // trials with d_t = m*t
    std::vector<uint64_t> stay_maximal;        // of those, d_{t+1} = d_t
    std::vector<uint64_t> samples_submaximal;  // trials with d_t < m*t
    std::vector<uint64_t> bigjump_submaximal;  // of those, d_{t+1} - d_t > m

    double final_maximal_fraction() const {
        return trials ? double(final_maximal) / double(trials) : 0.0;
    }
};

// f must be a polynomial in x only with nonzero constant term and degree
// m >= 1, with period large enough that no exponent wraps (f.period() > m*r).
SpanGrowthStats simulate_span_growth(const F2Poly3& f, double p, unsigned r, uint64_t trials,
                                     uint64_t seed);

struct BoxScalingRow {
    double p = 0;
    unsigned r_star = 0;  // smallest r with Prob[d_r maximal] >= 1 - eps
};

std::vector<BoxScalingRow> min_box_scaling(const F2Poly3& f, const std::vector<double>& ps,
                                           double eps, uint64_t trials_per_r, uint64_t seed);

// GF(2) span membership of `query` in <x^i f^j : (i, j) in sites>, computed
// with the same bit-vector echelon basis the growth simulation uses. Exposed
// so the polynomial-algebra route can be checked against it.
bool span_contains(const F2Poly3& f, const std::vector<std::pair<unsigned, unsigned>>& sites,
                   const F2Poly3& query);

struct GibbsFreeResult {
    double distance = 0;  // trace norm |rho_beta - rho_free|
    double stderr_ = 0;   // 0 when exact
    bool exact = true;
    uint64_t samples = 0;  // mask samples when estimated
};

// Exact trace distance between the Gibbs state of the projector-normalized
// stabilizer Hamiltonian and the free ensemble sum_k Prob(k) rho(k), with
// rho(k) the maximally mixed ground state of the masked Hamiltonian. Exact
// mask enumeration for N <= exact_mask_limit generators, Monte Carlo with
// reported standard error above that. Requires n <= 12.
GibbsFreeResult gibbs_free_distance(const CssCode& code, double beta, uint64_t mc_samples = 200000,
                                    uint64_t seed = 1, unsigned exact_mask_limit = 20);

}  // namespace selfcorrect
