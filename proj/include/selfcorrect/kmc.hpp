#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "selfcorrect/fit.hpp"
#include "selfcorrect/rng.hpp"

namespace selfcorrect {

// 2D sparse Ising graph: a torus grid of degree-4 junctions, adjacent
// junctions connected by chains of s-1 degree-2 vertices (s = L^{1-alpha},
// default sqrt(L)). Vertex count (L/s)^2 (2s-1), edge count 2 L^2 / s on the
// torus.
struct SparseLattice {
    unsigned L = 0;
    unsigned s = 0;  // junction spacing: chain length + 1
    bool periodic = true;
    std::vector<uint8_t> degree;
    std::vector<std::array<int32_t, 4>> nbrs;  // -1 padded

    size_t vertex_count() const { return degree.size(); }
    size_t edge_count() const;

    static SparseLattice build(unsigned L, double alpha = 0.5, bool periodic = true);
    // arbitrary graph, for tests and small enumerations (degrees must be <= 4)
    static SparseLattice from_edges(size_t vertices,
                                    const std::vector<std::pair<uint32_t, uint32_t>>& edges);
};

// Metropolis acceptance rate min(1, exp(-beta dE)).
double metropolis_rate(double delta_e, double beta);

// Spin configuration with the per-site bookkeeping the rejection-free step
// needs: sites are grouped into equivalence classes by the local field
// h = s_i sum_nbr s_j in {-4,-2,0,2,4} (flip cost dE = 2 J h).
class KmcState {
  public:
    static constexpr int kClasses = 5;
    static int class_of(int field) { return (field + 4) / 2; }
    static int field_of_class(int c) { return 2 * c - 4; }

    std::vector<int8_t> spins;
    std::vector<int8_t> field;
    double time = 0;
    int64_t magnetization = 0;
    int64_t energy = 0;  // - sum_<ij> s_i s_j, integer, units of J

    const std::array<std::vector<uint32_t>, kClasses>& members() const { return members_; }
    std::array<size_t, kClasses> class_populations() const;

    void move_site(uint32_t site, int old_field, int new_field);

    friend KmcState make_ordered_state(const SparseLattice& lat);

  private:
    std::array<std::vector<uint32_t>, kClasses> members_;
    std::vector<uint32_t> pos_;  // index of each site inside its class vector
};

KmcState make_ordered_state(const SparseLattice& lat);

// Flip rates per class, fixed a priori by (beta, J).
struct BklRates {
    std::array<double, KmcState::kClasses> rate{};
    static BklRates make(double beta, double J = 1.0);
};

// One rejection-free event: pick a class with probability proportional to
// population * rate, flip a uniform member, update neighbor classes, and
// advance the clock by 1/total_rate (or an exponential sample of that mean).
// Returns the time increment.
double bkl_step(KmcState& state, const SparseLattice& lat, const BklRates& rates,
                bool exponential_time, Rng& rng);

struct TrialOptions {
    double J = 1.0;
    bool exponential_time = false;  // default: deterministic dt = 1/total rate
    uint64_t step_cap = 1'000'000'000;
};

struct TrialResult {
    double tau = 0;
    uint64_t steps = 0;
    bool timed_out = false;
};

// Starts all-up and runs until magnetization <= 0 (stored information
// compromised by half); returns the elapsed rescaled time.
TrialResult memory_time_trial(const SparseLattice& lat, double beta, uint64_t seed,
                              const TrialOptions& options = {});

struct SweepRow {
    unsigned L = 0;
    double beta = 0;
    unsigned trial = 0;
    double tau = 0;
    uint64_t steps = 0;
    bool timed_out = false;
};

struct SweepCell {
    unsigned L = 0;
    double beta = 0;
    double mean_tau = 0;
    double stderr_tau = 0;
    unsigned trials = 0;
};

struct BetaPeak {
    double beta = 0;
    double tau_max = 0;  // highest cell mean across L
    unsigned L_at_max = 0;
};

struct MemorySweepResult {
    std::vector<SweepRow> rows;
    std::vector<SweepCell> cells;
    std::vector<BetaPeak> peaks;
    std::optional<LinearFit> fit;  // ln ln tau_max vs beta
    double kappa = 0;              // fit slope
    double kappa_prime = 0;        // exp(intercept)
    std::string fit_refused;       // nonempty when the fit was not performed
};

struct SweepOptions {
    TrialOptions trial;
    unsigned threads = 0;  // 0 = hardware concurrency
};

// Full factorial sweep with deterministic per-trial seeds
// hash(master_seed, L, beta, trial); rows are bit-identical for any execution
// order or thread count.
MemorySweepResult sweep_and_fit(const std::vector<unsigned>& Ls, const std::vector<double>& betas,
                                unsigned trials, uint64_t master_seed,
                                const SweepOptions& options = {});

// Fit ln ln tau_max = kappa * beta + ln kappa_prime over per-beta peaks.
// Requires at least 3 distinct beta values and tau_max > 1 everywhere.
void fit_peaks(MemorySweepResult& result);

}  // namespace selfcorrect
