#pragma once

#include <optional>
#include <span>
#include <vector>

namespace selfcorrect {

// Free energy of an excitation droplet of energy E under a branching-walk
// entropy S = E ln(b): F = E - T E ln(b).
double droplet_free_energy(double E, double T, double b);

// Droplet free-energy profile over an energy grid at fixed temperature.
// With S(E) = E ln(b) the free energy is linear in E, so the profile's sign
// is uniform and flips at T = 1/ln(b).
struct DropletProfile {
    double temperature = 0;
    double branching = 3;
    std::vector<double> energies;
    std::vector<double> entropy;      // S(E) = E ln b
    std::vector<double> free_energy;  // F(E) = E - T S(E)
};

DropletProfile droplet_profile(std::span<const double> energies, double T, double b);

// Temperature at which the droplet free energy changes sign for b = 3
// (square-lattice walk): 1 / ln 3.
double ising2d_tc_lower_bound();

struct WeldedBoundParams {
    double J = 1.0;
    double alpha = 0.5;  // junction-spacing exponent; cells of side L^alpha
    double beta = 1.0;
};

// Barrier bound for the sparse-lattice reduction:
// F_b(beta, L) = 2 J L^a - (1/beta) * L^a * ((1-a) ln L + ln 2).
double welded_fb_bound(const WeldedBoundParams& params, double L);

struct LmaxResult {
    double L_star = 0;
    double F_star = 0;
    bool on_boundary = false;     // argmax hit the grid edge
    bool positive_barrier = true; // F_star > 0
};

// Grid argmax of the barrier bound. For alpha = 1/2 the stationary point has
// the closed form ln L_max = 4 J beta - 2 - 2 ln 2.
LmaxResult l_max(const WeldedBoundParams& params, std::span<const double> L_grid);

// Closed-form stationary point for alpha = 1/2 (used as the analytic check).
double l_max_closed_form_log(double J, double beta);

struct LogValue {
    double log_value = 0;
    std::optional<double> value;  // empty when exp would overflow
};

// Arrhenius time tau = exp(beta * F_b), reported in log domain.
LogValue arrhenius_tau(double beta, double f_b);

struct CubicProfileRow {
    double L = 0;
    double circuit_range = 0;  // min(L, e^{c' beta} ln L)
    double barrier = 0;
};

struct CubicProfile {
    std::vector<CubicProfileRow> rows;
    double L0 = 0;            // crossover size e^{c' beta}
    double peak_barrier = 0;  // ln L0, proportional to beta
    double log_tau_peak = 0;  // beta * peak_barrier, proportional to beta^2
};

// Range/barrier profile for codes whose excitations clean up inside
// logarithmic boxes: the preparation range grows linearly up to the
// crossover L0 = e^{c' beta} and logarithmically beyond; the barrier grows
// like ln L up to L0 and decays past it.
CubicProfile cubic_complexity_profile(double beta, std::span<const double> L_grid, double c_prime);

}  // namespace selfcorrect
