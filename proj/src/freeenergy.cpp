#include "selfcorrect/freeenergy.hpp"

#include <cmath>

#include "selfcorrect/errors.hpp"

namespace selfcorrect {

double droplet_free_energy(double E, double T, double b) {
    if (E < 0 || T < 0 || !(b > 1)) throw ContractError("droplet_free_energy: need E,T >= 0 and b > 1");
    return E - T * E * std::log(b);
}

DropletProfile droplet_profile(std::span<const double> energies, double T, double b) {
    DropletProfile prof;
    prof.temperature = T;
    prof.branching = b;
    for (double E : energies) {
        prof.energies.push_back(E);
        prof.entropy.push_back(E * std::log(b));
        prof.free_energy.push_back(droplet_free_energy(E, T, b));
    }
    return prof;
}

double ising2d_tc_lower_bound() { return 1.0 / std::log(3.0); }

double welded_fb_bound(const WeldedBoundParams& params, double L) {
    if (L < 1) throw ContractError("welded_fb_bound: L must be >= 1");
    if (!(params.beta > 0)) throw ContractError("welded_fb_bound: beta must be > 0");
    double la = std::pow(L, params.alpha);
    double entropy = la * ((1.0 - params.alpha) * std::log(L) + std::log(2.0));
    return 2.0 * params.J * la - entropy / params.beta;
}

LmaxResult l_max(const WeldedBoundParams& params, std::span<const double> L_grid) {
    if (L_grid.size() < 2) throw ContractError("l_max: grid needs at least two points");
    LmaxResult res;
    size_t best = 0;
    double best_f = welded_fb_bound(params, L_grid[0]);
    for (size_t i = 1; i < L_grid.size(); ++i) {
        double f = welded_fb_bound(params, L_grid[i]);
        if (f > best_f) {
            best_f = f;
            best = i;
        }
    }
    res.L_star = L_grid[best];
    res.F_star = best_f;
    res.on_boundary = (best == 0 || best + 1 == L_grid.size());
    res.positive_barrier = best_f > 0;
    return res;
}

double l_max_closed_form_log(double J, double beta) {
    return 4.0 * J * beta - 2.0 - 2.0 * std::log(2.0);
}

LogValue arrhenius_tau(double beta, double f_b) {
    LogValue out;
    out.log_value = beta * f_b;
    if (out.log_value < 700.0) out.value = std::exp(out.log_value);
    return out;
}

CubicProfile cubic_complexity_profile(double beta, std::span<const double> L_grid,
                                      double c_prime) {
    if (!(c_prime > 0)) throw ContractError("cubic_complexity_profile: c_prime must be > 0");
    if (!(beta > 0)) throw ContractError("cubic_complexity_profile: beta must be > 0");
    CubicProfile prof;
    prof.L0 = std::exp(c_prime * beta);
    prof.peak_barrier = std::log(prof.L0);  // = c' beta
    prof.log_tau_peak = beta * prof.peak_barrier;
    double range_scale = std::exp(c_prime * beta);
    for (double L : L_grid) {
        if (L < 2) throw ContractError("cubic_complexity_profile: grid values must be >= 2");
        CubicProfileRow row;
        row.L = L;
        row.circuit_range = std::min(L, range_scale * std::log(L));
        double lnl = std::log(L);
        double lnl0 = std::log(prof.L0);
        row.barrier = (L <= prof.L0) ? lnl : std::max(0.0, 2.0 * lnl0 - lnl);
        prof.rows.push_back(row);
    }
    return prof;
}

}  // namespace selfcorrect
