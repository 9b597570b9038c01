#include "selfcorrect/kmc.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>

#include "selfcorrect/errors.hpp"
#include "selfcorrect/parallel.hpp"

namespace selfcorrect {

size_t SparseLattice::edge_count() const {
    size_t twice = 0;
    for (uint8_t d : degree) twice += d;
    return twice / 2;
}

SparseLattice SparseLattice::build(unsigned L, double alpha, bool periodic) {
    double s_real = std::pow(double(L), 1.0 - alpha);
    unsigned s = unsigned(std::llround(s_real));
    if (s < 2 || std::abs(s_real - double(s)) > 1e-9)
        throw ContractError("SparseLattice: L^(1-alpha) must be an integer >= 2 (perfect square L for alpha = 1/2)");
    if (L % s != 0) throw ContractError("SparseLattice: junction spacing must divide L");
    unsigned g = L / s;  // junctions per axis
    if (g < 2) throw ContractError("SparseLattice: need at least 2 junctions per axis");

    SparseLattice lat;
    lat.L = L;
    lat.s = s;
    lat.periodic = periodic;
    size_t cell = 2 * size_t(s) - 1;  // junction + right chain + up chain
    size_t nv = size_t(g) * g * cell;
    lat.degree.assign(nv, 0);
    lat.nbrs.assign(nv, {-1, -1, -1, -1});

    auto junction = [&](unsigned jx, unsigned jy) {
        return (size_t(jy % g) * g + (jx % g)) * cell;
    };
    auto chain = [&](unsigned jx, unsigned jy, bool up, unsigned c) {
        // c in [1, s-1]
        return junction(jx, jy) + (up ? size_t(s) - 1 : 0) + c;
    };
    auto link = [&](size_t a, size_t b) {
        lat.nbrs[a][lat.degree[a]++] = int32_t(b);
        lat.nbrs[b][lat.degree[b]++] = int32_t(a);
    };

    for (unsigned jy = 0; jy < g; ++jy)
        for (unsigned jx = 0; jx < g; ++jx) {
            bool wrap_x = periodic || jx + 1 < g;
            bool wrap_y = periodic || jy + 1 < g;
            if (wrap_x) {
                size_t prev = junction(jx, jy);
                for (unsigned c = 1; c < s; ++c) {
                    size_t v = chain(jx, jy, false, c);
                    link(prev, v);
                    prev = v;
                }
                link(prev, junction(jx + 1, jy));
            }
            if (wrap_y) {
                size_t prev = junction(jx, jy);
                for (unsigned c = 1; c < s; ++c) {
                    size_t v = chain(jx, jy, true, c);
                    link(prev, v);
                    prev = v;
                }
                link(prev, junction(jx, jy + 1));
            }
        }
    return lat;
}

SparseLattice SparseLattice::from_edges(size_t vertices,
                                        const std::vector<std::pair<uint32_t, uint32_t>>& edges) {
    SparseLattice lat;
    lat.degree.assign(vertices, 0);
    lat.nbrs.assign(vertices, {-1, -1, -1, -1});
    for (const auto& [a, b] : edges) {
        if (a >= vertices || b >= vertices || a == b)
            throw ContractError("SparseLattice::from_edges: bad edge");
        if (lat.degree[a] >= 4 || lat.degree[b] >= 4)
            throw ContractError("SparseLattice::from_edges: degree above 4");
        lat.nbrs[a][lat.degree[a]++] = int32_t(b);
        lat.nbrs[b][lat.degree[b]++] = int32_t(a);
    }
    return lat;
}

double metropolis_rate(double delta_e, double beta) {
    if (delta_e <= 0) return 1.0;
    return std::exp(-beta * delta_e);
}

std::array<size_t, KmcState::kClasses> KmcState::class_populations() const {
    std::array<size_t, kClasses> pops{};
    for (int c = 0; c < kClasses; ++c) pops[c] = members_[c].size();
    return pops;
}

void KmcState::move_site(uint32_t site, int old_field, int new_field) {
    int co = class_of(old_field), cn = class_of(new_field);
    if (co == cn) return;
    auto& from = members_[co];
    uint32_t idx = pos_[site];
    uint32_t last = from.back();
    from[idx] = last;
    pos_[last] = idx;
    from.pop_back();
    pos_[site] = uint32_t(members_[cn].size());
    members_[cn].push_back(site);
}

KmcState make_ordered_state(const SparseLattice& lat) {
    KmcState st;
    size_t nv = lat.vertex_count();
    st.spins.assign(nv, 1);
    st.field.resize(nv);
    st.pos_.resize(nv);
    st.magnetization = int64_t(nv);
    st.energy = -int64_t(lat.edge_count());
    for (size_t v = 0; v < nv; ++v) {
        st.field[v] = int8_t(lat.degree[v]);
        int c = KmcState::class_of(lat.degree[v]);
        st.pos_[v] = uint32_t(st.members_[c].size());
        st.members_[c].push_back(uint32_t(v));
    }
    return st;
}

BklRates BklRates::make(double beta, double J) {
    BklRates r;
    for (int c = 0; c < KmcState::kClasses; ++c)
        r.rate[c] = metropolis_rate(2.0 * J * KmcState::field_of_class(c), beta);
    return r;
}

double bkl_step(KmcState& state, const SparseLattice& lat, const BklRates& rates,
                bool exponential_time, Rng& rng) {
    if (state.spins.empty()) throw ContractError("bkl_step: empty system");
    double total = 0;
    const auto& members = state.members();
    for (int c = 0; c < KmcState::kClasses; ++c) total += double(members[c].size()) * rates.rate[c];
    if (!(total > 0)) throw ContractError("bkl_step: every flip rate underflowed to zero");

    // class choice proportional to population * rate
    double u = rng.next_double() * total;
    int chosen = -1;
    for (int c = 0; c < KmcState::kClasses; ++c) {
        double w = double(members[c].size()) * rates.rate[c];
        if (u < w) {
            chosen = c;
            break;
        }
        u -= w;
    }
    if (chosen < 0) {  // float round-off: fall back to the last populated class
        for (int c = KmcState::kClasses - 1; c >= 0; --c)
            if (!members[c].empty() && rates.rate[c] > 0) {
                chosen = c;
                break;
            }
    }

    uint32_t site = members[chosen][rng.next_below(members[chosen].size())];
    int8_t old_spin = state.spins[site];
    int old_field = state.field[site];

    state.energy += 2 * old_field;
    state.magnetization -= 2 * old_spin;
    state.spins[site] = -old_spin;
    state.field[site] = int8_t(-old_field);
    state.move_site(site, old_field, -old_field);
    for (int e = 0; e < lat.degree[site]; ++e) {
        uint32_t v = uint32_t(lat.nbrs[site][e]);
        int of = state.field[v];
        int nf = of - 2 * old_spin * state.spins[v];
        state.field[v] = int8_t(nf);
        state.move_site(v, of, nf);
    }

    double dt = exponential_time ? -std::log1p(-rng.next_double()) / total : 1.0 / total;
    state.time += dt;
    return dt;
}

TrialResult memory_time_trial(const SparseLattice& lat, double beta, uint64_t seed,
                              const TrialOptions& options) {
    KmcState state = make_ordered_state(lat);
    BklRates rates = BklRates::make(beta, options.J);
    Rng rng(stream_seed(seed, {0x6b6d63u}));
    TrialResult res;
    while (state.magnetization > 0) {
        if (res.steps >= options.step_cap) {
            res.timed_out = true;
            break;
        }
        bkl_step(state, lat, rates, options.exponential_time, rng);
        ++res.steps;
    }
    res.tau = state.time;
    return res;
}

namespace {

uint64_t beta_bits(double beta) {
    uint64_t b;
    static_assert(sizeof(b) == sizeof(beta));
    std::memcpy(&b, &beta, sizeof(b));
    return b;
}

}  // namespace

MemorySweepResult sweep_and_fit(const std::vector<unsigned>& Ls, const std::vector<double>& betas,
                                unsigned trials, uint64_t master_seed,
                                const SweepOptions& options) {
    if (Ls.empty() || betas.empty() || trials == 0)
        throw ContractError("sweep_and_fit: empty parameter grid");

    MemorySweepResult result;
    size_t tasks = Ls.size() * betas.size() * trials;
    result.rows.resize(tasks);
    // build lattices once per L
    std::map<unsigned, SparseLattice> lattices;
    for (unsigned L : Ls)
        if (!lattices.count(L)) lattices[L] = SparseLattice::build(L);

    parallel_for(tasks, options.threads, [&](size_t task) {
        size_t t = task % trials;
        size_t bi = (task / trials) % betas.size();
        size_t li = task / (trials * betas.size());
        unsigned L = Ls[li];
        double beta = betas[bi];
        uint64_t seed = stream_seed(master_seed, {uint64_t(L), beta_bits(beta), uint64_t(t)});
        TrialResult tr = memory_time_trial(lattices.at(L), beta, seed, options.trial);
        result.rows[task] = SweepRow{L, beta, unsigned(t), tr.tau, tr.steps, tr.timed_out};
    });

    for (size_t li = 0; li < Ls.size(); ++li)
        for (size_t bi = 0; bi < betas.size(); ++bi) {
            SweepCell cell;
            cell.L = Ls[li];
            cell.beta = betas[bi];
            cell.trials = trials;
            double sum = 0, sum2 = 0;
            for (unsigned t = 0; t < trials; ++t) {
                double tau = result.rows[(li * betas.size() + bi) * trials + t].tau;
                sum += tau;
                sum2 += tau * tau;
            }
            cell.mean_tau = sum / trials;
            if (trials > 1) {
                double var = (sum2 - sum * sum / trials) / (trials - 1);
                cell.stderr_tau = std::sqrt(std::max(var, 0.0) / trials);
            }
            result.cells.push_back(cell);
        }

    for (size_t bi = 0; bi < betas.size(); ++bi) {
        BetaPeak peak;
        peak.beta = betas[bi];
        for (const auto& cell : result.cells)
            if (cell.beta == betas[bi] && cell.mean_tau > peak.tau_max) {
                peak.tau_max = cell.mean_tau;
                peak.L_at_max = cell.L;
            }
        result.peaks.push_back(peak);
    }

    fit_peaks(result);
    return result;
}

void fit_peaks(MemorySweepResult& result) {
    std::vector<double> xs, ys;
    for (const auto& peak : result.peaks) {
        if (peak.tau_max <= 1.0) {
            result.fit_refused = "tau_max <= 1 at beta " + std::to_string(peak.beta) +
                                 "; ln ln tau undefined";
            return;
        }
        xs.push_back(peak.beta);
        ys.push_back(std::log(std::log(peak.tau_max)));
    }
    if (xs.size() < 3) {
        result.fit_refused = "need at least 3 beta points";
        return;
    }
    LinearFit fit = least_squares(xs, ys);
    result.fit = fit;
    result.kappa = fit.slope;
    result.kappa_prime = std::exp(fit.intercept);
}

}  // namespace selfcorrect
