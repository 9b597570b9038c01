#include "selfcorrect/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "selfcorrect/css.hpp"
#include "selfcorrect/ergodic.hpp"
#include "selfcorrect/errors.hpp"
#include "selfcorrect/fit.hpp"
#include "selfcorrect/freeenergy.hpp"
#include "selfcorrect/json_io.hpp"
#include "selfcorrect/kmc.hpp"
#include "selfcorrect/thermal.hpp"

namespace selfcorrect {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitInput = 3;
constexpr int kExitContract = 4;
constexpr int kExitTimeout = 5;

// shortest representation that round-trips exactly
std::string fmt(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string fmt_list(const std::vector<double>& vs) {
    std::string s;
    for (size_t i = 0; i < vs.size(); ++i) {
        if (i) s += ",";
        s += fmt(vs[i]);
    }
    return s;
}

std::string fmt_ulist(const std::vector<unsigned>& vs) {
    std::string s;
    for (size_t i = 0; i < vs.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(vs[i]);
    }
    return s;
}

unsigned resolve_threads(unsigned requested) {
    unsigned cap = 0;
    if (const char* env = std::getenv("SELFCORRECT_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v > 0) cap = unsigned(v);
    }
    if (requested == 0) requested = std::max(1u, std::thread::hardware_concurrency());
    if (cap > 0) requested = std::min(requested, cap);
    return requested;
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty())
        out << text;
    else
        write_text_file(path, text);
}

CssCode load_code(const std::string& path) { return code_from_json(load_json_file(path)); }

F2Poly3 poly_from_coeffs(const std::vector<int>& coeffs, unsigned period) {
    return F2Poly3::from_x_coeffs(period, coeffs);
}

// ---- catalog ----

struct CatalogArgs {
    std::string variant = "toric2d";
    unsigned L = 4;
    bool cubic = false;
    std::string alpha_file, beta_file, spec_file, out;
};

int cmd_catalog(const CatalogArgs& a, std::ostream& out) {
    CodeSpec spec;
    if (!a.spec_file.empty()) {
        spec = spec_from_json(load_json_file(a.spec_file));
    } else {
        if (a.variant == "toric2d")
            spec.variant = CodeSpec::Variant::toric2d;
        else if (a.variant == "toric3d")
            spec.variant = CodeSpec::Variant::toric3d;
        else if (a.variant == "fractal")
            spec.variant = CodeSpec::Variant::fractal;
        else
            throw InputError("unknown variant: " + a.variant);
        spec.L = a.L;
        if (spec.variant == CodeSpec::Variant::fractal) {
            if (a.cubic) {
                auto [alpha, beta] = cubic_code_polynomials(a.L);
                spec.alpha = alpha;
                spec.beta = beta;
            } else if (!a.alpha_file.empty() && !a.beta_file.empty()) {
                spec.alpha = poly_from_json(load_json_file(a.alpha_file));
                spec.beta = poly_from_json(load_json_file(a.beta_file));
            } else {
                throw InputError("fractal variant needs --cubic or --alpha-file/--beta-file");
            }
        }
    }
    CssCode code = catalog_build(spec);
    if (!a.out.empty()) save_json_file(a.out, code_to_json(code));
    json summary{{"n", code.n()},
                 {"k", code.k()},
                 {"num_x", code.num_x()},
                 {"num_z", code.num_z()},
                 {"spec", spec_to_json(spec)}};
    out << summary.dump(2) << "\n";
    return kExitOk;
}

// ---- decompose / verify-ergodic ----

int cmd_decompose(const std::string& code_file, const std::string& out_file, std::ostream& out) {
    CssCode code = load_code(code_file);
    ErgodicDecomposition d = decompose(code);
    if (!out_file.empty()) save_json_file(out_file, decomposition_to_json(d));
    json summary{{"n", code.n()},
                 {"set_l_size", d.set_l.size()},
                 {"set_rx_size", d.set_rx.size()},
                 {"set_rz_size", d.set_rz.size()}};
    out << summary.dump(2) << "\n";
    return kExitOk;
}

int cmd_verify_ergodic(const std::string& code_file, const std::string& out_file,
                       std::ostream& out) {
    CssCode code = load_code(code_file);
    ErgodicDecomposition d = decompose(code);
    bool ok = verify_ergodicity(code, minimal_couplings(code, d));
    json summary{{"ergodic", ok},
                 {"couplings", d.set_rx.size() + d.set_rz.size() + 2 * d.set_l.size()}};
    if (!out_file.empty()) save_json_file(out_file, summary);
    out << summary.dump(2) << "\n";
    return kExitOk;
}

// ---- percolate ----

struct PercolateArgs {
    std::vector<unsigned> Ls{16};
    std::vector<double> ps{0.5};
    std::vector<double> cs{4};
    uint64_t trials = 10000;
    uint64_t seed = 1;
    std::string out_file, format = "csv";
};

int cmd_percolate(const PercolateArgs& a, std::ostream& out) {
    std::ostringstream csv;
    csv << "# selfcorrect percolate L=" << fmt_ulist(a.Ls) << " p=" << fmt_list(a.ps)
        << " c=" << fmt_list(a.cs) << " trials=" << a.trials << " seed=" << a.seed << "\n";
    csv << "L,p,c,trials,empirical,formula,lower_bound,stderr\n";
    json rows = json::array();
    for (unsigned L : a.Ls)
        for (double p : a.ps)
            for (double c : a.cs) {
                uint64_t seed = stream_seed(a.seed, {uint64_t(L), uint64_t(p * 1e9),
                                                     uint64_t(c * 1e9)});
                SinkProbability sp = grid_sink_probability(L, p, c, a.trials, seed);
                csv << L << "," << fmt(p) << "," << fmt(c) << "," << sp.trials << ","
                    << fmt(sp.empirical) << "," << fmt(sp.formula) << ","
                    << fmt(sp.lower_bound) << "," << fmt(sp.stderr_) << "\n";
                rows.push_back({{"L", L},
                                {"p", p},
                                {"c", c},
                                {"trials", sp.trials},
                                {"empirical", sp.empirical},
                                {"formula", sp.formula},
                                {"lower_bound", sp.lower_bound},
                                {"stderr", sp.stderr_}});
            }
    if (a.format == "json") {
        json doc{{"config",
                  {{"L", a.Ls}, {"p", a.ps}, {"c", a.cs}, {"trials", a.trials}, {"seed", a.seed}}},
                 {"rows", rows}};
        write_output(a.out_file, doc.dump(2) + "\n", out);
    } else {
        write_output(a.out_file, csv.str(), out);
    }
    return kExitOk;
}

// ---- span-growth ----

struct SpanArgs {
    std::vector<int> f{1, 1};
    double p = 0.5;
    unsigned r = 40;
    uint64_t trials = 10000;
    uint64_t seed = 1;
    bool scaling = false;
    std::vector<double> p_list{0.3, 0.5, 0.8};
    double eps = 0.05;
    uint64_t trials_per_r = 2000;
    std::string out_file, format = "csv";
};

int cmd_span_growth(const SpanArgs& a, std::ostream& out) {
    unsigned m = unsigned(a.f.size()) - 1;
    if (a.scaling) {
        F2Poly3 f = poly_from_coeffs(a.f, 8);  // period is widened per r internally
        auto rows = min_box_scaling(f, a.p_list, a.eps, a.trials_per_r, a.seed);
        std::ostringstream csv;
        csv << "# selfcorrect span-growth --scaling eps=" << fmt(a.eps)
            << " trials-per-r=" << a.trials_per_r << " seed=" << a.seed << "\n";
        csv << "p,r_star\n";
        std::vector<double> lx, ly;
        for (const auto& row : rows) {
            csv << fmt(row.p) << "," << row.r_star << "\n";
            lx.push_back(std::log(1.0 / row.p));
            ly.push_back(std::log(double(row.r_star)));
        }
        write_output(a.out_file, csv.str(), out);
        if (rows.size() >= 2) {
            LinearFit fit = least_squares(lx, ly);
            json f_report{{"log_rstar_vs_log_inv_p",
                           {{"slope", fit.slope}, {"intercept", fit.intercept}, {"r2", fit.r2}}}};
            out << f_report.dump(2) << "\n";
        }
        return kExitOk;
    }

    unsigned period = m * a.r + 2;
    F2Poly3 f = poly_from_coeffs(a.f, period);
    SpanGrowthStats st = simulate_span_growth(f, a.p, a.r, a.trials, a.seed);
    std::ostringstream csv;
    csv << "# selfcorrect span-growth f_degree=" << m << " p=" << fmt(a.p) << " r=" << a.r
        << " trials=" << a.trials << " seed=" << a.seed << "\n";
    csv << "t,samples_maximal,stay_maximal,stay_rate,stay_theory,samples_submaximal,"
           "bigjump_submaximal,bigjump_rate,bigjump_bound\n";
    json rows = json::array();
    for (unsigned t = 0; t < st.r; ++t) {
        double stay_rate = st.samples_maximal[t]
                               ? double(st.stay_maximal[t]) / double(st.samples_maximal[t])
                               : 0.0;
        double theory = std::pow(1.0 - a.p, double(m) * (t + 1));
        double bj_rate = st.samples_submaximal[t]
                             ? double(st.bigjump_submaximal[t]) / double(st.samples_submaximal[t])
                             : 0.0;
        csv << t << "," << st.samples_maximal[t] << "," << st.stay_maximal[t] << ","
            << fmt(stay_rate) << "," << fmt(theory) << "," << st.samples_submaximal[t] << ","
            << st.bigjump_submaximal[t] << "," << fmt(bj_rate) << ","
            << fmt(std::pow(a.p, double(m) + 1)) << "\n";
        rows.push_back({{"t", t},
                        {"samples_maximal", st.samples_maximal[t]},
                        {"stay_maximal", st.stay_maximal[t]},
                        {"stay_rate", stay_rate},
                        {"stay_theory", theory},
                        {"samples_submaximal", st.samples_submaximal[t]},
                        {"bigjump_submaximal", st.bigjump_submaximal[t]},
                        {"bigjump_rate", bj_rate}});
    }
    json summary{{"final_maximal_fraction", st.final_maximal_fraction()},
                 {"trials", st.trials},
                 {"r", st.r},
                 {"m", st.m},
                 {"p", st.p},
                 {"seed", a.seed}};
    if (a.format == "json") {
        json doc{{"config", summary}, {"rows", rows}};
        write_output(a.out_file, doc.dump(2) + "\n", out);
    } else {
        write_output(a.out_file, csv.str(), out);
        out << summary.dump(2) << "\n";
    }
    return kExitOk;
}

// ---- gibbs-check ----

int cmd_gibbs_check(const std::string& code_file, double beta, uint64_t samples, uint64_t seed,
                    const std::string& out_file, std::ostream& out) {
    CssCode code = load_code(code_file);
    GibbsFreeResult r = gibbs_free_distance(code, beta, samples, seed);
    json doc{{"beta", beta},
             {"p", removal_probability(beta)},
             {"distance", r.distance},
             {"exact", r.exact},
             {"stderr", r.stderr_},
             {"samples", r.samples},
             {"seed", seed}};
    if (!out_file.empty()) save_json_file(out_file, doc);
    out << doc.dump(2) << "\n";
    return kExitOk;
}

// ---- remover ----

struct RemoverArgs {
    std::string code_file;
    std::vector<size_t> drop;
    std::optional<double> beta;
    uint64_t seed = 1;
    size_t target = 0;
    int r_box = 1;
    bool do_classicalize = false;
    std::string out_file;
};

int cmd_remover(const RemoverArgs& a, std::ostream& out) {
    CssCode code = load_code(a.code_file);
    ImperfectMask mask;
    if (a.beta) {
        mask = sample_imperfect(code, *a.beta, a.seed);
    } else {
        mask.kept = F2Vector(code.num_x() + code.num_z());
        for (size_t i = 0; i < mask.kept.size(); ++i) mask.kept.set(i, true);
        for (size_t j : a.drop) {
            if (j >= code.num_x()) throw InputError("--drop index out of range");
            mask.kept.set(j, false);
        }
        mask.p = 0;
        mask.beta = INFINITY;
        mask.seed = a.seed;
    }
    json doc{{"r_box", a.r_box}};
    if (a.do_classicalize) {
        ClassicalizeResult res = classicalize(code, mask, a.r_box);
        doc["ok"] = res.ok;
        if (res.first_failed) doc["first_failed"] = *res.first_failed;
        json removers = json::array();
        for (const auto& [j, v] : res.removers)
            removers.push_back({{"generator", j}, {"z_support", v.z.to_string()}});
        doc["removers"] = removers;
    } else {
        auto v = find_remover(code, mask, a.target, a.r_box);
        doc["target"] = a.target;
        doc["found"] = v.has_value();
        if (v) doc["z_support"] = v->z.to_string();
    }
    if (!a.out_file.empty()) save_json_file(a.out_file, doc);
    out << doc.dump(2) << "\n";
    return kExitOk;
}

// ---- free-energy ----

struct FreeEnergyArgs {
    double J = 1.0;
    double alpha = 0.5;
    std::vector<double> betas{1, 2, 3, 4};
    std::vector<double> Ls;
    bool cubic_profile = false;
    double c_prime = 2.0;
    double beta_single = 1.0;
    bool droplet = false;
    double temperature = 1.0;
    double branching = 3.0;
    std::vector<double> energies;
    std::string out_file;
};

int cmd_free_energy(const FreeEnergyArgs& a, std::ostream& out) {
    std::ostringstream csv;
    if (a.droplet) {
        std::vector<double> grid = a.energies;
        if (grid.empty())
            for (double E = 1; E <= 64; E *= 2) grid.push_back(E);
        DropletProfile prof = droplet_profile(grid, a.temperature, a.branching);
        csv << "# selfcorrect free-energy --droplet T=" << fmt(a.temperature)
            << " b=" << fmt(a.branching) << "\n";
        csv << "E,S,F\n";
        for (size_t i = 0; i < prof.energies.size(); ++i)
            csv << fmt(prof.energies[i]) << "," << fmt(prof.entropy[i]) << ","
                << fmt(prof.free_energy[i]) << "\n";
        write_output(a.out_file, csv.str(), out);
        json summary{{"sign_change_temperature", 1.0 / std::log(a.branching)}};
        out << summary.dump(2) << "\n";
        return kExitOk;
    }
    if (a.cubic_profile) {
        std::vector<double> grid = a.Ls;
        if (grid.empty())
            for (double L = 2; L <= 4096; L *= 2) grid.push_back(L);
        CubicProfile prof = cubic_complexity_profile(a.beta_single, grid, a.c_prime);
        csv << "# selfcorrect free-energy --cubic-profile beta=" << fmt(a.beta_single)
            << " c_prime=" << fmt(a.c_prime) << "\n";
        csv << "L,circuit_range,barrier\n";
        for (const auto& row : prof.rows)
            csv << fmt(row.L) << "," << fmt(row.circuit_range) << "," << fmt(row.barrier) << "\n";
        write_output(a.out_file, csv.str(), out);
        json summary{{"L0", prof.L0},
                     {"peak_barrier", prof.peak_barrier},
                     {"log_tau_peak", prof.log_tau_peak}};
        out << summary.dump(2) << "\n";
        return kExitOk;
    }
    std::vector<double> Ls = a.Ls;
    if (Ls.empty())
        for (double L = 4; L <= 65536; L *= 2) Ls.push_back(L);
    csv << "# selfcorrect free-energy J=" << fmt(a.J) << " alpha=" << fmt(a.alpha)
        << " beta=" << fmt_list(a.betas) << "\n";
    csv << "beta,L,F_b,ln_tau\n";
    for (double beta : a.betas)
        for (double L : Ls) {
            WeldedBoundParams params{a.J, a.alpha, beta};
            double fb = welded_fb_bound(params, L);
            LogValue tau = arrhenius_tau(beta, fb);
            csv << fmt(beta) << "," << fmt(L) << "," << fmt(fb) << "," << fmt(tau.log_value)
                << "\n";
        }
    write_output(a.out_file, csv.str(), out);
    return kExitOk;
}

// ---- lmax ----

struct LmaxArgs {
    double J = 1.0;
    double alpha = 0.5;
    std::vector<double> betas{1, 1.5, 2, 2.5, 3, 3.5, 4};
    double grid_ratio = 1.01;
    std::string out_file;
};

int cmd_lmax(const LmaxArgs& a, std::ostream& out) {
    json rows = json::array();
    std::vector<double> xs, ys;
    for (double beta : a.betas) {
        WeldedBoundParams params{a.J, a.alpha, beta};
        // geometric grid spanning the closed-form stationary point widely
        double center_log = l_max_closed_form_log(a.J, beta);
        double lo = std::max(1.0, std::exp(center_log - 3.0));
        double hi = std::exp(center_log + 3.0);
        std::vector<double> grid;
        for (double L = lo; L <= hi; L *= a.grid_ratio) grid.push_back(L);
        LmaxResult r = l_max(params, grid);
        rows.push_back({{"beta", beta},
                        {"L_star", r.L_star},
                        {"F_star", r.F_star},
                        {"on_boundary", r.on_boundary},
                        {"positive_barrier", r.positive_barrier},
                        {"closed_form_ln_L", center_log}});
        xs.push_back(beta);
        ys.push_back(std::log(r.L_star));
    }
    json doc{{"config", {{"J", a.J}, {"alpha", a.alpha}, {"beta", a.betas}}}, {"rows", rows}};
    if (xs.size() >= 2) {
        LinearFit fit = least_squares(xs, ys);
        doc["fit_ln_Lstar_vs_beta"] = {{"slope", fit.slope},
                                       {"intercept", fit.intercept},
                                       {"r2", fit.r2},
                                       {"expected_slope", 4.0 * a.J}};
    }
    if (!a.out_file.empty()) save_json_file(a.out_file, doc);
    out << doc.dump(2) << "\n";
    return kExitOk;
}

// ---- kmc-sweep / fit ----

struct SweepArgs {
    std::vector<unsigned> Ls{4, 9, 16};
    std::vector<double> beta_inv;
    std::vector<double> beta;
    unsigned trials = 20;
    uint64_t seed = 1;
    double J = 1.0;
    bool exponential_clock = false;
    uint64_t step_cap = 1'000'000'000;
    unsigned threads = 0;
    std::string out_file, fit_out, plot_data;
};

std::string sweep_csv(const MemorySweepResult& res, const SweepArgs& a,
                      const std::vector<double>& betas) {
    std::ostringstream csv;
    csv << "# selfcorrect kmc-sweep L=" << fmt_ulist(a.Ls) << " beta=" << fmt_list(betas)
        << " trials=" << a.trials << " seed=" << a.seed << " J=" << fmt(a.J)
        << " clock=" << (a.exponential_clock ? "exponential" : "deterministic")
        << " step_cap=" << a.step_cap << "\n";
    csv << "L,beta,trial,tau,steps,timed_out\n";
    for (const auto& row : res.rows)
        csv << row.L << "," << fmt(row.beta) << "," << row.trial << "," << fmt(row.tau) << ","
            << row.steps << "," << (row.timed_out ? 1 : 0) << "\n";
    return csv.str();
}

json fit_json(const MemorySweepResult& res) {
    json doc;
    json points = json::array();
    for (const auto& peak : res.peaks)
        points.push_back(
            {{"beta", peak.beta}, {"tau_max", peak.tau_max}, {"L_at_max", peak.L_at_max}});
    doc["points"] = points;
    if (res.fit) {
        doc["kappa"] = res.kappa;
        doc["kappa_prime"] = res.kappa_prime;
        doc["r2"] = res.fit->r2;
    } else {
        doc["refused"] = res.fit_refused;
    }
    return doc;
}

int cmd_kmc_sweep(const SweepArgs& a, std::ostream& out, std::ostream& err) {
    std::vector<double> betas = a.beta;
    for (double bi : a.beta_inv) {
        if (!(bi > 0)) throw InputError("--beta-inv values must be > 0");
        betas.push_back(1.0 / bi);
    }
    if (betas.empty()) throw InputError("kmc-sweep needs --beta or --beta-inv");

    SweepOptions opt;
    opt.trial.J = a.J;
    opt.trial.exponential_time = a.exponential_clock;
    opt.trial.step_cap = a.step_cap;
    opt.threads = resolve_threads(a.threads);
    MemorySweepResult res = sweep_and_fit(a.Ls, betas, a.trials, a.seed, opt);

    write_output(a.out_file, sweep_csv(res, a, betas), out);
    if (!a.fit_out.empty()) save_json_file(a.fit_out, fit_json(res));
    if (!a.plot_data.empty()) {
        std::ostringstream csv;
        csv << "# selfcorrect kmc-sweep plot data seed=" << a.seed << "\n";
        csv << "beta,L,mean_tau,stderr\n";
        for (const auto& cell : res.cells)
            csv << fmt(cell.beta) << "," << cell.L << "," << fmt(cell.mean_tau) << ","
                << fmt(cell.stderr_tau) << "\n";
        write_text_file(a.plot_data, csv.str());
    }
    uint64_t timeouts = 0;
    for (const auto& row : res.rows) timeouts += row.timed_out ? 1 : 0;
    if (timeouts) {
        err << "kmc-sweep: " << timeouts << " trial(s) hit the step cap\n";
        return kExitTimeout;
    }
    return kExitOk;
}

int cmd_fit(const std::string& in_file, const std::string& out_file, std::ostream& out) {
    std::ifstream in(in_file);
    if (!in) throw InputError("cannot open file: " + in_file);
    std::string line;
    bool header_seen = false;
    MemorySweepResult res;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            if (line.rfind("L,beta,trial,tau", 0) != 0)
                throw InputError("fit: expected sweep CSV header, got: " + line);
            header_seen = true;
            continue;
        }
        SweepRow row;
        if (std::sscanf(line.c_str(), "%u,%lf,%u,%lf,%lu", &row.L, &row.beta, &row.trial, &row.tau,
                        &row.steps) < 4)
            throw InputError("fit: cannot parse row: " + line);
        res.rows.push_back(row);
    }
    if (res.rows.empty()) throw InputError("fit: no data rows in " + in_file);

    // rebuild cells and per-beta peaks
    std::map<std::pair<unsigned, double>, std::vector<double>> cells;
    for (const auto& row : res.rows) cells[{row.L, row.beta}].push_back(row.tau);
    std::map<double, BetaPeak> peaks;
    for (const auto& [key, taus] : cells) {
        double mean = 0;
        for (double t : taus) mean += t;
        mean /= double(taus.size());
        SweepCell cell;
        cell.L = key.first;
        cell.beta = key.second;
        cell.mean_tau = mean;
        cell.trials = unsigned(taus.size());
        res.cells.push_back(cell);
        auto& peak = peaks[key.second];
        peak.beta = key.second;
        if (mean > peak.tau_max) {
            peak.tau_max = mean;
            peak.L_at_max = key.first;
        }
    }
    for (const auto& [beta, peak] : peaks) res.peaks.push_back(peak);
    fit_peaks(res);
    if (!res.fit) throw ContractError("fit refused: " + res.fit_refused);
    json doc = fit_json(res);
    if (!out_file.empty()) save_json_file(out_file, doc);
    out << doc.dump(2) << "\n";
    return kExitOk;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"stabilizer memory code construction and thermal analysis toolkit"};
    app.require_subcommand(1);

    CatalogArgs cat;
    auto* catalog = app.add_subcommand("catalog", "build a code from the catalog");
    catalog->add_option("--variant", cat.variant, "toric2d|toric3d|fractal");
    catalog->add_option("--L", cat.L, "linear size");
    catalog->add_flag("--cubic", cat.cubic, "use the cubic-code polynomials");
    catalog->add_option("--alpha-file", cat.alpha_file, "fractal alpha polynomial JSON");
    catalog->add_option("--beta-file", cat.beta_file, "fractal beta polynomial JSON");
    catalog->add_option("--spec", cat.spec_file, "code spec JSON file");
    catalog->add_option("--out", cat.out, "output code JSON path");

    std::string code_file, out_file;
    auto* decomp = app.add_subcommand("decompose", "ergodic decomposition of a CSS code");
    decomp->add_option("--code", code_file, "code JSON file")->required();
    decomp->add_option("--out", out_file, "output decomposition JSON");

    std::string ve_code, ve_out;
    auto* verify = app.add_subcommand("verify-ergodic", "check the minimal coupling set");
    verify->add_option("--code", ve_code, "code JSON file")->required();
    verify->add_option("--out", ve_out, "output JSON");

    PercolateArgs perc;
    auto* percolate = app.add_subcommand("percolate", "toric sink coverage probability");
    percolate->add_option("--L", perc.Ls, "lattice sizes")->delimiter(',');
    percolate->add_option("--p", perc.ps, "removal probabilities")->delimiter(',');
    percolate->add_option("--c", perc.cs, "grid-area constants")->delimiter(',');
    percolate->add_option("--trials", perc.trials);
    percolate->add_option("--seed", perc.seed);
    percolate->add_option("--out", perc.out_file, "output CSV path");
    percolate->add_option("--format", perc.format, "csv|json");

    SpanArgs span;
    auto* spang = app.add_subcommand("span-growth", "site-diluted span growth statistics");
    spang->alias("lemma3");
    spang->add_option("--f", span.f, "polynomial coefficients c0,c1,... of f(x)")->delimiter(',');
    spang->add_option("--p", span.p, "site probability");
    spang->add_option("--r", span.r, "layers");
    spang->add_option("--trials", span.trials);
    spang->add_option("--seed", span.seed);
    spang->add_flag("--scaling", span.scaling, "emit the minimal box-size table");
    spang->add_option("--p-list", span.p_list, "probabilities for --scaling")->delimiter(',');
    spang->add_option("--eps", span.eps, "target failure probability for --scaling");
    spang->add_option("--trials-per-r", span.trials_per_r);
    spang->add_option("--out", span.out_file, "output CSV path");
    spang->add_option("--format", span.format, "csv|json");

    std::string gc_code, gc_out;
    double gc_beta = 1.0;
    uint64_t gc_samples = 200000, gc_seed = 1;
    auto* gibbs = app.add_subcommand("gibbs-check", "Gibbs vs free-ensemble trace distance");
    gibbs->add_option("--code", gc_code, "code JSON file")->required();
    gibbs->add_option("--beta", gc_beta, "inverse temperature")->required();
    gibbs->add_option("--samples", gc_samples, "mask samples when generators > 20");
    gibbs->add_option("--seed", gc_seed);
    gibbs->add_option("--out", gc_out, "output JSON");

    RemoverArgs rem;
    auto* remover = app.add_subcommand("remover", "excitation remover solver");
    remover->add_option("--code", rem.code_file, "code JSON file")->required();
    remover->add_option("--drop", rem.drop, "X generator indices to remove")->delimiter(',');
    double rem_beta = -1;
    remover->add_option("--beta", rem_beta, "sample the mask at this beta instead of --drop");
    remover->add_option("--seed", rem.seed);
    remover->add_option("--target", rem.target, "target X generator");
    remover->add_option("--r-box", rem.r_box, "box radius (lattice units)");
    remover->add_flag("--classicalize", rem.do_classicalize, "solve for every present X term");
    remover->add_option("--out", rem.out_file, "output JSON");

    FreeEnergyArgs fe;
    auto* free_energy = app.add_subcommand("free-energy", "droplet and barrier analytics");
    free_energy->add_option("--J", fe.J);
    free_energy->add_option("--alpha", fe.alpha);
    free_energy->add_option("--beta-list", fe.betas)->delimiter(',');
    free_energy->add_option("--L-list", fe.Ls)->delimiter(',');
    free_energy->add_flag("--cubic-profile", fe.cubic_profile, "emit the range/barrier profile");
    free_energy->add_option("--c-prime", fe.c_prime);
    free_energy->add_option("--beta", fe.beta_single, "beta for --cubic-profile");
    free_energy->add_flag("--droplet", fe.droplet, "emit the droplet (E, S, F) profile");
    free_energy->add_option("--T", fe.temperature, "temperature for --droplet");
    free_energy->add_option("--b", fe.branching, "branching factor for --droplet");
    free_energy->add_option("--E-list", fe.energies, "energy grid for --droplet")->delimiter(',');
    free_energy->add_option("--out", fe.out_file, "output CSV path");

    LmaxArgs lm;
    auto* lmax = app.add_subcommand("lmax", "optimal size of the barrier bound");
    lmax->add_option("--J", lm.J);
    lmax->add_option("--alpha", lm.alpha);
    lmax->add_option("--beta-list", lm.betas)->delimiter(',');
    lmax->add_option("--grid-ratio", lm.grid_ratio, "geometric grid step");
    lmax->add_option("--out", lm.out_file, "output JSON");

    SweepArgs sw;
    auto* sweep = app.add_subcommand("kmc-sweep", "memory-time sweep on the sparse lattice");
    sweep->add_option("--L", sw.Ls, "lattice sizes (perfect squares)")->delimiter(',');
    sweep->add_option("--beta-inv", sw.beta_inv, "temperatures")->delimiter(',');
    sweep->add_option("--beta", sw.beta, "inverse temperatures")->delimiter(',');
    sweep->add_option("--trials", sw.trials);
    sweep->add_option("--seed", sw.seed);
    sweep->add_option("--J", sw.J);
    sweep->add_flag("--exponential-clock", sw.exponential_clock,
                    "sample exponential holding times instead of their mean");
    sweep->add_option("--step-cap", sw.step_cap);
    sweep->add_option("--threads", sw.threads, "0 = hardware");
    sweep->add_option("--out", sw.out_file, "sweep CSV path");
    sweep->add_option("--fit-out", sw.fit_out, "fit JSON path");
    sweep->add_option("--plot-data", sw.plot_data, "per-beta (L, mean, stderr) CSV path");

    std::string fit_in, fit_out_file;
    auto* fit = app.add_subcommand("fit", "double-exponential fit of a sweep CSV");
    fit->add_option("--in", fit_in, "sweep CSV")->required();
    fit->add_option("--out", fit_out_file, "fit JSON path");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help
            out << app.help();
            return kExitOk;
        }
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (*catalog) return cmd_catalog(cat, out);
        if (*decomp) return cmd_decompose(code_file, out_file, out);
        if (*verify) return cmd_verify_ergodic(ve_code, ve_out, out);
        if (*percolate) return cmd_percolate(perc, out);
        if (*spang) return cmd_span_growth(span, out);
        if (*gibbs) return cmd_gibbs_check(gc_code, gc_beta, gc_samples, gc_seed, gc_out, out);
        if (*remover) {
            if (rem_beta >= 0) rem.beta = rem_beta;
            return cmd_remover(rem, out);
        }
        if (*free_energy) return cmd_free_energy(fe, out);
        if (*lmax) return cmd_lmax(lm, out);
        if (*sweep) return cmd_kmc_sweep(sw, out, err);
        if (*fit) return cmd_fit(fit_in, fit_out_file, out);
    } catch (const InputError& e) {
        err << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const ContractError& e) {
        err << "contract violation: " << e.what() << "\n";
        return kExitContract;
    } catch (const InvalidCodeError& e) {
        err << "invalid code: " << e.what() << "\n";
        return kExitContract;
    }
    err << "no subcommand\n";
    return kExitUsage;
}

}  // namespace selfcorrect
