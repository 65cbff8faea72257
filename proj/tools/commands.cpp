#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "rsf/rsf.hpp"

namespace rsf::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

Grid1D grid_of(const RunConfig& cfg) { return Grid1D(cfg.model.H, cfg.interior()); }

SteadyOptions steady_options(const RunConfig& cfg) {
    SteadyOptions o;
    o.max_iter = cfg.numerics.max_iter;
    o.tol = cfg.numerics.tol;
    o.damping = cfg.numerics.damping;
    return o;
}

fs::path ensure_dir(const std::string& dir) {
    fs::path p(dir);
    fs::create_directories(p);
    return p;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << text;
}

template <class Writer>
void write_with(const fs::path& path, Writer&& w) {
    std::ostringstream os;
    w(os);
    write_text(path, os.str());
}

void write_summary(const RunConfig& cfg, const json& j) {
    write_text(ensure_dir(cfg.output.dir) / "summary.json", j.dump(2) + "\n");
}

// JSON has no NaN; unavailable values become null.
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string indexed(const std::string& stem, std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s_%03zu.csv", stem.c_str(), i);
    return buf;
}

json residuals_json(const SteadyResiduals& r) {
    return {{"theta", num(r.theta)},
            {"pi", num(r.pi)},
            {"constraint", num(r.constraint)},
            {"damage", num(r.damage)},
            {"fixed_point", num(r.fixed_point)}};
}

std::vector<double> or_single(const std::vector<double>& xs, double fallback) {
    return xs.empty() ? std::vector<double>{fallback} : xs;
}

std::function<double(double)> drive(const RunConfig& cfg) {
    const double v = cfg.experiment.v_inf, ramp = cfg.experiment.ramp;
    if (ramp <= 0.0) return [v](double) { return v; };
    return [v, ramp](double t) {
        const double s = std::clamp(t / ramp, 0.0, 1.0);
        return v * s * s * (3.0 - 2.0 * s);
    };
}

}  // namespace

void parallel_for(int n, int threads, const std::function<void(int)>& body) {
    if (n <= 0) return;
    int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::clamp(workers, 1, n);
    if (workers == 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&]() {
            for (int i = next++; i < n; i = next++) body(i);
        });
    for (auto& t : pool) t.join();
}

CommandResult cmd_steady(const RunConfig& cfg) {
    const Grid1D g = grid_of(cfg);
    const double v = cfg.experiment.v_inf;
    const SteadyState st = solve_steady(cfg.model, g, v, steady_options(cfg));
    const fs::path dir = ensure_dir(cfg.output.dir);
    write_with(dir / "steady.csv", [&](std::ostream& os) { write_steady_csv(os, st); });
    CommandResult res;
    res.summary = {{"command", "steady"},
                   {"kappa", cfg.model.kappa},
                   {"v_inf", v},
                   {"sigma", st.sigma},
                   {"h_star", st.h_star()},
                   {"theta_min", st.theta.min()},
                   {"pi_max", st.pi.max()},
                   {"method", st.method},
                   {"iterations", st.iterations},
                   {"residuals", residuals_json(st.residuals)}};
    write_summary(cfg, res.summary);
    return res;
}

CommandResult cmd_sweep_steady(const RunConfig& cfg) {
    const Grid1D g = grid_of(cfg);
    const std::vector<double> kappas = or_single(cfg.experiment.kappa_list, cfg.model.kappa);
    const std::vector<double> vs = or_single(cfg.experiment.v_inf_list, cfg.experiment.v_inf);
    const int nv = static_cast<int>(vs.size());
    const int cells = static_cast<int>(kappas.size()) * nv;

    struct Cell {
        bool ok = false;
        std::string error;
        double sigma = NAN, h_star = NAN, theta_min = NAN, pi_max = NAN;
        std::string csv;
        std::string method;
    };
    std::vector<Cell> out(cells);
    parallel_for(cells, cfg.experiment.threads, [&](int c) {
        ModelParams m = cfg.model;
        m.kappa = kappas[c / nv];
        const double v = vs[c % nv];
        Cell& cell = out[c];
        try {
            const SteadyState st = solve_steady(m, g, v, steady_options(cfg));
            cell.ok = true;
            cell.sigma = st.sigma;
            cell.h_star = st.h_star();
            cell.theta_min = st.theta.min();
            cell.pi_max = st.pi.max();
            cell.method = st.method;
            if (cfg.output.profiles) {
                std::ostringstream os;
                write_steady_csv(os, st);
                cell.csv = os.str();
            }
        } catch (const SolverError& e) {
            cell.error = e.what();
        }
    });

    // results are merged in (kappa, v_inf) order regardless of completion order
    const fs::path dir = ensure_dir(cfg.output.dir);
    std::ostringstream table;
    table << "kappa,v_inf,sigma,h_star,theta_min,pi_max\n";
    json rows = json::array(), failures = json::array();
    for (int c = 0; c < cells; ++c) {
        const double k = kappas[c / nv], v = vs[c % nv];
        const Cell& cell = out[c];
        table << format_number(k) << ',' << format_number(v) << ',' << format_number(cell.sigma) << ','
              << format_number(cell.h_star) << ',' << format_number(cell.theta_min) << ','
              << format_number(cell.pi_max) << '\n';
        char name[64];
        std::snprintf(name, sizeof name, "steady_k%02d_v%02d.csv", c / nv, c % nv);
        if (cell.ok && cfg.output.profiles) write_text(dir / name, cell.csv);
        if (!cell.ok) failures.push_back({{"kappa", k}, {"v_inf", v}, {"error", cell.error}});
        rows.push_back({{"kappa", k}, {"v_inf", v}, {"file", cell.ok && cfg.output.profiles ? name : ""},
                        {"method", cell.method}, {"ok", cell.ok}});
    }
    write_text(dir / "sweep_summary.csv", table.str());
    CommandResult res;
    res.summary = {{"command", "sweep-steady"}, {"cells", rows}, {"failures", failures}};
    if (!failures.empty()) res.exit_code = exit_solver;
    write_summary(cfg, res.summary);
    return res;
}

CommandResult cmd_limit(const RunConfig& cfg) {
    const EffectiveFriction ef(cfg.model.friction, cfg.model.aging);
    const double ps = ef.find_pi_star(), pc = ef.find_pi_circ();
    const PlateauProfile pl = ef.plateau_solution(cfg.experiment.v_inf, cfg.model.H);
    const fs::path dir = ensure_dir(cfg.output.dir);

    write_with(dir / "R_hull.csv", [&](std::ostream& os) {
        os << "pi,mu_tilde,R,R_hull\n";
        const int n = 1000;
        for (int k = 0; k <= n; ++k) {
            const double p = cfg.experiment.pi_max * k / n;
            const auto [r, hull] = ef.R_and_hull(p);
            os << format_number(p) << ',' << format_number(ef.mu_tilde(p)) << ',' << format_number(r) << ','
               << format_number(hull) << '\n';
        }
    });
    const Grid1D g = grid_of(cfg);
    write_with(dir / "plateau.csv", [&](std::ostream& os) {
        os << "x,theta,pi\n";
        for (int i = 0; i < g.size(); ++i) {
            const double x = g.x(i);
            const bool in = pl.uniform || std::fabs(x) < pl.h;
            os << format_number(x) << ',' << format_number(in ? pl.theta_in : pl.theta_out) << ','
               << format_number(in ? pl.pi_in : pl.pi_out) << '\n';
        }
    });

    CommandResult res;
    res.summary = {{"command", "limit"},
                   {"pi_star", ps},
                   {"pi_circ", pc},
                   {"mu_tilde_pi_star", ef.mu_tilde(ps)},
                   {"tangency_gap", ef.tangency_gap(ps)},
                   {"R_second_at_zero", ef.R_second_at_zero()},
                   {"plateau",
                    {{"v_inf", cfg.experiment.v_inf},
                     {"h", pl.h},
                     {"theta_in", pl.theta_in},
                     {"pi_in", pl.pi_in},
                     {"theta_out", pl.theta_out},
                     {"pi_out", pl.pi_out},
                     {"uniform", pl.uniform}}}};
    write_summary(cfg, res.summary);
    return res;
}

CommandResult cmd_evolve(const RunConfig& cfg) {
    const ModelParams& m = cfg.model;
    if (!(m.rho > 0.0)) throw ConfigError("evolve-full needs model.rho > 0");
    if (m.stiffness.mode != StiffnessMode::constant) throw ConfigError("evolve-full supports constant stiffness only");
    const auto& e = cfg.experiment;
    if (e.start == "steady" && e.ramp > 0.0) throw ConfigError("a v_inf ramp requires experiment.start = 'rest'");
    const Grid1D g = grid_of(cfg);
    const auto vfun = drive(cfg);

    EvolState init;
    std::optional<SteadyState> ref;
    if (e.start == "steady") {
        ref = solve_steady(m, g, e.v_inf, steady_options(cfg));
        init = state_from_profiles(m, ref->theta, ref->pi, ref->sigma, e.v_inf, e.perturbation);
    } else {
        init = initial_state(m, g, vfun(0.0));
        if (e.theta0)
            for (int i = 1; i + 1 < g.size(); ++i) init.theta[i] = *e.theta0;
    }
    EvolutionOptions opt;
    opt.probes = e.probes;
    opt.ledger_every = e.ledger_every;
    const EvolutionResult r = run_evolution(m, g, vfun, e.T, cfg.numerics.tau, std::move(init), opt);

    const fs::path dir = ensure_dir(cfg.output.dir);
    write_with(dir / "ledger.csv", [&](std::ostream& os) { write_ledger_csv(os, r.ledger_rows); });
    write_with(dir / "final.csv", [&](std::ostream& os) { write_profile_csv(os, r.final_state); });
    json probes = json::array();
    if (cfg.output.profiles)
        for (std::size_t i = 0; i < r.snapshots.size(); ++i) {
            write_with(dir / indexed("profile", i), [&](std::ostream& os) { write_profile_csv(os, r.snapshots[i]); });
            probes.push_back({{"t", r.snapshots[i].t}, {"file", indexed("profile", i)}});
        }
    CommandResult res;
    res.summary = {{"command", "evolve-full"},
                   {"steps", r.steps},
                   {"theta_min_seen", r.theta_min_seen},
                   {"theta_max_seen", r.theta_max_seen},
                   {"functional_monotone", r.functional_monotone},
                   {"max_kkt", r.max_kkt},
                   {"ledger",
                    {{"kinetic", r.ledger.kinetic},
                     {"stored", r.ledger.stored},
                     {"dissipated", r.ledger.dissipated},
                     {"work", r.ledger.work},
                     {"residual", r.ledger.residual}}},
                   {"probes", probes}};
    if (ref) {
        res.summary["steady_sigma"] = ref->sigma;
        res.summary["distance_theta"] = sup_distance(r.final_state.theta, ref->theta);
        res.summary["distance_pi"] = sup_distance(r.final_state.pi, ref->pi);
    }
    write_summary(cfg, res.summary);
    return res;
}

CommandResult cmd_sm(const RunConfig& cfg) {
    ModelParams m = cfg.model;
    m.eta = 0.0;  // the simplified model has no gradient term
    const auto& e = cfg.experiment;
    const Grid1D g = grid_of(cfg);
    const double tinf = m.aging.theta_inf;

    std::optional<SteadyState> ref;
    try {
        ref = solve_steady(m, g, e.v_inf, steady_options(cfg));
    } catch (const SolverError&) {
        if (e.start == "steady") throw;
    }
    Field theta0(g, tinf);
    double sigma0 = e.sigma0.value_or(0.0);
    if (e.start == "steady") {
        theta0 = perturbed_profile(ref->theta, e.perturbation, tinf);
        sigma0 = e.sigma0.value_or(ref->sigma);
    } else if (e.theta0) {
        for (int i = 1; i + 1 < g.size(); ++i) theta0[i] = *e.theta0;
    }
    SmRunOptions opt;
    opt.probes = e.probes;
    opt.record_every = e.record_every;
    const double v = e.v_inf;
    const SmTrajectory tr = run_sm(m, [v](double) { return v; }, e.T, cfg.numerics.tau, theta0, sigma0, opt);
    RegimeReport rep = detect_regime(tr.rows);
    if (ref)
        rep.distance = std::max(sup_distance(tr.final_state.theta, ref->theta), std::fabs(tr.final_state.sigma - ref->sigma));

    long stick = 0;
    for (const auto& r : tr.rows)
        if (r.int_pi == 0.0) ++stick;
    double support = 0.0;
    for (const auto& p : tr.profiles)
        for (int i = 0; i < p.pi.size(); ++i)
            if (p.pi[i] > 0.0) support = std::max(support, std::fabs(g.x(i)));

    const fs::path dir = ensure_dir(cfg.output.dir);
    write_with(dir / "trajectory.csv", [&](std::ostream& os) { write_sm_csv(os, tr.rows); });
    json probes = json::array();
    if (cfg.output.profiles)
        for (std::size_t i = 0; i < tr.profiles.size(); ++i) {
            const auto& p = tr.profiles[i];
            write_with(dir / indexed("profile", i), [&](std::ostream& os) {
                os << "x,theta,pi\n";
                for (int j = 0; j < g.size(); ++j)
                    os << format_number(g.x(j)) << ',' << format_number(p.theta[j]) << ',' << format_number(p.pi[j])
                       << '\n';
            });
            probes.push_back({{"t", p.t}, {"file", indexed("profile", i)}});
        }
    const json regime = {{"verdict", verdict_name(rep.verdict)},
                         {"period", rep.period},
                         {"amplitude", rep.amplitude},
                         {"distance", num(rep.distance)},
                         {"maxima", rep.maxima}};
    write_text(dir / "regime.jsonl", regime.dump() + "\n");

    CommandResult res;
    res.summary = {{"command", "evolve-sm"},
                   {"kappa", m.kappa},
                   {"v_inf", v},
                   {"tau", tr.tau},
                   {"regime", regime},
                   {"stick_rows", stick},
                   {"rows", tr.rows.size()},
                   {"probe_support", support},
                   {"theta_min_seen", tr.theta_min_seen},
                   {"theta_max_seen", tr.theta_max_seen},
                   {"probes", probes}};
    if (ref) res.summary["steady_sigma"] = ref->sigma;
    write_summary(cfg, res.summary);
    return res;
}

CommandResult cmd_slider(const RunConfig& cfg) {
    const ModelParams& m = cfg.model;
    const auto& e = cfg.experiment;
    const SliderState fp = slider_fixed_point(e.v_inf, e.h, m);
    SliderState s0;
    if (e.start == "steady") s0 = {fp.sigma + e.perturbation, fp.theta_bar};
    else s0 = {0.0, m.aging.theta_inf};
    if (e.sigma0) s0.sigma = *e.sigma0;
    if (e.theta0) s0.theta_bar = *e.theta0;
    const auto tr = slider_integrate(s0, e.v_inf, e.h, e.T, cfg.numerics.dt, m, e.record_every);
    const CycleReport cyc = detect_cycle(tr);

    json stability;
    try {
        const SliderStability st = slider_stability(e.v_inf, e.h, m);
        stability = {{"max_real", st.max_real},
                     {"stable", st.stable},
                     {"eigenvalues",
                      {{st.eigenvalues[0].real(), st.eigenvalues[0].imag()},
                       {st.eigenvalues[1].real(), st.eigenvalues[1].imag()}}}};
    } catch (const StickBranch&) {
        stability = {{"stick", true}};
    }
    const fs::path dir = ensure_dir(cfg.output.dir);
    write_with(dir / "phase.csv", [&](std::ostream& os) {
        os << "t,sigma,theta_bar,pi\n";
        for (const auto& r : tr)
            os << format_number(r.t) << ',' << format_number(r.sigma) << ',' << format_number(r.theta_bar) << ','
               << format_number(r.pi) << '\n';
    });
    const auto& last = tr.back();
    CommandResult res;
    res.summary = {{"command", "slider"},
                   {"v_inf", e.v_inf},
                   {"h", e.h},
                   {"start", {s0.sigma, s0.theta_bar}},
                   {"fixed_point", {fp.sigma, fp.theta_bar}},
                   {"stability", stability},
                   {"cycle", {{"detected", cyc.cycle}, {"amplitude", cyc.amplitude}, {"drift", cyc.amplitude_drift}}},
                   {"final_distance", std::hypot(last.sigma - fp.sigma, last.theta_bar - fp.theta_bar)}};
    write_summary(cfg, res.summary);
    return res;
}

CommandResult cmd_slider_bifurcate(const RunConfig& cfg) {
    const ModelParams& m = cfg.model;
    const auto& e = cfg.experiment;
    SliderSearch search;
    search.dt = cfg.numerics.dt;
    const int n = e.samples;
    struct Row {
        double v, max_re;
        bool stable, cycle;
    };
    std::vector<Row> rows(n);
    parallel_for(n, e.threads, [&](int k) {
        const double v = e.v_min + (e.v_max - e.v_min) * k / (n - 1);
        Row r{v, NAN, false, false};
        try {
            const SliderStability st = slider_stability(v, e.h, m);
            r.max_re = st.max_real;
            r.stable = st.stable;
        } catch (const StickBranch&) {
        }
        r.cycle = slider_has_cycle(v, e.h, m, search);
        rows[k] = r;
    });
    const double v1 = find_v1(e.h, m, search);
    const double v2 = find_v2(e.h, m, search);
    const fs::path dir = ensure_dir(cfg.output.dir);
    write_with(dir / "bifurcation.csv", [&](std::ostream& os) {
        os << "v_inf,max_re_eig,stable,limit_cycle\n";
        for (const auto& r : rows)
            os << format_number(r.v) << ',' << format_number(r.max_re) << ',' << (r.stable ? 1 : 0) << ','
               << (r.cycle ? 1 : 0) << '\n';
    });
    CommandResult res;
    res.summary = {{"command", "slider-bifurcate"}, {"h", e.h}, {"v1", v1}, {"v2", v2}};
    write_summary(cfg, res.summary);
    return res;
}

std::vector<std::string> command_names() {
    return {"steady", "sweep-steady", "limit", "evolve-full", "evolve-sm", "slider", "slider-bifurcate"};
}

CommandResult dispatch(const std::string& command, const RunConfig& cfg) {
    static const std::map<std::string, CommandResult (*)(const RunConfig&)> table = {
        {"steady", cmd_steady},      {"sweep-steady", cmd_sweep_steady}, {"limit", cmd_limit},
        {"evolve-full", cmd_evolve}, {"evolve-sm", cmd_sm},              {"slider", cmd_slider},
        {"slider-bifurcate", cmd_slider_bifurcate},
    };
    const auto it = table.find(command);
    if (it == table.end()) throw ConfigError("unknown command '" + command + "'");
    return it->second(cfg);
}

std::vector<std::string> preset_names() { return {"fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9"}; }

std::vector<PresetJob> preset_jobs(const std::string& name, const RunConfig& base) {
    const std::vector<double> v_grid = {0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 5.0};
    auto job = [&](const std::string& cmd, const std::string& sub, auto&& edit) {
        RunConfig c = base;
        edit(c);
        c.output.dir = (fs::path(base.output.dir) / name / sub).string();
        c.validate();
        return PresetJob{cmd, sub, c};
    };
    std::vector<PresetJob> jobs;
    if (name == "fig3") {
        for (double v : {0.12, 0.17}) {
            jobs.push_back(job("slider", "v" + format_number(v), [&](RunConfig& c) {
                c.experiment.v_inf = v;
                c.experiment.h = 0.3;
                c.experiment.T = 300.0;
                c.experiment.start = "steady";
                c.experiment.perturbation = 1e-3;
            }));
        }
        jobs.push_back(job("slider", "v0.18", [&](RunConfig& c) {
            c.experiment.v_inf = 0.18;
            c.experiment.h = 0.3;
            c.experiment.T = 300.0;
            c.experiment.sigma0 = 3.0;
            c.experiment.theta0 = 8.0;
        }));
    } else if (name == "fig4" || name == "fig5") {
        jobs.push_back(job("sweep-steady", "sweep", [&](RunConfig& c) {
            c.experiment.kappa_list = {0.01, 0.04, 0.16, 0.64};
            c.experiment.v_inf_list = v_grid;
        }));
    } else if (name == "fig6") {
        jobs.push_back(job("limit", "limit", [&](RunConfig& c) { c.experiment.v_inf = 0.4; }));
        jobs.push_back(job("sweep-steady", "sweep", [&](RunConfig& c) {
            c.experiment.kappa_list = {0.03, 0.01, 0.003, 0.001, 0.0003, 0.0001};
            c.experiment.v_inf_list = {0.4, 0.8, 1.2};
        }));
    } else if (name == "fig7") {
        jobs.push_back(job("evolve-sm", "k0.16_v0.6", [&](RunConfig& c) {
            c.model.kappa = 0.16;
            c.experiment.v_inf = 0.6;
            c.experiment.T = 200.0;
            c.experiment.record_every = 10;
            c.experiment.probes = {0, 10, 20, 50, 100, 200};
        }));
        jobs.push_back(job("evolve-sm", "k0.004_v0.2", [&](RunConfig& c) {
            c.model.kappa = 0.004;
            c.experiment.v_inf = 0.2;
            c.experiment.T = 1000.0;
            c.experiment.record_every = 10;
            c.experiment.probes = {0, 50, 100, 200, 500, 1000};
        }));
    } else if (name == "fig8") {
        jobs.push_back(job("evolve-sm", "k0.04_v0.15", [&](RunConfig& c) {
            c.model.kappa = 0.04;
            c.experiment.v_inf = 0.15;
            c.experiment.T = 1000.0;
            c.experiment.record_every = 10;
            c.experiment.probes.clear();
            for (int k = 0; k <= 40; ++k) c.experiment.probes.push_back(900.0 + 2.5 * k);
        }));
    } else if (name == "fig9") {
        jobs.push_back(job("slider", "near", [&](RunConfig& c) {
            c.experiment.v_inf = 0.175;
            c.experiment.h = 0.3;
            c.experiment.T = 2000.0;
            c.experiment.start = "steady";
            c.experiment.perturbation = 1e-3;
            c.experiment.record_every = 10;
        }));
        jobs.push_back(job("slider", "far", [&](RunConfig& c) {
            c.experiment.v_inf = 0.175;
            c.experiment.h = 0.3;
            c.experiment.T = 2000.0;
            c.experiment.sigma0 = 3.0;
            c.experiment.theta0 = 8.0;
            c.experiment.record_every = 10;
        }));
        jobs.push_back(job("slider-bifurcate", "bifurcation", [&](RunConfig& c) {
            c.experiment.h = 0.3;
            c.experiment.v_min = 0.170;
            c.experiment.v_max = 0.180;
            c.experiment.samples = 21;
        }));
    } else {
        throw ConfigError("unknown preset '" + name + "'");
    }
    return jobs;
}

CommandResult cmd_repro(const std::string& name, const RunConfig& base) {
    CommandResult res;
    res.summary = {{"command", "repro"}, {"preset", name}, {"jobs", json::array()}};
    for (const auto& j : preset_jobs(name, base)) {
        const CommandResult r = dispatch(j.command, j.config);
        res.exit_code = std::max(res.exit_code, r.exit_code);
        res.summary["jobs"].push_back({{"command", j.command}, {"dir", j.subdir}, {"summary", r.summary}});
    }
    RunConfig top = base;
    top.output.dir = (fs::path(base.output.dir) / name).string();
    write_summary(top, res.summary);
    return res;
}

int run_guarded(const std::function<CommandResult()>& fn) {
    try {
        const CommandResult r = fn();
        std::cout << r.summary.dump(2) << '\n';
        return r.exit_code;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const SolverError& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return exit_solver;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_solver;
    }
}

}  // namespace rsf::cli
