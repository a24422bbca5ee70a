#include "frozenrb/experiment.hpp"

#include "frozenrb/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace frozenrb {

namespace fs = std::filesystem;

int StudyConfig::m_for(int n) const {
    return static_cast<int>(std::lround(m_factor * n));
}

void StudyConfig::validate() const {
    if (nx < 2 || ny < 2)
        throw std::invalid_argument("config: need nx >= 2 and ny >= 2");
    if (!(lx > 0.0) || !(ly > 0.0))
        throw std::invalid_argument("config: domain extents must be positive");
    if (steps < 1)
        throw std::invalid_argument("config: need steps >= 1");
    if (!(t_final > 0.0))
        throw std::invalid_argument("config: need t_final > 0");
    if (!(mu_min >= 1.0) || !(mu_max >= mu_min))
        throw std::invalid_argument("config: need 1 <= mu_min <= mu_max");
    if (training_mus.empty())
        throw std::invalid_argument("config: empty training set");
    for (double mu : training_mus)
        if (mu < mu_min || mu > mu_max)
            throw std::invalid_argument("config: training mu outside [mu_min, mu_max]");
    if (n_list.empty())
        throw std::invalid_argument("config: empty N sweep");
    for (int n : n_list)
        if (n < 1)
            throw std::invalid_argument("config: N values must be positive");
    if (!(m_factor > 0.0))
        throw std::invalid_argument("config: m_factor must be positive");
    if (test_count < 1)
        throw std::invalid_argument("config: need test_count >= 1");
}

StudyConfig preset_config(const std::string& name) {
    StudyConfig cfg;  // defaults are the paper-burgers preset
    if (name == "paper-burgers")
        return cfg;
    if (name == "half-burgers") {
        cfg.nx = 60;
        cfg.ny = 30;
        return cfg;
    }
    throw std::invalid_argument("unknown preset: " + name);
}

namespace {

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(std::stod(item));
    return out;
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    for (double v : parse_double_list(s))
        out.push_back(static_cast<int>(std::lround(v)));
    return out;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos)
        return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace

StudyConfig parse_config(const std::string& path, const std::string& preset) {
    StudyConfig cfg = preset_config(preset);
    std::ifstream is(path);
    if (!is)
        throw std::runtime_error("parse_config: cannot open " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("parse_config: malformed line " + std::to_string(lineno));
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key == "nx") cfg.nx = std::stoi(val);
        else if (key == "ny") cfg.ny = std::stoi(val);
        else if (key == "lx") cfg.lx = std::stod(val);
        else if (key == "ly") cfg.ly = std::stod(val);
        else if (key == "t_final") cfg.t_final = std::stod(val);
        else if (key == "steps") cfg.steps = std::stoi(val);
        else if (key == "mu_min") cfg.mu_min = std::stod(val);
        else if (key == "mu_max") cfg.mu_max = std::stod(val);
        else if (key == "training_mus") cfg.training_mus = parse_double_list(val);
        else if (key == "n_list") cfg.n_list = parse_int_list(val);
        else if (key == "m_factor") cfg.m_factor = std::stod(val);
        else if (key == "test_count") cfg.test_count = std::stoi(val);
        else if (key == "seed") cfg.seed = std::stoull(val);
        else if (key == "pod_tol") cfg.pod_tol = std::stod(val);
        else if (key == "ei_tol") cfg.ei_tol = std::stod(val);
        else if (key == "output_dir") cfg.output_dir = val;
        else
            throw std::runtime_error("parse_config: unknown key '" + key + "' at line " +
                                     std::to_string(lineno));
    }
    cfg.validate();
    return cfg;
}

Field study_initial(const GridSpec& grid) {
    using std::numbers::pi;
    return project_initial(grid, [](double x, double y) {
        return 0.5 * (1.0 + std::sin(2.0 * pi * x) * std::sin(2.0 * pi * y));
    });
}

std::vector<double> draw_test_parameters(const StudyConfig& cfg) {
    std::mt19937_64 rng(cfg.seed);
    std::vector<double> mus;
    mus.reserve(cfg.test_count);
    for (int i = 0; i < cfg.test_count; ++i) {
        // top 53 bits -> uniform double in [0,1)
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        mus.push_back(cfg.mu_min + (cfg.mu_max - cfg.mu_min) * u);
    }
    return mus;
}

namespace {

void save_field_sequence(const std::vector<Field>& fields, const fs::path& dir, int stride,
                         const char* stem) {
    fs::create_directories(dir);
    const int K = static_cast<int>(fields.size()) - 1;
    char name[64];
    for (int k = 0; k <= K; ++k) {
        if (k % stride != 0 && k != K)
            continue;
        std::snprintf(name, sizeof(name), "%s_%05d.field", stem, k);
        save_field(fields[k], (dir / name).string());
    }
}

}  // namespace

DetailedRunResult run_detailed(const StudyConfig& cfg, double mu, int stride) {
    cfg.validate();
    if (mu < cfg.mu_min || mu > cfg.mu_max)
        throw std::invalid_argument("run_detailed: mu outside [mu_min, mu_max]");
    if (stride < 1)
        throw std::invalid_argument("run_detailed: stride must be >= 1");
    const GridSpec grid = cfg.grid();
    const Field u0 = study_initial(grid);
    const BurgersParams p(mu);

    DetailedRunResult res{solve_frozen(p, u0, cfg.t_final, cfg.steps),
                          solve_unfrozen(p, u0, cfg.t_final, cfg.steps)};

    char sub[64];
    std::snprintf(sub, sizeof(sub), "detailed_mu%.4f", mu);
    const fs::path base = fs::path(cfg.output_dir) / sub;
    save_trajectory(res.frozen, (base / "frozen").string(), stride);
    save_field_sequence(res.unfrozen, base / "unfrozen", stride, "u");
    save_field_sequence(reconstruct_solution(res.frozen), base / "reconstructed", stride, "u");
    return res;
}

OfflineResult run_offline(const StudyConfig& cfg) {
    cfg.validate();
    const GridSpec grid = cfg.grid();
    const Field u0 = study_initial(grid);
    const int n_max = *std::max_element(cfg.n_list.begin(), cfg.n_list.end());
    const int m_max = cfg.m_for(n_max);

    OfflineResult out;
    out.model.grid = grid;
    out.model.t_final = cfg.t_final;
    out.model.steps = cfg.steps;
    out.model.training_mus = cfg.training_mus;
    out.model.pod_tol = cfg.pod_tol;
    out.model.ei_tol = cfg.ei_tol;

    {
        SnapshotSet snaps = collect_snapshots(cfg.training_mus, cfg.t_final, cfg.steps, u0);
        PodGreedyResult pg = pod_greedy(snaps, n_max, cfg.pod_tol);
        if (pg.stagnated)
            std::cerr << "run_offline: POD-Greedy (frozen) stagnated\n";
        std::vector<Field> op_fields;
        op_fields.reserve(snaps.ops.size());
        for (const auto& o : snaps.ops)
            op_fields.push_back(o.field);
        out.model.frozen.basis = std::move(pg.basis);
        out.model.frozen.greedy_log = std::move(pg.log);
        out.model.frozen.ei = ei_greedy(op_fields, m_max, cfg.ei_tol);
    }
    {
        SnapshotSet snaps = collect_unfrozen_snapshots(cfg.training_mus, cfg.t_final, cfg.steps, u0);
        PodGreedyResult pg = pod_greedy(snaps, n_max, cfg.pod_tol);
        if (pg.stagnated)
            std::cerr << "run_offline: POD-Greedy (unfrozen) stagnated\n";
        std::vector<Field> op_fields;
        op_fields.reserve(snaps.ops.size());
        for (const auto& o : snaps.ops)
            op_fields.push_back(o.field);
        out.model.unfrozen.basis = std::move(pg.basis);
        out.model.unfrozen.greedy_log = std::move(pg.log);
        out.model.unfrozen.ei = ei_greedy(op_fields, m_max, cfg.ei_tol);
    }

    out.model_dir = (fs::path(cfg.output_dir) / "model").string();
    save_model(out.model, out.model_dir);
    return out;
}

namespace {

std::string g17(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct SchemeRun {
    double error = 0.0;
    bool aborted = false;
    std::vector<double> per_step;  // L2 error at every time level
};

// max over k of the L2 distance between detailed states and lifted reduced
// coefficients; +inf when the reduced solver aborts
SchemeRun reduced_error(const std::vector<Field>& detailed, const OnlineSystem& sys,
                        const ReducedBasis& rb, const BurgersParams& p, const Field& u0,
                        double T, int K, bool freeze) {
    SchemeRun run;
    ReducedTrajectory traj;
    try {
        traj = freeze ? solve_reduced(p, sys, rb, u0, T, K)
                      : solve_reduced_unfrozen(p, sys, rb, u0, T, K);
    } catch (const SolverAbort&) {
        run.aborted = true;
        run.error = std::numeric_limits<double>::infinity();
        return run;
    }
    run.per_step.reserve(K + 1);
    for (int k = 0; k <= K; ++k) {
        Field diff = lift(traj.states[k].c, rb);
        diff.values -= detailed[k].values;
        run.per_step.push_back(l2_norm(diff));
        run.error = std::max(run.error, run.per_step.back());
    }
    return run;
}

}  // namespace

StudyResult run_study(const StudyConfig& cfg, const OfflineModel& model) {
    cfg.validate();
    if (!(model.grid == cfg.grid()))
        throw std::invalid_argument("run_study: model grid does not match configuration");
    const Field u0 = study_initial(model.grid);
    const std::vector<double> test_mus = draw_test_parameters(cfg);

    // assemble one online system per (pipeline, N)
    struct Assembled {
        int n, m;
        ReducedBasis rb_frozen, rb_unfrozen;
        OnlineSystem sys_frozen, sys_unfrozen;
        bool ok_frozen = true, ok_unfrozen = true;
    };
    std::vector<Assembled> systems;
    for (int n : cfg.n_list) {
        Assembled a;
        a.n = n;
        a.m = cfg.m_for(n);
        a.ok_frozen = n <= model.frozen.basis.size() && a.m <= model.frozen.ei.size();
        a.ok_unfrozen = n <= model.unfrozen.basis.size() && a.m <= model.unfrozen.ei.size();
        if (a.ok_frozen) {
            a.rb_frozen = truncate(model.frozen.basis, n);
            a.sys_frozen = assemble_online(a.rb_frozen, truncate(model.frozen.ei, a.m));
        } else {
            std::cerr << "run_study: frozen model too small for N = " << n << ", skipping\n";
        }
        if (a.ok_unfrozen) {
            a.rb_unfrozen = truncate(model.unfrozen.basis, n);
            a.sys_unfrozen = assemble_online(a.rb_unfrozen, truncate(model.unfrozen.ei, a.m));
        } else {
            std::cerr << "run_study: unfrozen model too small for N = " << n << ", skipping\n";
        }
        systems.push_back(std::move(a));
    }

    // error[scheme][n_index][test_index]
    std::vector<std::vector<SchemeRun>> frozen_runs(systems.size()),
        unfrozen_runs(systems.size());
    for (auto& v : frozen_runs)
        v.resize(test_mus.size());
    for (auto& v : unfrozen_runs)
        v.resize(test_mus.size());

    for (std::size_t ti = 0; ti < test_mus.size(); ++ti) {
        const BurgersParams p(test_mus[ti]);
        const FrozenTrajectory frozen = solve_frozen(p, u0, cfg.t_final, cfg.steps);
        const std::vector<Field> unfrozen = solve_unfrozen(p, u0, cfg.t_final, cfg.steps);
        for (std::size_t si = 0; si < systems.size(); ++si) {
            const Assembled& a = systems[si];
            if (a.ok_frozen)
                frozen_runs[si][ti] = reduced_error(frozen.vs, a.sys_frozen, a.rb_frozen, p, u0,
                                                    cfg.t_final, cfg.steps, true);
            if (a.ok_unfrozen)
                unfrozen_runs[si][ti] = reduced_error(unfrozen, a.sys_unfrozen, a.rb_unfrozen, p,
                                                      u0, cfg.t_final, cfg.steps, false);
        }
    }

    StudyResult result;
    for (std::size_t si = 0; si < systems.size(); ++si) {
        const Assembled& a = systems[si];
        for (int scheme = 0; scheme < 2; ++scheme) {
            const bool frozen_scheme = scheme == 0;
            if (frozen_scheme ? !a.ok_frozen : !a.ok_unfrozen)
                continue;
            const auto& runs = frozen_scheme ? frozen_runs[si] : unfrozen_runs[si];
            StudySummaryRow sum;
            sum.scheme = frozen_scheme ? "frozen" : "unfrozen";
            sum.n = a.n;
            sum.m = a.m;
            sum.max_error = -1.0;
            for (std::size_t ti = 0; ti < runs.size(); ++ti) {
                result.rows.push_back({sum.scheme, a.n, a.m, test_mus[ti], runs[ti].error,
                                       runs[ti].aborted});
                if (runs[ti].aborted)
                    ++sum.aborts;
                if (runs[ti].error > sum.max_error) {
                    sum.max_error = runs[ti].error;
                    sum.worst_mu = test_mus[ti];
                }
            }
            result.summary.push_back(std::move(sum));
        }
    }

    fs::create_directories(cfg.output_dir);
    result.errors_csv = (fs::path(cfg.output_dir) / "study_errors.csv").string();
    result.summary_csv = (fs::path(cfg.output_dir) / "study_summary.csv").string();
    result.plot_svg = (fs::path(cfg.output_dir) / "study_plot.svg").string();

    {
        std::ofstream os(result.errors_csv);
        os << "# per-parameter reduction errors, one row per (scheme, N, test parameter)\n"
           << "# error: max over time steps k of the spatial L2 distance between the reduced\n"
           << "# approximation (lifted) and the same scheme's detailed trajectory\n"
           << "# seed = " << cfg.seed << ", test_count = " << cfg.test_count << "\n"
           << "scheme,N,M,mu,error,status\n";
        for (const auto& r : result.rows)
            os << r.scheme << "," << r.n << "," << r.m << "," << g17(r.mu) << ","
               << (r.aborted ? "inf" : g17(r.error)) << "," << (r.aborted ? "abort" : "ok")
               << "\n";
    }
    {
        std::ofstream os(result.summary_csv);
        os << "# aggregate: max error over the test parameters per (scheme, N)\n"
           << "scheme,N,M,max_error,worst_mu,aborts\n";
        for (const auto& s : result.summary)
            os << s.scheme << "," << s.n << "," << s.m << ","
               << (std::isinf(s.max_error) ? "inf" : g17(s.max_error)) << "," << g17(s.worst_mu)
               << "," << s.aborts << "\n";
    }

    std::vector<PlotSeries> series(2);
    series[0] = {"frozen", "#1f77b4", {}};
    series[1] = {"unfrozen", "#d62728", {}};
    for (const auto& s : result.summary) {
        const int idx = (s.scheme == "frozen") ? 0 : 1;
        if (std::isfinite(s.max_error))
            series[idx].points.push_back({static_cast<double>(s.n), s.max_error});
    }
    write_svg_line_plot(result.plot_svg, "Reduction error vs basis size", "N",
                        "max L2 error over test parameters", series, true);
    return result;
}

StudyResult run_study(const StudyConfig& cfg, const std::string& model_dir) {
    return run_study(cfg, load_model(model_dir));
}

}  // namespace frozenrb
