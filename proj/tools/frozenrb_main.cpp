// Command line driver: detailed simulation, offline reduction, single online
// run, and the full N-sweep error study.

#include "frozenrb/experiment.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

using namespace frozenrb;

namespace {

struct CommonOpts {
    std::string config;
    std::string preset = "paper-burgers";
    std::string out;
    int nx = 0, ny = 0;  // 0 = keep configured value
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config, "plain-text key=value configuration file");
    cmd->add_option("--preset", o.preset, "named preset: paper-burgers or half-burgers");
    cmd->add_option("--out", o.out, "output directory (overrides the configured one)");
    cmd->add_option("--nx", o.nx, "grid override: cells in x");
    cmd->add_option("--ny", o.ny, "grid override: cells in y");
}

StudyConfig make_config(const CommonOpts& o) {
    StudyConfig cfg = o.config.empty() ? preset_config(o.preset) : parse_config(o.config, o.preset);
    if (!o.out.empty())
        cfg.output_dir = o.out;
    if (o.nx > 0)
        cfg.nx = o.nx;
    if (o.ny > 0)
        cfg.ny = o.ny;
    cfg.validate();
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"freezing + reduced-basis solver for the periodic 2D Burgers-type problem"};
    app.require_subcommand(1);

    CommonOpts sim_opts;
    double sim_mu = 1.5;
    int sim_stride = 10;
    CLI::App* sim = app.add_subcommand("simulate", "run the detailed frozen and unfrozen solvers");
    add_common(sim, sim_opts);
    sim->add_option("--mu", sim_mu, "problem parameter in [mu_min, mu_max]")->required();
    sim->add_option("--stride", sim_stride, "persist every stride-th field");

    CommonOpts off_opts;
    CLI::App* off = app.add_subcommand("offline", "build and persist the reduced model");
    add_common(off, off_opts);

    CommonOpts onl_opts;
    std::string onl_model;
    double onl_mu = 1.5;
    int onl_n = 20, onl_m = 0;
    bool onl_unfrozen = false;
    CLI::App* onl = app.add_subcommand("online", "single reduced run from a persisted model");
    add_common(onl, onl_opts);
    onl->add_option("--model", onl_model, "model directory written by `offline`")->required();
    onl->add_option("--mu", onl_mu, "problem parameter")->required();
    onl->add_option("--n", onl_n, "reduced basis size");
    onl->add_option("--m", onl_m, "interpolation points (default round(m_factor*N))");
    onl->add_flag("--unfrozen", onl_unfrozen, "run the baseline scheme without freezing");

    CommonOpts study_opts;
    std::string study_model;
    std::uint64_t study_seed = 0;
    CLI::App* study = app.add_subcommand("study", "N-sweep error comparison (CSV + SVG)");
    add_common(study, study_opts);
    study->add_option("--model", study_model, "model directory written by `offline`")->required();
    CLI::Option* seed_opt = study->add_option("--seed", study_seed, "test parameter seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sim) {
            const StudyConfig cfg = make_config(sim_opts);
            run_detailed(cfg, sim_mu, sim_stride);
            std::cout << "detailed trajectories written under " << cfg.output_dir << "\n";
        } else if (*off) {
            const StudyConfig cfg = make_config(off_opts);
            const OfflineResult res = run_offline(cfg);
            std::cout << "model written to " << res.model_dir << " (frozen basis "
                      << res.model.frozen.basis.size() << ", unfrozen basis "
                      << res.model.unfrozen.basis.size() << ", M " << res.model.frozen.ei.size()
                      << ")\n";
        } else if (*onl) {
            const StudyConfig cfg = make_config(onl_opts);
            const OfflineModel model = load_model(onl_model);
            if (onl_mu < cfg.mu_min || onl_mu > cfg.mu_max)
                throw std::invalid_argument("online: mu outside [mu_min, mu_max]");
            const OfflinePipeline& pipe = onl_unfrozen ? model.unfrozen : model.frozen;
            const int m = onl_m > 0 ? onl_m : cfg.m_for(onl_n);
            if (onl_n > pipe.basis.size() || m > pipe.ei.size())
                throw std::invalid_argument("online: requested N or M exceeds the stored model");
            const ReducedBasis rb = truncate(pipe.basis, onl_n);
            const OnlineSystem sys = assemble_online(rb, truncate(pipe.ei, m));
            const Field u0 = study_initial(model.grid);
            const BurgersParams p(onl_mu);
            const ReducedTrajectory traj =
                onl_unfrozen
                    ? solve_reduced_unfrozen(p, sys, rb, u0, model.t_final, model.steps)
                    : solve_reduced(p, sys, rb, u0, model.t_final, model.steps);

            std::filesystem::create_directories(cfg.output_dir);
            const std::string log_path =
                (std::filesystem::path(cfg.output_dir) / "online_log.txt").string();
            std::ofstream os(log_path);
            os << "# k alg_x alg_y g_x g_y norm_c\n";
            char buf[160];
            for (std::size_t k = 0; k < traj.states.size(); ++k) {
                std::snprintf(buf, sizeof(buf), "%zu %.17g %.17g %.17g %.17g %.17g\n", k,
                              traj.states[k].alg.x, traj.states[k].alg.y, traj.gs[k].x,
                              traj.gs[k].y, traj.states[k].c.norm());
                os << buf;
            }
            save_field(lift(traj.states.back().c, rb),
                       (std::filesystem::path(cfg.output_dir) / "final_state.field").string());
            std::cout << "online run written to " << cfg.output_dir << " (N = " << onl_n
                      << ", M = " << m << ")\n";
        } else if (*study) {
            StudyConfig cfg = make_config(study_opts);
            if (seed_opt->count() > 0)
                cfg.seed = study_seed;
            const StudyResult res = run_study(cfg, study_model);
            std::cout << "study written to " << cfg.output_dir << "\n";
            for (const auto& s : res.summary)
                std::printf("  %-8s N=%-3d M=%-3d max_error=%.6e aborts=%d\n", s.scheme.c_str(),
                            s.n, s.m, s.max_error, s.aborts);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
