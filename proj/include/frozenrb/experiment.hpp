#pragma once

#include "frozenrb/model_store.hpp"
#include "frozenrb/online.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace frozenrb {

/// Study configuration. Default values are the `paper-burgers` preset:
/// 120x60 cells on [0,2]x[0,1], T = 0.3 in 100 steps, eleven equispaced
/// training parameters on [1,2], N sweep {5,10,15,20} with M = round(1.8*N),
/// 100 seeded test parameters.
struct StudyConfig {
    int nx = 120, ny = 60;
    double lx = 2.0, ly = 1.0;
    double t_final = 0.3;
    int steps = 100;
    double mu_min = 1.0, mu_max = 2.0;
    std::vector<double> training_mus = {1.0, 1.1, 1.2, 1.3, 1.4, 1.5, 1.6, 1.7, 1.8, 1.9, 2.0};
    std::vector<int> n_list = {5, 10, 15, 20};
    double m_factor = 1.8;
    int test_count = 100;
    std::uint64_t seed = 42;
    double pod_tol = 0.0;
    double ei_tol = 0.0;
    std::string output_dir = "out";

    GridSpec grid() const { return GridSpec(nx, ny, lx, ly); }
    int m_for(int n) const;  // round(m_factor * n), half away from zero
    void validate() const;
};

/// Named presets: "paper-burgers" (120x60) and "half-burgers" (60x30).
StudyConfig preset_config(const std::string& name);

/// Plain-text key/value configuration (key = value, # comments). Unknown
/// keys are rejected. Values from the file override the preset.
StudyConfig parse_config(const std::string& path, const std::string& preset = "paper-burgers");

/// The sine-product initial datum of the study, sampled on the grid.
Field study_initial(const GridSpec& grid);

/// Deterministic test parameters: mu ~ uniform[mu_min, mu_max] drawn from
/// mt19937_64 with an explicit bits-to-double mapping (reproducible across
/// platforms).
std::vector<double> draw_test_parameters(const StudyConfig& cfg);

/// Detailed runs for one parameter: frozen + unfrozen + reconstructed
/// trajectories persisted under <output_dir>.
struct DetailedRunResult {
    FrozenTrajectory frozen;
    std::vector<Field> unfrozen;
};
DetailedRunResult run_detailed(const StudyConfig& cfg, double mu, int stride = 10);

/// Offline stage: snapshot collection, POD-Greedy and EI-Greedy for the
/// frozen pipeline and for the unfrozen baseline, persisted to
/// <output_dir>/model.
struct OfflineResult {
    OfflineModel model;
    std::string model_dir;
};
OfflineResult run_offline(const StudyConfig& cfg);

struct StudyRow {
    std::string scheme;  // "frozen" | "unfrozen"
    int n = 0, m = 0;
    double mu = 0.0;
    double error = 0.0;  // max over time steps of the L2 error
    bool aborted = false;
};

struct StudySummaryRow {
    std::string scheme;
    int n = 0, m = 0;
    double max_error = 0.0;
    double worst_mu = 0.0;
    int aborts = 0;
};

struct StudyResult {
    std::vector<StudyRow> rows;
    std::vector<StudySummaryRow> summary;
    std::string errors_csv, summary_csv, plot_svg;
};

/// The N-sweep error comparison: for each seeded test parameter and each N,
/// run both reduced schemes and measure max_k |v^k_detailed - lift(c^k)|_L2
/// against the scheme's own detailed trajectory. Writes per-parameter and
/// summary CSV tables plus a log-scale SVG error plot. Reruns with the same
/// seed produce byte-identical CSV output.
StudyResult run_study(const StudyConfig& cfg, const OfflineModel& model);
StudyResult run_study(const StudyConfig& cfg, const std::string& model_dir);

}  // namespace frozenrb
