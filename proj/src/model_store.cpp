#include "frozenrb/model_store.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace frozenrb {

namespace fs = std::filesystem;
using nlohmann::json;

std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t h) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

std::string hash_hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string field_hash(const Field& f) {
    return hash_hex(fnv1a(f.values.data(), sizeof(double) * f.values.size()));
}

namespace {

std::string fields_hash(const std::vector<Field>& fields) {
    std::uint64_t h = 1469598103934665603ull;
    for (const Field& f : fields)
        h = fnv1a(f.values.data(), sizeof(double) * f.values.size(), h);
    return hash_hex(h);
}

void save_fields(const std::vector<Field>& fields, const fs::path& dir, const char* stem) {
    fs::create_directories(dir);
    char name[64];
    for (std::size_t i = 0; i < fields.size(); ++i) {
        std::snprintf(name, sizeof(name), "%s_%04zu.field", stem, i);
        save_field(fields[i], (dir / name).string());
    }
}

std::vector<Field> load_fields(const fs::path& dir, const char* stem, int count) {
    std::vector<Field> out;
    out.reserve(count);
    char name[64];
    for (int i = 0; i < count; ++i) {
        std::snprintf(name, sizeof(name), "%s_%04d.field", stem, i);
        out.push_back(load_field((dir / name).string()));
    }
    return out;
}

json pipeline_manifest(const OfflinePipeline& p) {
    json j;
    j["basis_count"] = p.basis.size();
    j["basis_hash"] = fields_hash(p.basis.psi);
    j["ei"] = {
        {"m", p.ei.size()},
        {"q", p.ei.q},
        {"q_prime", p.ei.q_prime},
        {"greedy_errors", p.ei.greedy_errors},
        {"selected_snapshots", p.ei.selected_snapshots},
        {"xi_hash", fields_hash(p.ei.xi)},
    };
    std::vector<double> tmat(p.ei.interp_matrix.data(),
                             p.ei.interp_matrix.data() + p.ei.interp_matrix.size());
    j["ei"]["interp_matrix_colmajor"] = tmat;
    json log = json::array();
    for (const auto& e : p.greedy_log)
        log.push_back({{"n", e.n}, {"worst_error", e.worst_error}, {"worst_mu", e.worst_mu}});
    j["greedy_log"] = log;
    return j;
}

void save_pipeline(const OfflinePipeline& p, const fs::path& dir) {
    save_fields(p.basis.psi, dir / "basis", "psi");
    save_fields(p.ei.xi, dir / "ei", "xi");
}

OfflinePipeline load_pipeline(const json& j, const fs::path& dir, const GridSpec& grid) {
    OfflinePipeline p;
    const int n = j.at("basis_count").get<int>();
    p.basis.psi = load_fields(dir / "basis", "psi", n);

    const json& ej = j.at("ei");
    const int m = ej.at("m").get<int>();
    p.ei.grid = grid;
    p.ei.q = ej.at("q").get<std::vector<int>>();
    p.ei.q_prime = ej.at("q_prime").get<std::vector<int>>();
    p.ei.greedy_errors = ej.at("greedy_errors").get<std::vector<double>>();
    p.ei.selected_snapshots = ej.at("selected_snapshots").get<std::vector<int>>();
    p.ei.xi = load_fields(dir / "ei", "xi", m);
    const auto tmat = ej.at("interp_matrix_colmajor").get<std::vector<double>>();
    if (static_cast<int>(tmat.size()) != m * m)
        throw std::runtime_error("load_model: interpolation matrix size mismatch");
    p.ei.interp_matrix = Eigen::Map<const Eigen::MatrixXd>(tmat.data(), m, m);

    for (const auto& e : j.at("greedy_log"))
        p.greedy_log.push_back({e.at("n").get<int>(), e.at("worst_error").get<double>(),
                                e.at("worst_mu").get<double>()});
    return p;
}

}  // namespace

void save_model(const OfflineModel& model, const std::string& dir) {
    fs::create_directories(dir);
    json j;
    j["format"] = "frozenrb-model-v1";
    j["grid"] = {{"nx", model.grid.nx}, {"ny", model.grid.ny},
                 {"lx", model.grid.lx}, {"ly", model.grid.ly}};
    j["t_final"] = model.t_final;
    j["steps"] = model.steps;
    j["training_mus"] = model.training_mus;
    j["pod_tol"] = model.pod_tol;
    j["ei_tol"] = model.ei_tol;
    j["frozen"] = pipeline_manifest(model.frozen);
    j["unfrozen"] = pipeline_manifest(model.unfrozen);

    save_pipeline(model.frozen, fs::path(dir) / "frozen");
    save_pipeline(model.unfrozen, fs::path(dir) / "unfrozen");

    std::ofstream os(fs::path(dir) / "manifest.json");
    if (!os)
        throw std::runtime_error("save_model: cannot write manifest in " + dir);
    os << j.dump(2) << "\n";
}

OfflineModel load_model(const std::string& dir) {
    std::ifstream is(fs::path(dir) / "manifest.json");
    if (!is)
        throw std::runtime_error("load_model: cannot open manifest in " + dir);
    json j;
    is >> j;
    if (j.at("format").get<std::string>() != "frozenrb-model-v1")
        throw std::runtime_error("load_model: unknown model format");

    OfflineModel model;
    const json& gj = j.at("grid");
    model.grid = GridSpec(gj.at("nx").get<int>(), gj.at("ny").get<int>(),
                          gj.at("lx").get<double>(), gj.at("ly").get<double>());
    model.t_final = j.at("t_final").get<double>();
    model.steps = j.at("steps").get<int>();
    model.training_mus = j.at("training_mus").get<std::vector<double>>();
    model.pod_tol = j.at("pod_tol").get<double>();
    model.ei_tol = j.at("ei_tol").get<double>();
    model.frozen = load_pipeline(j.at("frozen"), fs::path(dir) / "frozen", model.grid);
    model.unfrozen = load_pipeline(j.at("unfrozen"), fs::path(dir) / "unfrozen", model.grid);
    return model;
}

}  // namespace frozenrb
