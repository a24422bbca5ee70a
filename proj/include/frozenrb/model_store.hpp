#pragma once

#include "frozenrb/reduction.hpp"

#include <cstdint>
#include <string>

namespace frozenrb {

/// Offline artifacts for one reduction pipeline (basis + interpolation data).
struct OfflinePipeline {
    ReducedBasis basis;
    EIData ei;
    std::vector<GreedyLogEntry> greedy_log;
};

/// Everything the online stage needs, persisted to a model directory.
struct OfflineModel {
    GridSpec grid;
    double t_final = 0.0;
    int steps = 0;
    std::vector<double> training_mus;
    double pod_tol = 0.0;
    double ei_tol = 0.0;
    OfflinePipeline frozen;
    OfflinePipeline unfrozen;

    OfflineModel() : grid(2, 2, 1.0, 1.0) {}
};

/// FNV-1a over raw bytes; used for content hashes in the model manifest.
std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t h = 1469598103934665603ull);
std::string hash_hex(std::uint64_t h);
std::string field_hash(const Field& f);

void save_model(const OfflineModel& model, const std::string& dir);
OfflineModel load_model(const std::string& dir);

}  // namespace frozenrb
