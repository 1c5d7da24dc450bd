#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hybridsom/baselines.hpp"
#include "hybridsom/data.hpp"
#include "hybridsom/hybrid.hpp"

namespace hybridsom {

// 100 * mismatches / N. Throws EmptyInput for N = 0.
double misclassification_rate(std::span<const ClassId> predicted, std::span<const ClassId> truth);

struct ClusterMap {
    std::vector<ClassId> cluster_to_class;
    // True when the one-to-one exhaustive search was used.
    bool exhaustive = false;
    // Clusters that received no samples (mapped to the most frequent class).
    std::vector<std::size_t> empty_clusters;

    ClassId operator()(std::size_t cluster) const { return cluster_to_class.at(cluster); }
};

inline constexpr std::size_t kMaxExhaustiveClusters = 8;

// Maps clusters to classes. With as many clusters as classes (<= 8) the best
// one-to-one assignment is found by enumerating permutations; otherwise each
// cluster takes its majority class. Ties go to the lowest class id.
ClusterMap align(std::span<const std::size_t> assignments, std::size_t cluster_count,
                 std::span<const ClassId> truth);

struct MethodsConfig {
    HybridConfig hybrid;
    std::size_t epochs = 5;
    SomBaselineConfig som;
    LvqBaselineConfig lvq;
    FcmConfig fcm;
    bool standardize = true;
};

// Canonical key=value rendering, the input of the config digest.
std::string canonical_config(const MethodsConfig& cfg);
std::string config_digest(const MethodsConfig& cfg);

struct EvalReport {
    std::string method;
    std::uint64_t seed = 0;
    double train_error = 0.0;
    double check_error = 0.0;
    std::vector<ClassId> classes;
    std::vector<std::vector<std::size_t>> confusion;
    std::string config_digest;
    // Set when the run failed; the error fields are then meaningless.
    std::optional<std::string> failure;
};

struct SummaryRow {
    std::string method;
    std::size_t runs = 0;
    std::size_t failed = 0;
    double train_mean = 0.0;
    double train_std = 0.0;
    double check_mean = 0.0;
    double check_std = 0.0;
};

struct CompareResult {
    std::vector<EvalReport> reports;
    std::vector<SummaryRow> summary;
    std::vector<std::string> warnings;
};

inline constexpr const char* kMethodHybrid = "hybrid";
inline constexpr const char* kMethodSom = "som";
inline constexpr const char* kMethodLvq = "lvq";
inline constexpr const char* kMethodFcm = "fcm";

// Runs the hybrid network and the three baselines once per seed. A failing
// run is recorded in its report and does not stop the sweep.
CompareResult compare(const Dataset& train, const Dataset& check, const MethodsConfig& cfg,
                      std::span<const std::uint64_t> seeds);

std::vector<SummaryRow> summarize(std::span<const EvalReport> reports);

// One CSV row per report; the confusion matrix is flattened row-major with ';'.
void write_reports_csv(std::ostream& out, std::span<const EvalReport> reports);
// Plain-text table of the summary rows.
std::string format_summary(std::span<const SummaryRow> summary);

}  // namespace hybridsom
