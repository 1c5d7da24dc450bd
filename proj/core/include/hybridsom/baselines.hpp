#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hybridsom/data.hpp"
#include "hybridsom/geometry.hpp"
#include "hybridsom/hybrid.hpp"
#include "hybridsom/som.hpp"

namespace hybridsom {

// ---- fuzzy c-means --------------------------------------------------------

struct FcmConfig {
    // 0 means "one cluster per observed class" when used as a classifier.
    std::size_t clusters = 0;
    double fuzzifier = 2.0;
    double tol = 1e-6;
    std::size_t max_iter = 300;

    friend bool operator==(const FcmConfig&, const FcmConfig&) = default;
};

struct FcmModel {
    std::vector<std::vector<double>> centers;
    double fuzzifier = 2.0;
    // N x c memberships of the training rows.
    std::vector<std::vector<double>> partition;
    // Objective after every iteration; non-increasing.
    std::vector<double> objective;
    // Largest |row sum - 1| of the partition after every iteration.
    std::vector<double> simplex_error;
    std::size_t iterations = 0;
    bool converged = false;
};

// Standard alternating optimization from a seeded random partition. Stops
// when the largest center shift drops below tol or after max_iter iterations.
// A row that coincides with a center gets crisp membership to it.
FcmModel fcm_fit(std::span<const std::vector<double>> data, std::size_t clusters, double fuzzifier,
                 double tol, std::size_t max_iter, std::uint64_t seed);

// Memberships of a new point with respect to fitted centers.
std::vector<double> fcm_memberships(const FcmModel& model, std::span<const double> x);

double fcm_objective(std::span<const std::vector<double>> data, const FcmModel& model);

// ---- baseline classifiers -------------------------------------------------

// Sphere samples for the prototype methods and standardized rows for FCM,
// with the supervision labels and scoring truth of both splits.
struct PreparedData {
    std::vector<UnitVector> train_x;
    std::vector<UnitVector> check_x;
    std::vector<std::vector<double>> train_z;
    std::vector<std::vector<double>> check_z;
    std::vector<std::optional<ClassId>> train_labels;
    std::vector<std::optional<ClassId>> train_truth;
    std::vector<std::optional<ClassId>> check_truth;
    Standardization stats;
    std::vector<std::string> warnings;
};

PreparedData prepare(const Dataset& train, const Dataset& check, bool standardize = true);

struct ErrorRates {
    double train_error = 0.0;
    double check_error = 0.0;
    // Classes indexing the confusion matrix (truth rows, predicted columns).
    std::vector<ClassId> classes;
    std::vector<std::vector<std::size_t>> confusion;
};

struct SomBaselineConfig {
    // 0 means one neuron per observed class.
    std::size_t m = 0;
    UnsupervisedRule rule = UnsupervisedRule::wta;
    NeighborhoodConfig neighborhood;
    double alpha = 1.0;
    std::size_t epochs = 5;

    friend bool operator==(const SomBaselineConfig&, const SomBaselineConfig&) = default;
};

struct LvqBaselineConfig {
    std::size_t prototypes_per_class = 1;
    double alpha = 1.0;
    std::size_t epochs = 5;

    friend bool operator==(const LvqBaselineConfig&, const LvqBaselineConfig&) = default;
};

// Unsupervised SOM; neurons are mapped to classes by aligning the winners of
// the labeled training rows.
ErrorRates baseline_som_classifier(const PreparedData& data, const SomBaselineConfig& cfg, std::uint64_t seed);

// Conventional LVQ on the labeled training rows with fixed-rate push-back.
ErrorRates baseline_lvq_classifier(const PreparedData& data, const LvqBaselineConfig& cfg, std::uint64_t seed);

// Batch FCM in the standardized space, clusters aligned like the SOM.
ErrorRates baseline_fcm_classifier(const PreparedData& data, const FcmConfig& cfg, std::uint64_t seed);

// The combined network trained on every training row.
ErrorRates hybrid_classifier(const PreparedData& data, const HybridConfig& cfg, std::size_t epochs,
                             std::uint64_t seed);

// Scores predictions against the truth (rows without truth are skipped;
// missing predictions count as errors).
ErrorRates score(std::span<const std::optional<ClassId>> train_pred,
                 std::span<const std::optional<ClassId>> train_truth,
                 std::span<const std::optional<ClassId>> check_pred,
                 std::span<const std::optional<ClassId>> check_truth);

}  // namespace hybridsom
