#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "hybridsom/geometry.hpp"

namespace hybridsom {

using ClassId = int;

enum class UnsupervisedRule { wta, wtm, instar };

UnsupervisedRule parse_rule(std::string_view text);
std::string_view to_string(UnsupervisedRule rule);

// Test-only escape hatch: Renormalize::off leaves updated weights off the sphere.
enum class Renormalize { on, off };

// The Kohonen layer: m prototypes of dimension n with win counts and optional class labels.
class Codebook {
public:
    // Every weight is renormalized; labels may be empty (unlabeled) or hold exactly m entries.
    Codebook(std::vector<std::vector<double>> weights,
             std::vector<std::optional<ClassId>> labels = {});

    // Rebuilds a persisted codebook without renormalizing (weights must already
    // be unit within kUnitNormTolerance), so stored values survive bit for bit.
    static Codebook restore(std::vector<std::vector<double>> weights,
                            std::vector<std::uint64_t> win_counts,
                            std::vector<std::optional<ClassId>> labels);

    // m prototypes drawn uniformly from [-1, 1]^n and projected onto the sphere.
    static Codebook random(std::size_t m, std::size_t n, std::uint64_t seed,
                           std::vector<std::optional<ClassId>> labels = {});

    std::size_t size() const noexcept { return weights_.size(); }
    std::size_t dim() const noexcept { return dim_; }

    std::span<const double> weight(std::size_t j) const { return weights_.at(j); }
    const std::vector<std::vector<double>>& weights() const noexcept { return weights_; }
    std::uint64_t win_count(std::size_t j) const { return win_counts_.at(j); }
    const std::vector<std::uint64_t>& win_counts() const noexcept { return win_counts_; }
    std::optional<ClassId> label(std::size_t j) const { return labels_.at(j); }
    const std::vector<std::optional<ClassId>>& labels() const noexcept { return labels_; }

    bool fully_labeled() const noexcept;
    bool has_label(ClassId c) const noexcept;

    // Mutation hooks for the learning rules.
    void set_weight(std::size_t j, std::vector<double> w);
    void record_win(std::size_t j) { ++win_counts_.at(j); }
    void set_win_count(std::size_t j, std::uint64_t k) { win_counts_.at(j) = k; }

    friend bool operator==(const Codebook&, const Codebook&) = default;

private:
    Codebook() = default;

    std::size_t dim_ = 0;
    std::vector<std::vector<double>> weights_;
    std::vector<std::uint64_t> win_counts_;
    std::vector<std::optional<ClassId>> labels_;
};

struct NeighborhoodConfig {
    double sigma = 1.0;
    // Per-step geometric decay applied by training loops, in (0, 1].
    double sigma_decay = 1.0;

    void validate() const;

    friend bool operator==(const NeighborhoodConfig&, const NeighborhoodConfig&) = default;
};

// argmax_j w_j.x; ties go to the lowest index.
std::size_t find_winner(std::span<const double> x, const Codebook& cb);

// Nearest prototype for every sample.
std::vector<std::size_t> assign_nearest(std::span<const UnitVector> samples, const Codebook& cb);

// w_j <- normalize(w_j + step (x - w_j)); a zero step leaves the weight untouched.
// Throws DegenerateUpdate when the pre-normalization norm is below 1e-12.
void attract(Codebook& cb, std::size_t j, std::span<const double> x, double step,
             Renormalize renorm = Renormalize::on);

// w_j <- normalize(w_j - step (x - w_j)).
void repel(Codebook& cb, std::size_t j, std::span<const double> x, double step,
           Renormalize renorm = Renormalize::on);

// Returns the repelled and renormalized copy of w without touching any codebook.
std::vector<double> repelled(std::span<const double> w, std::span<const double> x, double step);

// Winner-takes-all update; increments the winner's win count and returns its index.
std::size_t update_wta(Codebook& cb, std::span<const double> x, double eta,
                       Renormalize renorm = Renormalize::on);

// exp(-||w_winner - w_p||^2 / (2 sigma^2)), measured between weight vectors.
double neighborhood(std::size_t winner, std::size_t p, const Codebook& cb,
                    const NeighborhoodConfig& cfg);

// Winner-takes-more update over all neurons with the Gaussian neighborhood
// evaluated on the pre-update weights. Returns the winner.
std::size_t update_wtm(Codebook& cb, std::span<const double> x, double eta,
                       const NeighborhoodConfig& cfg, Renormalize renorm = Renormalize::on);

// Competition-free similarity-weighted (INSTAR-like) update; neurons with
// non-positive activation are left alone and no win is recorded.
void update_instar(Codebook& cb, std::span<const double> x, double eta,
                   Renormalize renorm = Renormalize::on);

// Sum of squared distances of samples to their assigned prototypes. With a
// neighborhood, every prototype p contributes phi(assigned, p) ||x - w_p||^2.
double quantization_criterion(const Codebook& cb, std::span<const UnitVector> samples,
                              std::span<const std::size_t> assigned,
                              const NeighborhoodConfig* neighborhood = nullptr);

// Criterion over nearest-prototype assignments recomputed against the current codebook.
double quantization_criterion(const Codebook& cb, std::span<const UnitVector> samples);

struct SomTrainConfig {
    std::size_t m = 2;
    UnsupervisedRule rule = UnsupervisedRule::wta;
    NeighborhoodConfig neighborhood;
    double alpha = 1.0;
    std::size_t epochs = 5;
    std::uint64_t seed = 1;
};

// Trains a randomly initialized codebook on the samples in presentation
// order with the shared rate schedule.
Codebook train_som(std::span<const UnitVector> samples, const SomTrainConfig& cfg);

}  // namespace hybridsom
