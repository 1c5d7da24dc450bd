#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hybridsom/geometry.hpp"
#include "hybridsom/lvq.hpp"
#include "hybridsom/schedule.hpp"
#include "hybridsom/som.hpp"

namespace hybridsom {

// One presentation of a sample. A missing label means self-learning.
struct TrainingEvent {
    UnitVector x;
    std::optional<ClassId> label;
};

struct HybridConfig {
    // Neuron count for purely unlabeled runs; labeled runs use
    // prototypes_per_class times the number of observed classes.
    std::size_t m = 2;
    std::size_t prototypes_per_class = 1;
    double alpha = 1.0;
    RateMode rate_mode = RateMode::shared;
    UnsupervisedRule unsupervised_rule = UnsupervisedRule::wta;
    PushbackMode pushback_mode = PushbackMode::equidistant;
    NeighborhoodConfig neighborhood;
    std::uint64_t seed = 1;

    void validate() const;

    friend bool operator==(const HybridConfig&, const HybridConfig&) = default;
};

enum class Branch { self_learning, attract, repel };

struct StepInfo {
    Branch branch;
    // nullopt for the competition-free INSTAR branch.
    std::optional<std::size_t> winner;
    double eta;
    // 1 iff supervised and the sample disagrees with the winner's class.
    int delta_l;
    // False when an equidistant push had no root on [0, 1) and used the boundary rate.
    bool equidistant = true;
};

struct Prediction {
    // Label of the highest-membership neuron; nullopt for unlabeled codebooks.
    std::optional<ClassId> crisp;
    std::size_t neuron;
    MembershipVector neuron_memberships;
    // (class, summed membership) in ascending class order.
    std::vector<std::pair<ClassId, double>> class_memberships;
};

class HybridNetwork {
public:
    HybridNetwork(Codebook codebook, HybridConfig config);

    // Seeds prototypes from labeled class means when any sample is labeled;
    // otherwise m random prototypes without labels.
    static HybridNetwork initialize(std::span<const UnitVector> samples,
                                    std::span<const std::optional<ClassId>> labels,
                                    const HybridConfig& config);

    const Codebook& codebook() const noexcept { return codebook_; }
    const RateState& rate() const noexcept { return rate_; }
    const HybridConfig& config() const noexcept { return config_; }
    double sigma() const noexcept { return sigma_; }

    // One application of the combined rule; advances the rate state once.
    // Leaves the network unchanged when it throws.
    StepInfo step(const TrainingEvent& event);

    Prediction predict(std::span<const double> x) const;

    friend bool operator==(const HybridNetwork&, const HybridNetwork&) = default;

private:
    Codebook codebook_;
    HybridConfig config_;
    RateState rate_;
    double sigma_;
};

struct EpochLog {
    std::size_t epoch;
    double eta;
    double criterion;
};

// Applies step() over the events in order for the given number of epochs.
// Throws FitError with the offending event index on the first failure.
void fit_stream(HybridNetwork& net, std::span<const TrainingEvent> events, std::size_t epochs,
                const std::function<void(const EpochLog&)>& on_epoch = {});

// Model text format: "hybridsom v1 <n> <m>" followed by one line per neuron
// holding the label (or '-'), the win count and n weights in %.16e form.
void save_model(std::ostream& out, const Codebook& cb);
Codebook load_model(std::istream& in);
void save_model_file(const std::string& path, const Codebook& cb);
Codebook load_model_file(const std::string& path);

}  // namespace hybridsom
