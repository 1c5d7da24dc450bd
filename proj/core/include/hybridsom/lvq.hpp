#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "hybridsom/geometry.hpp"
#include "hybridsom/som.hpp"

namespace hybridsom {

enum class PushbackMode { fixed_eta, equidistant };

PushbackMode parse_pushback_mode(std::string_view text);
std::string_view to_string(PushbackMode mode);

// Largest admissible repel rate: eta must stay strictly below one.
inline constexpr double kMaxRepelRate = 1.0 - 0x1.0p-52;

// A codebook whose every neuron carries a fixed class label.
class LabeledCodebook {
public:
    // Throws std::invalid_argument if any neuron is unlabeled.
    explicit LabeledCodebook(Codebook cb);

    const Codebook& codebook() const noexcept { return cb_; }
    Codebook& codebook() noexcept { return cb_; }
    std::size_t size() const noexcept { return cb_.size(); }
    ClassId label(std::size_t j) const { return *cb_.label(j); }
    const std::vector<ClassId>& classes() const noexcept { return classes_; }

    friend bool operator==(const LabeledCodebook&, const LabeledCodebook&) = default;

private:
    Codebook cb_;
    std::vector<ClassId> classes_;
};

// Round-robin class assignment over prototypes_per_class * C neurons. The
// first prototype of each class sits at the normalized class mean; further
// ones start at seeded random samples of their class.
LabeledCodebook init_labeled_codebook(std::span<const UnitVector> samples,
                                      std::span<const std::optional<ClassId>> labels,
                                      std::size_t prototypes_per_class, std::uint64_t seed);

struct LvqStep {
    std::size_t winner;
    bool attracted;
};

// LVQ1 on the sphere: attract the winner on a label match, repel it otherwise.
// Throws UnknownLabel when no prototype carries `label`; repel rates are
// clamped to kMaxRepelRate.
LvqStep update_lvq(Codebook& cb, std::span<const double> x, ClassId label, double eta);
LvqStep update_lvq(LabeledCodebook& cb, std::span<const double> x, ClassId label, double eta);

struct PushbackRate {
    double eta = 0.0;
    // False when no root exists on [0, 1); eta is then the boundary value.
    bool bracketed = true;
};

// Rate that makes cos(normalize(w_winner - eta (x - w_winner)), x) equal to
// cos(w_correct, x), found by bisection on the decreasing gap.
// Throws std::invalid_argument when w_correct is strictly more similar to x than w_winner.
PushbackRate pushback_rate(std::span<const double> w_winner, std::span<const double> w_correct,
                           std::span<const double> x);

// (cos_winner - cos_correct) / (cos_winner + 1). Ignores renormalization;
// kept for comparison only and never used in training.
double pushback_rate_closed_form(std::span<const double> w_winner, std::span<const double> w_correct,
                                 std::span<const double> x);

// Most similar prototype carrying `label`, or nullopt.
std::optional<std::size_t> best_prototype_of_class(const Codebook& cb, std::span<const double> x,
                                                   ClassId label);

struct PushbackStep {
    std::size_t winner;
    std::size_t correct;
    PushbackRate rate;
};

// Pushes the (wrong) winner away until x is equally similar to it and to
// the best prototype of `label`. Requires the winner's label to differ from `label`.
PushbackStep equidistant_pushback(Codebook& cb, std::span<const double> x, ClassId label);
PushbackStep equidistant_pushback(LabeledCodebook& cb, std::span<const double> x, ClassId label);

struct LvqTrainConfig {
    std::size_t prototypes_per_class = 1;
    double alpha = 1.0;
    std::size_t epochs = 5;
    std::uint64_t seed = 1;
};

// Conventional LVQ: labeled samples only, fixed-rate push from the shared schedule.
LabeledCodebook train_lvq(std::span<const UnitVector> samples,
                          std::span<const std::optional<ClassId>> labels, const LvqTrainConfig& cfg);

}  // namespace hybridsom
