#pragma once

#include <cstdint>
#include <string_view>
#include <utility>

namespace hybridsom {

enum class RateMode { shared, per_neuron };

RateMode parse_rate_mode(std::string_view text);
std::string_view to_string(RateMode mode);

// Learning-rate recursion r(k) = alpha * r(k-1) + 1, eta(k) = 1 / r(k),
// started from r(0) = 0 so the first step is a full step.
class RateState {
public:
    // Throws std::invalid_argument unless 0 <= alpha <= 1.
    explicit RateState(double alpha = 1.0);

    double alpha() const noexcept { return alpha_; }
    double r() const noexcept { return r_; }
    std::uint64_t steps() const noexcept { return steps_; }

    // Rate of the most recent step; 1 before any step.
    double eta() const noexcept { return steps_ == 0 ? 1.0 : 1.0 / r_; }

    // Advances the recursion and returns the new rate.
    double step();

    friend bool operator==(const RateState&, const RateState&) = default;

private:
    double alpha_;
    double r_ = 0.0;
    std::uint64_t steps_ = 0;
};

// Functional form: returns the advanced state together with its rate.
std::pair<RateState, double> rate_step(RateState state);

// 1 / k_j for a neuron that has won k_j >= 1 times; throws std::invalid_argument for 0.
double win_count_rate(std::uint64_t win_count);

}  // namespace hybridsom
