#include "hybridsom/schedule.hpp"

#include <stdexcept>
#include <string>

#include "hybridsom/errors.hpp"

namespace hybridsom {

RateMode parse_rate_mode(std::string_view text) {
    if (text == "shared") return RateMode::shared;
    if (text == "per_neuron") return RateMode::per_neuron;
    throw ConfigError("rate_mode must be one of {shared, per_neuron}, got '" + std::string(text) + "'");
}

std::string_view to_string(RateMode mode) {
    return mode == RateMode::shared ? "shared" : "per_neuron";
}

RateState::RateState(double alpha) : alpha_(alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw std::invalid_argument("forgetting factor alpha must lie in [0, 1]");
    }
}

double RateState::step() {
    r_ = alpha_ * r_ + 1.0;
    ++steps_;
    return 1.0 / r_;
}

std::pair<RateState, double> rate_step(RateState state) {
    const double eta = state.step();
    return {state, eta};
}

double win_count_rate(std::uint64_t win_count) {
    if (win_count == 0) throw std::invalid_argument("win count must be at least 1");
    return 1.0 / static_cast<double>(win_count);
}

}  // namespace hybridsom
