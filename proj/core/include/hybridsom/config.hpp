#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hybridsom/eval.hpp"

namespace hybridsom {

// Every tunable of a run. Baseline settings live under the "baselines."
// key prefix and default to the shared values when not given.
struct RunConfig {
    std::size_t m = 2;
    double alpha = 1.0;
    double sigma = 1.0;
    double sigma_decay = 1.0;
    UnsupervisedRule rule = UnsupervisedRule::wta;
    std::size_t prototypes_per_class = 1;
    PushbackMode pushback_mode = PushbackMode::equidistant;
    RateMode rate_mode = RateMode::shared;
    bool standardize = true;
    std::uint64_t seed = 1;
    std::size_t epochs = 5;
    double check_fraction = 0.25;

    std::size_t som_m = 0;
    std::optional<UnsupervisedRule> som_rule;
    std::optional<double> som_alpha;
    std::optional<std::size_t> som_epochs;
    std::optional<std::size_t> lvq_prototypes_per_class;
    std::optional<double> lvq_alpha;
    std::optional<std::size_t> lvq_epochs;
    std::size_t fcm_clusters = 0;
    double fcm_fuzzifier = 2.0;
    double fcm_tol = 1e-6;
    std::size_t fcm_max_iter = 300;

    // Sets one key; throws ConfigError for unknown keys or invalid values.
    void set(std::string_view key, std::string_view value);
    // Range checks across all keys.
    void validate() const;

    HybridConfig hybrid() const;
    MethodsConfig methods() const;

    static const std::vector<std::string>& known_keys();
};

// Parses "key = value" lines; '#' starts a comment, blank lines are ignored.
std::map<std::string, std::string> parse_config_text(std::string_view text);

// Applies parsed entries on top of `base`.
RunConfig apply_config(RunConfig base, const std::map<std::string, std::string>& entries);

RunConfig load_config_file(const std::string& path, RunConfig base = {});

}  // namespace hybridsom
