#include "hybridsom/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "hybridsom/errors.hpp"

namespace hybridsom {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
    T out{};
    const auto res = std::from_chars(value.data(), value.data() + value.size(), out);
    if (res.ec != std::errc() || res.ptr != value.data() + value.size()) {
        throw ConfigError("invalid value '" + std::string(value) + "' for key '" + std::string(key) + "'");
    }
    return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
    if (value == "on" || value == "true" || value == "1" || value == "yes") return true;
    if (value == "off" || value == "false" || value == "0" || value == "no") return false;
    throw ConfigError("key '" + std::string(key) + "' expects on/off, got '" + std::string(value) + "'");
}

}  // namespace

const std::vector<std::string>& RunConfig::known_keys() {
    static const std::vector<std::string> keys = {
        "m", "alpha", "sigma", "sigma_decay", "rule", "prototypes_per_class", "pushback_mode",
        "rate_mode", "standardize", "seed", "epochs", "check_fraction",
        "baselines.som_m", "baselines.som_rule", "baselines.som_alpha", "baselines.som_epochs",
        "baselines.lvq_prototypes_per_class", "baselines.lvq_alpha", "baselines.lvq_epochs",
        "baselines.fcm_clusters", "baselines.fcm_fuzzifier", "baselines.fcm_tol", "baselines.fcm_max_iter",
    };
    return keys;
}

void RunConfig::set(std::string_view key, std::string_view raw) {
    const std::string value = trim(raw);
    if (key == "m") m = parse_number<std::size_t>(key, value);
    else if (key == "alpha") alpha = parse_number<double>(key, value);
    else if (key == "sigma") sigma = parse_number<double>(key, value);
    else if (key == "sigma_decay") sigma_decay = parse_number<double>(key, value);
    else if (key == "rule") rule = parse_rule(value);
    else if (key == "prototypes_per_class") prototypes_per_class = parse_number<std::size_t>(key, value);
    else if (key == "pushback_mode") pushback_mode = parse_pushback_mode(value);
    else if (key == "rate_mode") rate_mode = parse_rate_mode(value);
    else if (key == "standardize") standardize = parse_bool(key, value);
    else if (key == "seed") seed = parse_number<std::uint64_t>(key, value);
    else if (key == "epochs") epochs = parse_number<std::size_t>(key, value);
    else if (key == "check_fraction") check_fraction = parse_number<double>(key, value);
    else if (key == "baselines.som_m") som_m = parse_number<std::size_t>(key, value);
    else if (key == "baselines.som_rule") som_rule = parse_rule(value);
    else if (key == "baselines.som_alpha") som_alpha = parse_number<double>(key, value);
    else if (key == "baselines.som_epochs") som_epochs = parse_number<std::size_t>(key, value);
    else if (key == "baselines.lvq_prototypes_per_class") lvq_prototypes_per_class = parse_number<std::size_t>(key, value);
    else if (key == "baselines.lvq_alpha") lvq_alpha = parse_number<double>(key, value);
    else if (key == "baselines.lvq_epochs") lvq_epochs = parse_number<std::size_t>(key, value);
    else if (key == "baselines.fcm_clusters") fcm_clusters = parse_number<std::size_t>(key, value);
    else if (key == "baselines.fcm_fuzzifier") fcm_fuzzifier = parse_number<double>(key, value);
    else if (key == "baselines.fcm_tol") fcm_tol = parse_number<double>(key, value);
    else if (key == "baselines.fcm_max_iter") fcm_max_iter = parse_number<std::size_t>(key, value);
    else throw ConfigError("unknown config key '" + std::string(key) + "'");
}

void RunConfig::validate() const {
    hybrid().validate();
    if (!(check_fraction > 0.0 && check_fraction < 1.0)) throw ConfigError("check_fraction must lie in (0, 1)");
    const auto unit_interval = [](std::optional<double> v, const char* key) {
        if (v && !(*v >= 0.0 && *v <= 1.0)) throw ConfigError(std::string(key) + " must lie in [0, 1]");
    };
    unit_interval(som_alpha, "baselines.som_alpha");
    unit_interval(lvq_alpha, "baselines.lvq_alpha");
    if (lvq_prototypes_per_class && *lvq_prototypes_per_class == 0) {
        throw ConfigError("baselines.lvq_prototypes_per_class must be at least 1");
    }
    if (!(fcm_fuzzifier > 1.0)) throw ConfigError("baselines.fcm_fuzzifier must exceed 1");
    if (!(fcm_tol > 0.0)) throw ConfigError("baselines.fcm_tol must be positive");
    if (fcm_max_iter == 0) throw ConfigError("baselines.fcm_max_iter must be at least 1");
}

HybridConfig RunConfig::hybrid() const {
    HybridConfig h;
    h.m = m;
    h.prototypes_per_class = prototypes_per_class;
    h.alpha = alpha;
    h.rate_mode = rate_mode;
    h.unsupervised_rule = rule;
    h.pushback_mode = pushback_mode;
    h.neighborhood = {sigma, sigma_decay};
    h.seed = seed;
    return h;
}

MethodsConfig RunConfig::methods() const {
    MethodsConfig out;
    out.hybrid = hybrid();
    out.epochs = epochs;
    out.standardize = standardize;
    out.som.m = som_m;
    out.som.rule = som_rule.value_or(rule == UnsupervisedRule::instar ? UnsupervisedRule::wta : rule);
    out.som.neighborhood = {sigma, sigma_decay};
    out.som.alpha = som_alpha.value_or(alpha);
    out.som.epochs = som_epochs.value_or(epochs);
    out.lvq.prototypes_per_class = lvq_prototypes_per_class.value_or(prototypes_per_class);
    out.lvq.alpha = lvq_alpha.value_or(alpha);
    out.lvq.epochs = lvq_epochs.value_or(epochs);
    out.fcm.clusters = fcm_clusters;
    out.fcm.fuzzifier = fcm_fuzzifier;
    out.fcm.tol = fcm_tol;
    out.fcm.max_iter = fcm_max_iter;
    return out;
}

std::map<std::string, std::string> parse_config_text(std::string_view text) {
    std::map<std::string, std::string> out;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string body = trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(line_no) + " is not 'key = value'");
        }
        const std::string key = trim(std::string_view(body).substr(0, eq));
        const std::string value = trim(std::string_view(body).substr(eq + 1));
        if (key.empty()) throw ConfigError("config line " + std::to_string(line_no) + " has an empty key");
        const auto& known = RunConfig::known_keys();
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw ConfigError("unknown config key '" + key + "' on line " + std::to_string(line_no));
        }
        out[key] = value;
    }
    return out;
}

RunConfig apply_config(RunConfig base, const std::map<std::string, std::string>& entries) {
    for (const auto& [key, value] : entries) base.set(key, value);
    return base;
}

RunConfig load_config_file(const std::string& path, RunConfig base) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return apply_config(std::move(base), parse_config_text(text.str()));
}

}  // namespace hybridsom
