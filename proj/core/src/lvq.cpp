#include "hybridsom/lvq.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include "hybridsom/errors.hpp"
#include "hybridsom/rng.hpp"
#include "hybridsom/schedule.hpp"

namespace hybridsom {

PushbackMode parse_pushback_mode(std::string_view text) {
    if (text == "fixed_eta") return PushbackMode::fixed_eta;
    if (text == "equidistant") return PushbackMode::equidistant;
    throw ConfigError("pushback_mode must be one of {fixed_eta, equidistant}, got '" +
                      std::string(text) + "'");
}

std::string_view to_string(PushbackMode mode) {
    return mode == PushbackMode::fixed_eta ? "fixed_eta" : "equidistant";
}

LabeledCodebook::LabeledCodebook(Codebook cb) : cb_(std::move(cb)) {
    if (!cb_.fully_labeled()) throw std::invalid_argument("every prototype needs a class label");
    for (const auto& l : cb_.labels()) classes_.push_back(*l);
    std::sort(classes_.begin(), classes_.end());
    classes_.erase(std::unique(classes_.begin(), classes_.end()), classes_.end());
}

LabeledCodebook init_labeled_codebook(std::span<const UnitVector> samples,
                                      std::span<const std::optional<ClassId>> labels,
                                      std::size_t prototypes_per_class, std::uint64_t seed) {
    if (samples.size() != labels.size()) {
        throw std::invalid_argument("one label slot per sample is required");
    }
    if (prototypes_per_class == 0) throw ConfigError("prototypes_per_class must be at least 1");

    std::map<ClassId, std::vector<std::size_t>> members;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (labels[i]) members[*labels[i]].push_back(i);
    }
    if (members.empty()) throw EmptyInput("labeled initialization needs at least one labeled sample");
    const std::size_t n = samples.front().size();

    Rng rng(seed);
    std::map<ClassId, std::vector<std::size_t>> pool = members;
    for (auto& [c, idx] : pool) rng.shuffle(idx);

    std::vector<ClassId> classes;
    for (const auto& [c, idx] : members) classes.push_back(c);
    const std::size_t m = prototypes_per_class * classes.size();

    std::vector<std::vector<double>> weights;
    std::vector<std::optional<ClassId>> neuron_labels;
    std::vector<std::size_t> seeded_counts;
    weights.reserve(m);
    for (std::size_t j = 0; j < m; ++j) {
        const ClassId c = classes[j % classes.size()];
        const auto& idx = members.at(c);
        std::vector<double> w(n, 0.0);
        if (j < classes.size()) {
            for (std::size_t i : idx) {
                for (std::size_t d = 0; d < n; ++d) w[d] += samples[i][d];
            }
            if (norm(w) < kZeroNormThreshold) w = samples[idx.front()].components();
            seeded_counts.push_back(idx.size());
        } else {
            auto& avail = pool.at(c);
            if (avail.empty()) {
                avail = idx;
                rng.shuffle(avail);
            }
            w = samples[avail.back()].components();
            avail.pop_back();
            seeded_counts.push_back(1);
        }
        weights.push_back(std::move(w));
        neuron_labels.emplace_back(c);
    }
    // A class-mean prototype counts as having won each sample it averages, so
    // per-neuron rates continue that running mean instead of restarting at 1.
    Codebook cb(std::move(weights), std::move(neuron_labels));
    for (std::size_t j = 0; j < m; ++j) cb.set_win_count(j, seeded_counts[j]);
    return LabeledCodebook(std::move(cb));
}

LvqStep update_lvq(Codebook& cb, std::span<const double> x, ClassId label, double eta) {
    if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("learning rate must lie in [0, 1]");
    require_same_dimension(cb.dim(), x.size());
    if (!cb.has_label(label)) {
        throw UnknownLabel("no prototype carries class " + std::to_string(label));
    }
    const std::size_t winner = find_winner(x, cb);
    const auto winner_label = cb.label(winner);
    if (!winner_label) {
        throw UnknownLabel("winning prototype " + std::to_string(winner) + " has no class");
    }
    const bool match = *winner_label == label;
    if (match) {
        attract(cb, winner, x, eta);
    } else {
        repel(cb, winner, x, std::min(eta, kMaxRepelRate));
    }
    cb.record_win(winner);
    return {winner, match};
}

LvqStep update_lvq(LabeledCodebook& cb, std::span<const double> x, ClassId label, double eta) {
    return update_lvq(cb.codebook(), x, label, eta);
}

PushbackRate pushback_rate(std::span<const double> w_winner, std::span<const double> w_correct,
                           std::span<const double> x) {
    require_same_dimension(w_winner.size(), x.size());
    require_same_dimension(w_correct.size(), x.size());
    const double cos_winner = activation(w_winner, x);
    const double cos_correct = activation(w_correct, x);
    if (cos_winner < cos_correct) {
        throw std::invalid_argument("pushback requires the winner to be at least as similar as the correct prototype");
    }
    const auto gap = [&](double eta) { return activation(repelled(w_winner, x, eta), x) - cos_correct; };

    double lo = 0.0;
    double f_lo = gap(lo);
    if (f_lo <= 0.0) return {0.0, true};
    double hi = kMaxRepelRate;
    double f_hi = gap(hi);
    if (f_hi > 0.0) return {hi, false};

    // gap is strictly decreasing on [0, 1); bisect until the bracket collapses.
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) break;
        const double f_mid = gap(mid);
        if (f_mid > 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
    }
    return {std::abs(f_lo) < std::abs(f_hi) ? lo : hi, true};
}

double pushback_rate_closed_form(std::span<const double> w_winner, std::span<const double> w_correct,
                                 std::span<const double> x) {
    const double cos_winner = activation(w_winner, x);
    const double cos_correct = activation(w_correct, x);
    return (cos_winner - cos_correct) / (cos_winner + 1.0);
}

std::optional<std::size_t> best_prototype_of_class(const Codebook& cb, std::span<const double> x,
                                                   ClassId label) {
    std::optional<std::size_t> best;
    double best_y = 0.0;
    for (std::size_t j = 0; j < cb.size(); ++j) {
        const auto l = cb.label(j);
        if (!l || *l != label) continue;
        const double y = activation(cb.weight(j), x);
        if (!best || y > best_y) {
            best = j;
            best_y = y;
        }
    }
    return best;
}

PushbackStep equidistant_pushback(Codebook& cb, std::span<const double> x, ClassId label) {
    require_same_dimension(cb.dim(), x.size());
    const auto correct = best_prototype_of_class(cb, x, label);
    if (!correct) throw UnknownLabel("no prototype carries class " + std::to_string(label));
    const std::size_t winner = find_winner(x, cb);
    const auto winner_label = cb.label(winner);
    if (!winner_label) {
        throw UnknownLabel("winning prototype " + std::to_string(winner) + " has no class");
    }
    if (*winner_label == label) {
        throw std::invalid_argument("equidistant pushback requires a winner of another class");
    }
    const PushbackRate rate = pushback_rate(cb.weight(winner), cb.weight(*correct), x);
    repel(cb, winner, x, rate.eta);
    cb.record_win(winner);
    return {winner, *correct, rate};
}

PushbackStep equidistant_pushback(LabeledCodebook& cb, std::span<const double> x, ClassId label) {
    return equidistant_pushback(cb.codebook(), x, label);
}

LabeledCodebook train_lvq(std::span<const UnitVector> samples,
                          std::span<const std::optional<ClassId>> labels, const LvqTrainConfig& cfg) {
    LabeledCodebook cb = init_labeled_codebook(samples, labels, cfg.prototypes_per_class, cfg.seed);
    RateState rate(cfg.alpha);
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        for (std::size_t i = 0; i < samples.size(); ++i) {
            if (!labels[i]) continue;
            update_lvq(cb, samples[i], *labels[i], rate.step());
        }
    }
    return cb;
}

}  // namespace hybridsom
