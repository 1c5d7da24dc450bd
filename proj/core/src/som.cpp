#include "hybridsom/som.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "hybridsom/errors.hpp"
#include "hybridsom/rng.hpp"
#include "hybridsom/schedule.hpp"

namespace hybridsom {

UnsupervisedRule parse_rule(std::string_view text) {
    if (text == "wta") return UnsupervisedRule::wta;
    if (text == "wtm") return UnsupervisedRule::wtm;
    if (text == "instar") return UnsupervisedRule::instar;
    throw ConfigError("rule must be one of {wta, wtm, instar}, got '" + std::string(text) + "'");
}

std::string_view to_string(UnsupervisedRule rule) {
    switch (rule) {
        case UnsupervisedRule::wta: return "wta";
        case UnsupervisedRule::wtm: return "wtm";
        case UnsupervisedRule::instar: return "instar";
    }
    return "wta";
}

Codebook::Codebook(std::vector<std::vector<double>> weights,
                   std::vector<std::optional<ClassId>> labels)
    : dim_(weights.empty() ? 0 : weights.front().size()),
      weights_(std::move(weights)),
      win_counts_(weights_.size(), 0),
      labels_(std::move(labels)) {
    if (weights_.empty()) throw std::invalid_argument("codebook needs at least one neuron");
    if (dim_ == 0) throw std::invalid_argument("codebook dimension must be at least 1");
    for (auto& w : weights_) {
        require_same_dimension(dim_, w.size());
        if (!try_normalize_in_place(w)) throw ZeroVector();
    }
    if (labels_.empty()) labels_.resize(weights_.size());
    if (labels_.size() != weights_.size()) {
        throw std::invalid_argument("codebook label count must match neuron count");
    }
}

Codebook Codebook::restore(std::vector<std::vector<double>> weights,
                           std::vector<std::uint64_t> win_counts,
                           std::vector<std::optional<ClassId>> labels) {
    if (weights.empty()) throw std::invalid_argument("codebook needs at least one neuron");
    if (win_counts.size() != weights.size() || labels.size() != weights.size()) {
        throw std::invalid_argument("win counts and labels must match the neuron count");
    }
    Codebook cb;
    cb.dim_ = weights.front().size();
    if (cb.dim_ == 0) throw std::invalid_argument("codebook dimension must be at least 1");
    for (std::size_t j = 0; j < weights.size(); ++j) {
        require_same_dimension(cb.dim_, weights[j].size());
        if (std::abs(norm(weights[j]) - 1.0) > kUnitNormTolerance) {
            throw std::invalid_argument("stored weight " + std::to_string(j) + " is not unit-norm");
        }
    }
    cb.weights_ = std::move(weights);
    cb.win_counts_ = std::move(win_counts);
    cb.labels_ = std::move(labels);
    return cb;
}

Codebook Codebook::random(std::size_t m, std::size_t n, std::uint64_t seed,
                          std::vector<std::optional<ClassId>> labels) {
    if (m == 0 || n == 0) throw std::invalid_argument("codebook needs m >= 1 and n >= 1");
    Rng rng(seed);
    std::vector<std::vector<double>> weights(m, std::vector<double>(n));
    for (auto& w : weights) {
        do {
            for (double& c : w) c = rng.uniform(-1.0, 1.0);
        } while (norm(w) < 1e-6);
    }
    return Codebook(std::move(weights), std::move(labels));
}

bool Codebook::fully_labeled() const noexcept {
    for (const auto& l : labels_) {
        if (!l) return false;
    }
    return true;
}

bool Codebook::has_label(ClassId c) const noexcept {
    for (const auto& l : labels_) {
        if (l && *l == c) return true;
    }
    return false;
}

void Codebook::set_weight(std::size_t j, std::vector<double> w) {
    require_same_dimension(dim_, w.size());
    weights_.at(j) = std::move(w);
}

void NeighborhoodConfig::validate() const {
    if (!(sigma > 0.0)) throw ConfigError("sigma must be positive");
    if (!(sigma_decay > 0.0 && sigma_decay <= 1.0)) throw ConfigError("sigma_decay must lie in (0, 1]");
}

std::size_t find_winner(std::span<const double> x, const Codebook& cb) {
    require_same_dimension(cb.dim(), x.size());
    std::size_t best = 0;
    double best_y = activation(cb.weight(0), x);
    for (std::size_t j = 1; j < cb.size(); ++j) {
        const double y = activation(cb.weight(j), x);
        if (y > best_y) {
            best_y = y;
            best = j;
        }
    }
    return best;
}

std::vector<std::size_t> assign_nearest(std::span<const UnitVector> samples, const Codebook& cb) {
    std::vector<std::size_t> out;
    out.reserve(samples.size());
    for (const auto& x : samples) out.push_back(find_winner(x, cb));
    return out;
}

namespace {

// w + sign * step * (x - w), optionally renormalized.
std::vector<double> moved(std::span<const double> w, std::span<const double> x, double signed_step,
                          Renormalize renorm, std::size_t neuron) {
    std::vector<double> out(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) out[i] = w[i] + signed_step * (x[i] - w[i]);
    if (renorm == Renormalize::on) {
        if (!try_normalize_in_place(out)) throw DegenerateUpdate(neuron);
    } else if (norm(out) < kZeroNormThreshold) {
        throw DegenerateUpdate(neuron);
    }
    return out;
}

void check_rate(double eta) {
    if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("learning rate must lie in [0, 1]");
}

}  // namespace

void attract(Codebook& cb, std::size_t j, std::span<const double> x, double step, Renormalize renorm) {
    require_same_dimension(cb.dim(), x.size());
    if (step == 0.0) return;
    cb.set_weight(j, moved(cb.weight(j), x, step, renorm, j));
}

void repel(Codebook& cb, std::size_t j, std::span<const double> x, double step, Renormalize renorm) {
    require_same_dimension(cb.dim(), x.size());
    if (step == 0.0) return;
    cb.set_weight(j, moved(cb.weight(j), x, -step, renorm, j));
}

std::vector<double> repelled(std::span<const double> w, std::span<const double> x, double step) {
    require_same_dimension(w.size(), x.size());
    return moved(w, x, -step, Renormalize::on, 0);
}

std::size_t update_wta(Codebook& cb, std::span<const double> x, double eta, Renormalize renorm) {
    check_rate(eta);
    const std::size_t winner = find_winner(x, cb);
    attract(cb, winner, x, eta, renorm);
    cb.record_win(winner);
    return winner;
}

double neighborhood(std::size_t winner, std::size_t p, const Codebook& cb,
                    const NeighborhoodConfig& cfg) {
    if (p == winner) return 1.0;
    const double d2 = squared_distance(cb.weight(winner), cb.weight(p));
    if (d2 == 0.0) return 1.0;
    return std::exp(-d2 / (2.0 * cfg.sigma * cfg.sigma));
}

std::size_t update_wtm(Codebook& cb, std::span<const double> x, double eta,
                       const NeighborhoodConfig& cfg, Renormalize renorm) {
    check_rate(eta);
    cfg.validate();
    const std::size_t winner = find_winner(x, cb);
    // Neighborhood weights come from the pre-update codebook; all moves are
    // computed before any is applied so a degenerate neuron leaves cb intact.
    std::vector<std::optional<std::vector<double>>> next(cb.size());
    for (std::size_t p = 0; p < cb.size(); ++p) {
        const double step = eta * neighborhood(winner, p, cb, cfg);
        if (step == 0.0) continue;
        next[p] = moved(cb.weight(p), x, step, renorm, p);
    }
    for (std::size_t p = 0; p < cb.size(); ++p) {
        if (next[p]) cb.set_weight(p, std::move(*next[p]));
    }
    cb.record_win(winner);
    return winner;
}

void update_instar(Codebook& cb, std::span<const double> x, double eta, Renormalize renorm) {
    check_rate(eta);
    require_same_dimension(cb.dim(), x.size());
    std::vector<std::optional<std::vector<double>>> next(cb.size());
    for (std::size_t p = 0; p < cb.size(); ++p) {
        const double step = eta * similarity(cb.weight(p), x);
        if (step == 0.0) continue;
        next[p] = moved(cb.weight(p), x, step, renorm, p);
    }
    for (std::size_t p = 0; p < cb.size(); ++p) {
        if (next[p]) cb.set_weight(p, std::move(*next[p]));
    }
}

double quantization_criterion(const Codebook& cb, std::span<const UnitVector> samples,
                              std::span<const std::size_t> assigned,
                              const NeighborhoodConfig* nb) {
    if (samples.size() != assigned.size()) {
        throw std::invalid_argument("one assignment per sample is required");
    }
    double total = 0.0;
    for (std::size_t t = 0; t < samples.size(); ++t) {
        const std::size_t j = assigned[t];
        if (j >= cb.size()) throw std::out_of_range("assignment index out of range");
        if (nb == nullptr) {
            total += squared_distance(samples[t], cb.weight(j));
            continue;
        }
        for (std::size_t p = 0; p < cb.size(); ++p) {
            total += neighborhood(j, p, cb, *nb) * squared_distance(samples[t], cb.weight(p));
        }
    }
    return total;
}

double quantization_criterion(const Codebook& cb, std::span<const UnitVector> samples) {
    const auto assigned = assign_nearest(samples, cb);
    return quantization_criterion(cb, samples, assigned);
}

Codebook train_som(std::span<const UnitVector> samples, const SomTrainConfig& cfg) {
    if (samples.empty()) throw EmptyInput("SOM training needs at least one sample");
    cfg.neighborhood.validate();
    Codebook cb = Codebook::random(cfg.m, samples.front().size(), cfg.seed);
    RateState rate(cfg.alpha);
    NeighborhoodConfig nb = cfg.neighborhood;
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        for (const auto& x : samples) {
            const double eta = rate.step();
            switch (cfg.rule) {
                case UnsupervisedRule::wta: update_wta(cb, x, eta); break;
                case UnsupervisedRule::wtm:
                    update_wtm(cb, x, eta, nb);
                    nb.sigma = std::max(nb.sigma * nb.sigma_decay, std::numeric_limits<double>::min());
                    break;
                case UnsupervisedRule::instar: update_instar(cb, x, eta); break;
            }
        }
    }
    return cb;
}

}  // namespace hybridsom
