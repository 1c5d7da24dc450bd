#include "hybridsom/hybrid.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "hybridsom/errors.hpp"

namespace hybridsom {

void HybridConfig::validate() const {
    if (m == 0) throw ConfigError("m must be at least 1");
    if (prototypes_per_class == 0) throw ConfigError("prototypes_per_class must be at least 1");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in [0, 1]");
    neighborhood.validate();
}

HybridNetwork::HybridNetwork(Codebook codebook, HybridConfig config)
    : codebook_(std::move(codebook)),
      config_(std::move(config)),
      rate_(config_.alpha),
      sigma_(config_.neighborhood.sigma) {
    config_.validate();
}

HybridNetwork HybridNetwork::initialize(std::span<const UnitVector> samples,
                                        std::span<const std::optional<ClassId>> labels,
                                        const HybridConfig& config) {
    config.validate();
    if (samples.empty()) throw EmptyInput("initialization needs at least one sample");
    if (samples.size() != labels.size()) throw std::invalid_argument("one label slot per sample is required");
    const bool any_labeled = std::any_of(labels.begin(), labels.end(), [](const auto& l) { return l.has_value(); });
    if (any_labeled) {
        LabeledCodebook cb = init_labeled_codebook(samples, labels, config.prototypes_per_class, config.seed);
        return HybridNetwork(std::move(cb.codebook()), config);
    }
    return HybridNetwork(Codebook::random(config.m, samples.front().size(), config.seed), config);
}

StepInfo HybridNetwork::step(const TrainingEvent& event) {
    const auto& x = event.x;
    require_same_dimension(codebook_.dim(), x.size());
    if (event.label && !codebook_.has_label(*event.label)) {
        throw UnknownLabel("no prototype carries class " + std::to_string(*event.label));
    }

    // The rate state is committed only once the update has succeeded.
    RateState rate = rate_;
    const double shared_eta = rate.step();
    const auto rate_for = [&](std::size_t winner) {
        return config_.rate_mode == RateMode::per_neuron ? win_count_rate(codebook_.win_count(winner) + 1)
                                                         : shared_eta;
    };

    StepInfo info{Branch::self_learning, std::nullopt, shared_eta, 0, true};
    if (!event.label) {
        switch (config_.unsupervised_rule) {
            case UnsupervisedRule::wta: {
                const std::size_t j = find_winner(x, codebook_);
                info.eta = rate_for(j);
                attract(codebook_, j, x, info.eta);
                codebook_.record_win(j);
                info.winner = j;
                break;
            }
            case UnsupervisedRule::wtm: {
                const std::size_t j = find_winner(x, codebook_);
                info.eta = rate_for(j);
                NeighborhoodConfig nb = config_.neighborhood;
                nb.sigma = sigma_;
                update_wtm(codebook_, x, info.eta, nb);
                sigma_ = std::max(sigma_ * nb.sigma_decay, std::numeric_limits<double>::min());
                info.winner = j;
                break;
            }
            case UnsupervisedRule::instar:
                update_instar(codebook_, x, shared_eta);
                break;
        }
        rate_ = rate;
        return info;
    }

    const std::size_t j = find_winner(x, codebook_);
    const auto winner_label = codebook_.label(j);
    if (!winner_label) throw UnknownLabel("winning prototype " + std::to_string(j) + " has no class");
    info.winner = j;
    info.eta = rate_for(j);
    if (*winner_label == *event.label) {
        info.branch = Branch::attract;
        attract(codebook_, j, x, info.eta);
    } else {
        info.branch = Branch::repel;
        info.delta_l = 1;
        if (config_.pushback_mode == PushbackMode::equidistant) {
            const std::size_t p = *best_prototype_of_class(codebook_, x, *event.label);
            const PushbackRate push = pushback_rate(codebook_.weight(j), codebook_.weight(p), x);
            info.eta = push.eta;
            info.equidistant = push.bracketed;
        } else {
            info.eta = std::min(info.eta, kMaxRepelRate);
        }
        repel(codebook_, j, x, info.eta);
    }
    codebook_.record_win(j);
    rate_ = rate;
    return info;
}

Prediction HybridNetwork::predict(std::span<const double> x) const {
    require_same_dimension(codebook_.dim(), x.size());
    Prediction out;
    out.neuron_memberships = membership(x, codebook_.weights());
    bool any_positive = false;
    for (const auto& w : codebook_.weights()) any_positive = any_positive || similarity(w, x) > 0.0;
    // With every similarity at zero the memberships are uniform; fall back to
    // the nearest prototype for the crisp decision.
    out.neuron = any_positive ? out.neuron_memberships.argmax() : find_winner(x, codebook_);
    out.crisp = codebook_.label(out.neuron);

    std::map<ClassId, double> per_class;
    for (std::size_t j = 0; j < codebook_.size(); ++j) {
        if (const auto l = codebook_.label(j)) per_class[*l] += out.neuron_memberships[j];
    }
    out.class_memberships.assign(per_class.begin(), per_class.end());
    return out;
}

void fit_stream(HybridNetwork& net, std::span<const TrainingEvent> events, std::size_t epochs,
                const std::function<void(const EpochLog&)>& on_epoch) {
    if (events.empty() && epochs > 0) throw EmptyInput("training stream is empty");
    std::vector<UnitVector> samples;
    if (on_epoch) {
        samples.reserve(events.size());
        for (const auto& ev : events) samples.push_back(ev.x);
    }
    for (std::size_t epoch = 1; epoch <= epochs; ++epoch) {
        for (std::size_t i = 0; i < events.size(); ++i) {
            try {
                net.step(events[i]);
            } catch (const Error& e) {
                throw FitError(i, epoch, e.what());
            } catch (const std::invalid_argument& e) {
                throw FitError(i, epoch, e.what());
            }
        }
        if (on_epoch) on_epoch({epoch, net.rate().eta(), quantization_criterion(net.codebook(), samples)});
    }
}

namespace {

std::string format_weight(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::scientific, 16);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& token, std::size_t line) {
    double v = 0.0;
    const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
    if (res.ec != std::errc() || res.ptr != token.data() + token.size()) {
        throw ParseError("malformed number '" + token + "' in model file", line, 0);
    }
    return v;
}

}  // namespace

void save_model(std::ostream& out, const Codebook& cb) {
    out << "hybridsom v1 " << cb.dim() << ' ' << cb.size() << '\n';
    for (std::size_t j = 0; j < cb.size(); ++j) {
        const auto l = cb.label(j);
        out << (l ? std::to_string(*l) : std::string("-")) << ' ' << cb.win_count(j);
        for (double w : cb.weight(j)) out << ' ' << format_weight(w);
        out << '\n';
    }
}

Codebook load_model(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty model file");
    std::istringstream header(line);
    std::string magic, version;
    std::size_t n = 0, m = 0;
    if (!(header >> magic >> version >> n >> m) || magic != "hybridsom") {
        throw ParseError("model header must read 'hybridsom v1 <n> <m>'", 1, 0);
    }
    if (version != "v1") throw ParseError("unsupported model version '" + version + "'", 1, 0);
    if (n == 0 || m == 0) throw ParseError("model dimensions must be positive", 1, 0);

    std::vector<std::vector<double>> weights;
    std::vector<std::uint64_t> counts;
    std::vector<std::optional<ClassId>> labels;
    for (std::size_t j = 0; j < m; ++j) {
        const std::size_t line_no = j + 2;
        if (!std::getline(in, line)) throw ParseError("model file ends before neuron " + std::to_string(j), line_no, 0);
        std::istringstream row(line);
        std::string label, count;
        if (!(row >> label >> count)) throw ParseError("neuron line needs label and win count", line_no, 0);
        if (label == "-") {
            labels.emplace_back();
        } else {
            ClassId c = 0;
            const auto res = std::from_chars(label.data(), label.data() + label.size(), c);
            if (res.ec != std::errc() || res.ptr != label.data() + label.size()) {
                throw ParseError("malformed class label '" + label + "'", line_no, 1);
            }
            labels.emplace_back(c);
        }
        std::uint64_t k = 0;
        const auto res = std::from_chars(count.data(), count.data() + count.size(), k);
        if (res.ec != std::errc() || res.ptr != count.data() + count.size()) {
            throw ParseError("malformed win count '" + count + "'", line_no, 2);
        }
        counts.push_back(k);
        std::vector<double> w;
        std::string token;
        while (row >> token) w.push_back(parse_double(token, line_no));
        if (w.size() != n) {
            throw ParseError("neuron line holds " + std::to_string(w.size()) + " weights, expected " +
                                 std::to_string(n),
                             line_no, 0);
        }
        weights.push_back(std::move(w));
    }
    try {
        return Codebook::restore(std::move(weights), std::move(counts), std::move(labels));
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("invalid model: ") + e.what());
    }
}

void save_model_file(const std::string& path, const Codebook& cb) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    save_model(out, cb);
    if (!out) throw Error("failed writing '" + path + "'");
}

Codebook load_model_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open model file '" + path + "'");
    return load_model(in);
}

}  // namespace hybridsom
