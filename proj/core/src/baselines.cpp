#include "hybridsom/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

#include "hybridsom/errors.hpp"
#include "hybridsom/eval.hpp"
#include "hybridsom/lvq.hpp"
#include "hybridsom/rng.hpp"

namespace hybridsom {

namespace {

double sq_dist(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

constexpr double kSingularDistance = 1e-12;

// Memberships of one point; crisp to the first coincident center.
void memberships_into(std::span<const double> x, const std::vector<std::vector<double>>& centers,
                      double fuzzifier, std::span<double> out) {
    const std::size_t c = centers.size();
    std::vector<double> d2(c);
    for (std::size_t k = 0; k < c; ++k) {
        d2[k] = sq_dist(x, centers[k]);
        if (d2[k] < kSingularDistance * kSingularDistance) {
            std::fill(out.begin(), out.end(), 0.0);
            out[k] = 1.0;
            return;
        }
    }
    const double exponent = 1.0 / (fuzzifier - 1.0);
    for (std::size_t k = 0; k < c; ++k) {
        double denom = 0.0;
        for (std::size_t l = 0; l < c; ++l) denom += std::pow(d2[k] / d2[l], exponent);
        out[k] = 1.0 / denom;
    }
}

std::vector<std::vector<double>> centers_from(std::span<const std::vector<double>> data,
                                              const std::vector<std::vector<double>>& u, std::size_t c,
                                              double fuzzifier) {
    const std::size_t n = data.front().size();
    std::vector<std::vector<double>> centers(c, std::vector<double>(n, 0.0));
    std::vector<double> weight(c, 0.0);
    for (std::size_t i = 0; i < data.size(); ++i) {
        for (std::size_t k = 0; k < c; ++k) {
            const double w = std::pow(u[i][k], fuzzifier);
            weight[k] += w;
            for (std::size_t d = 0; d < n; ++d) centers[k][d] += w * data[i][d];
        }
    }
    for (std::size_t k = 0; k < c; ++k) {
        if (weight[k] <= 0.0) continue;
        for (double& v : centers[k]) v /= weight[k];
    }
    return centers;
}

double objective_of(std::span<const std::vector<double>> data, const std::vector<std::vector<double>>& centers,
                    const std::vector<std::vector<double>>& u, double fuzzifier) {
    double j = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        for (std::size_t k = 0; k < centers.size(); ++k) {
            j += std::pow(u[i][k], fuzzifier) * sq_dist(data[i], centers[k]);
        }
    }
    return j;
}

double simplex_error_of(const std::vector<std::vector<double>>& u) {
    double worst = 0.0;
    for (const auto& row : u) {
        double s = 0.0;
        for (double v : row) s += v;
        worst = std::max(worst, std::abs(s - 1.0));
    }
    return worst;
}

}  // namespace

FcmModel fcm_fit(std::span<const std::vector<double>> data, std::size_t clusters, double fuzzifier,
                 double tol, std::size_t max_iter, std::uint64_t seed) {
    if (clusters == 0) throw std::invalid_argument("FCM needs at least one cluster");
    if (data.size() < clusters) throw std::invalid_argument("FCM needs at least as many rows as clusters");
    if (!(fuzzifier > 1.0)) throw std::invalid_argument("FCM fuzzifier must exceed 1");
    if (max_iter == 0) throw std::invalid_argument("FCM max_iter must be at least 1");
    const std::size_t n = data.front().size();
    for (const auto& row : data) require_same_dimension(n, row.size());

    FcmModel model;
    model.fuzzifier = fuzzifier;
    Rng rng(seed);
    model.partition.assign(data.size(), std::vector<double>(clusters));
    for (auto& row : model.partition) {
        double s = 0.0;
        for (double& v : row) {
            v = rng.uniform() + 1e-3;
            s += v;
        }
        for (double& v : row) v /= s;
    }

    for (std::size_t it = 0; it < max_iter; ++it) {
        auto centers = centers_from(data, model.partition, clusters, fuzzifier);
        double shift = std::numeric_limits<double>::infinity();
        if (!model.centers.empty()) {
            shift = 0.0;
            for (std::size_t k = 0; k < clusters; ++k) {
                shift = std::max(shift, std::sqrt(sq_dist(centers[k], model.centers[k])));
            }
        }
        model.centers = std::move(centers);
        for (std::size_t i = 0; i < data.size(); ++i) {
            memberships_into(data[i], model.centers, fuzzifier, model.partition[i]);
        }
        model.objective.push_back(objective_of(data, model.centers, model.partition, fuzzifier));
        model.simplex_error.push_back(simplex_error_of(model.partition));
        model.iterations = it + 1;
        if (shift < tol) {
            model.converged = true;
            break;
        }
    }
    return model;
}

std::vector<double> fcm_memberships(const FcmModel& model, std::span<const double> x) {
    if (model.centers.empty()) throw std::invalid_argument("FCM model has no centers");
    require_same_dimension(model.centers.front().size(), x.size());
    std::vector<double> out(model.centers.size());
    memberships_into(x, model.centers, model.fuzzifier, out);
    return out;
}

double fcm_objective(std::span<const std::vector<double>> data, const FcmModel& model) {
    return objective_of(data, model.centers, model.partition, model.fuzzifier);
}

PreparedData prepare(const Dataset& train, const Dataset& check, bool standardize) {
    require_same_dimension(train.dim(), check.dim());
    PreparedData out;
    Preprocessed tr = preprocess(train, nullptr, standardize);
    Preprocessed ck = preprocess(check, &tr.stats, standardize);
    out.train_x = std::move(tr.samples);
    out.check_x = std::move(ck.samples);
    out.train_z = std::move(tr.standardized);
    out.check_z = std::move(ck.standardized);
    out.stats = std::move(tr.stats);
    out.warnings = std::move(tr.warnings);
    out.warnings.insert(out.warnings.end(), ck.warnings.begin(), ck.warnings.end());
    out.train_labels = train.labels;
    out.train_truth = train.scoring_labels();
    out.check_truth = check.scoring_labels();
    return out;
}

ErrorRates score(std::span<const std::optional<ClassId>> train_pred,
                 std::span<const std::optional<ClassId>> train_truth,
                 std::span<const std::optional<ClassId>> check_pred,
                 std::span<const std::optional<ClassId>> check_truth) {
    // Missing predictions are scored against a sentinel that never matches.
    constexpr ClassId kNoPrediction = std::numeric_limits<ClassId>::min();
    const auto rate = [&](std::span<const std::optional<ClassId>> pred,
                          std::span<const std::optional<ClassId>> truth) {
        std::vector<ClassId> p, t;
        for (std::size_t i = 0; i < truth.size(); ++i) {
            if (!truth[i]) continue;
            t.push_back(*truth[i]);
            p.push_back(pred[i].value_or(kNoPrediction));
        }
        // An absent split is reported as NaN rather than rejected.
        if (t.empty()) return std::numeric_limits<double>::quiet_NaN();
        return misclassification_rate(p, t);
    };
    ErrorRates out;
    out.train_error = rate(train_pred, train_truth);
    out.check_error = rate(check_pred, check_truth);

    std::set<ClassId> classes;
    for (std::size_t i = 0; i < check_truth.size(); ++i) {
        if (!check_truth[i]) continue;
        classes.insert(*check_truth[i]);
        if (check_pred[i]) classes.insert(*check_pred[i]);
    }
    out.classes.assign(classes.begin(), classes.end());
    const auto index_of = [&](ClassId c) {
        return static_cast<std::size_t>(std::lower_bound(out.classes.begin(), out.classes.end(), c) -
                                        out.classes.begin());
    };
    // Rows without a prediction are errors but have no confusion column.
    out.confusion.assign(out.classes.size(), std::vector<std::size_t>(out.classes.size(), 0));
    for (std::size_t i = 0; i < check_truth.size(); ++i) {
        if (!check_truth[i] || !check_pred[i]) continue;
        ++out.confusion[index_of(*check_truth[i])][index_of(*check_pred[i])];
    }
    return out;
}

namespace {

std::set<ClassId> observed_classes(std::span<const std::optional<ClassId>> labels) {
    std::set<ClassId> out;
    for (const auto& l : labels) {
        if (l) out.insert(*l);
    }
    return out;
}

// Builds the cluster->class map from the labeled training rows.
ClusterMap align_labeled(std::span<const std::size_t> train_clusters, std::size_t cluster_count,
                         std::span<const std::optional<ClassId>> labels) {
    std::vector<std::size_t> assigned;
    std::vector<ClassId> truth;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (!labels[i]) continue;
        assigned.push_back(train_clusters[i]);
        truth.push_back(*labels[i]);
    }
    if (truth.empty()) throw EmptyInput("cluster alignment needs labeled training rows");
    return align(assigned, cluster_count, truth);
}

std::vector<std::optional<ClassId>> map_clusters(std::span<const std::size_t> clusters, const ClusterMap& map) {
    std::vector<std::optional<ClassId>> out;
    out.reserve(clusters.size());
    for (std::size_t c : clusters) out.emplace_back(map(c));
    return out;
}

std::size_t class_count(const PreparedData& data) {
    const std::size_t c = observed_classes(data.train_labels).size();
    if (c == 0) throw EmptyInput("no labeled training rows");
    return c;
}

}  // namespace

ErrorRates baseline_som_classifier(const PreparedData& data, const SomBaselineConfig& cfg, std::uint64_t seed) {
    SomTrainConfig som;
    som.m = cfg.m == 0 ? class_count(data) : cfg.m;
    som.rule = cfg.rule;
    som.neighborhood = cfg.neighborhood;
    som.alpha = cfg.alpha;
    som.epochs = cfg.epochs;
    som.seed = seed;
    const Codebook cb = train_som(data.train_x, som);
    const auto train_clusters = assign_nearest(data.train_x, cb);
    const auto check_clusters = assign_nearest(data.check_x, cb);
    const ClusterMap map = align_labeled(train_clusters, cb.size(), data.train_labels);
    return score(map_clusters(train_clusters, map), data.train_truth, map_clusters(check_clusters, map),
                 data.check_truth);
}

ErrorRates baseline_lvq_classifier(const PreparedData& data, const LvqBaselineConfig& cfg, std::uint64_t seed) {
    LvqTrainConfig lvq;
    lvq.prototypes_per_class = cfg.prototypes_per_class;
    lvq.alpha = cfg.alpha;
    lvq.epochs = cfg.epochs;
    lvq.seed = seed;
    const LabeledCodebook cb = train_lvq(data.train_x, data.train_labels, lvq);
    const auto predict = [&](std::span<const UnitVector> xs) {
        std::vector<std::optional<ClassId>> out;
        for (const auto& x : xs) out.emplace_back(cb.label(find_winner(x, cb.codebook())));
        return out;
    };
    return score(predict(data.train_x), data.train_truth, predict(data.check_x), data.check_truth);
}

ErrorRates baseline_fcm_classifier(const PreparedData& data, const FcmConfig& cfg, std::uint64_t seed) {
    const std::size_t c = cfg.clusters == 0 ? class_count(data) : cfg.clusters;
    const FcmModel model = fcm_fit(data.train_z, c, cfg.fuzzifier, cfg.tol, cfg.max_iter, seed);
    const auto argmax = [](const std::vector<double>& u) {
        return static_cast<std::size_t>(std::max_element(u.begin(), u.end()) - u.begin());
    };
    std::vector<std::size_t> train_clusters, check_clusters;
    for (const auto& u : model.partition) train_clusters.push_back(argmax(u));
    for (const auto& z : data.check_z) check_clusters.push_back(argmax(fcm_memberships(model, z)));
    const ClusterMap map = align_labeled(train_clusters, c, data.train_labels);
    return score(map_clusters(train_clusters, map), data.train_truth, map_clusters(check_clusters, map),
                 data.check_truth);
}

ErrorRates hybrid_classifier(const PreparedData& data, const HybridConfig& cfg, std::size_t epochs,
                             std::uint64_t seed) {
    HybridConfig config = cfg;
    config.seed = seed;
    HybridNetwork net = HybridNetwork::initialize(data.train_x, data.train_labels, config);
    std::vector<TrainingEvent> events;
    events.reserve(data.train_x.size());
    for (std::size_t i = 0; i < data.train_x.size(); ++i) events.push_back({data.train_x[i], data.train_labels[i]});
    fit_stream(net, events, epochs);

    if (net.codebook().fully_labeled()) {
        const auto predict = [&](std::span<const UnitVector> xs) {
            std::vector<std::optional<ClassId>> out;
            for (const auto& x : xs) out.push_back(net.predict(x).crisp);
            return out;
        };
        return score(predict(data.train_x), data.train_truth, predict(data.check_x), data.check_truth);
    }
    // Unlabeled codebook: score its clusters like the SOM baseline.
    const auto train_clusters = assign_nearest(data.train_x, net.codebook());
    const auto check_clusters = assign_nearest(data.check_x, net.codebook());
    const ClusterMap map = align_labeled(train_clusters, net.codebook().size(), data.train_labels);
    return score(map_clusters(train_clusters, map), data.train_truth, map_clusters(check_clusters, map),
                 data.check_truth);
}

}  // namespace hybridsom
