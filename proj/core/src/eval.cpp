#include "hybridsom/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "hybridsom/errors.hpp"

namespace hybridsom {

double misclassification_rate(std::span<const ClassId> predicted, std::span<const ClassId> truth) {
    if (predicted.size() != truth.size()) {
        throw std::invalid_argument("predicted and truth sequences differ in length");
    }
    if (truth.empty()) throw EmptyInput("misclassification rate of an empty sample");
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) wrong += predicted[i] != truth[i] ? 1 : 0;
    return 100.0 * static_cast<double>(wrong) / static_cast<double>(truth.size());
}

ClusterMap align(std::span<const std::size_t> assignments, std::size_t cluster_count,
                 std::span<const ClassId> truth) {
    if (assignments.size() != truth.size()) {
        throw std::invalid_argument("one truth label per assignment is required");
    }
    if (truth.empty()) throw EmptyInput("alignment needs at least one labeled sample");
    if (cluster_count == 0) throw std::invalid_argument("alignment needs at least one cluster");

    std::vector<ClassId> classes(truth.begin(), truth.end());
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
    const std::size_t c = classes.size();
    const auto class_index = [&](ClassId id) {
        return static_cast<std::size_t>(std::lower_bound(classes.begin(), classes.end(), id) - classes.begin());
    };

    std::vector<std::vector<std::size_t>> agree(cluster_count, std::vector<std::size_t>(c, 0));
    std::vector<std::size_t> cluster_size(cluster_count, 0);
    std::vector<std::size_t> class_size(c, 0);
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (assignments[i] >= cluster_count) throw std::out_of_range("cluster index out of range");
        const std::size_t k = class_index(truth[i]);
        ++agree[assignments[i]][k];
        ++cluster_size[assignments[i]];
        ++class_size[k];
    }
    const std::size_t most_frequent =
        static_cast<std::size_t>(std::max_element(class_size.begin(), class_size.end()) - class_size.begin());

    ClusterMap map;
    map.cluster_to_class.assign(cluster_count, classes[most_frequent]);
    if (cluster_count == c && c <= kMaxExhaustiveClusters) {
        map.exhaustive = true;
        std::vector<std::size_t> perm(c);
        std::iota(perm.begin(), perm.end(), 0);
        std::vector<std::size_t> best = perm;
        std::size_t best_total = 0;
        bool first = true;
        do {
            std::size_t total = 0;
            for (std::size_t k = 0; k < c; ++k) total += agree[k][perm[k]];
            if (first || total > best_total) {
                best_total = total;
                best = perm;
                first = false;
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
        for (std::size_t k = 0; k < c; ++k) map.cluster_to_class[k] = classes[best[k]];
    } else {
        for (std::size_t k = 0; k < cluster_count; ++k) {
            const auto& row = agree[k];
            map.cluster_to_class[k] =
                classes[static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin())];
        }
    }
    for (std::size_t k = 0; k < cluster_count; ++k) {
        if (cluster_size[k] == 0) {
            map.empty_clusters.push_back(k);
            map.cluster_to_class[k] = classes[most_frequent];
        }
    }
    return map;
}

std::string canonical_config(const MethodsConfig& cfg) {
    std::ostringstream out;
    out.precision(17);
    const auto& h = cfg.hybrid;
    out << "alpha=" << h.alpha << '\n'
        << "epochs=" << cfg.epochs << '\n'
        << "m=" << h.m << '\n'
        << "prototypes_per_class=" << h.prototypes_per_class << '\n'
        << "pushback_mode=" << to_string(h.pushback_mode) << '\n'
        << "rate_mode=" << to_string(h.rate_mode) << '\n'
        << "rule=" << to_string(h.unsupervised_rule) << '\n'
        << "sigma=" << h.neighborhood.sigma << '\n'
        << "sigma_decay=" << h.neighborhood.sigma_decay << '\n'
        << "standardize=" << (cfg.standardize ? "on" : "off") << '\n'
        << "baselines.som_m=" << cfg.som.m << '\n'
        << "baselines.som_rule=" << to_string(cfg.som.rule) << '\n'
        << "baselines.som_alpha=" << cfg.som.alpha << '\n'
        << "baselines.som_epochs=" << cfg.som.epochs << '\n'
        << "baselines.lvq_prototypes_per_class=" << cfg.lvq.prototypes_per_class << '\n'
        << "baselines.lvq_alpha=" << cfg.lvq.alpha << '\n'
        << "baselines.lvq_epochs=" << cfg.lvq.epochs << '\n'
        << "baselines.fcm_clusters=" << cfg.fcm.clusters << '\n'
        << "baselines.fcm_fuzzifier=" << cfg.fcm.fuzzifier << '\n'
        << "baselines.fcm_tol=" << cfg.fcm.tol << '\n'
        << "baselines.fcm_max_iter=" << cfg.fcm.max_iter << '\n';
    return out.str();
}

std::string config_digest(const MethodsConfig& cfg) {
    // FNV-1a, 64 bit.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : canonical_config(cfg)) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

CompareResult compare(const Dataset& train, const Dataset& check, const MethodsConfig& cfg,
                      std::span<const std::uint64_t> seeds) {
    CompareResult result;
    const PreparedData data = prepare(train, check, cfg.standardize);
    result.warnings = data.warnings;
    const std::string digest = config_digest(cfg);

    const auto run = [&](const char* method, std::uint64_t seed, auto&& body) {
        EvalReport report;
        report.method = method;
        report.seed = seed;
        report.config_digest = digest;
        try {
            const ErrorRates rates = body();
            report.train_error = rates.train_error;
            report.check_error = rates.check_error;
            report.classes = rates.classes;
            report.confusion = rates.confusion;
        } catch (const std::exception& e) {
            report.failure = e.what();
        }
        result.reports.push_back(std::move(report));
    };

    for (std::uint64_t seed : seeds) {
        run(kMethodHybrid, seed, [&] { return hybrid_classifier(data, cfg.hybrid, cfg.epochs, seed); });
        run(kMethodSom, seed, [&] { return baseline_som_classifier(data, cfg.som, seed); });
        run(kMethodLvq, seed, [&] { return baseline_lvq_classifier(data, cfg.lvq, seed); });
        run(kMethodFcm, seed, [&] { return baseline_fcm_classifier(data, cfg.fcm, seed); });
    }
    result.summary = summarize(result.reports);
    return result;
}

std::vector<SummaryRow> summarize(std::span<const EvalReport> reports) {
    std::vector<SummaryRow> rows;
    std::map<std::string, std::size_t> index;
    std::vector<std::vector<const EvalReport*>> groups;
    for (const auto& r : reports) {
        auto [it, inserted] = index.try_emplace(r.method, rows.size());
        if (inserted) {
            rows.push_back({r.method});
            groups.emplace_back();
        }
        groups[it->second].push_back(&r);
    }
    const auto mean_std = [](const std::vector<double>& v) {
        if (v.empty()) return std::pair{0.0, 0.0};
        const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
        if (v.size() < 2) return std::pair{mean, 0.0};
        double ss = 0.0;
        for (double x : v) ss += (x - mean) * (x - mean);
        return std::pair{mean, std::sqrt(ss / static_cast<double>(v.size() - 1))};
    };
    for (std::size_t g = 0; g < rows.size(); ++g) {
        std::vector<double> train, check;
        for (const auto* r : groups[g]) {
            if (r->failure) {
                ++rows[g].failed;
                continue;
            }
            train.push_back(r->train_error);
            check.push_back(r->check_error);
        }
        rows[g].runs = groups[g].size();
        std::tie(rows[g].train_mean, rows[g].train_std) = mean_std(train);
        std::tie(rows[g].check_mean, rows[g].check_std) = mean_std(check);
    }
    return rows;
}

void write_reports_csv(std::ostream& out, std::span<const EvalReport> reports) {
    out << "method,seed,train_error,check_error,classes,confusion,config_digest,status\n";
    char buf[64];
    for (const auto& r : reports) {
        out << r.method << ',' << r.seed << ',';
        if (r.failure) {
            out << ",,,," << r.config_digest << ",\"failed: ";
            for (char ch : *r.failure) out << (ch == '"' ? '\'' : ch);
            out << "\"\n";
            continue;
        }
        // NaN marks a column that does not apply (evaluate has no training split).
        for (double v : {r.train_error, r.check_error}) {
            if (!std::isnan(v)) {
                std::snprintf(buf, sizeof(buf), "%.6f", v);
                out << buf;
            }
            out << ',';
        }
        for (std::size_t k = 0; k < r.classes.size(); ++k) out << (k ? ";" : "") << r.classes[k];
        out << ',';
        bool first = true;
        for (const auto& row : r.confusion) {
            for (std::size_t v : row) {
                out << (first ? "" : ";") << v;
                first = false;
            }
        }
        out << ',' << r.config_digest << ",ok\n";
    }
}

std::string format_summary(std::span<const SummaryRow> summary) {
    std::ostringstream out;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%-8s %5s %6s  %-20s %-20s\n", "method", "runs", "failed",
                  "train error %", "check error %");
    out << buf;
    for (const auto& r : summary) {
        char train[32], check[32];
        std::snprintf(train, sizeof(train), "%.2f +/- %.2f", r.train_mean, r.train_std);
        std::snprintf(check, sizeof(check), "%.2f +/- %.2f", r.check_mean, r.check_std);
        std::snprintf(buf, sizeof(buf), "%-8s %5zu %6zu  %-20s %-20s\n", r.method.c_str(), r.runs, r.failed,
                      train, check);
        out << buf;
    }
    return out.str();
}

}  // namespace hybridsom
