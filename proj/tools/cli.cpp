#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "hybridsom/config.hpp"
#include "hybridsom/data.hpp"
#include "hybridsom/errors.hpp"
#include "hybridsom/eval.hpp"
#include "hybridsom/hybrid.hpp"
#include "hybridsom/plot.hpp"

namespace hybridsom::cli {

namespace {

// Validation problems that map to the usage exit code.
class UsageError : public Error {
public:
    using Error::Error;
};

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    return out;
}

std::string default_stats_path(const std::string& model) { return model + ".stats.csv"; }

struct ConfigFlags {
    std::string config_path;
    std::vector<std::string> overrides;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> epochs;

    void add_to(CLI::App& cmd) {
        cmd.add_option("--config", config_path, "Config file with 'key = value' lines");
        cmd.add_option("--set", overrides, "Override a config key (key=value); repeatable");
        cmd.add_option("--seed", seed, "Random seed");
        cmd.add_option("--epochs", epochs, "Passes over the training data");
    }

    // Precedence from lowest: defaults, HYBRIDSOM_SEED, config file, flags.
    RunConfig resolve() const {
        RunConfig cfg;
        if (const char* env = std::getenv("HYBRIDSOM_SEED"); env != nullptr && *env != '\0') {
            cfg.set("seed", env);
        }
        if (!config_path.empty()) cfg = load_config_file(config_path, cfg);
        for (const auto& kv : overrides) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
            std::map<std::string, std::string> one =
                parse_config_text(kv.substr(0, eq) + " = " + kv.substr(eq + 1));
            cfg = apply_config(cfg, one);
        }
        if (seed) cfg.seed = *seed;
        if (epochs) cfg.epochs = *epochs;
        cfg.validate();
        return cfg;
    }
};

Codebook load_model_checked(const std::string& path, const Dataset& ds) {
    Codebook cb = load_model_file(path);
    if (cb.dim() != ds.dim()) {
        throw UsageError("schema mismatch: model dimension " + std::to_string(cb.dim()) + " vs " +
                         std::to_string(ds.dim()) + " feature columns in the data");
    }
    return cb;
}

Standardization load_stats(const std::string& stats_path, const std::string& model_path, std::size_t n) {
    const std::string path = stats_path.empty() ? default_stats_path(model_path) : stats_path;
    std::ifstream probe(path);
    if (!probe) {
        if (!stats_path.empty()) throw Error("cannot open standardization file '" + path + "'");
        return Standardization::identity(n);
    }
    Standardization stats = read_standardization(probe);
    if (stats.mean.size() != n) {
        throw UsageError("schema mismatch: standardization covers " + std::to_string(stats.mean.size()) +
                         " features, data has " + std::to_string(n));
    }
    return stats;
}

// ---- gen ------------------------------------------------------------------

struct GenOptions {
    SyntheticSpec spec;
    std::string out;
};

void cmd_gen(const GenOptions& o, std::ostream& out) {
    const Dataset ds = gen_synthetic(o.spec);
    write_csv_file(o.out, ds);
    out << "N=" << ds.rows() << " n=" << ds.dim() << " labeled=" << ds.labeled_count()
        << " coverage=" << format_double(ds.label_coverage()) << '\n';
}

// ---- train ----------------------------------------------------------------

struct TrainOptions {
    std::string data;
    std::string out_model;
    std::string out_stats;
    std::string log;
    std::string label_column = "label";
    ConfigFlags config;
};

int cmd_train(const TrainOptions& o, std::ostream& out, std::ostream& err) {
    const RunConfig cfg = o.config.resolve();
    CsvSchema schema;
    schema.label_column = o.label_column;
    const Dataset ds = load_csv(o.data, schema);
    const Preprocessed pre = preprocess(ds, nullptr, cfg.standardize);
    for (const auto& w : pre.warnings) err << "warning: " << w << '\n';

    HybridNetwork net = HybridNetwork::initialize(pre.samples, ds.labels, cfg.hybrid());
    std::vector<TrainingEvent> events;
    events.reserve(ds.rows());
    for (std::size_t i = 0; i < ds.rows(); ++i) events.push_back({pre.samples[i], ds.labels[i]});

    std::ofstream log_file;
    std::ostream* log = &out;
    if (!o.log.empty()) {
        log_file = open_output(o.log);
        log = &log_file;
    }
    *log << "init m=" << net.codebook().size() << " n=" << net.codebook().dim()
         << " criterion=" << format_double(quantization_criterion(net.codebook(), pre.samples)) << '\n';
    try {
        fit_stream(net, events, cfg.epochs, [&](const EpochLog& e) {
            *log << "epoch=" << e.epoch << " eta=" << format_double(e.eta)
                 << " criterion=" << format_double(e.criterion) << '\n';
        });
    } catch (const FitError& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    save_model_file(o.out_model, net.codebook());
    write_standardization_file(o.out_stats.empty() ? default_stats_path(o.out_model) : o.out_stats, pre.stats);
    return kExitOk;
}

// ---- predict --------------------------------------------------------------

struct PredictOptions {
    std::string model;
    std::string data;
    std::string stats;
    std::string out;
};

void cmd_predict(const PredictOptions& o) {
    const Dataset ds = load_csv(o.data);
    const Codebook cb = load_model_checked(o.model, ds);
    const Standardization stats = load_stats(o.stats, o.model, ds.dim());
    const Preprocessed pre = preprocess(ds, &stats, true);
    const HybridNetwork net(cb, HybridConfig{});

    std::vector<ClassId> classes;
    for (const auto& l : cb.labels()) {
        if (l && std::find(classes.begin(), classes.end(), *l) == classes.end()) classes.push_back(*l);
    }
    std::sort(classes.begin(), classes.end());
    const bool labeled = cb.fully_labeled();

    std::ofstream out = open_output(o.out);
    if (labeled) out << "class,";
    out << "neuron";
    for (std::size_t j = 0; j < cb.size(); ++j) out << ",mu_" << j;
    for (ClassId c : classes) out << ",class_mu_" << c;
    out << '\n';
    for (const auto& x : pre.samples) {
        const Prediction p = net.predict(x);
        if (labeled) out << *p.crisp << ',';
        out << p.neuron;
        for (double mu : p.neuron_memberships.memberships) out << ',' << format_double(mu);
        for (const auto& [c, mu] : p.class_memberships) out << ',' << format_double(mu);
        out << '\n';
    }
}

// ---- evaluate -------------------------------------------------------------

struct EvaluateOptions {
    std::string model;
    std::string data;
    std::string stats;
    std::string truth_column = "truth";
    std::string out;
};

void cmd_evaluate(const EvaluateOptions& o, std::ostream& out) {
    CsvSchema schema;
    schema.truth_column = o.truth_column;
    if (schema.label_column == schema.truth_column) schema.label_column.clear();
    const Dataset ds = load_csv(o.data, schema);
    if (!ds.has_truth()) {
        throw UsageError("truth column '" + o.truth_column + "' not found in " + o.data);
    }
    const Codebook cb = load_model_checked(o.model, ds);
    if (!cb.fully_labeled()) throw UsageError("model has unlabeled prototypes; evaluate needs class labels");
    const Standardization stats = load_stats(o.stats, o.model, ds.dim());
    const Preprocessed pre = preprocess(ds, &stats, true);
    const HybridNetwork net(cb, HybridConfig{});

    std::vector<std::optional<ClassId>> pred;
    for (const auto& x : pre.samples) pred.push_back(net.predict(x).crisp);
    const ErrorRates rates = score({}, {}, pred, ds.truth);

    EvalReport report;
    report.method = kMethodHybrid;
    report.train_error = std::nan("");
    report.check_error = rates.check_error;
    report.classes = rates.classes;
    report.confusion = rates.confusion;
    report.config_digest = "-";
    const std::vector<EvalReport> reports{report};
    if (o.out.empty()) {
        write_reports_csv(out, reports);
    } else {
        std::ofstream f = open_output(o.out);
        write_reports_csv(f, reports);
    }
}

// ---- compare --------------------------------------------------------------

struct CompareOptions {
    std::string data;
    std::string out;
    std::string summary;
    std::vector<std::uint64_t> seeds;
    std::size_t runs = 5;
    std::optional<double> check_fraction;
    ConfigFlags config;
};

void cmd_compare(const CompareOptions& o, std::ostream& out, std::ostream& err) {
    RunConfig cfg = o.config.resolve();
    if (o.check_fraction) {
        cfg.check_fraction = *o.check_fraction;
        cfg.validate();
    }
    const Dataset ds = load_csv(o.data);
    if (ds.scoring_labels().empty() ||
        std::none_of(ds.scoring_labels().begin(), ds.scoring_labels().end(), [](const auto& l) { return l.has_value(); })) {
        throw UsageError("compare needs a truth or label column in " + o.data);
    }
    const Split parts = split(ds, cfg.check_fraction, cfg.seed);
    for (const auto& w : parts.warnings) err << "warning: " << w << '\n';

    std::vector<std::uint64_t> seeds = o.seeds;
    if (seeds.empty()) {
        for (std::size_t i = 0; i < o.runs; ++i) seeds.push_back(cfg.seed + i);
    }
    const CompareResult result = compare(parts.train, parts.check, cfg.methods(), seeds);
    for (const auto& w : result.warnings) err << "warning: " << w << '\n';
    if (!o.out.empty()) {
        std::ofstream f = open_output(o.out);
        write_reports_csv(f, result.reports);
    }
    const std::string table = format_summary(result.summary);
    out << "train=" << parts.train.rows() << " check=" << parts.check.rows() << " seeds=" << seeds.size() << '\n'
        << table;
    if (!o.summary.empty()) {
        std::ofstream f = open_output(o.summary);
        f << table;
    }
}

// ---- plot -----------------------------------------------------------------

struct PlotOptions {
    std::string data;
    std::string model;
    std::string stats;
    std::string out;
    std::string dims;
    std::string title = "Clustering-classification result";
};

std::pair<std::size_t, std::size_t> parse_dims(const std::string& text, std::size_t n) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) throw UsageError("--dims expects 'x,y' (1-based feature indices)");
    try {
        const auto a = std::stoul(text.substr(0, comma));
        const auto b = std::stoul(text.substr(comma + 1));
        if (a == 0 || b == 0 || a > n || b > n) throw UsageError("--dims index out of range 1.." + std::to_string(n));
        return {a - 1, b - 1};
    } catch (const std::logic_error&) {
        throw UsageError("--dims expects 'x,y' (1-based feature indices)");
    }
}

void cmd_plot(const PlotOptions& o) {
    const Dataset ds = load_csv(o.data);
    std::optional<Codebook> cb;
    Standardization stats = Standardization::identity(ds.dim());
    if (!o.model.empty()) {
        cb = load_model_checked(o.model, ds);
        stats = load_stats(o.stats, o.model, ds.dim());
    }
    const Preprocessed pre = o.model.empty() ? preprocess(ds) : preprocess(ds, &stats, true);

    ScatterPlot plot;
    plot.title = o.title;
    std::vector<int> groups(ds.rows(), -1);
    std::vector<ClassId> group_ids;
    const auto group_of = [&](ClassId c) {
        auto it = std::find(group_ids.begin(), group_ids.end(), c);
        if (it == group_ids.end()) {
            group_ids.push_back(c);
            return static_cast<int>(group_ids.size() - 1);
        }
        return static_cast<int>(it - group_ids.begin());
    };
    // Fix group order by class id so colors do not depend on row order.
    std::vector<ClassId> all_ids;
    if (cb) {
        for (const auto& l : cb->labels()) {
            if (l) all_ids.push_back(*l);
        }
    }
    for (const auto& l : ds.scoring_labels()) {
        if (l) all_ids.push_back(*l);
    }
    std::sort(all_ids.begin(), all_ids.end());
    for (ClassId c : all_ids) group_of(c);

    if (cb) {
        const HybridNetwork net(*cb, HybridConfig{});
        for (std::size_t r = 0; r < ds.rows(); ++r) {
            const Prediction p = net.predict(pre.samples[r]);
            groups[r] = p.crisp ? group_of(*p.crisp) : static_cast<int>(p.neuron);
        }
    } else {
        const auto& labels = ds.scoring_labels();
        for (std::size_t r = 0; r < ds.rows(); ++r) {
            if (r < labels.size() && labels[r]) groups[r] = group_of(*labels[r]);
        }
    }
    for (ClassId c : group_ids) plot.groups.push_back("class " + std::to_string(c));

    if (!o.dims.empty()) {
        const auto [a, b] = parse_dims(o.dims, ds.dim());
        plot.x_label = ds.feature_names[a];
        plot.y_label = ds.feature_names[b];
        for (std::size_t r = 0; r < ds.rows(); ++r) {
            plot.points.push_back({ds.features[r][a], ds.features[r][b], groups[r]});
        }
    } else {
        std::vector<std::vector<double>> rows;
        rows.reserve(pre.samples.size());
        for (const auto& x : pre.samples) rows.push_back(x.components());
        Projection proj;
        try {
            proj = fit_pca(rows);
        } catch (const Error& e) {
            throw UsageError(e.what());
        }
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const auto xy = proj(rows[r]);
            plot.points.push_back({xy[0], xy[1], groups[r]});
        }
        if (cb) {
            for (std::size_t j = 0; j < cb->size(); ++j) {
                const auto xy = proj(cb->weight(j));
                const auto l = cb->label(j);
                plot.prototypes.push_back({xy[0], xy[1], l ? group_of(*l) : static_cast<int>(j)});
            }
        }
    }
    std::ofstream out = open_output(o.out);
    out << render_svg(plot);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Hybrid SOM/LVQ clustering-classification on the unit hypersphere", "hybridsom"};
    app.require_subcommand(1);

    GenOptions gen;
    auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic overlapping-cluster dataset");
    gen_cmd->add_option("--classes", gen.spec.classes, "Number of classes")->check(CLI::PositiveNumber);
    gen_cmd->add_option("--per-class", gen.spec.per_class, "Samples per class")->check(CLI::PositiveNumber);
    gen_cmd->add_option("--dim", gen.spec.dim, "Feature dimension")->check(CLI::PositiveNumber);
    gen_cmd->add_option("--overlap", gen.spec.overlap, "Cluster overlap in [0, 1]")->check(CLI::Range(0.0, 1.0));
    gen_cmd->add_option("--label-fraction", gen.spec.label_fraction, "Fraction of rows keeping labels")
        ->check(CLI::Range(0.0, 1.0));
    gen_cmd->add_option("--seed", gen.spec.seed, "Random seed");
    gen_cmd->add_option("--out", gen.out, "Output CSV path")->required();

    TrainOptions train;
    auto* train_cmd = app.add_subcommand("train", "Train the hybrid network on a dataset CSV");
    train_cmd->add_option("--data", train.data, "Dataset CSV")->required();
    train_cmd->add_option("--out-model", train.out_model, "Model output path")->required();
    train_cmd->add_option("--out-stats", train.out_stats, "Standardization output (default <model>.stats.csv)");
    train_cmd->add_option("--log", train.log, "Write the training log here instead of stdout");
    train_cmd->add_option("--label-column", train.label_column, "Supervision column name");
    train.config.add_to(*train_cmd);

    PredictOptions predict;
    auto* predict_cmd = app.add_subcommand("predict", "Write class and membership columns per row");
    predict_cmd->add_option("--model", predict.model, "Model file")->required();
    predict_cmd->add_option("--data", predict.data, "Dataset CSV")->required();
    predict_cmd->add_option("--stats", predict.stats, "Standardization file (default <model>.stats.csv)");
    predict_cmd->add_option("--out", predict.out, "Membership CSV output")->required();

    EvaluateOptions evaluate;
    auto* evaluate_cmd = app.add_subcommand("evaluate", "Score a model against a truth column");
    evaluate_cmd->add_option("--model", evaluate.model, "Model file")->required();
    evaluate_cmd->add_option("--data", evaluate.data, "Dataset CSV")->required();
    evaluate_cmd->add_option("--stats", evaluate.stats, "Standardization file (default <model>.stats.csv)");
    evaluate_cmd->add_option("--truth-column", evaluate.truth_column, "Ground-truth column name");
    evaluate_cmd->add_option("--out", evaluate.out, "Report CSV output (default stdout)");

    CompareOptions cmp;
    auto* compare_cmd = app.add_subcommand("compare", "Hybrid vs SOM, LVQ and FCM over several seeds");
    compare_cmd->add_option("--data", cmp.data, "Dataset CSV")->required();
    compare_cmd->add_option("--out", cmp.out, "Report CSV output");
    compare_cmd->add_option("--summary", cmp.summary, "Summary table output");
    compare_cmd->add_option("--seeds", cmp.seeds, "Seed list")->delimiter(',');
    compare_cmd->add_option("--runs", cmp.runs, "Seeds seed..seed+runs-1 when --seeds is absent")
        ->check(CLI::PositiveNumber);
    compare_cmd->add_option("--check-fraction", cmp.check_fraction, "Held-out fraction");
    cmp.config.add_to(*compare_cmd);

    PlotOptions plot;
    auto* plot_cmd = app.add_subcommand("plot", "Render an SVG scatter plot of the data");
    plot_cmd->add_option("--data", plot.data, "Dataset CSV")->required();
    plot_cmd->add_option("--model", plot.model, "Model file; colors follow its predictions");
    plot_cmd->add_option("--stats", plot.stats, "Standardization file (default <model>.stats.csv)");
    plot_cmd->add_option("--out", plot.out, "SVG output path")->required();
    plot_cmd->add_option("--dims", plot.dims, "Plot raw features x,y (1-based) instead of PCA");
    plot_cmd->add_option("--title", plot.title, "Plot title");

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*gen_cmd) cmd_gen(gen, out);
        else if (*train_cmd) return cmd_train(train, out, err);
        else if (*predict_cmd) cmd_predict(predict);
        else if (*evaluate_cmd) cmd_evaluate(evaluate, out);
        else if (*compare_cmd) cmd_compare(cmp, out, err);
        else if (*plot_cmd) cmd_plot(plot);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitOk;
}

}  // namespace hybridsom::cli
