#include "hybridsom/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "hybridsom/errors.hpp"
#include "hybridsom/rng.hpp"

namespace hybridsom {

double Dataset::label_coverage() const noexcept {
    if (labels.empty()) return 0.0;
    return static_cast<double>(labeled_count()) / static_cast<double>(labels.size());
}

std::size_t Dataset::labeled_count() const noexcept {
    return static_cast<std::size_t>(
        std::count_if(labels.begin(), labels.end(), [](const auto& l) { return l.has_value(); }));
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
    Dataset out;
    out.feature_names = feature_names;
    for (std::size_t r : rows) {
        out.features.push_back(features.at(r));
        out.labels.push_back(labels.at(r));
        if (has_truth()) out.truth.push_back(truth.at(r));
    }
    return out;
}

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

// Splits one CSV record; double quotes may wrap a field and "" escapes a quote.
std::vector<std::string> split_record(const std::string& line, std::size_t row) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    bool was_quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(ch);
            }
        } else if (ch == '"') {
            quoted = true;
            was_quoted = true;
        } else if (ch == ',') {
            fields.push_back(was_quoted ? cur : trim(cur));
            cur.clear();
            was_quoted = false;
        } else {
            cur.push_back(ch);
        }
    }
    if (quoted) throw ParseError("unterminated quoted field", row, fields.size() + 1);
    fields.push_back(was_quoted ? cur : trim(cur));
    return fields;
}

std::optional<ClassId> parse_label(const std::string& cell, std::size_t row, std::size_t col) {
    if (cell.empty()) return std::nullopt;
    ClassId c = 0;
    const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), c);
    if (res.ec != std::errc() || res.ptr != cell.data() + cell.size()) {
        throw ParseError("class label '" + cell + "' is not an integer", row, col);
    }
    return c;
}

std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

bool needs_quotes(const std::string& s) {
    return s.find_first_of(",\"\r\n") != std::string::npos || s != trim(s);
}

std::string quote(const std::string& s) {
    if (!needs_quotes(s)) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out.push_back('"');
        out.push_back(ch);
    }
    out.push_back('"');
    return out;
}

}  // namespace

Dataset parse_csv(std::istream& in, const CsvSchema& schema) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("missing header row");
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    const auto header = split_record(line, 0);

    std::optional<std::size_t> label_col;
    std::optional<std::size_t> truth_col;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (!schema.label_column.empty() && header[c] == schema.label_column && !label_col) label_col = c;
        else if (!schema.truth_column.empty() && header[c] == schema.truth_column && !truth_col) truth_col = c;
    }
    if (schema.label_required && !label_col) {
        throw ParseError("label column '" + schema.label_column + "' not found in header");
    }
    if (schema.truth_required && !truth_col) {
        throw ParseError("truth column '" + schema.truth_column + "' not found in header");
    }

    Dataset ds;
    std::vector<std::size_t> feature_cols;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (c == label_col || c == truth_col) continue;
        feature_cols.push_back(c);
        ds.feature_names.push_back(header[c]);
    }
    if (feature_cols.empty()) throw ParseError("no feature columns in header");

    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) continue;
        const auto cells = split_record(line, row);
        if (cells.size() != header.size()) {
            throw ParseError("expected " + std::to_string(header.size()) + " fields, found " +
                                 std::to_string(cells.size()),
                             row, std::min(cells.size(), header.size()) + 1);
        }
        std::vector<double> feats;
        feats.reserve(feature_cols.size());
        for (std::size_t c : feature_cols) {
            const std::string& cell = cells[c];
            double v = 0.0;
            const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (cell.empty() || res.ec != std::errc() || res.ptr != cell.data() + cell.size()) {
                throw ParseError("non-numeric value '" + cell + "' in feature column '" + header[c] + "'", row,
                                 c + 1);
            }
            if (!std::isfinite(v)) {
                throw ParseError("non-finite value in feature column '" + header[c] + "'", row, c + 1);
            }
            feats.push_back(v);
        }
        ds.features.push_back(std::move(feats));
        ds.labels.push_back(label_col ? parse_label(cells[*label_col], row, *label_col + 1) : std::nullopt);
        if (truth_col) ds.truth.push_back(parse_label(cells[*truth_col], row, *truth_col + 1));
    }
    if (ds.features.empty()) throw ParseError("dataset has no rows");
    return ds;
}

Dataset load_csv(const std::string& path, const CsvSchema& schema) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open dataset '" + path + "'");
    return parse_csv(in, schema);
}

Dataset load_csv(const std::string& path, std::optional<std::string> label_column) {
    CsvSchema schema;
    schema.truth_column.clear();
    if (label_column) {
        schema.label_column = *label_column;
        schema.label_required = true;
    } else {
        schema.label_column.clear();
    }
    return load_csv(path, schema);
}

void write_csv(std::ostream& out, const Dataset& ds, const CsvSchema& schema) {
    for (std::size_t c = 0; c < ds.feature_names.size(); ++c) {
        if (c) out << ',';
        out << quote(ds.feature_names[c]);
    }
    const bool any_labels = ds.labeled_count() > 0;
    if (any_labels) out << ',' << quote(schema.label_column);
    if (ds.has_truth()) out << ',' << quote(schema.truth_column);
    out << '\n';
    for (std::size_t r = 0; r < ds.rows(); ++r) {
        for (std::size_t c = 0; c < ds.features[r].size(); ++c) {
            if (c) out << ',';
            out << format_number(ds.features[r][c]);
        }
        if (any_labels) {
            out << ',';
            if (ds.labels[r]) out << *ds.labels[r];
        }
        if (ds.has_truth()) {
            out << ',';
            if (ds.truth[r]) out << *ds.truth[r];
        }
        out << '\n';
    }
}

void write_csv_file(const std::string& path, const Dataset& ds, const CsvSchema& schema) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    write_csv(out, ds, schema);
    if (!out) throw Error("failed writing '" + path + "'");
}

Standardization Standardization::identity(std::size_t n) {
    return {std::vector<double>(n, 0.0), std::vector<double>(n, 1.0)};
}

void write_standardization(std::ostream& out, const Standardization& stats) {
    out << "mean,stddev\n";
    for (std::size_t i = 0; i < stats.mean.size(); ++i) {
        out << format_number(stats.mean[i]) << ',' << format_number(stats.stddev[i]) << '\n';
    }
}

Standardization read_standardization(std::istream& in) {
    CsvSchema schema;
    schema.label_column.clear();
    schema.truth_column.clear();
    const Dataset table = parse_csv(in, schema);
    if (table.feature_names != std::vector<std::string>{"mean", "stddev"}) {
        throw ParseError("standardization file must have columns 'mean,stddev'");
    }
    Standardization stats;
    for (std::size_t r = 0; r < table.rows(); ++r) {
        if (!(table.features[r][1] > 0.0)) {
            throw ParseError("standardization stddev must be positive", r + 1, 2);
        }
        stats.mean.push_back(table.features[r][0]);
        stats.stddev.push_back(table.features[r][1]);
    }
    return stats;
}

void write_standardization_file(const std::string& path, const Standardization& stats) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    write_standardization(out, stats);
}

Standardization read_standardization_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open standardization file '" + path + "'");
    return read_standardization(in);
}

Preprocessed preprocess(const Dataset& ds, const Standardization* stats, bool standardize) {
    if (ds.rows() == 0) throw EmptyInput("cannot preprocess an empty dataset");
    const std::size_t n = ds.dim();
    Preprocessed out;
    if (stats != nullptr) {
        require_same_dimension(stats->mean.size(), n);
        require_same_dimension(stats->stddev.size(), n);
        out.stats = *stats;
    } else if (!standardize) {
        out.stats = Standardization::identity(n);
    } else {
        out.stats.mean.assign(n, 0.0);
        out.stats.stddev.assign(n, 0.0);
        const double count = static_cast<double>(ds.rows());
        for (const auto& row : ds.features) {
            for (std::size_t i = 0; i < n; ++i) out.stats.mean[i] += row[i];
        }
        for (double& m : out.stats.mean) m /= count;
        for (const auto& row : ds.features) {
            for (std::size_t i = 0; i < n; ++i) {
                const double d = row[i] - out.stats.mean[i];
                out.stats.stddev[i] += d * d;
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            out.stats.stddev[i] = std::sqrt(out.stats.stddev[i] / count);
            if (!(out.stats.stddev[i] > 1e-12)) {
                out.stats.stddev[i] = 1.0;
                out.warnings.push_back("feature '" + ds.feature_names[i] +
                                       "' is constant on the training set; stddev set to 1");
            }
        }
    }

    out.samples.reserve(ds.rows());
    out.standardized.reserve(ds.rows());
    for (std::size_t r = 0; r < ds.rows(); ++r) {
        std::vector<double> z(n);
        for (std::size_t i = 0; i < n; ++i) {
            z[i] = (ds.features[r][i] - out.stats.mean[i]) / out.stats.stddev[i];
        }
        if (norm(z) < kZeroNormThreshold) {
            z[0] += 1e-6;
            out.warnings.push_back("row " + std::to_string(r + 1) +
                                   " coincides with the training mean; jittered first feature by 1e-6");
        }
        out.standardized.push_back(z);
        out.samples.emplace_back(std::move(z));
    }
    return out;
}

Split split(const Dataset& ds, double check_fraction, std::uint64_t seed) {
    if (!(check_fraction > 0.0 && check_fraction < 1.0)) {
        throw std::invalid_argument("check_fraction must lie strictly between 0 and 1");
    }
    const std::size_t total = ds.rows();
    if (total < 2) throw EmptyInput("splitting needs at least two rows");
    const auto target = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::llround(static_cast<double>(total) * check_fraction)), 1, total - 1);

    Split out;
    // Strata keyed by label; std::nullopt (unlabeled) sorts first.
    std::map<std::optional<ClassId>, std::vector<std::size_t>> strata;
    for (std::size_t r = 0; r < total; ++r) strata[ds.labels[r]].push_back(r);
    for (const auto& [label, rows] : strata) {
        if (label && rows.size() < 2) {
            out.warnings.push_back("class " + std::to_string(*label) +
                                   " has fewer than 2 rows; falling back to an unstratified split");
            std::vector<std::size_t> all(total);
            for (std::size_t r = 0; r < total; ++r) all[r] = r;
            strata.clear();
            strata[std::nullopt] = std::move(all);
            break;
        }
    }

    // Largest-remainder apportionment of the check quota across strata.
    std::vector<std::vector<std::size_t>*> groups;
    std::vector<std::size_t> quota;
    std::vector<double> remainder;
    std::size_t assigned = 0;
    for (auto& [label, rows] : strata) {
        const double exact = static_cast<double>(rows.size()) * static_cast<double>(target) /
                             static_cast<double>(total);
        const auto base = static_cast<std::size_t>(std::floor(exact));
        groups.push_back(&rows);
        quota.push_back(base);
        remainder.push_back(exact - static_cast<double>(base));
        assigned += base;
    }
    std::vector<std::size_t> order(groups.size());
    for (std::size_t g = 0; g < order.size(); ++g) order[g] = g;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
    for (std::size_t i = 0; assigned < target; i = (i + 1) % order.size()) {
        const std::size_t g = order[i];
        if (quota[g] < groups[g]->size()) {
            ++quota[g];
            ++assigned;
        }
    }

    Rng rng(seed);
    for (std::size_t g = 0; g < groups.size(); ++g) {
        std::vector<std::size_t> rows = *groups[g];
        rng.shuffle(rows);
        out.check_rows.insert(out.check_rows.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(quota[g]));
        out.train_rows.insert(out.train_rows.end(), rows.begin() + static_cast<std::ptrdiff_t>(quota[g]), rows.end());
    }
    std::sort(out.train_rows.begin(), out.train_rows.end());
    std::sort(out.check_rows.begin(), out.check_rows.end());
    out.train = ds.subset(out.train_rows);
    out.check = ds.subset(out.check_rows);
    return out;
}

Dataset gen_synthetic(const SyntheticSpec& spec) {
    if (spec.classes == 0 || spec.per_class == 0 || spec.dim == 0) {
        throw std::invalid_argument("classes, per_class and dim must all be at least 1");
    }
    if (!(spec.overlap >= 0.0 && spec.overlap <= 1.0)) throw std::invalid_argument("overlap must lie in [0, 1]");
    if (!(spec.label_fraction >= 0.0 && spec.label_fraction <= 1.0)) {
        throw std::invalid_argument("label_fraction must lie in [0, 1]");
    }

    Rng rng(spec.seed);
    const double max_cos = std::cos(kCenterSpacingDegrees * std::numbers::pi / 180.0) + 1e-12;
    const auto gaussian_direction = [&] {
        std::vector<double> v(spec.dim);
        do {
            for (double& c : v) c = rng.normal();
        } while (norm(v) < 1e-6);
        return UnitVector(std::move(v));
    };

    std::vector<UnitVector> centers;
    constexpr int kMaxAttempts = 10000;
    for (std::size_t c = 0; c < spec.classes; ++c) {
        bool placed = false;
        for (int attempt = 0; attempt < kMaxAttempts && !placed; ++attempt) {
            UnitVector candidate = gaussian_direction();
            const bool spaced = std::all_of(centers.begin(), centers.end(), [&](const UnitVector& other) {
                return activation(candidate, other) <= max_cos;
            });
            if (spaced) {
                centers.push_back(std::move(candidate));
                placed = true;
            }
        }
        if (!placed) {
            throw SpacingInfeasible("cannot place " + std::to_string(spec.classes) + " class centers " +
                                    std::to_string(static_cast<int>(kCenterSpacingDegrees)) +
                                    " degrees apart in dimension " + std::to_string(spec.dim));
        }
    }

    const double spread = spec.overlap * kNoiseScale;
    std::vector<std::pair<std::vector<double>, ClassId>> rows;
    rows.reserve(spec.classes * spec.per_class);
    for (std::size_t c = 0; c < spec.classes; ++c) {
        for (std::size_t i = 0; i < spec.per_class; ++i) {
            if (spread == 0.0) {
                rows.emplace_back(centers[c].components(), static_cast<ClassId>(c));
                continue;
            }
            std::vector<double> x(spec.dim);
            do {
                for (std::size_t d = 0; d < spec.dim; ++d) x[d] = centers[c][d] + spread * rng.normal();
            } while (norm(x) < 1e-6);
            rows.emplace_back(UnitVector(std::move(x)).components(), static_cast<ClassId>(c));
        }
    }
    rng.shuffle(rows);

    Dataset ds;
    for (std::size_t d = 0; d < spec.dim; ++d) ds.feature_names.push_back("f" + std::to_string(d + 1));
    for (auto& [x, c] : rows) {
        ds.features.push_back(std::move(x));
        ds.truth.emplace_back(c);
        ds.labels.emplace_back(c);
    }
    const auto keep = static_cast<std::size_t>(std::floor(spec.label_fraction * static_cast<double>(ds.rows()) + 1e-9));
    std::vector<std::size_t> order(ds.rows());
    for (std::size_t r = 0; r < order.size(); ++r) order[r] = r;
    rng.shuffle(order);
    for (std::size_t i = keep; i < order.size(); ++i) ds.labels[order[i]].reset();
    return ds;
}

}  // namespace hybridsom
