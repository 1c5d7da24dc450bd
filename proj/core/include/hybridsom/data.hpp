#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hybridsom/geometry.hpp"
#include "hybridsom/som.hpp"

namespace hybridsom {

// N x n feature table with an optional (possibly partial) supervision column
// and an optional ground-truth column used only for scoring.
struct Dataset {
    std::vector<std::vector<double>> features;
    std::vector<std::optional<ClassId>> labels;
    // Empty when the source had no truth column.
    std::vector<std::optional<ClassId>> truth;
    std::vector<std::string> feature_names;

    std::size_t rows() const noexcept { return features.size(); }
    std::size_t dim() const noexcept { return feature_names.size(); }
    bool has_truth() const noexcept { return !truth.empty(); }
    double label_coverage() const noexcept;
    std::size_t labeled_count() const noexcept;

    // Truth where available, otherwise the supervision labels.
    const std::vector<std::optional<ClassId>>& scoring_labels() const noexcept {
        return has_truth() ? truth : labels;
    }

    Dataset subset(std::span<const std::size_t> rows) const;
};

struct CsvSchema {
    std::string label_column = "label";
    std::string truth_column = "truth";
    // When false a missing column just means "no labels" / "no truth".
    bool label_required = false;
    bool truth_required = false;
};

// Comma-separated, header row required, '.' decimal point. Label cells are
// integers; empty label cells are unlabeled rows. Every other column is a
// numeric feature and must be finite.
Dataset parse_csv(std::istream& in, const CsvSchema& schema = {});
Dataset load_csv(const std::string& path, const CsvSchema& schema = {});
// Strict form: a named label column must exist; without a name every row is unlabeled.
Dataset load_csv(const std::string& path, std::optional<std::string> label_column);

// Features are printed with 17 significant digits so a reload is exact.
void write_csv(std::ostream& out, const Dataset& ds, const CsvSchema& schema = {});
void write_csv_file(const std::string& path, const Dataset& ds, const CsvSchema& schema = {});

// Per-feature training statistics; stddev entries are always positive.
struct Standardization {
    std::vector<double> mean;
    std::vector<double> stddev;

    static Standardization identity(std::size_t n);

    friend bool operator==(const Standardization&, const Standardization&) = default;
};

void write_standardization(std::ostream& out, const Standardization& stats);
Standardization read_standardization(std::istream& in);
void write_standardization_file(const std::string& path, const Standardization& stats);
Standardization read_standardization_file(const std::string& path);

struct Preprocessed {
    std::vector<UnitVector> samples;
    // z-scored rows before projection (raw rows when standardization is off).
    std::vector<std::vector<double>> standardized;
    Standardization stats;
    std::vector<std::string> warnings;
};

// z-scores with the given (or freshly computed) statistics, then projects
// each row onto the unit sphere. A row that standardizes to zero gets a 1e-6
// jitter on its first feature and a warning.
Preprocessed preprocess(const Dataset& ds, const Standardization* stats = nullptr,
                        bool standardize = true);

struct Split {
    Dataset train;
    Dataset check;
    std::vector<std::size_t> train_rows;
    std::vector<std::size_t> check_rows;
    std::vector<std::string> warnings;
};

// Seeded split stratified by label (unlabeled rows form their own stratum).
// The check set receives round(N * check_fraction) rows, clamped to [1, N-1].
// Falls back to an unstratified split when a labeled class has < 2 rows.
Split split(const Dataset& ds, double check_fraction, std::uint64_t seed);

struct SyntheticSpec {
    std::size_t classes = 2;
    std::size_t per_class = 100;
    std::size_t dim = 12;
    double overlap = 0.3;
    double label_fraction = 1.0;
    std::uint64_t seed = 1;
};

// Minimum pairwise angle between generated class centers.
inline constexpr double kCenterSpacingDegrees = 60.0;
// Per-component noise standard deviation is overlap * kNoiseScale.
inline constexpr double kNoiseScale = 1.5;

// Overlapping clusters on the sphere: centers with pairwise angle at least
// kCenterSpacingDegrees, isotropic Gaussian noise, rows shuffled, and
// exactly floor(label_fraction * N) labels kept. Truth is always filled in.
Dataset gen_synthetic(const SyntheticSpec& spec);

}  // namespace hybridsom
