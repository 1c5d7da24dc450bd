#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace hybridsom {

inline constexpr double kZeroNormThreshold = 1e-12;
inline constexpr double kUnitNormTolerance = 1e-9;

// A vector on the unit hypersphere. Construction always renormalizes, so
// drift accumulated elsewhere is corrected at this boundary.
class UnitVector {
public:
    // Throws ZeroVector when the norm is below kZeroNormThreshold.
    explicit UnitVector(std::vector<double> components);
    explicit UnitVector(std::span<const double> components);
    UnitVector(std::initializer_list<double> components);

    std::size_t size() const noexcept { return components_.size(); }
    double operator[](std::size_t i) const { return components_[i]; }
    const std::vector<double>& components() const noexcept { return components_; }
    std::span<const double> span() const noexcept { return components_; }
    operator std::span<const double>() const noexcept { return components_; }

    friend bool operator==(const UnitVector&, const UnitVector&) = default;

private:
    std::vector<double> components_;
};

// Fuzzy memberships over the neurons of a codebook; non-negative, sum to one.
struct MembershipVector {
    std::vector<double> memberships;

    std::size_t size() const noexcept { return memberships.size(); }
    double operator[](std::size_t j) const { return memberships[j]; }
    // Lowest index among the maxima.
    std::size_t argmax() const;
};

double norm(std::span<const double> v);

// v / ||v||; throws ZeroVector for ||v|| < kZeroNormThreshold.
UnitVector normalize(std::span<const double> v);

// In-place variant used by the update rules; returns false (leaving v
// untouched) when the norm falls below kZeroNormThreshold.
bool try_normalize_in_place(std::span<double> v);

// Inner product w.x, the cosine of the angle for unit vectors.
double activation(std::span<const double> w, std::span<const double> x);

double euclidean_distance(std::span<const double> w, std::span<const double> x);

double squared_distance(std::span<const double> w, std::span<const double> x);

// max{0, cos}: non-negative, one on the diagonal, symmetric.
double similarity(std::span<const double> w, std::span<const double> x);

// mu_j = psi_j / sum_l psi_l; uniform 1/m when every psi_l is zero.
MembershipVector membership(std::span<const double> x,
                            std::span<const std::vector<double>> weights);

// Same ratio computed from precomputed similarities.
MembershipVector membership_from_similarities(std::span<const double> similarities);

void require_same_dimension(std::size_t expected, std::size_t actual);

}  // namespace hybridsom
