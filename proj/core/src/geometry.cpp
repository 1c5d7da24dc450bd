#include "hybridsom/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "hybridsom/errors.hpp"

namespace hybridsom {

UnitVector::UnitVector(std::vector<double> components) : components_(std::move(components)) {
    if (components_.empty()) throw DimensionMismatch(1, 0);
    if (!try_normalize_in_place(components_)) throw ZeroVector();
}

UnitVector::UnitVector(std::span<const double> components)
    : UnitVector(std::vector<double>(components.begin(), components.end())) {}

UnitVector::UnitVector(std::initializer_list<double> components)
    : UnitVector(std::vector<double>(components)) {}

std::size_t MembershipVector::argmax() const {
    return static_cast<std::size_t>(
        std::distance(memberships.begin(), std::max_element(memberships.begin(), memberships.end())));
}

void require_same_dimension(std::size_t expected, std::size_t actual) {
    if (expected != actual) throw DimensionMismatch(expected, actual);
}

double norm(std::span<const double> v) {
    double s = 0.0;
    for (double c : v) s += c * c;
    return std::sqrt(s);
}

UnitVector normalize(std::span<const double> v) { return UnitVector(v); }

bool try_normalize_in_place(std::span<double> v) {
    const double n = norm(v);
    if (!(n >= kZeroNormThreshold)) return false;
    for (double& c : v) c /= n;
    return true;
}

double activation(std::span<const double> w, std::span<const double> x) {
    require_same_dimension(w.size(), x.size());
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * x[i];
    return s;
}

double squared_distance(std::span<const double> w, std::span<const double> x) {
    require_same_dimension(w.size(), x.size());
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double d = x[i] - w[i];
        s += d * d;
    }
    return s;
}

double euclidean_distance(std::span<const double> w, std::span<const double> x) {
    return std::sqrt(squared_distance(w, x));
}

double similarity(std::span<const double> w, std::span<const double> x) {
    return std::max(0.0, activation(w, x));
}

MembershipVector membership_from_similarities(std::span<const double> similarities) {
    MembershipVector out;
    const std::size_t m = similarities.size();
    if (m == 0) throw EmptyInput("membership over an empty codebook");
    double total = 0.0;
    for (double s : similarities) total += s;
    out.memberships.resize(m);
    if (total <= 0.0) {
        std::fill(out.memberships.begin(), out.memberships.end(), 1.0 / static_cast<double>(m));
        return out;
    }
    for (std::size_t j = 0; j < m; ++j) out.memberships[j] = similarities[j] / total;
    return out;
}

MembershipVector membership(std::span<const double> x,
                            std::span<const std::vector<double>> weights) {
    std::vector<double> psi;
    psi.reserve(weights.size());
    for (const auto& w : weights) psi.push_back(similarity(w, x));
    return membership_from_similarities(psi);
}

}  // namespace hybridsom
