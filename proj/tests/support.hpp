#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "hybridsom/geometry.hpp"
#include "hybridsom/rng.hpp"

namespace hybridsom::testing {

inline std::vector<double> gaussian_vector(Rng& rng, std::size_t n) {
    std::vector<double> v(n);
    for (auto& c : v) c = rng.normal();
    return v;
}

inline UnitVector random_unit(Rng& rng, std::size_t n) {
    for (;;) {
        auto v = gaussian_vector(rng, n);
        double s = 0.0;
        for (double c : v) s += c * c;
        if (std::sqrt(s) > 1e-6) return UnitVector(std::move(v));
    }
}

// Independent reference for ||v||, by Kahan-free straightforward summation.
inline double reference_norm(const std::vector<double>& v) {
    long double s = 0.0L;
    for (double c : v) s += static_cast<long double>(c) * c;
    return static_cast<double>(std::sqrt(s));
}

inline double reference_dot(std::span<const double> a, std::span<const double> b) {
    long double s = 0.0L;
    for (std::size_t i = 0; i < a.size(); ++i) s += static_cast<long double>(a[i]) * b[i];
    return static_cast<double>(s);
}

// Scratch directory unique to one test.
inline std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("hybridsom_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace hybridsom::testing
