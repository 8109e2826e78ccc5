#pragma once

#include "ncover/geometry.hpp"
#include "ncover/random.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <string>

namespace ncover::testing {

inline Mat2 random_matrix(SplitMix64& rng, double scale = 1.0) {
    return {rng.uniform(-scale, scale), rng.uniform(-scale, scale), rng.uniform(-scale, scale),
            rng.uniform(-scale, scale)};
}

inline Vec2 random_vector(SplitMix64& rng, double scale = 1.0) {
    return {rng.uniform(-scale, scale), rng.uniform(-scale, scale)};
}

inline double max_abs_diff(const Mat2& a, const Mat2& b) {
    return std::max({std::abs(a.a11 - b.a11), std::abs(a.a12 - b.a12), std::abs(a.a21 - b.a21),
                     std::abs(a.a22 - b.a22)});
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

// Fresh scratch directory below the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
    const std::filesystem::path dir = std::filesystem::temp_directory_path() / ("ncover_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace ncover::testing
