#pragma once

#include "ncover/geometry.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace ncover {

/// u(R, theta) = R g(theta) for a 2 pi-periodic boundary curve g.
///
/// The extension is incompressible exactly when J g . g' = 1; see
/// incompressibility_defect().
class OneHomogeneousMap {
public:
    using CurveFn = std::function<Vec2(double)>;

    /// g = e_R(N theta) / sqrt(N). N >= 2, otherwise ParameterError.
    static OneHomogeneousMap ncover(int winding);
    static OneHomogeneousMap closed_form(CurveFn g, CurveFn g_prime, CurveFn g_second,
                                         std::optional<int> winding = std::nullopt);
    /// Curve samples at theta_k = 2 pi k / n; derivatives are spectral.
    static OneHomogeneousMap from_samples(const std::vector<Vec2>& samples);

    Vec2 g(double theta) const { return g_(theta); }
    Vec2 g_prime(double theta) const { return g_prime_(theta); }
    Vec2 g_second(double theta) const { return g_second_(theta); }
    Vec2 value(double radius, double theta) const { return radius * g_(theta); }
    std::optional<int> winding() const { return winding_; }

    /// max over `samples` uniform angles of |J g . g' - 1|.
    double incompressibility_defect(int samples = 1024) const;

private:
    OneHomogeneousMap(CurveFn g, CurveFn gp, CurveFn gpp, std::optional<int> winding)
        : g_(std::move(g)), g_prime_(std::move(gp)), g_second_(std::move(gpp)), winding_(winding) {}

    CurveFn g_;
    CurveFn g_prime_;
    CurveFn g_second_;
    std::optional<int> winding_;
};

/// grad u = g (x) e_R + g' (x) e_theta, independent of R.
Mat2 gradient_u(const OneHomogeneousMap& map, double theta);

/// Reads a boundary curve from CSV `theta,g1,g2` (uniform theta on [0, 2 pi)).
OneHomogeneousMap load_trace_table(const std::string& path);

/// Values and Cartesian gradients of a planar field sampled on a PolarGrid,
/// plus its trace on the unit circle at the grid's angular nodes.
class VectorField {
public:
    VectorField(PolarGrid grid, std::vector<Vec2> values, std::vector<Mat2> gradients,
                std::vector<Vec2> boundary_trace);

    const PolarGrid& grid() const { return grid_; }
    const Vec2& value(int i, int k) const { return values_[grid_.index(i, k)]; }
    const Mat2& gradient(int i, int k) const { return gradients_[grid_.index(i, k)]; }
    const std::vector<Vec2>& values() const { return values_; }
    const std::vector<Mat2>& gradients() const { return gradients_; }
    const std::vector<Vec2>& boundary_trace() const { return boundary_trace_; }

    /// |field| <= 1e-12 on the unit circle.
    bool boundary_flag() const;

    VectorField& operator+=(const VectorField& other);
    VectorField& operator-=(const VectorField& other);
    VectorField& operator*=(double s);

private:
    void require_same_grid(const VectorField& other) const;

    PolarGrid grid_;
    std::vector<Vec2> values_;
    std::vector<Mat2> gradients_;
    std::vector<Vec2> boundary_trace_;
};

inline VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
inline VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
inline VectorField operator*(double s, VectorField a) { return a *= s; }

/// A closed-form field on the closed disk. `gradient` may be left empty, in
/// which case sample_field differentiates numerically.
struct FieldDefinition {
    std::function<Vec2(double radius, double theta)> value;
    std::function<Mat2(double radius, double theta)> gradient;
};

/// Samples values and gradients. Without an analytic gradient, d/dtheta is
/// spectral on each ring and d/dR is a fourth-order central difference.
VectorField sample_field(const FieldDefinition& definition, const PolarGrid& grid);

/// Samples u = R g(theta) with exact gradients.
VectorField sample_map(const OneHomogeneousMap& map, const PolarGrid& grid);

/// (1 - x^2)^order on (lo, hi), x the affine coordinate with x = +-1 at the
/// ends: C^(order-1), peak 1 at the midpoint. Gauss rules converge on it far
/// faster than on exp(-1 / (1 - x^2)) type bumps.
struct RadialBump {
    double lo = 0.25;
    double hi = 0.75;
    int order = 8;

    double value(double radius) const;
    double derivative(double radius) const;
};

/// chi(R) (c cos(j theta) + d sin(j theta)).
struct HarmonicTerm {
    RadialBump bump;
    int mode = 0;
    Vec2 cos_coeff;
    Vec2 sin_coeff;
};

/// Sum of harmonic terms with analytic gradient.
FieldDefinition harmonic_field(std::vector<HarmonicTerm> terms);

struct BatteryOptions {
    int min_mode = 0;
    int max_mode = 8;
    int terms = 2;
    int bump_order = 6;
    // Wide supports keep the pairing with mode-N radial fields away from zero.
    double min_width = 0.75;
};

/// Seeded smooth fields, each a sum of radial bumps times harmonics of order
/// in [min_mode, max_mode], supported inside [max(2 floor, 1/8), 15/16].
std::vector<VectorField> bump_test_fields(const PolarGrid& grid, int count, std::uint64_t seed,
                                          const BatteryOptions& options = {});

}  // namespace ncover
