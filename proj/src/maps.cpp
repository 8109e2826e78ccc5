#include "ncover/maps.hpp"

#include "ncover/errors.hpp"
#include "ncover/io.hpp"
#include "ncover/random.hpp"
#include "ncover/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace ncover {

OneHomogeneousMap OneHomogeneousMap::ncover(int winding) {
    if (winding < 2) throw ParameterError("ncover: N must be >= 2");
    const double n = winding;
    const double root = std::sqrt(n);
    return OneHomogeneousMap([=](double t) { return (1.0 / root) * e_radial(n * t); },
                             [=](double t) { return root * e_angular(n * t); },
                             [=](double t) { return (-n * root) * e_radial(n * t); }, winding);
}

OneHomogeneousMap OneHomogeneousMap::closed_form(CurveFn g, CurveFn g_prime, CurveFn g_second,
                                                 std::optional<int> winding) {
    if (!g || !g_prime || !g_second) throw ParameterError("OneHomogeneousMap: g, g' and g'' are required");
    return OneHomogeneousMap(std::move(g), std::move(g_prime), std::move(g_second), winding);
}

OneHomogeneousMap OneHomogeneousMap::from_samples(const std::vector<Vec2>& samples) {
    std::vector<double> xs;
    std::vector<double> ys;
    xs.reserve(samples.size());
    ys.reserve(samples.size());
    for (const Vec2& p : samples) {
        xs.push_back(p.x);
        ys.push_back(p.y);
    }
    auto ix = std::make_shared<const TrigInterpolant>(xs);
    auto iy = std::make_shared<const TrigInterpolant>(ys);
    return OneHomogeneousMap([=](double t) { return Vec2{ix->value(t), iy->value(t)}; },
                             [=](double t) { return Vec2{ix->derivative(t), iy->derivative(t)}; },
                             [=](double t) { return Vec2{ix->second_derivative(t), iy->second_derivative(t)}; },
                             std::nullopt);
}

double OneHomogeneousMap::incompressibility_defect(int samples) const {
    double worst = 0.0;
    for (int k = 0; k < samples; ++k) {
        const double t = kTwoPi * k / samples;
        worst = std::max(worst, std::abs(dot(rotate_j(g(t)), g_prime(t)) - 1.0));
    }
    return worst;
}

Mat2 gradient_u(const OneHomogeneousMap& map, double theta) {
    return outer(map.g(theta), e_radial(theta)) + outer(map.g_prime(theta), e_angular(theta));
}

OneHomogeneousMap load_trace_table(const std::string& path) {
    const CsvTable table = read_csv(path, {"theta", "g1", "g2"});
    const std::vector<double> theta = table.values("theta");
    const std::size_t n = theta.size();
    if (n < 8) throw ParameterError("trace table needs at least 8 rows");
    for (std::size_t k = 0; k < n; ++k) {
        if (std::abs(theta[k] - kTwoPi * static_cast<double>(k) / static_cast<double>(n)) > 1e-9)
            throw ParameterError("trace table: theta must be uniformly spaced on [0, 2 pi)");
    }
    const std::vector<double> g1 = table.values("g1");
    const std::vector<double> g2 = table.values("g2");
    std::vector<Vec2> samples(n);
    for (std::size_t k = 0; k < n; ++k) samples[k] = {g1[k], g2[k]};
    return OneHomogeneousMap::from_samples(samples);
}

VectorField::VectorField(PolarGrid grid, std::vector<Vec2> values, std::vector<Mat2> gradients,
                         std::vector<Vec2> boundary_trace)
    : grid_(std::move(grid)),
      values_(std::move(values)),
      gradients_(std::move(gradients)),
      boundary_trace_(std::move(boundary_trace)) {
    if (values_.size() != grid_.size() || gradients_.size() != grid_.size())
        throw ParameterError("VectorField: sample count does not match grid");
    if (boundary_trace_.size() != static_cast<std::size_t>(grid_.angular_count()))
        throw ParameterError("VectorField: boundary trace must have one entry per angular node");
}

bool VectorField::boundary_flag() const {
    return std::all_of(boundary_trace_.begin(), boundary_trace_.end(),
                       [](const Vec2& v) { return norm(v) <= 1e-12; });
}

void VectorField::require_same_grid(const VectorField& other) const {
    if (other.grid_.radial_nodes() != grid_.radial_nodes() || other.grid_.angular_count() != grid_.angular_count())
        throw ParameterError("VectorField: operands live on different grids");
}

VectorField& VectorField::operator+=(const VectorField& other) {
    require_same_grid(other);
    for (std::size_t n = 0; n < values_.size(); ++n) {
        values_[n] += other.values_[n];
        gradients_[n] += other.gradients_[n];
    }
    for (std::size_t k = 0; k < boundary_trace_.size(); ++k) boundary_trace_[k] += other.boundary_trace_[k];
    return *this;
}

VectorField& VectorField::operator-=(const VectorField& other) {
    require_same_grid(other);
    for (std::size_t n = 0; n < values_.size(); ++n) {
        values_[n] -= other.values_[n];
        gradients_[n] -= other.gradients_[n];
    }
    for (std::size_t k = 0; k < boundary_trace_.size(); ++k) boundary_trace_[k] -= other.boundary_trace_[k];
    return *this;
}

VectorField& VectorField::operator*=(double s) {
    for (auto& v : values_) v *= s;
    for (auto& g : gradients_) g *= s;
    for (auto& b : boundary_trace_) b *= s;
    return *this;
}

VectorField sample_field(const FieldDefinition& definition, const PolarGrid& grid) {
    if (!definition.value) throw ParameterError("sample_field: definition has no value function");
    const int nr = grid.radial_count();
    const int nt = grid.angular_count();
    std::vector<Vec2> values(grid.size());
    std::vector<Mat2> gradients(grid.size());
    std::vector<Vec2> trace(static_cast<std::size_t>(nt));
    for (int k = 0; k < nt; ++k) trace[static_cast<std::size_t>(k)] = definition.value(1.0, grid.theta(k));

    std::vector<double> ring_x(static_cast<std::size_t>(nt));
    std::vector<double> ring_y(static_cast<std::size_t>(nt));
    for (int i = 0; i < nr; ++i) {
        const double r = grid.radius(i);
        for (int k = 0; k < nt; ++k) {
            const Vec2 v = definition.value(r, grid.theta(k));
            values[grid.index(i, k)] = v;
            ring_x[static_cast<std::size_t>(k)] = v.x;
            ring_y[static_cast<std::size_t>(k)] = v.y;
        }
        if (definition.gradient) {
            for (int k = 0; k < nt; ++k) gradients[grid.index(i, k)] = definition.gradient(r, grid.theta(k));
            continue;
        }
        const std::vector<double> dx = spectral_derivative(ring_x);
        const std::vector<double> dy = spectral_derivative(ring_y);
        const double h = std::min(1e-3, 0.25 * r);
        for (int k = 0; k < nt; ++k) {
            const double t = grid.theta(k);
            const Vec2 d_r = (1.0 / (12.0 * h)) *
                             (definition.value(r - 2 * h, t) - 8.0 * definition.value(r - h, t) +
                              8.0 * definition.value(r + h, t) - definition.value(r + 2 * h, t));
            const Vec2 d_t{dx[static_cast<std::size_t>(k)], dy[static_cast<std::size_t>(k)]};
            gradients[grid.index(i, k)] = outer(d_r, e_radial(t)) + outer((1.0 / r) * d_t, e_angular(t));
        }
    }
    return VectorField(grid, std::move(values), std::move(gradients), std::move(trace));
}

VectorField sample_map(const OneHomogeneousMap& map, const PolarGrid& grid) {
    FieldDefinition def;
    def.value = [&map](double r, double t) { return map.value(r, t); };
    def.gradient = [&map](double, double t) { return gradient_u(map, t); };
    return sample_field(def, grid);
}

double RadialBump::value(double radius) const {
    if (radius <= lo || radius >= hi) return 0.0;
    const double x = (2.0 * radius - lo - hi) / (hi - lo);
    return std::pow(1.0 - x * x, order);
}

double RadialBump::derivative(double radius) const {
    if (radius <= lo || radius >= hi) return 0.0;
    const double x = (2.0 * radius - lo - hi) / (hi - lo);
    return order * std::pow(1.0 - x * x, order - 1) * (-2.0 * x) * (2.0 / (hi - lo));
}

FieldDefinition harmonic_field(std::vector<HarmonicTerm> terms) {
    auto shared = std::make_shared<const std::vector<HarmonicTerm>>(std::move(terms));
    FieldDefinition def;
    def.value = [shared](double r, double t) {
        Vec2 v;
        for (const HarmonicTerm& h : *shared) {
            const double c = std::cos(h.mode * t);
            const double s = std::sin(h.mode * t);
            v += h.bump.value(r) * (c * h.cos_coeff + s * h.sin_coeff);
        }
        return v;
    };
    def.gradient = [shared](double r, double t) {
        Vec2 d_r;
        Vec2 d_t;
        for (const HarmonicTerm& h : *shared) {
            const double c = std::cos(h.mode * t);
            const double s = std::sin(h.mode * t);
            d_r += h.bump.derivative(r) * (c * h.cos_coeff + s * h.sin_coeff);
            d_t += (h.bump.value(r) * h.mode) * (c * h.sin_coeff - s * h.cos_coeff);
        }
        return outer(d_r, e_radial(t)) + outer((1.0 / r) * d_t, e_angular(t));
    };
    return def;
}

std::vector<VectorField> bump_test_fields(const PolarGrid& grid, int count, std::uint64_t seed,
                                          const BatteryOptions& options) {
    if (count < 1) throw ParameterError("bump_test_fields: count must be >= 1");
    if (options.min_mode < 0 || options.max_mode < options.min_mode || options.max_mode > 8 || options.terms < 1)
        throw ParameterError("bump_test_fields: need 0 <= min_mode <= max_mode <= 8 and terms >= 1");
    const double lo = std::max(2.0 * grid.annulus_floor(), 0.125);
    const double hi = 1.0 - 1.0 / 16.0;
    const double min_width = options.min_width;
    if (options.bump_order < 2 || !(min_width > 0.0) || hi - min_width < lo)
        throw ParameterError("bump_test_fields: need bump_order >= 2 and 0 < min_width <= " + format_double(hi - lo));
    std::vector<VectorField> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int f = 0; f < count; ++f) {
        SplitMix64 rng(derive_seed(seed, static_cast<std::uint64_t>(f)));
        std::vector<HarmonicTerm> terms;
        for (int m = 0; m < options.terms; ++m) {
            HarmonicTerm h;
            h.bump.lo = rng.uniform(lo, hi - min_width);
            h.bump.hi = rng.uniform(h.bump.lo + min_width, hi);
            h.bump.order = options.bump_order;
            h.mode = rng.uniform_int(options.min_mode, options.max_mode);
            h.cos_coeff = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
            h.sin_coeff = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
            terms.push_back(h);
        }
        out.push_back(sample_field(harmonic_field(std::move(terms)), grid));
    }
    return out;
}

}  // namespace ncover
