#include "ncover/fourier.hpp"

#include "ncover/errors.hpp"
#include "ncover/io.hpp"
#include "ncover/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace ncover {

FourierDecomposition::FourierDecomposition(PolarGrid grid, int j_max, std::vector<Vec2> coefficients,
                                           std::vector<Vec2> radial_coefficients)
    : grid_(std::move(grid)), j_max_(j_max), coeff_(std::move(coefficients)), d_radius_(std::move(radial_coefficients)) {
    const std::size_t expected =
        static_cast<std::size_t>(grid_.radial_count()) * static_cast<std::size_t>(j_max_ + 1) * 2;
    if (coeff_.size() != expected || d_radius_.size() != expected)
        throw ParameterError("FourierDecomposition: coefficient count does not match grid and j_max");
}

Vec2 FourierDecomposition::reconstruct(int i, double theta) const {
    Vec2 v = zero_mode(i);
    for (int j = 1; j <= j_max_; ++j) v += std::cos(j * theta) * cos_mode(i, j) + std::sin(j * theta) * sin_mode(i, j);
    return v;
}

int max_resolved_mode(const PolarGrid& grid) { return (grid.angular_count() - 2) / 2; }

namespace {

// Zero mode, then (A_j, B_j), of one ring of samples.
void transform_ring(const std::vector<Vec2>& ring, int j_max, Vec2* out) {
    const int n = static_cast<int>(ring.size());
    Vec2 mean;
    for (const Vec2& v : ring) mean += v;
    out[0] = (1.0 / n) * mean;
    out[1] = Vec2{};
    for (int j = 1; j <= j_max; ++j) {
        Vec2 a;
        Vec2 b;
        for (int k = 0; k < n; ++k) {
            // reduce j k mod n so the angle stays small
            const double angle = kTwoPi * static_cast<double>((static_cast<long long>(j) * k) % n) / n;
            a += std::cos(angle) * ring[static_cast<std::size_t>(k)];
            b += std::sin(angle) * ring[static_cast<std::size_t>(k)];
        }
        out[2 * j] = (2.0 / n) * a;
        out[2 * j + 1] = (2.0 / n) * b;
    }
}

Vec2 zero_mode_radial_derivative(const VectorField& f, int i) {
    const PolarGrid& grid = f.grid();
    Vec2 d;
    for (int k = 0; k < grid.angular_count(); ++k) d += f.gradient(i, k) * e_radial(grid.theta(k));
    return (1.0 / grid.angular_count()) * d;
}

Vec2 zero_mode_value(const VectorField& f, int i) {
    const PolarGrid& grid = f.grid();
    Vec2 m;
    for (int k = 0; k < grid.angular_count(); ++k) m += f.value(i, k);
    return (1.0 / grid.angular_count()) * m;
}

}  // namespace

FourierDecomposition decompose(const VectorField& f, int j_max) {
    const PolarGrid& grid = f.grid();
    if (j_max < 0) throw ParameterError("decompose: j_max must be >= 0");
    if (grid.angular_count() < 2 * j_max + 2)
        throw AliasingError("decompose: " + std::to_string(grid.angular_count()) +
                            " angular nodes cannot resolve modes up to j_max = " + std::to_string(j_max) +
                            " (need >= " + std::to_string(2 * j_max + 2) + ")");
    const int nr = grid.radial_count();
    const int nt = grid.angular_count();
    const std::size_t per_ring = static_cast<std::size_t>(j_max + 1) * 2;
    std::vector<Vec2> coeff(per_ring * static_cast<std::size_t>(nr));
    std::vector<Vec2> d_radius(per_ring * static_cast<std::size_t>(nr));
    parallel_for(static_cast<std::size_t>(nr), [&](std::size_t ring) {
        const int i = static_cast<int>(ring);
        std::vector<Vec2> values(static_cast<std::size_t>(nt));
        std::vector<Vec2> radial(static_cast<std::size_t>(nt));
        for (int k = 0; k < nt; ++k) {
            values[static_cast<std::size_t>(k)] = f.value(i, k);
            radial[static_cast<std::size_t>(k)] = f.gradient(i, k) * e_radial(grid.theta(k));
        }
        transform_ring(values, j_max, coeff.data() + ring * per_ring);
        transform_ring(radial, j_max, d_radius.data() + ring * per_ring);
    });
    return FourierDecomposition(grid, j_max, std::move(coeff), std::move(d_radius));
}

double zero_mode_det(const VectorField& f) {
    const PolarGrid& grid = f.grid();
    double worst = 0.0;
    for (int i = 0; i < grid.radial_count(); ++i) {
        const Vec2 a0_r = zero_mode_radial_derivative(f, i);
        for (int k = 0; k < grid.angular_count(); ++k)
            worst = std::max(worst, std::abs(det2(outer(a0_r, e_radial(grid.theta(k))))));
    }
    return worst;
}

std::pair<double, double> parseval_gradient(const VectorField& f, int j_max) {
    const PolarGrid& grid = f.grid();
    const double lhs = grid.integrate([&](int i, int k) {
        const Mat2& g = f.gradient(i, k);
        return frobenius(g, g);
    });
    const FourierDecomposition d = decompose(f, j_max);
    // Per ring, int_0^2pi |grad f^(j)|^2 dtheta; node_weight(i) already carries dtheta.
    double rhs = 0.0;
    for (int i = 0; i < grid.radial_count(); ++i) {
        const double r = grid.radius(i);
        const Vec2 a0 = d.zero_mode_dr(i);
        double ring = kTwoPi * dot(a0, a0);
        for (int j = 1; j <= j_max; ++j) {
            const Vec2& a = d.cos_mode(i, j);
            const Vec2& b = d.sin_mode(i, j);
            const Vec2& da = d.cos_mode_dr(i, j);
            const Vec2& db = d.sin_mode_dr(i, j);
            ring += std::numbers::pi * (dot(da, da) + dot(db, db) + (j * j) * (dot(a, a) + dot(b, b)) / (r * r));
        }
        rhs += ring * grid.node_weight(i) / grid.angular_spacing();
    }
    return {lhs, rhs};
}

namespace {

void require_interior_support(const VectorField& f, const char* who) {
    const PolarGrid& grid = f.grid();
    double peak = 0.0;
    for (const Vec2& v : f.values()) peak = std::max(peak, norm(v));
    for (int k = 0; k < grid.angular_count(); ++k) {
        if (norm(f.value(0, k)) > 1e-12 * (1.0 + peak))
            throw SupportError(std::string(who) + ": field does not vanish at the annulus floor R = " +
                               format_double(grid.annulus_floor()) + "; weighted integrals need support away from 0");
    }
}

}  // namespace

std::pair<double, double> buckling_check(const VectorField& f) {
    require_interior_support(f, "buckling_check");
    const PolarGrid& grid = f.grid();
    std::vector<Vec2> mean(static_cast<std::size_t>(grid.radial_count()));
    for (int i = 0; i < grid.radial_count(); ++i) mean[static_cast<std::size_t>(i)] = zero_mode_value(f, i);
    const double lhs = grid.integrate([&](int i, int k) {
        const double r = grid.radius(i);
        // d_theta f = R grad f e_theta; the zero mode does not depend on theta
        const Vec2 d_theta = r * (f.gradient(i, k) * e_angular(grid.theta(k)));
        return dot(d_theta, d_theta) / (r * r);
    });
    const double rhs = grid.integrate([&](int i, int k) {
        const double r = grid.radius(i);
        const Vec2 tilde = f.value(i, k) - mean[static_cast<std::size_t>(i)];
        return dot(tilde, tilde) / (r * r);
    });
    return {lhs, rhs};
}

namespace {

double lambda_det_integral(const VectorField& phi, const PressureSolution& lambda) {
    const PolarGrid& grid = phi.grid();
    return grid.integrate([&](int i, int k) {
        return lambda_value(lambda, grid.radius(i), grid.theta(k)) * det2(phi.gradient(i, k));
    });
}

}  // namespace

double identity_v_check(const VectorField& phi, const PressureSolution& lambda) {
    const PolarGrid& grid = phi.grid();
    const double lhs = lambda_det_integral(phi, lambda);
    const double rhs = -0.5 * grid.integrate([&](int i, int k) {
        const Vec2 grad_lambda = lambda_gradient(lambda, grid.radius(i), grid.theta(k));
        return dot(cofactor(phi.gradient(i, k)) * grad_lambda, phi.value(i, k));
    });
    return std::abs(lhs - rhs) / (1.0 + std::abs(lhs));
}

double identity_vi_check(const VectorField& phi, const PressureSolution& lambda) {
    const PolarGrid& grid = phi.grid();
    const int nr = grid.radial_count();
    std::vector<Vec2> mean(static_cast<std::size_t>(nr));
    std::vector<Vec2> mean_r(static_cast<std::size_t>(nr));
    for (int i = 0; i < nr; ++i) {
        mean[static_cast<std::size_t>(i)] = zero_mode_value(phi, i);
        mean_r[static_cast<std::size_t>(i)] = zero_mode_radial_derivative(phi, i);
    }
    const double lhs = lambda_det_integral(phi, lambda);
    const double rhs = -0.5 * grid.integrate([&](int i, int k) {
        const double theta = grid.theta(k);
        const Vec2 grad_lambda = lambda_gradient(lambda, grid.radius(i), theta);
        const Vec2 tilde = phi.value(i, k) - mean[static_cast<std::size_t>(i)];
        const Mat2 grad_zero = outer(mean_r[static_cast<std::size_t>(i)], e_radial(theta));
        return dot(cofactor(grad_zero) * grad_lambda, tilde) + dot(cofactor(phi.gradient(i, k)) * grad_lambda, tilde);
    });
    return std::abs(lhs - rhs) / (1.0 + std::abs(lhs));
}

void write_modes_csv(std::ostream& os, const FourierDecomposition& d) {
    os << "R,j,A1,A2,B1,B2\n";
    for (int i = 0; i < d.grid().radial_count(); ++i) {
        const double r = d.grid().radius(i);
        const Vec2& a0 = d.zero_mode(i);
        write_csv_row(os, {r, 0.0, a0.x, a0.y, 0.0, 0.0});
        for (int j = 1; j <= d.j_max(); ++j) {
            const Vec2& a = d.cos_mode(i, j);
            const Vec2& b = d.sin_mode(i, j);
            write_csv_row(os, {r, static_cast<double>(j), a.x, a.y, b.x, b.y});
        }
    }
}

}  // namespace ncover
