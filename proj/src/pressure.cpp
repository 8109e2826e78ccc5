#include "ncover/pressure.hpp"

#include "ncover/errors.hpp"
#include "ncover/io.hpp"
#include "ncover/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace ncover {

TensorCoefficientField TensorCoefficientField::from_integrand(const QuadraticIntegrand& m) {
    TensorCoefficientField field;
    field.value = [m](double theta, double) { return assemble_cartesian(m, theta); };
    field.d_theta = [m](double theta, double) { return assemble_cartesian_dtheta(m, theta); };
    field.d_radius = [](double, double) { return Tensor4{}; };
    return field;
}

HPair assemble_h_general(const TensorCoefficientField& m, const OneHomogeneousMap& g, double theta,
                         double radius) {
    if (!m.value || !m.d_theta || !m.d_radius)
        throw ParameterError("assemble_h_general: M, M,_theta and M,_R are all required");
    const Vec2 er = e_radial(theta);
    const Vec2 et = e_angular(theta);
    const Mat2 grad = gradient_u(g, theta);
    // d_theta grad u = (g + g'') (x) e_theta
    const Mat2 grad_theta = outer(g.g(theta) + g.g_second(theta), et);
    const Mat2 ds_theta = m.d_theta(theta, radius).apply(grad) + m.value(theta, radius).apply(grad_theta);
    const Mat2 ds_radius = m.d_radius(theta, radius).apply(grad);
    return {-frobenius(ds_theta, outer(er, et)) - radius * frobenius(ds_radius, outer(er, er)),
            -frobenius(ds_theta, outer(et, et)) - radius * frobenius(ds_radius, outer(et, er))};
}

namespace {

struct NcoverTerms {
    double sqrt_n, sn, cs;  // sqrt(N), sin and cos of (N-1) theta
    double h1_bracket, h2_bracket;
    PolarCoefficients c, dc;
};

NcoverTerms ncover_terms(const QuadraticIntegrand& m, int winding, double theta) {
    if (winding < 2) throw ParameterError("N must be >= 2");
    const double n = winding;
    NcoverTerms t{};
    t.sqrt_n = std::sqrt(n);
    t.sn = std::sin((n - 1.0) * theta);
    t.cs = std::cos((n - 1.0) * theta);
    t.c = m.coefficients(theta);
    t.dc = m.derivatives(theta);
    t.h1_bracket = t.sqrt_n * (n - 1.0) * t.c.beta + t.sqrt_n * t.c.delta - t.c.alpha / t.sqrt_n;
    t.h2_bracket = t.sqrt_n * t.c.beta + t.sqrt_n * (n - 1.0) * t.c.delta - t.c.gamma / t.sqrt_n;
    return t;
}

}  // namespace

HPair assemble_h_ncover(const QuadraticIntegrand& m, int winding, double theta) {
    const NcoverTerms t = ncover_terms(m, winding, theta);
    return {t.sqrt_n * t.dc.beta * t.sn + t.h1_bracket * t.cs, -t.sqrt_n * t.dc.delta * t.cs + t.h2_bracket * t.sn};
}

PolarGradient solve_pointwise(const OneHomogeneousMap& g, const HPair& h, double theta) {
    const Vec2 er = e_radial(theta);
    const Vec2 et = e_angular(theta);
    const Vec2 jg = rotate_j(g.g(theta));
    const Vec2 jgp = rotate_j(g.g_prime(theta));
    // unknowns (s, t)
    const double a11 = -dot(jgp, er);
    const double a12 = dot(jg, er);
    const double a21 = -dot(jgp, et);
    const double a22 = dot(jg, et);
    const double det = a11 * a22 - a12 * a21;
    if (!(std::abs(det) >= 1e-8))
        throw SingularSystemError("pressure system is singular (determinant " + format_double(det) +
                                  "); the trace does not satisfy Jg.g' = 1");
    return {(h.h1 * a22 - a12 * h.h2) / det, (a11 * h.h2 - a21 * h.h1) / det};
}

PolarGradient ncover_explicit_solution(const QuadraticIntegrand& m, int winding, double theta) {
    const NcoverTerms t = ncover_terms(m, winding, theta);
    const double n = winding;
    const double s2 = 2.0 * t.sn * t.cs;
    const double sin_sq = t.sn * t.sn;
    const double cos_sq = t.cs * t.cs;
    return {(t.dc.beta - t.dc.delta) * s2 / 2.0 + (t.h1_bracket * cos_sq + t.h2_bracket * sin_sq) / t.sqrt_n,
            t.sqrt_n * (t.h2_bracket - t.h1_bracket) * s2 / 2.0 - n * (t.dc.beta * sin_sq + t.dc.delta * cos_sq)};
}

PressureGradient::PressureGradient(PolarGrid grid, std::vector<double> s, std::vector<double> t)
    : grid_(std::move(grid)), s_(std::move(s)), t_(std::move(t)) {
    if (s_.size() != grid_.size() || t_.size() != grid_.size())
        throw ParameterError("PressureGradient: sample count does not match grid");
}

double PressureGradient::max_abs_t() const {
    double m = 0.0;
    for (double v : t_) m = std::max(m, std::abs(v));
    return m;
}

double PressureGradient::max_abs_s() const {
    double m = 0.0;
    for (double v : s_) m = std::max(m, std::abs(v));
    return m;
}

PressureGradient compute_pressure_gradient(const TensorCoefficientField& m, const OneHomogeneousMap& g,
                                           const PolarGrid& grid) {
    std::vector<double> s(grid.size());
    std::vector<double> t(grid.size());
    parallel_for(static_cast<std::size_t>(grid.radial_count()), [&](std::size_t ring) {
        const int i = static_cast<int>(ring);
        for (int k = 0; k < grid.angular_count(); ++k) {
            const double theta = grid.theta(k);
            const PolarGradient st = solve_pointwise(g, assemble_h_general(m, g, theta, grid.radius(i)), theta);
            s[grid.index(i, k)] = st.s;
            t[grid.index(i, k)] = st.t;
        }
    });
    return PressureGradient(grid, std::move(s), std::move(t));
}

PressureGradient compute_pressure_gradient(const QuadraticIntegrand& m, const OneHomogeneousMap& g,
                                           const PolarGrid& grid) {
    return compute_pressure_gradient(TensorCoefficientField::from_integrand(m), g, grid);
}

PressureGradient ncover_pressure_gradient(const QuadraticIntegrand& m, int winding, const PolarGrid& grid) {
    std::vector<double> s(grid.size());
    std::vector<double> t(grid.size());
    for (int k = 0; k < grid.angular_count(); ++k) {
        const PolarGradient st = ncover_explicit_solution(m, winding, grid.theta(k));
        for (int i = 0; i < grid.radial_count(); ++i) {
            s[grid.index(i, k)] = st.s;
            t[grid.index(i, k)] = st.t;
        }
    }
    return PressureGradient(grid, std::move(s), std::move(t));
}

SampledPressure::SampledPressure(double c, double k, std::vector<double> t_ring)
    : c_(c), k_(k), angular_(std::make_shared<const TrigInterpolant>(t_ring)) {}

double SampledPressure::value(double radius, double theta) const {
    return c_ + k_ * std::log(radius) + angular_->antiderivative(theta);
}

PolarGradient SampledPressure::polar_gradient(double, double theta) const {
    return {k_, angular_->value(theta) - angular_->mean()};
}

double lambda_value(const PressureSolution& p, double radius, double theta) {
    return std::visit([&](const auto& q) { return q.value(radius, theta); }, p);
}

PolarGradient lambda_polar_gradient(const PressureSolution& p, double radius, double theta) {
    return std::visit([&](const auto& q) { return q.polar_gradient(radius, theta); }, p);
}

PressureSolution scale_log_coefficient(const PressureSolution& p, double factor) {
    if (const auto* closed = std::get_if<ClosedFormPressure>(&p)) return ClosedFormPressure{closed->c, closed->k * factor};
    SampledPressure sampled = std::get<SampledPressure>(p);
    sampled.scale_log_coefficient(factor);
    return sampled;
}

Vec2 lambda_gradient(const PressureSolution& p, double radius, double theta) {
    const PolarGradient st = lambda_polar_gradient(p, radius, theta);
    return (st.s / radius) * e_radial(theta) + (st.t / radius) * e_angular(theta);
}

PressureSolution reconstruct_lambda(const PressureGradient& pg, double c) {
    const PolarGrid& grid = pg.grid();
    const int nr = grid.radial_count();
    const int nt = grid.angular_count();
    const double scale = 1.0 + std::max(pg.max_abs_s(), pg.max_abs_t());

    for (int i = 1; i < nr; ++i)
        for (int k = 0; k < nt; ++k)
            if (std::abs(pg.s(i, k) - pg.s(0, k)) > 1e-9 * scale || std::abs(pg.t(i, k) - pg.t(0, k)) > 1e-9 * scale)
                throw CompatibilityError("reconstruct_lambda: pressure gradient depends on R");

    std::vector<double> t_ring(static_cast<std::size_t>(nt));
    for (int i = 0; i < nr; ++i) {
        double mean = 0.0;
        for (int k = 0; k < nt; ++k) mean += pg.t(i, k);
        mean /= nt;
        if (std::abs(mean) > 1e-9 * scale)
            throw CompatibilityError("reconstruct_lambda: lambda,_theta has angular mean " + format_double(mean) +
                                     " at R = " + format_double(grid.radius(i)) + "; lambda would be multivalued");
    }
    for (int k = 0; k < nt; ++k) t_ring[static_cast<std::size_t>(k)] = pg.t(0, k);

    double k_mean = 0.0;
    for (int k = 0; k < nt; ++k) k_mean += pg.s(0, k);
    k_mean /= nt;

    bool constant = pg.max_abs_t() <= 1e-12 * scale;
    for (int k = 0; k < nt && constant; ++k) constant = std::abs(pg.s(0, k) - k_mean) <= 1e-12 * scale;
    if (constant) return ClosedFormPressure{c, k_mean};

    // Radial-then-angular and angular-then-radial paths from (1, 0).
    const SampledPressure sampled(c, k_mean, t_ring);
    for (int i = 0; i < nr; ++i) {
        const double log_r = std::log(grid.radius(i));
        for (int k = 0; k < nt; ++k) {
            const double gap = std::abs((pg.s(i, k) - pg.s(i, 0)) * log_r);
            if (gap > 1e-8)
                throw CompatibilityError("reconstruct_lambda: path integrals disagree by " + format_double(gap));
        }
    }
    return sampled;
}

CertificateMode parse_certificate_mode(const std::string& name) {
    if (name == "general") return CertificateMode::general;
    if (name == "single_variable") return CertificateMode::single_variable;
    throw ParameterError("unknown certificate mode '" + name + "' (expected general or single_variable)");
}

std::string to_string(CertificateMode mode) {
    return mode == CertificateMode::general ? "general" : "single_variable";
}

std::string to_string(Verdict verdict) {
    switch (verdict) {
        case Verdict::strict_pass: return "strict_pass";
        case Verdict::boundary_pass: return "boundary_pass";
        case Verdict::fail: return "fail";
    }
    return "fail";
}

double certificate_bound(double nu, CertificateMode mode) {
    if (!(nu > 0.0)) throw ParameterError("certificate: nu must be positive");
    return mode == CertificateMode::general ? std::sqrt(3.0) * nu / (2.0 * std::sqrt(2.0)) : nu;
}

Certificate certify(const PressureGradient& pg, double nu, CertificateMode mode) {
    Certificate cert;
    cert.nu = nu;
    cert.mode = mode;
    cert.bound = certificate_bound(nu, mode);
    const double max_s = pg.max_abs_s();
    const double max_t = pg.max_abs_t();
    if (mode == CertificateMode::single_variable) {
        const double tol = 1e-12 * (1.0 + std::max(max_s, max_t));
        if (max_t > tol && max_s > tol)
            throw ModeError("single_variable certificate needs lambda = lambda(R) or lambda = lambda(theta); "
                            "both gradient components are nonzero");
    }
    cert.measured = std::max(max_s, max_t);

    constexpr double rel = 1e-10;
    bool all_equal = true;
    for (std::size_t n = 0; n < pg.s_values().size(); ++n) {
        const double p = std::max(std::abs(pg.s_values()[n]), std::abs(pg.t_values()[n]));
        if (p > cert.bound * (1.0 + rel)) {
            cert.verdict = Verdict::fail;
            return cert;
        }
        if (p < cert.bound * (1.0 - rel)) all_equal = false;
    }
    cert.verdict = all_equal ? Verdict::boundary_pass : Verdict::strict_pass;
    return cert;
}

OpenInterval admissible_a_range(int winding) {
    if (winding < 2) throw ParameterError("admissible_a_range: N must be >= 2");
    const double n = winding;
    return {n * n - n, n * n + n};
}

namespace {

void check_sobolev_exponent(double q) {
    if (!(q >= 1.0) || !(q < 2.0)) throw ParameterError("Sobolev exponent q must lie in [1, 2)");
}

}  // namespace

double sobolev_norm_pressure(const ClosedFormPressure& p, double q) {
    check_sobolev_exponent(q);
    return std::pow(std::abs(p.k), q) * kTwoPi / (2.0 - q);
}

double sobolev_norm_pressure_quadrature(const PressureSolution& p, double q, const PolarGrid& grid) {
    check_sobolev_exponent(q);
    // |grad lambda|^q R dR dtheta = |(s, t)|^q R^(1-q) dR dtheta
    const RadialQuadrature radial = power_weighted_rule(grid.radial_count(), 1.0 - q);
    double total = 0.0;
    for (std::size_t i = 0; i < radial.nodes.size(); ++i) {
        double ring = 0.0;
        for (int k = 0; k < grid.angular_count(); ++k) {
            const PolarGradient st = lambda_polar_gradient(p, radial.nodes[i], grid.theta(k));
            ring += std::pow(std::hypot(st.s, st.t), q);
        }
        total += radial.weights[i] * ring * grid.angular_spacing();
    }
    return total;
}

void write_pressure_gradient_csv(std::ostream& os, const PressureGradient& pg) {
    const PolarGrid& grid = pg.grid();
    os << "theta,R,s,t\n";
    for (int i = 0; i < grid.radial_count(); ++i)
        for (int k = 0; k < grid.angular_count(); ++k)
            write_csv_row(os, {grid.theta(k), grid.radius(i), pg.s(i, k), pg.t(i, k)});
}

}  // namespace ncover
