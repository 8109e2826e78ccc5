#include "ncover/integrand.hpp"

#include "ncover/errors.hpp"
#include "ncover/io.hpp"
#include "ncover/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ncover {

PeriodicFunction PeriodicFunction::constant(double value) {
    return PeriodicFunction([value](double) { return value; }, [](double) { return 0.0; });
}

PeriodicFunction PeriodicFunction::closed_form(Fn value, Fn derivative) {
    if (!value || !derivative) throw ParameterError("PeriodicFunction: value and derivative are required");
    return PeriodicFunction(std::move(value), std::move(derivative));
}

PeriodicFunction PeriodicFunction::from_samples(const std::vector<double>& samples) {
    auto interp = std::make_shared<const TrigInterpolant>(samples);
    return PeriodicFunction([interp](double t) { return interp->value(t); },
                            [interp](double t) { return interp->derivative(t); });
}

bool PeriodicFunction::is_periodic(int samples, double tol) const {
    for (int k = 0; k < samples; ++k) {
        const double t = kTwoPi * k / samples;
        const double v0 = value_(t);
        const double d0 = derivative_(t);
        const double scale = 1.0 + std::abs(v0) + std::abs(d0);
        if (std::abs(value_(t + kTwoPi) - v0) > tol * scale) return false;
        if (std::abs(derivative_(t + kTwoPi) - d0) > tol * scale) return false;
    }
    return true;
}

Mat2 Tensor4::apply(const Mat2& xi) const {
    Mat2 out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            double acc = 0.0;
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) acc += (*this)(i, j, k, l) * xi(k, l);
            out(i, j) = acc;
        }
    return out;
}

double Tensor4::frobenius_norm() const {
    double acc = 0.0;
    for (double v : c_) acc += v * v;
    return std::sqrt(acc);
}

void Tensor4::add_rank_one(double weight, const Mat2& a, const Mat2& b) {
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) (*this)(i, j, k, l) += weight * a(i, j) * b(k, l);
}

QuadraticIntegrand::QuadraticIntegrand(PeriodicFunction alpha, PeriodicFunction beta, PeriodicFunction gamma,
                                       PeriodicFunction delta, double nu)
    : alpha_(std::move(alpha)), beta_(std::move(beta)), gamma_(std::move(gamma)), delta_(std::move(delta)), nu_(nu) {
    if (!(nu_ > 0.0) || !std::isfinite(nu_)) throw ParameterError("QuadraticIntegrand: nu must be positive");
    constexpr int kCheck = 1024;
    for (int k = 0; k < kCheck; ++k) {
        const PolarCoefficients c = coefficients(kTwoPi * k / kCheck);
        const double lo = std::min({c.alpha, c.beta, c.gamma, c.delta});
        if (lo < nu_ * (1.0 - 1e-12)) {
            throw ParameterError("QuadraticIntegrand: coefficient " + format_double(lo) +
                                 " below coercivity constant nu = " + format_double(nu_));
        }
    }
}

QuadraticIntegrand QuadraticIntegrand::constant_case(double a, double nu) {
    return QuadraticIntegrand(PeriodicFunction::constant(a * nu), PeriodicFunction::constant(nu),
                              PeriodicFunction::constant(a * nu), PeriodicFunction::constant(nu), nu);
}

PolarCoefficients QuadraticIntegrand::coefficients(double theta) const {
    return {alpha_(theta), beta_(theta), gamma_(theta), delta_(theta)};
}

PolarCoefficients QuadraticIntegrand::derivatives(double theta) const {
    return {alpha_.derivative(theta), beta_.derivative(theta), gamma_.derivative(theta), delta_.derivative(theta)};
}

PolarCoefficients polar_components(const Mat2& xi, double theta) {
    const Vec2 er = e_radial(theta);
    const Vec2 et = e_angular(theta);
    const Vec2 xi_er = xi * er;
    const Vec2 xi_et = xi * et;
    return {dot(er, xi_er), dot(er, xi_et), dot(et, xi_er), dot(et, xi_et)};
}

double eval_f(const QuadraticIntegrand& m, double theta, const Mat2& xi) {
    const PolarCoefficients c = m.coefficients(theta);
    const PolarCoefficients x = polar_components(xi, theta);
    return c.alpha * x.alpha * x.alpha + c.beta * x.beta * x.beta + c.gamma * x.gamma * x.gamma +
           c.delta * x.delta * x.delta;
}

Mat2 grad_xi_f(const QuadraticIntegrand& m, double theta, const Mat2& xi) {
    const PolarCoefficients c = m.coefficients(theta);
    const PolarCoefficients x = polar_components(xi, theta);
    const Vec2 er = e_radial(theta);
    const Vec2 et = e_angular(theta);
    Mat2 out = (2.0 * c.alpha * x.alpha) * outer(er, er);
    out += (2.0 * c.beta * x.beta) * outer(er, et);
    out += (2.0 * c.gamma * x.gamma) * outer(et, er);
    out += (2.0 * c.delta * x.delta) * outer(et, et);
    return out;
}

double coercivity_floor(const QuadraticIntegrand& m, int samples) {
    if (samples < 8) throw ParameterError("coercivity_floor: samples must be >= 8");
    for (const PeriodicFunction* f : {&m.alpha(), &m.beta(), &m.gamma(), &m.delta()}) {
        if (!f->is_periodic()) throw ParameterError("coercivity_floor: coefficient table is not 2 pi-periodic");
    }
    double floor = std::numeric_limits<double>::infinity();
    for (int k = 0; k < samples; ++k) {
        const PolarCoefficients c = m.coefficients(kTwoPi * k / samples);
        floor = std::min({floor, c.alpha, c.beta, c.gamma, c.delta});
    }
    return floor;
}

Tensor4 assemble_cartesian(const QuadraticIntegrand& m, double theta) {
    const PolarCoefficients c = m.coefficients(theta);
    const Vec2 er = e_radial(theta);
    const Vec2 et = e_angular(theta);
    const Mat2 b_rr = outer(er, er);
    const Mat2 b_rt = outer(er, et);
    const Mat2 b_tr = outer(et, er);
    const Mat2 b_tt = outer(et, et);
    Tensor4 t;
    t.add_rank_one(c.alpha, b_rr, b_rr);
    t.add_rank_one(c.beta, b_rt, b_rt);
    t.add_rank_one(c.gamma, b_tr, b_tr);
    t.add_rank_one(c.delta, b_tt, b_tt);
    return t;
}

Tensor4 assemble_cartesian_dtheta(const QuadraticIntegrand& m, double theta) {
    const PolarCoefficients c = m.coefficients(theta);
    const PolarCoefficients dc = m.derivatives(theta);
    const Vec2 er = e_radial(theta);
    const Vec2 et = e_angular(theta);
    const Mat2 b_rr = outer(er, er);
    const Mat2 b_rt = outer(er, et);
    const Mat2 b_tr = outer(et, er);
    const Mat2 b_tt = outer(et, et);
    // d e_R = e_theta, d e_theta = -e_R
    const Mat2 d_rr = b_tr + b_rt;
    const Mat2 d_rt = b_tt - b_rr;
    const Mat2 d_tr = b_tt - b_rr;
    const Mat2 d_tt = -1.0 * (b_rt + b_tr);
    Tensor4 t;
    t.add_rank_one(dc.alpha, b_rr, b_rr);
    t.add_rank_one(dc.beta, b_rt, b_rt);
    t.add_rank_one(dc.gamma, b_tr, b_tr);
    t.add_rank_one(dc.delta, b_tt, b_tt);
    t.add_rank_one(c.alpha, d_rr, b_rr);
    t.add_rank_one(c.alpha, b_rr, d_rr);
    t.add_rank_one(c.beta, d_rt, b_rt);
    t.add_rank_one(c.beta, b_rt, d_rt);
    t.add_rank_one(c.gamma, d_tr, b_tr);
    t.add_rank_one(c.gamma, b_tr, d_tr);
    t.add_rank_one(c.delta, d_tt, b_tt);
    t.add_rank_one(c.delta, b_tt, d_tt);
    return t;
}

double sobolev_seminorm_M(const QuadraticIntegrand& m, double q, const PolarGrid& grid) {
    if (!(q >= 1.0) || !(q < 2.0))
        throw ParameterError("sobolev_seminorm_M: q must lie in [1, 2); use the divergence probe for q = 2");
    double angular = 0.0;
    for (int k = 0; k < grid.angular_count(); ++k)
        angular += std::pow(assemble_cartesian_dtheta(m, grid.theta(k)).frobenius_norm(), q);
    angular *= grid.angular_spacing();
    // |grad M|^q dx = |d_theta M|^q R^(1-q) dR dtheta
    const RadialQuadrature radial = power_weighted_rule(grid.radial_count(), 1.0 - q);
    double radial_total = 0.0;
    for (double w : radial.weights) radial_total += w;
    return angular * radial_total;
}

double seminorm_M_divergence_probe(const QuadraticIntegrand& m, const PolarGrid& grid) {
    std::vector<double> ring(static_cast<std::size_t>(grid.angular_count()));
    for (int k = 0; k < grid.angular_count(); ++k) {
        const double n = assemble_cartesian_dtheta(m, grid.theta(k)).frobenius_norm();
        ring[static_cast<std::size_t>(k)] = n * n;
    }
    return grid.integrate([&](int i, int k) {
        const double r = grid.radius(i);
        return ring[static_cast<std::size_t>(k)] / (r * r);
    });
}

QuadraticIntegrand load_coefficient_table(const std::string& path, double nu) {
    const CsvTable table = read_csv(path, {"theta", "alpha", "beta", "gamma", "delta"});
    const std::vector<double> theta = table.values("theta");
    const std::size_t n = theta.size();
    if (n < 8) throw ParameterError("coefficient table needs at least 8 rows");
    for (std::size_t k = 0; k < n; ++k) {
        if (k > 0 && !(theta[k] > theta[k - 1])) throw ParameterError("coefficient table: theta must be strictly increasing");
        if (theta[k] < 0.0 || theta[k] >= kTwoPi) throw ParameterError("coefficient table: theta must lie in [0, 2 pi)");
        if (std::abs(theta[k] - kTwoPi * static_cast<double>(k) / static_cast<double>(n)) > 1e-9)
            throw ParameterError("coefficient table: theta must be uniformly spaced from 0 with step 2 pi / rows");
    }
    return QuadraticIntegrand(PeriodicFunction::from_samples(table.values("alpha")),
                              PeriodicFunction::from_samples(table.values("beta")),
                              PeriodicFunction::from_samples(table.values("gamma")),
                              PeriodicFunction::from_samples(table.values("delta")), nu);
}

}  // namespace ncover
