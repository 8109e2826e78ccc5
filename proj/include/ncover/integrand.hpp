#pragma once

#include "ncover/geometry.hpp"

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace ncover {

/// A 2 pi-periodic scalar function of theta with its first derivative.
class PeriodicFunction {
public:
    using Fn = std::function<double(double)>;

    static PeriodicFunction constant(double value);
    static PeriodicFunction closed_form(Fn value, Fn derivative);
    /// Samples at theta_k = 2 pi k / n; derivatives are spectral.
    static PeriodicFunction from_samples(const std::vector<double>& samples);

    double operator()(double theta) const { return value_(theta); }
    double derivative(double theta) const { return derivative_(theta); }

    /// True when value and derivative agree at theta and theta + 2 pi on a sample.
    bool is_periodic(int samples = 64, double tol = 1e-9) const;

private:
    PeriodicFunction(Fn value, Fn derivative) : value_(std::move(value)), derivative_(std::move(derivative)) {}

    Fn value_;
    Fn derivative_;
};

/// Coefficients of M in the rotating polar basis
/// {e_R (x) e_R, e_R (x) e_theta, e_theta (x) e_R, e_theta (x) e_theta}.
struct PolarCoefficients {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    double delta = 0.0;
};

/// Cartesian fourth-order tensor M_ijkl, stored at ((i*2+j)*2+k)*2+l.
class Tensor4 {
public:
    double operator()(int i, int j, int k, int l) const { return c_[idx(i, j, k, l)]; }
    double& operator()(int i, int j, int k, int l) { return c_[idx(i, j, k, l)]; }

    /// (M xi)_ij = M_ijkl xi_kl
    Mat2 apply(const Mat2& xi) const;
    /// (M a) . b
    double contract(const Mat2& a, const Mat2& b) const { return frobenius(apply(a), b); }
    double quadratic_form(const Mat2& xi) const { return contract(xi, xi); }
    double frobenius_norm() const;

    /// M_ijkl += weight * a_ij b_kl
    void add_rank_one(double weight, const Mat2& a, const Mat2& b);

    const std::array<double, 16>& components() const { return c_; }

private:
    static std::size_t idx(int i, int j, int k, int l) {
        return static_cast<std::size_t>(((i * 2 + j) * 2 + k) * 2 + l);
    }
    std::array<double, 16> c_{};
};

/// The quadratic integrand f(x, xi) = M(theta) xi . xi with M diagonal in
/// the polar basis, M = diag(alpha, beta, gamma, delta)(theta).
class QuadraticIntegrand {
public:
    /// Throws ParameterError if nu <= 0 or a coefficient drops below nu on a
    /// dense theta sample.
    QuadraticIntegrand(PeriodicFunction alpha, PeriodicFunction beta, PeriodicFunction gamma,
                       PeriodicFunction delta, double nu);

    /// M = (a, 1, a, 1) nu.
    static QuadraticIntegrand constant_case(double a, double nu);

    PolarCoefficients coefficients(double theta) const;
    PolarCoefficients derivatives(double theta) const;
    double nu() const { return nu_; }

    const PeriodicFunction& alpha() const { return alpha_; }
    const PeriodicFunction& beta() const { return beta_; }
    const PeriodicFunction& gamma() const { return gamma_; }
    const PeriodicFunction& delta() const { return delta_; }

private:
    PeriodicFunction alpha_, beta_, gamma_, delta_;
    double nu_;
};

/// Polar components (xi_RR, xi_Rtheta, xi_thetaR, xi_thetatheta) = (e_i^T xi e_j).
PolarCoefficients polar_components(const Mat2& xi, double theta);

double eval_f(const QuadraticIntegrand& m, double theta, const Mat2& xi);

/// 2 M xi in Cartesian components; eval_f = grad_xi_f . xi / 2.
Mat2 grad_xi_f(const QuadraticIntegrand& m, double theta, const Mat2& xi);

/// min over sampled theta of min(alpha, beta, gamma, delta). samples >= 8.
double coercivity_floor(const QuadraticIntegrand& m, int samples);

Tensor4 assemble_cartesian(const QuadraticIntegrand& m, double theta);

/// d/dtheta of the Cartesian tensor (frame rotation plus coefficient derivatives).
Tensor4 assemble_cartesian_dtheta(const QuadraticIntegrand& m, double theta);

/// int_B |grad M|^q dx for 1 <= q < 2 using grad M = (1/R) d_theta M (x) e_theta.
/// The angular factor uses the grid's angular nodes; the radial factor
/// R^(1-q) is integrated with a power-weighted rule on grid.radial_count() nodes.
double sobolev_seminorm_M(const QuadraticIntegrand& m, double q, const PolarGrid& grid);

/// Plain grid quadrature of int_{R >= floor} |grad M|^2 dx. Grows like
/// ln(1/annulus_floor) under refinement, exhibiting grad M not in L^2.
double seminorm_M_divergence_probe(const QuadraticIntegrand& m, const PolarGrid& grid);

/// Reads a CSV with header `theta,alpha,beta,gamma,delta`. Theta must be
/// strictly increasing and uniform on [0, 2 pi).
QuadraticIntegrand load_coefficient_table(const std::string& path, double nu);

}  // namespace ncover
