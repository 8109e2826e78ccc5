#pragma once

#include "ncover/geometry.hpp"
#include "ncover/integrand.hpp"
#include "ncover/maps.hpp"
#include "ncover/spectral.hpp"

#include <cmath>
#include <functional>
#include <memory>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace ncover {

/// Full Cartesian coefficient field M(theta, R) with its partial derivatives.
struct TensorCoefficientField {
    std::function<Tensor4(double theta, double radius)> value;
    std::function<Tensor4(double theta, double radius)> d_theta;
    std::function<Tensor4(double theta, double radius)> d_radius;

    /// Polar-diagonal M(theta); d_radius is identically zero.
    static TensorCoefficientField from_integrand(const QuadraticIntegrand& m);
};

struct HPair {
    double h1 = 0.0;
    double h2 = 0.0;
};

/// Right-hand sides of the pointwise pressure system for u = R g(theta):
///   h1 = -(d_theta S) . (e_R (x) e_theta) - R (S,_R) . (e_R (x) e_R)
///   h2 = -(d_theta S) . (e_theta (x) e_theta) - R (S,_R) . (e_theta (x) e_R)
/// with S = M grad u, so that (h1, h2) are the polar components of -R div(M grad u).
HPair assemble_h_general(const TensorCoefficientField& m, const OneHomogeneousMap& g, double theta,
                         double radius);

/// Closed form of the same quantities for the N-cover and polar-diagonal M(theta).
HPair assemble_h_ncover(const QuadraticIntegrand& m, int winding, double theta);

/// Pressure-gradient components s = R lambda,_R and t = lambda,_theta.
struct PolarGradient {
    double s = 0.0;
    double t = 0.0;
};

/// Solves (Jg.e_R) t - (Jg'.e_R) s = h1, (Jg.e_theta) t - (Jg'.e_theta) s = h2.
/// SingularSystemError if the determinant is below 1e-8 in magnitude.
PolarGradient solve_pointwise(const OneHomogeneousMap& g, const HPair& h, double theta);

/// Explicit solution of the system for the N-cover and polar-diagonal M(theta).
PolarGradient ncover_explicit_solution(const QuadraticIntegrand& m, int winding, double theta);

/// Samples of (s, t) at every node of a grid.
class PressureGradient {
public:
    PressureGradient(PolarGrid grid, std::vector<double> s, std::vector<double> t);

    const PolarGrid& grid() const { return grid_; }
    double s(int i, int k) const { return s_[grid_.index(i, k)]; }
    double t(int i, int k) const { return t_[grid_.index(i, k)]; }
    const std::vector<double>& s_values() const { return s_; }
    const std::vector<double>& t_values() const { return t_; }

    /// max |t| and max |s| over all nodes.
    double max_abs_t() const;
    double max_abs_s() const;

private:
    PolarGrid grid_;
    std::vector<double> s_;
    std::vector<double> t_;
};

PressureGradient compute_pressure_gradient(const TensorCoefficientField& m, const OneHomogeneousMap& g,
                                           const PolarGrid& grid);
PressureGradient compute_pressure_gradient(const QuadraticIntegrand& m, const OneHomogeneousMap& g,
                                           const PolarGrid& grid);

/// (s, t) at every node from ncover_explicit_solution.
PressureGradient ncover_pressure_gradient(const QuadraticIntegrand& m, int winding, const PolarGrid& grid);

/// lambda = c + k ln R.
struct ClosedFormPressure {
    double c = 0.0;
    double k = 0.0;

    double value(double radius, double /*theta*/ = 0.0) const { return c + k * std::log(radius); }
    PolarGradient polar_gradient(double /*radius*/ = 1.0, double /*theta*/ = 0.0) const { return {k, 0.0}; }
};

/// lambda = c + k ln R + T(theta) with T(0) = 0 and T' = t.
class SampledPressure {
public:
    SampledPressure(double c, double k, std::vector<double> t_ring);

    double value(double radius, double theta) const;
    PolarGradient polar_gradient(double radius, double theta) const;
    double c() const { return c_; }
    double k() const { return k_; }
    void scale_log_coefficient(double factor) { k_ *= factor; }

private:
    double c_;
    double k_;
    std::shared_ptr<const TrigInterpolant> angular_;
};

using PressureSolution = std::variant<ClosedFormPressure, SampledPressure>;

double lambda_value(const PressureSolution& p, double radius, double theta);
PolarGradient lambda_polar_gradient(const PressureSolution& p, double radius, double theta);
/// Multiplies the log coefficient k by `factor`.
PressureSolution scale_log_coefficient(const PressureSolution& p, double factor);
/// Cartesian gradient (s / R) e_R + (t / R) e_theta.
Vec2 lambda_gradient(const PressureSolution& p, double radius, double theta);

/// Integrates (s, t) to a pressure with lambda(1, 0) = c. Requires R-independent
/// samples and zero angular mean of t on every ring (CompatibilityError otherwise).
/// Returns a ClosedFormPressure when t == 0 and s is constant.
PressureSolution reconstruct_lambda(const PressureGradient& pg, double c = 0.0);

enum class CertificateMode { general, single_variable };
enum class Verdict { strict_pass, boundary_pass, fail };

CertificateMode parse_certificate_mode(const std::string& name);
std::string to_string(CertificateMode mode);
std::string to_string(Verdict verdict);

struct Certificate {
    double nu = 0.0;
    CertificateMode mode = CertificateMode::general;
    double bound = 0.0;
    double measured = 0.0;
    Verdict verdict = Verdict::fail;
};

double certificate_bound(double nu, CertificateMode mode);

/// measured = max(sup |s|, sup |t|). single_variable requires t == 0 or s == 0
/// on the grid, otherwise ModeError.
Certificate certify(const PressureGradient& pg, double nu, CertificateMode mode);

struct OpenInterval {
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double x) const { return lo < x && x < hi; }
};

/// (N^2 - N, N^2 + N).
OpenInterval admissible_a_range(int winding);

/// |k|^q 2 pi / (2 - q) for 1 <= q < 2.
double sobolev_norm_pressure(const ClosedFormPressure& p, double q);

/// int_B |grad lambda|^q dx by quadrature: angular nodes of `grid`, radial
/// power-weighted rule for the R^(1-q) factor.
double sobolev_norm_pressure_quadrature(const PressureSolution& p, double q, const PolarGrid& grid);

/// CSV `theta,R,s,t`.
void write_pressure_gradient_csv(std::ostream& os, const PressureGradient& pg);

}  // namespace ncover
