#include "ncover/errors.hpp"
#include "ncover/pressure.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <numbers>
#include <sstream>

using namespace ncover;
using namespace ncover::testing;

namespace {

constexpr double kPi = std::numbers::pi;

// Lemma-style closed forms for the N-cover and polar-diagonal M(theta), written out independently.
struct Explicit {
    double h1, h2, s, t;
};

Explicit explicit_ncover(const QuadraticIntegrand& m, int n, double theta) {
    const PolarCoefficients c = m.coefficients(theta), d = m.derivatives(theta);
    const double rn = std::sqrt(double(n));
    const double p = (n - 1) * theta;
    const double cs = std::cos(p), sn = std::sin(p);
    const double big1 = rn * (n - 1) * c.beta + rn * c.delta - c.alpha / rn;
    const double big2 = rn * c.beta + rn * (n - 1) * c.delta - c.gamma / rn;
    Explicit e;
    e.h1 = rn * d.beta * sn + big1 * cs;
    e.h2 = -rn * d.delta * cs + big2 * sn;
    e.s = (d.beta - d.delta) * std::sin(2 * p) / 2 + (big1 * cs * cs + big2 * sn * sn) / rn;
    e.t = rn * (big2 - big1) * std::sin(2 * p) / 2 - n * (d.beta * sn * sn + d.delta * cs * cs);
    return e;
}

QuadraticIntegrand lemma_integrand(int n, double a) {
    const double w = n - 1.0;
    return QuadraticIntegrand(
        PeriodicFunction::constant(a),
        PeriodicFunction::closed_form([=](double t) { return 1 + 0.1 * std::sin(2 * w * t); },
                                      [=](double t) { return 0.2 * w * std::cos(2 * w * t); }),
        PeriodicFunction::constant(a),
        PeriodicFunction::closed_form([=](double t) { return 1 - 0.05 * std::cos(w * t); },
                                      [=](double t) { return 0.05 * w * std::sin(w * t); }),
        0.9);
}

// div(S) at x by central differences, S = M grad u in Cartesian components.
Vec2 fd_divergence(const std::function<Mat2(Vec2)>& stress, Vec2 x, double h = 1e-5) {
    const Mat2 px = stress(x + Vec2{h, 0}), mx = stress(x - Vec2{h, 0});
    const Mat2 py = stress(x + Vec2{0, h}), my = stress(x - Vec2{0, h});
    return {(px.a11 - mx.a11) / (2 * h) + (py.a12 - my.a12) / (2 * h),
            (px.a21 - mx.a21) / (2 * h) + (py.a22 - my.a22) / (2 * h)};
}

PressureGradient uniform_gradient(const PolarGrid& grid, const std::function<double(double)>& s,
                                  const std::function<double(double)>& t) {
    std::vector<double> sv(grid.size()), tv(grid.size());
    for (int i = 0; i < grid.radial_count(); ++i)
        for (int k = 0; k < grid.angular_count(); ++k) {
            sv[grid.index(i, k)] = s(grid.theta(k));
            tv[grid.index(i, k)] = t(grid.theta(k));
        }
    return PressureGradient(grid, sv, tv);
}

}  // namespace

TEST(AssembleH, ConstantCaseFormula) {
    SplitMix64 rng(31);
    for (int n : {2, 3, 4}) {
        for (double a : {3.0, 7.0}) {
            const double nu = 1.7;
            const QuadraticIntegrand m = QuadraticIntegrand::constant_case(a, nu);
            const double amp = nu * (std::sqrt(double(n)) * n - a / std::sqrt(double(n)));
            for (int s = 0; s < 200; ++s) {
                const double t = rng.uniform(0.0, kTwoPi);
                const HPair h = assemble_h_ncover(m, n, t);
                EXPECT_NEAR(h.h1, amp * std::cos((n - 1) * t), 1e-12);
                EXPECT_NEAR(h.h2, amp * std::sin((n - 1) * t), 1e-12);
            }
        }
    }
}

TEST(AssembleH, IsotropicTwoCover) {
    const QuadraticIntegrand m = QuadraticIntegrand::constant_case(1.0, 1.3);
    for (double t : {0.0, 0.5, 2.0}) {
        const HPair h = assemble_h_general(TensorCoefficientField::from_integrand(m), OneHomogeneousMap::ncover(2), t, 0.6);
        EXPECT_NEAR(h.h1, 1.3 * (2 * std::sqrt(2.0) - 1 / std::sqrt(2.0)) * std::cos(t), 1e-12);
    }
}

TEST(AssembleH, WorkedValueAtZero) {
    const HPair h = assemble_h_ncover(QuadraticIntegrand::constant_case(3.0, 1.0), 2, 0.0);
    EXPECT_NEAR(h.h1, 1 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(h.h2, 0.0, 1e-15);
}

TEST(AssembleH, SymmetricCoefficientsGiveEqualAmplitudes) {
    const QuadraticIntegrand m(PeriodicFunction::constant(4.0), PeriodicFunction::constant(1.5),
                               PeriodicFunction::constant(4.0), PeriodicFunction::constant(1.5), 1.0);
    for (double t : {0.3, 1.1}) {
        const HPair h = assemble_h_ncover(m, 3, t);
        EXPECT_NEAR(h.h1 / std::cos(2 * t), h.h2 / std::sin(2 * t), 1e-12);
    }
}

TEST(AssembleH, IdentityTraceWithConstantIsotropicM) {
    const OneHomogeneousMap id = OneHomogeneousMap::closed_form(
        [](double t) { return e_radial(t); }, [](double t) { return e_angular(t); },
        [](double t) { return -e_radial(t); });
    const TensorCoefficientField m = TensorCoefficientField::from_integrand(QuadraticIntegrand::constant_case(1.0, 2.0));
    for (double t : {0.0, 1.0, 3.0}) {
        const HPair h = assemble_h_general(m, id, t, 0.5);
        EXPECT_NEAR(h.h1, 0.0, 1e-14);
        EXPECT_NEAR(h.h2, 0.0, 1e-14);
        const PolarGradient p = solve_pointwise(id, h, t);
        EXPECT_NEAR(p.s, 0.0, 1e-14);
        EXPECT_NEAR(p.t, 0.0, 1e-14);
    }
}

TEST(AssembleH, MissingDerivativesRejected) {
    TensorCoefficientField m = TensorCoefficientField::from_integrand(QuadraticIntegrand::constant_case(3.0, 1.0));
    m.d_radius = nullptr;
    EXPECT_THROW(assemble_h_general(m, OneHomogeneousMap::ncover(2), 0.1, 0.5), ParameterError);
}

TEST(Lemma, SpecializationSolveAndExplicitFormulasAgree) {
    SplitMix64 rng(77);
    for (int n : {2, 3, 5}) {
        const QuadraticIntegrand m = lemma_integrand(n, n * n);
        const TensorCoefficientField full = TensorCoefficientField::from_integrand(m);
        const OneHomogeneousMap u = OneHomogeneousMap::ncover(n);
        for (int s = 0; s < 1000; ++s) {
            const double t = rng.uniform(0.0, kTwoPi);
            const Explicit e = explicit_ncover(m, n, t);
            const HPair hn = assemble_h_ncover(m, n, t);
            const HPair hg = assemble_h_general(full, u, t, rng.uniform(0.05, 1.0));
            EXPECT_NEAR(hn.h1, e.h1, 1e-12);
            EXPECT_NEAR(hn.h2, e.h2, 1e-12);
            EXPECT_NEAR(hg.h1, hn.h1, 1e-12);
            EXPECT_NEAR(hg.h2, hn.h2, 1e-12);
            const PolarGradient solved = solve_pointwise(u, hn, t);
            EXPECT_NEAR(solved.s, e.s, 1e-12);
            EXPECT_NEAR(solved.t, e.t, 1e-12);
            const PolarGradient closed = ncover_explicit_solution(m, n, t);
            EXPECT_NEAR(closed.s, e.s, 1e-12);
            EXPECT_NEAR(closed.t, e.t, 1e-12);
            // Back-substitution into the system.
            const Vec2 jg = rotate_j(u.g(t)), jgp = rotate_j(u.g_prime(t));
            EXPECT_NEAR(dot(jg, e_radial(t)) * solved.t - dot(jgp, e_radial(t)) * solved.s, hn.h1, 1e-12);
            EXPECT_NEAR(dot(jg, e_angular(t)) * solved.t - dot(jgp, e_angular(t)) * solved.s, hn.h2, 1e-12);
        }
    }
}

// The solved pressure balances the stress pointwise: div(M grad u) + cof(grad u) grad lambda = 0.
TEST(Lemma, SolvedPressureBalancesStressByFiniteDifferences) {
    const int n = 2;
    const QuadraticIntegrand m = lemma_integrand(n, 3.0);
    const OneHomogeneousMap u = OneHomogeneousMap::ncover(n);
    const auto stress = [&](Vec2 x) {
        const double t = std::atan2(x.y, x.x);
        return 0.5 * grad_xi_f(m, t, gradient_u(u, t));
    };
    SplitMix64 rng(5);
    for (int s = 0; s < 50; ++s) {
        const double r = rng.uniform(0.3, 0.9), t = rng.uniform(0.0, kTwoPi);
        const PolarGradient p = solve_pointwise(u, assemble_h_ncover(m, n, t), t);
        const Vec2 grad_lambda = (p.s / r) * e_radial(t) + (p.t / r) * e_angular(t);
        const Vec2 residual = fd_divergence(stress, r * e_radial(t)) + cofactor(gradient_u(u, t)) * grad_lambda;
        EXPECT_LT(norm(residual), 1e-6);
    }
}

TEST(Lemma, RadiallyVaryingTensorBalancesStress) {
    // M(theta, R) = (1 + R^2) M0(theta): exercises the d_radius terms of the general assembly.
    const QuadraticIntegrand m0 = QuadraticIntegrand::constant_case(3.0, 1.0);
    const TensorCoefficientField base = TensorCoefficientField::from_integrand(m0);
    TensorCoefficientField m;
    const auto scaled = [](Tensor4 a, double f) {
        Tensor4 out;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k)
                    for (int l = 0; l < 2; ++l) out(i, j, k, l) = f * a(i, j, k, l);
        return out;
    };
    m.value = [=](double t, double r) { return scaled(base.value(t, r), 1 + r * r); };
    m.d_theta = [=](double t, double r) { return scaled(base.d_theta(t, r), 1 + r * r); };
    m.d_radius = [=](double t, double r) { return scaled(base.value(t, r), 2 * r); };
    const OneHomogeneousMap u = OneHomogeneousMap::ncover(2);
    const auto stress = [&](Vec2 x) {
        const double t = std::atan2(x.y, x.x);
        return m.value(t, norm(x)).apply(gradient_u(u, t));
    };
    for (double r : {0.3, 0.7}) {
        for (double t : {0.2, 2.5, 4.4}) {
            const PolarGradient p = solve_pointwise(u, assemble_h_general(m, u, t, r), t);
            const Vec2 grad_lambda = (p.s / r) * e_radial(t) + (p.t / r) * e_angular(t);
            const Vec2 residual = fd_divergence(stress, r * e_radial(t)) + cofactor(gradient_u(u, t)) * grad_lambda;
            EXPECT_LT(norm(residual), 1e-6);
        }
    }
}

TEST(Solve, ConstantCasePressure) {
    for (auto [n, a, nu] : {std::tuple{2, 3.0, 1.0}, std::tuple{3, 9.0, 1.0}, std::tuple{2, 5.0, 2.5}}) {
        const QuadraticIntegrand m = QuadraticIntegrand::constant_case(a, nu);
        const PressureGradient pg = compute_pressure_gradient(m, OneHomogeneousMap::ncover(n), make_grid(4, 64));
        for (std::size_t k = 0; k < pg.s_values().size(); ++k) {
            EXPECT_NEAR(pg.s_values()[k], nu * (n - a / n), 1e-12);
            EXPECT_NEAR(pg.t_values()[k], 0.0, 1e-12);
        }
    }
}

TEST(Solve, SingularTraceRejected) {
    const OneHomogeneousMap flat = OneHomogeneousMap::closed_form(
        [](double t) { return Vec2{std::cos(t), 0.0}; }, [](double t) { return Vec2{-std::sin(t), 0.0}; },
        [](double t) { return Vec2{-std::cos(t), 0.0}; });
    EXPECT_THROW(solve_pointwise(flat, {1.0, 1.0}, 0.3), SingularSystemError);
}

TEST(Solve, ParallelMatchesSerial) {
    const QuadraticIntegrand m = lemma_integrand(3, 9.0);
    const PressureGradient pg = compute_pressure_gradient(m, OneHomogeneousMap::ncover(3), make_grid(6, 32));
    const PressureGradient ex = ncover_pressure_gradient(m, 3, make_grid(6, 32));
    for (std::size_t k = 0; k < pg.s_values().size(); ++k) {
        EXPECT_NEAR(pg.s_values()[k], ex.s_values()[k], 1e-12);
        EXPECT_NEAR(pg.t_values()[k], ex.t_values()[k], 1e-12);
    }
}

TEST(Reconstruct, ClosedFormAndConstant) {
    const PolarGrid grid = make_grid(4, 16);
    const PressureSolution p = reconstruct_lambda(uniform_gradient(grid, [](double) { return 0.5; }, [](double) { return 0.0; }));
    ASSERT_TRUE(std::holds_alternative<ClosedFormPressure>(p));
    EXPECT_NEAR(std::get<ClosedFormPressure>(p).k, 0.5, 1e-15);
    EXPECT_NEAR(lambda_value(p, 0.3, 1.0), 0.5 * std::log(0.3), 1e-15);
    const PressureSolution z =
        reconstruct_lambda(uniform_gradient(grid, [](double) { return 0.0; }, [](double) { return 0.0; }), 2.0);
    EXPECT_EQ(lambda_value(z, 0.1, 4.0), 2.0);
}

TEST(Reconstruct, MultivaluedRejected) {
    const PolarGrid grid = make_grid(4, 16);
    EXPECT_THROW(reconstruct_lambda(uniform_gradient(grid, [](double) { return 0.0; }, [](double) { return 0.3; })),
                 CompatibilityError);
    // Angle-dependent s cannot come from a single-valued lambda with R-independent t.
    EXPECT_THROW(reconstruct_lambda(uniform_gradient(grid, [](double t) { return std::cos(t); },
                                                     [](double) { return 0.0; })),
                 CompatibilityError);
}

TEST(Reconstruct, SampledRoundTrip) {
    const PolarGrid grid = make_grid(4, 32);
    const auto t_fn = [](double t) { return 0.4 * std::cos(2 * t) - 0.1 * std::sin(t); };
    const PressureSolution p = reconstruct_lambda(uniform_gradient(grid, [](double) { return -0.25; }, t_fn), 1.0);
    ASSERT_TRUE(std::holds_alternative<SampledPressure>(p));
    EXPECT_NEAR(lambda_value(p, 1.0, 0.0), 1.0, 1e-14);
    const double h = 1e-5;
    for (double r : {0.2, 0.8})
        for (double t : {0.3, 2.0, 5.0}) {
            const double s_fd = r * (lambda_value(p, r + h, t) - lambda_value(p, r - h, t)) / (2 * h);
            const double t_fd = (lambda_value(p, r, t + h) - lambda_value(p, r, t - h)) / (2 * h);
            EXPECT_NEAR(s_fd, -0.25, 1e-8);
            EXPECT_NEAR(t_fd, t_fn(t), 1e-8);
            const PolarGradient g = lambda_polar_gradient(p, r, t);
            EXPECT_NEAR(g.t, t_fn(t), 1e-12);
            const Vec2 cart = lambda_gradient(p, r, t);
            EXPECT_NEAR(dot(cart, e_angular(t)) * r, t_fn(t), 1e-12);
        }
}

TEST(Reconstruct, ScaleLogCoefficient) {
    const PressureSolution p = scale_log_coefficient(ClosedFormPressure{1.0, 0.5}, 1.1);
    EXPECT_NEAR(std::get<ClosedFormPressure>(p).k, 0.55, 1e-15);
    EXPECT_EQ(std::get<ClosedFormPressure>(p).c, 1.0);
}

TEST(Certificate, WorkedExamples) {
    const auto cert = [](int n, double a, double nu, CertificateMode mode) {
        return certify(ncover_pressure_gradient(QuadraticIntegrand::constant_case(a, nu), n, make_grid(2, 32)), nu, mode);
    };
    const Certificate c1 = cert(2, 3.0, 1.0, CertificateMode::single_variable);
    EXPECT_EQ(c1.verdict, Verdict::strict_pass);
    EXPECT_NEAR(c1.measured, 0.5, 1e-15);
    EXPECT_EQ(c1.bound, 1.0);
    EXPECT_EQ(cert(2, 6.0, 1.0, CertificateMode::single_variable).verdict, Verdict::boundary_pass);
    EXPECT_EQ(cert(3, 12.0, 2.0, CertificateMode::single_variable).verdict, Verdict::boundary_pass);
    EXPECT_EQ(cert(2, 8.0, 1.0, CertificateMode::single_variable).verdict, Verdict::fail);
    const Certificate g = cert(2, 3.0, 1.0, CertificateMode::general);
    EXPECT_NEAR(g.bound, std::sqrt(3.0) / (2 * std::sqrt(2.0)), 1e-15);
    EXPECT_EQ(g.verdict, Verdict::strict_pass);
}

TEST(Certificate, SingleVariableNeedsOneVariable) {
    const PolarGrid grid = make_grid(2, 16);
    const PressureGradient two = uniform_gradient(grid, [](double) { return 0.1; }, [](double t) { return 0.1 * std::cos(t); });
    EXPECT_THROW(certify(two, 1.0, CertificateMode::single_variable), ModeError);
    EXPECT_EQ(certify(two, 1.0, CertificateMode::general).verdict, Verdict::strict_pass);
    EXPECT_EQ(parse_certificate_mode("general"), CertificateMode::general);
    EXPECT_THROW(parse_certificate_mode("loose"), ParameterError);
}

TEST(Certificate, SweepMatchesInterval) {
    for (int n : {2, 3}) {
        const OpenInterval range = admissible_a_range(n);
        std::vector<std::pair<double, Verdict>> cases;
        for (int j = 0; j <= 10; ++j) {
            const Verdict v = (j == 0 || j == 10) ? Verdict::boundary_pass : Verdict::strict_pass;
            cases.emplace_back(range.lo + (range.hi - range.lo) * j / 10.0, v);
        }
        cases.emplace_back(range.lo - 0.5, Verdict::fail);
        cases.emplace_back(range.hi + 0.5, Verdict::fail);
        for (const auto& [a, expected] : cases) {
            const Certificate c = certify(ncover_pressure_gradient(QuadraticIntegrand::constant_case(a, 1.0), n,
                                                                   make_grid(2, 32)),
                                          1.0, CertificateMode::single_variable);
            EXPECT_EQ(c.verdict, expected) << "N=" << n << " a=" << a;
        }
    }
}

TEST(Range, Examples) {
    EXPECT_EQ(admissible_a_range(2).lo, 2.0);
    EXPECT_EQ(admissible_a_range(2).hi, 6.0);
    EXPECT_EQ(admissible_a_range(3).lo, 6.0);
    EXPECT_EQ(admissible_a_range(3).hi, 12.0);
    EXPECT_FALSE(admissible_a_range(2).contains(2.0));
    EXPECT_THROW(admissible_a_range(1), ParameterError);
}

TEST(Sobolev, ClosedFormExamples) {
    EXPECT_NEAR(sobolev_norm_pressure({0.0, 0.5}, 1.0), kPi, 1e-14);
    EXPECT_NEAR(sobolev_norm_pressure({0.0, 1.0}, 1.5), 4 * kPi, 1e-13);
    for (double q : {1.0, 1.5, 1.9}) EXPECT_EQ(sobolev_norm_pressure({0.0, 0.0}, q), 0.0);
    EXPECT_THROW(sobolev_norm_pressure({0.0, 1.0}, 2.0), ParameterError);
}

TEST(Sobolev, QuadratureMatchesClosedForm) {
    const PolarGrid grid = make_grid(16, 32);
    const ClosedFormPressure p{0.0, 0.5};
    for (double q : {1.0, 1.5, 1.9})
        EXPECT_NEAR(sobolev_norm_pressure_quadrature(p, q, grid) / sobolev_norm_pressure(p, q), 1.0, 1e-10);
    EXPECT_GT(sobolev_norm_pressure_quadrature(p, 1.99, grid), sobolev_norm_pressure_quadrature(p, 1.5, grid));
}

TEST(PressureCsv, HeaderAndRows) {
    const PolarGrid grid = make_grid(2, 4);
    std::ostringstream os;
    write_pressure_gradient_csv(os, ncover_pressure_gradient(QuadraticIntegrand::constant_case(3.0, 1.0), 2, grid));
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    EXPECT_EQ(line, "theta,R,s,t");
    int rows = 0;
    while (std::getline(is, line)) ++rows;
    EXPECT_EQ(rows, 8);
}
