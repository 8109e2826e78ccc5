#include "ncover/energy.hpp"

#include "ncover/errors.hpp"
#include "ncover/io.hpp"
#include "ncover/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ncover {

namespace {

// Reduction-parallel grid quadrature: rings are summed independently and
// combined in order, so the result does not depend on the thread count.
template <class Fn>
double integrate_rings(const PolarGrid& grid, Fn&& fn) {
    std::vector<double> rings(static_cast<std::size_t>(grid.radial_count()));
    parallel_for(rings.size(), [&](std::size_t ring) {
        const int i = static_cast<int>(ring);
        double acc = 0.0;
        for (int k = 0; k < grid.angular_count(); ++k) acc += fn(i, k);
        rings[ring] = acc * grid.node_weight(i);
    });
    double total = 0.0;
    for (double r : rings) total += r;
    return total;
}

void require_same_grid(const VectorField& a, const VectorField& b) {
    if (a.grid().radial_nodes() != b.grid().radial_nodes() || a.grid().angular_count() != b.grid().angular_count())
        throw ParameterError("fields live on different grids");
}

}  // namespace

double energy(const QuadraticIntegrand& m, const VectorField& f) {
    const PolarGrid& grid = f.grid();
    return integrate_rings(grid, [&](int i, int k) { return eval_f(m, grid.theta(k), f.gradient(i, k)); });
}

double energy(const QuadraticIntegrand& m, const OneHomogeneousMap& u, const PolarGrid& grid) {
    return energy(m, sample_map(u, grid));
}

double dirichlet(const VectorField& f) {
    return integrate_rings(f.grid(), [&](int i, int k) {
        const Mat2& g = f.gradient(i, k);
        return frobenius(g, g);
    });
}

double bilinear(const QuadraticIntegrand& m, const VectorField& u, const VectorField& eta) {
    require_same_grid(u, eta);
    const PolarGrid& grid = u.grid();
    return integrate_rings(grid, [&](int i, int k) {
        return 0.5 * frobenius(grad_xi_f(m, grid.theta(k), u.gradient(i, k)), eta.gradient(i, k));
    });
}

double expansion_check(const QuadraticIntegrand& m, const VectorField& u, const VectorField& eta) {
    const double e_sum = energy(m, u + eta);
    const double predicted = energy(m, u) + energy(m, eta) + 2.0 * bilinear(m, u, eta);
    return std::abs(e_sum - predicted) / (1.0 + std::abs(e_sum));
}

double det_defect(const VectorField& v) {
    double worst = 0.0;
    for (const Mat2& g : v.gradients()) worst = std::max(worst, std::abs(det2(g) - 1.0));
    return worst;
}

GapResult gap_identity_check(const QuadraticIntegrand& m, const VectorField& u, const PressureSolution& lambda,
                             const VectorField& v, double det_tolerance) {
    require_same_grid(u, v);
    const double defect = det_defect(v);
    if (defect > det_tolerance)
        throw AdmissibilityError("competitor is not incompressible: max |det grad v - 1| = " + format_double(defect));
    for (std::size_t k = 0; k < v.boundary_trace().size(); ++k) {
        if (norm(v.boundary_trace()[k] - u.boundary_trace()[k]) > 1e-12)
            throw AdmissibilityError("competitor does not share the boundary trace of u");
    }
    const VectorField eta = v - u;
    const PolarGrid& grid = u.grid();
    GapResult r;
    r.gap = energy(m, v) - energy(m, u);
    const double pressure_term = integrate_rings(grid, [&](int i, int k) {
        return lambda_value(lambda, grid.radius(i), grid.theta(k)) * det2(eta.gradient(i, k));
    });
    r.predicted_gap = energy(m, eta) + 2.0 * pressure_term;
    r.residual = std::abs(r.gap - r.predicted_gap) / (1.0 + std::abs(r.gap));
    return r;
}

StationarityResult stationarity_residual(const QuadraticIntegrand& m, const OneHomogeneousMap& u,
                                         const PressureSolution& lambda, const std::vector<VectorField>& battery) {
    StationarityResult out;
    if (battery.empty()) return out;
    const PolarGrid& grid = battery.front().grid();
    for (const VectorField& eta : battery) require_same_grid(battery.front(), eta);

    // Halved stress M grad u + lambda cof grad u at every node.
    std::vector<Mat2> stress(grid.size());
    parallel_for(static_cast<std::size_t>(grid.radial_count()), [&](std::size_t ring) {
        const int i = static_cast<int>(ring);
        for (int k = 0; k < grid.angular_count(); ++k) {
            const double theta = grid.theta(k);
            const Mat2 grad = gradient_u(u, theta);
            stress[grid.index(i, k)] =
                0.5 * grad_xi_f(m, theta, grad) + lambda_value(lambda, grid.radius(i), theta) * cofactor(grad);
        }
    });
    const double stress_norm = std::sqrt(grid.integrate([&](int i, int k) {
        const Mat2& s = stress[grid.index(i, k)];
        return frobenius(s, s);
    }));

    out.residuals.assign(battery.size(), 0.0);
    parallel_for(battery.size(), [&](std::size_t n) {
        const VectorField& eta = battery[n];
        const double pairing =
            grid.integrate([&](int i, int k) { return frobenius(stress[grid.index(i, k)], eta.gradient(i, k)); });
        const double eta_norm = std::sqrt(grid.integrate([&](int i, int k) {
            const Mat2& g = eta.gradient(i, k);
            return frobenius(g, g);
        }));
        const double denom = eta_norm * stress_norm;
        out.residuals[n] = denom > 0.0 ? std::abs(pairing) / denom : 0.0;
    });
    out.max_residual = *std::max_element(out.residuals.begin(), out.residuals.end());
    return out;
}

double energy_direct_form(int winding, double a, double nu) {
    const double n = winding;
    return nu * std::numbers::pi * (n + a / n);
}

double energy_paper_form(int winding, double a, double nu) {
    const double n = winding;
    return nu * std::numbers::pi / 2.0 * (1.0 + a) * (1.0 / n + n);
}

EnergyReport min_energy_report(int winding, double a, double nu, const PolarGrid& grid) {
    EnergyReport r;
    r.N = winding;
    r.a = a;
    r.nu = nu;
    r.grid = grid.descriptor();
    const QuadraticIntegrand m = QuadraticIntegrand::constant_case(a, nu);
    r.E_quadrature = energy(m, OneHomogeneousMap::ncover(winding), grid);
    r.E_direct_form = energy_direct_form(winding, a, nu);
    r.E_paper_form = energy_paper_form(winding, a, nu);
    r.rel_err_direct = std::abs(r.E_quadrature - r.E_direct_form) / std::abs(r.E_direct_form);
    r.rel_err_paper = std::abs(r.E_quadrature - r.E_paper_form) / std::abs(r.E_paper_form);
    r.admissible = admissible_a_range(winding).contains(a);
    r.forms_disagree = std::abs(r.E_direct_form - r.E_paper_form) > 1e-12 * std::abs(r.E_direct_form);
    return r;
}

void write_residual_sweep_csv(std::ostream& os, const std::vector<ResidualSweepRow>& rows) {
    os << "grid_nr,grid_nth,max_residual\n";
    for (const ResidualSweepRow& row : rows)
        os << row.grid_nr << ',' << row.grid_nth << ',' << format_double(row.max_residual) << '\n';
}

}  // namespace ncover
