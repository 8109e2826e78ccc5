#pragma once

#include "ncover/geometry.hpp"
#include "ncover/integrand.hpp"
#include "ncover/maps.hpp"
#include "ncover/pressure.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace ncover {

/// E = int_B M grad f . grad f dx over the field's grid.
double energy(const QuadraticIntegrand& m, const VectorField& f);
double energy(const QuadraticIntegrand& m, const OneHomogeneousMap& u, const PolarGrid& grid);

/// int_B |grad f|^2 dx.
double dirichlet(const VectorField& f);

/// int_B M grad u . grad eta dx.
double bilinear(const QuadraticIntegrand& m, const VectorField& u, const VectorField& eta);

/// |E(u + eta) - E(u) - E(eta) - 2 int M grad u . grad eta| / (1 + |E(u + eta)|).
double expansion_check(const QuadraticIntegrand& m, const VectorField& u, const VectorField& eta);

struct GapResult {
    double gap = 0.0;
    double predicted_gap = 0.0;
    double residual = 0.0;
};

/// Largest |det grad v - 1| over the nodes.
double det_defect(const VectorField& v);

/// gap = E(v) - E(u), predicted_gap = E(eta) + 2 int lambda det grad eta with
/// eta = v - u. AdmissibilityError if det grad v deviates from 1 by more than
/// det_tolerance or the traces of u and v differ by more than 1e-12.
GapResult gap_identity_check(const QuadraticIntegrand& m, const VectorField& u, const PressureSolution& lambda,
                             const VectorField& v, double det_tolerance = 1e-9);

struct StationarityResult {
    std::vector<double> residuals;
    double max_residual = 0.0;
};

/// For each test field eta:
///   |int (M grad u + lambda cof grad u) . grad eta| / (||grad eta|| ||M grad u + lambda cof grad u||)
/// with L2 norms over the field's grid. All test fields must share one grid.
StationarityResult stationarity_residual(const QuadraticIntegrand& m, const OneHomogeneousMap& u,
                                         const PressureSolution& lambda, const std::vector<VectorField>& battery);

struct EnergyReport {
    int N = 0;
    double a = 0.0;
    double nu = 0.0;
    std::string grid;
    double E_quadrature = 0.0;
    double E_direct_form = 0.0;  // nu pi (N + a / N)
    double E_paper_form = 0.0;   // nu pi / 2 (1 + a)(1 / N + N)
    double rel_err_direct = 0.0;
    double rel_err_paper = 0.0;
    bool admissible = false;     // a inside admissible_a_range(N)
    bool forms_disagree = false;
};

double energy_direct_form(int winding, double a, double nu);
double energy_paper_form(int winding, double a, double nu);

/// Quadrature E(u_N) for M = (a, 1, a, 1) nu next to both closed forms.
EnergyReport min_energy_report(int winding, double a, double nu, const PolarGrid& grid);

struct ResidualSweepRow {
    int grid_nr = 0;
    int grid_nth = 0;
    double max_residual = 0.0;
};

/// CSV `grid_nr,grid_nth,max_residual`.
void write_residual_sweep_csv(std::ostream& os, const std::vector<ResidualSweepRow>& rows);

}  // namespace ncover
