#pragma once

#include "ncover/geometry.hpp"
#include "ncover/maps.hpp"
#include "ncover/pressure.hpp"

#include <ostream>
#include <utility>
#include <vector>

namespace ncover {

/// Per-radius angular modes of a sampled field:
///   f(R, theta) = a0(R) + sum_{j=1..j_max} A_j(R) cos(j theta) + B_j(R) sin(j theta).
/// a0 is the plain angular mean and A_j, B_j carry the 2/n discrete weight, so a
/// band-limited field is reproduced exactly. The same transform is applied to
/// d_R f so radial derivatives of the modes are available as well.
class FourierDecomposition {
public:
    FourierDecomposition(PolarGrid grid, int j_max, std::vector<Vec2> coefficients,
                         std::vector<Vec2> radial_coefficients);

    const PolarGrid& grid() const { return grid_; }
    int j_max() const { return j_max_; }

    const Vec2& zero_mode(int i) const { return coeff_[slot(i, 0, 0)]; }
    const Vec2& cos_mode(int i, int j) const { return coeff_[slot(i, j, 0)]; }
    const Vec2& sin_mode(int i, int j) const { return coeff_[slot(i, j, 1)]; }
    const Vec2& zero_mode_dr(int i) const { return d_radius_[slot(i, 0, 0)]; }
    const Vec2& cos_mode_dr(int i, int j) const { return d_radius_[slot(i, j, 0)]; }
    const Vec2& sin_mode_dr(int i, int j) const { return d_radius_[slot(i, j, 1)]; }

    Vec2 reconstruct(int i, double theta) const;

private:
    std::size_t slot(int i, int j, int part) const {
        return (static_cast<std::size_t>(i) * static_cast<std::size_t>(j_max_ + 1) + static_cast<std::size_t>(j)) * 2 +
               static_cast<std::size_t>(part);
    }

    PolarGrid grid_;
    int j_max_;
    std::vector<Vec2> coeff_;
    std::vector<Vec2> d_radius_;
};

/// AliasingError unless angular_count >= 2 j_max + 2.
FourierDecomposition decompose(const VectorField& f, int j_max);

/// Largest j_max the field's angular grid resolves.
int max_resolved_mode(const PolarGrid& grid);

/// max over nodes of |det grad f^(0)| with grad f^(0) = a0'(R) (x) e_R.
double zero_mode_det(const VectorField& f);

/// (Dirichlet energy of f, sum over modes of the mode Dirichlet energies).
std::pair<double, double> parseval_gradient(const VectorField& f, int j_max);

/// (int R^-2 |d_theta f~|^2 dx, int R^-2 |f~|^2 dx) with f~ = f - f^(0).
/// SupportError if f does not vanish on the innermost ring.
std::pair<double, double> buckling_check(const VectorField& f);

/// |LHS - RHS| / (1 + |LHS|) for
///   int lambda det grad phi dx = -1/2 int ((cof grad phi) grad lambda) . phi dx.
/// Meaningful for boundary-vanishing phi supported above the annulus floor.
double identity_v_check(const VectorField& phi, const PressureSolution& lambda);

/// As identity_v_check for the zero-mode split
///   int lambda det grad phi = -1/2 int ((cof grad phi^(0)) grad lambda) . phi~
///                             -1/2 int ((cof grad phi) grad lambda) . phi~.
double identity_vi_check(const VectorField& phi, const PressureSolution& lambda);

/// CSV `R,j,A1,A2,B1,B2`; j = 0 rows carry a0 in A and zeros in B.
void write_modes_csv(std::ostream& os, const FourierDecomposition& d);

}  // namespace ncover
