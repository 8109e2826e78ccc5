#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

namespace ncover {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }
    Vec2& operator*=(double s) { x *= s; y *= s; return *this; }
};

inline Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
inline Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
inline Vec2 operator-(const Vec2& a) { return {-a.x, -a.y}; }
inline Vec2 operator*(double s, Vec2 a) { return a *= s; }
inline Vec2 operator*(Vec2 a, double s) { return a *= s; }
inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double norm(const Vec2& a) { return std::hypot(a.x, a.y); }

/// Rotation by pi/2: J = ((0,-1),(1,0)).
inline Vec2 rotate_j(const Vec2& a) { return {-a.y, a.x}; }

/// Row-major 2x2 matrix. Gradients follow (grad u)_ij = d u_i / d x_j.
struct Mat2 {
    double a11 = 0.0, a12 = 0.0, a21 = 0.0, a22 = 0.0;

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

    double operator()(int i, int j) const {
        return i == 0 ? (j == 0 ? a11 : a12) : (j == 0 ? a21 : a22);
    }
    double& operator()(int i, int j) {
        return i == 0 ? (j == 0 ? a11 : a12) : (j == 0 ? a21 : a22);
    }

    Mat2& operator+=(const Mat2& o) {
        a11 += o.a11; a12 += o.a12; a21 += o.a21; a22 += o.a22;
        return *this;
    }
    Mat2& operator-=(const Mat2& o) {
        a11 -= o.a11; a12 -= o.a12; a21 -= o.a21; a22 -= o.a22;
        return *this;
    }
    Mat2& operator*=(double s) {
        a11 *= s; a12 *= s; a21 *= s; a22 *= s;
        return *this;
    }
};

inline Mat2 operator+(Mat2 a, const Mat2& b) { return a += b; }
inline Mat2 operator-(Mat2 a, const Mat2& b) { return a -= b; }
inline Mat2 operator*(double s, Mat2 a) { return a *= s; }
inline Mat2 operator*(Mat2 a, double s) { return a *= s; }
inline Vec2 operator*(const Mat2& m, const Vec2& v) {
    return {m.a11 * v.x + m.a12 * v.y, m.a21 * v.x + m.a22 * v.y};
}
inline Mat2 operator*(const Mat2& a, const Mat2& b) {
    return {a.a11 * b.a11 + a.a12 * b.a21, a.a11 * b.a12 + a.a12 * b.a22,
            a.a21 * b.a11 + a.a22 * b.a21, a.a21 * b.a12 + a.a22 * b.a22};
}
inline Mat2 transpose(const Mat2& a) { return {a.a11, a.a21, a.a12, a.a22}; }

/// (a (x) b)_ij = a_i b_j
inline Mat2 outer(const Vec2& a, const Vec2& b) {
    return {a.x * b.x, a.x * b.y, a.y * b.x, a.y * b.y};
}

/// Frobenius inner product A.B = sum_ij A_ij B_ij.
inline double frobenius(const Mat2& a, const Mat2& b) {
    return a.a11 * b.a11 + a.a12 * b.a12 + a.a21 * b.a21 + a.a22 * b.a22;
}
inline double frobenius_norm(const Mat2& a) { return std::sqrt(frobenius(a, a)); }

/// cof A = ((a22, -a21), (-a12, a11)); A cof(A)^T = det(A) Id.
inline Mat2 cofactor(const Mat2& a) { return {a.a22, -a.a21, -a.a12, a.a11}; }

inline double det2(const Mat2& a) { return a.a11 * a.a22 - a.a12 * a.a21; }

/// Polar frame at angle theta together with the frame at N*theta.
struct Frame {
    Vec2 e_r;
    Vec2 e_theta;
    Vec2 e_nr;
    Vec2 e_ntheta;

    static Frame at(double theta, int winding = 1);
};

inline Vec2 e_radial(double theta) { return {std::cos(theta), std::sin(theta)}; }
inline Vec2 e_angular(double theta) { return {-std::sin(theta), std::cos(theta)}; }

enum class RadialRule { gauss, midpoint };

RadialRule parse_radial_rule(const std::string& name);
std::string to_string(RadialRule rule);

/// One-dimensional rule: sum_i weights[i] F(nodes[i]) approximates an integral.
struct RadialQuadrature {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Gauss-Legendre rule on [lo, hi].
RadialQuadrature gauss_legendre(int n, double lo = 0.0, double hi = 1.0);

/// Rule for int_0^1 F(R) R^power dR with power > -1. The substitution
/// R = s^(1/(power+1)) absorbs the weight, leaving a Gauss-Legendre rule in s
/// that is exact for constant F.
RadialQuadrature power_weighted_rule(int n, double power);

/// Tensor-product quadrature on the unit disk, open at the origin.
///
/// Node (i, k) sits at R = radial_nodes[i], theta = 2 pi k / angular_count.
/// The area element R dR dtheta is folded into node_weight(i); angular
/// integration is the periodic trapezoid rule, exact for band-limited data.
class PolarGrid {
public:
    PolarGrid(std::vector<double> radial_nodes, std::vector<double> radial_weights,
              int angular_count, RadialRule rule);

    int radial_count() const { return static_cast<int>(radial_nodes_.size()); }
    int angular_count() const { return angular_count_; }
    std::size_t size() const { return radial_nodes_.size() * static_cast<std::size_t>(angular_count_); }
    std::size_t index(int i, int k) const {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(angular_count_) +
               static_cast<std::size_t>(k);
    }

    double radius(int i) const { return radial_nodes_[static_cast<std::size_t>(i)]; }
    double theta(int k) const { return kTwoPi * k / angular_count_; }
    double angular_spacing() const { return kTwoPi / angular_count_; }
    double annulus_floor() const { return radial_nodes_.front(); }
    RadialRule rule() const { return rule_; }

    const std::vector<double>& radial_nodes() const { return radial_nodes_; }
    const std::vector<double>& radial_weights() const { return radial_weights_; }

    /// Quadrature weight of every node on ring i (includes R and dtheta).
    double node_weight(int i) const {
        return radial_weights_[static_cast<std::size_t>(i)] * radial_nodes_[static_cast<std::size_t>(i)] *
               angular_spacing();
    }

    /// Approximates int_B F dx where F is evaluated as fn(i, k).
    template <class Fn>
    double integrate(Fn&& fn) const {
        double total = 0.0;
        for (int i = 0; i < radial_count(); ++i) {
            double ring = 0.0;
            for (int k = 0; k < angular_count_; ++k) ring += fn(i, k);
            total += ring * node_weight(i);
        }
        return total;
    }

    std::string descriptor() const;

private:
    std::vector<double> radial_nodes_;
    std::vector<double> radial_weights_;
    int angular_count_;
    RadialRule rule_;
};

/// n_radial >= 2, n_angular >= 4; otherwise ParameterError.
PolarGrid make_grid(int n_radial, int n_angular, RadialRule rule = RadialRule::gauss);

/// Parses "NRxNT" (e.g. "128x256").
std::pair<int, int> parse_grid_spec(const std::string& spec);

}  // namespace ncover
