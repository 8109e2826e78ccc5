#pragma once

#include "ncover/energy.hpp"
#include "ncover/geometry.hpp"
#include "ncover/integrand.hpp"
#include "ncover/maps.hpp"

#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace ncover {

/// psi(R, theta) = (R, theta + w(R)) with w(1) = 0. det grad psi = 1 and psi
/// fixes the unit circle pointwise.
class TwistMap {
public:
    using Profile = std::function<double(double)>;

    static TwistMap identity();
    /// w = amplitude (1 - R).
    static TwistMap polynomial(double amplitude);
    /// w = amplitude * bump on (lo, hi), lo and hi inside [0, 1).
    static TwistMap bump(double amplitude, double lo, double hi);

    double w(double radius) const { return w_(radius); }
    double w_prime(double radius) const { return w_prime_(radius); }
    const std::string& label() const { return label_; }

    /// Twist with profile s * w.
    TwistMap scaled(double s) const;

private:
    TwistMap(Profile w, Profile w_prime, std::string label)
        : w_(std::move(w)), w_prime_(std::move(w_prime)), label_(std::move(label)) {}

    friend TwistMap compose(const TwistMap& first, const TwistMap& second);

    Profile w_;
    Profile w_prime_;
    std::string label_;
};

/// Two twists commute; their composition adds the profiles.
TwistMap compose(const TwistMap& first, const TwistMap& second);

enum class TwistProfile { polynomial, bump };

TwistProfile parse_twist_profile(const std::string& name);

/// Polynomial: w = amplitude (1 - R). Bump: support drawn from `seed` inside
/// [1/4, 3/4], peak |w| = |amplitude|. ParameterError for non-finite amplitude.
TwistMap make_twist(TwistProfile profile, double amplitude, std::uint64_t seed);

/// v = u o psi with exact chain-rule gradient
///   grad v = (g(phi) + R w'(R) g'(phi)) (x) e_R + g'(phi) (x) e_theta,  phi = theta + w(R).
VectorField compose(const OneHomogeneousMap& u, const TwistMap& psi, const PolarGrid& grid);

struct ProbeRecord {
    int probe_id = 0;
    double amplitude = 0.0;
    double gap = 0.0;
    double predicted_gap = 0.0;
    double residual = 0.0;
    double det_err = 0.0;
};

struct ProbeReport {
    int N = 0;
    double a = 0.0;
    double nu = 0.0;
    std::string grid;
    int count = 0;
    double amplitude = 0.0;  // probe amplitudes are uniform in [-amplitude, amplitude]
    std::uint64_t seed = 0;
    bool certified = false;  // a inside the admissible range
    double energy_base = 0.0;
    double min_gap = 0.0;
    double max_gap = 0.0;
    double max_residual = 0.0;
    double max_det_err = 0.0;
    double gap_tolerance = 0.0;  // 1e-8 (1 + E(u_N))
    bool min_gap_ok = false;
    std::vector<ProbeRecord> probes;
};

/// Random twist competitors of u_N (single polynomial, single bump, or the
/// composition of two), their energy gaps and gap-identity residuals.
/// ConsistencyError if any competitor drifts off det = 1 by more than 1e-9.
ProbeReport probe_minimality(int winding, double a, double nu, int count, double amplitude, std::uint64_t seed,
                             const PolarGrid& grid);

/// E(u_N o psi_s) - E(u_N) along the ray psi_s = twist.scaled(s).
std::vector<double> strict_gap_scaling(int winding, double a, double nu, const TwistMap& twist,
                                       const std::vector<double>& amplitudes, const PolarGrid& grid);

/// CSV `probe_id,amplitude,gap,predicted_gap,residual,det_err`.
void write_probe_csv(std::ostream& os, const ProbeReport& report);

}  // namespace ncover
