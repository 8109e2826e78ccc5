#include "ncover/competitors.hpp"

#include "ncover/errors.hpp"
#include "ncover/io.hpp"
#include "ncover/parallel.hpp"
#include "ncover/pressure.hpp"
#include "ncover/random.hpp"

#include <algorithm>
#include <cmath>

namespace ncover {

TwistMap TwistMap::identity() {
    return TwistMap([](double) { return 0.0; }, [](double) { return 0.0; }, "identity");
}

TwistMap TwistMap::polynomial(double amplitude) {
    return TwistMap([amplitude](double r) { return amplitude * (1.0 - r); },
                    [amplitude](double) { return -amplitude; }, "polynomial");
}

TwistMap TwistMap::bump(double amplitude, double lo, double hi) {
    if (!(0.0 <= lo && lo < hi && hi < 1.0)) throw ParameterError("TwistMap::bump: need 0 <= lo < hi < 1");
    const RadialBump b{lo, hi};
    return TwistMap([amplitude, b](double r) { return amplitude * b.value(r); },
                    [amplitude, b](double r) { return amplitude * b.derivative(r); }, "bump");
}

TwistMap TwistMap::scaled(double s) const {
    Profile w = w_;
    Profile dw = w_prime_;
    return TwistMap([w, s](double r) { return s * w(r); }, [dw, s](double r) { return s * dw(r); }, label_);
}

TwistMap compose(const TwistMap& first, const TwistMap& second) {
    TwistMap::Profile w1 = first.w_, w2 = second.w_;
    TwistMap::Profile d1 = first.w_prime_, d2 = second.w_prime_;
    return TwistMap([w1, w2](double r) { return w1(r) + w2(r); }, [d1, d2](double r) { return d1(r) + d2(r); },
                    first.label_ + "+" + second.label_);
}

TwistProfile parse_twist_profile(const std::string& name) {
    if (name == "polynomial") return TwistProfile::polynomial;
    if (name == "bump") return TwistProfile::bump;
    throw ParameterError("unknown twist profile '" + name + "' (expected polynomial or bump)");
}

TwistMap make_twist(TwistProfile profile, double amplitude, std::uint64_t seed) {
    if (!std::isfinite(amplitude)) throw ParameterError("make_twist: amplitude must be finite");
    if (profile == TwistProfile::polynomial) return TwistMap::polynomial(amplitude);
    SplitMix64 rng(seed);
    const double lo = rng.uniform(0.25, 0.45);
    const double hi = rng.uniform(lo + 0.2, 0.75);
    return TwistMap::bump(amplitude, lo, hi);
}

VectorField compose(const OneHomogeneousMap& u, const TwistMap& psi, const PolarGrid& grid) {
    FieldDefinition def;
    def.value = [&](double r, double theta) { return u.value(r, theta + psi.w(r)); };
    def.gradient = [&](double r, double theta) {
        const double phi = theta + psi.w(r);
        const Vec2 gp = u.g_prime(phi);
        return outer(u.g(phi) + (r * psi.w_prime(r)) * gp, e_radial(theta)) + outer(gp, e_angular(theta));
    };
    return sample_field(def, grid);
}

ProbeReport probe_minimality(int winding, double a, double nu, int count, double amplitude, std::uint64_t seed,
                             const PolarGrid& grid) {
    if (count < 1) throw ParameterError("probe_minimality: count must be >= 1");
    if (!std::isfinite(amplitude) || amplitude < 0.0)
        throw ParameterError("probe_minimality: amplitude must be finite and >= 0");
    const QuadraticIntegrand m = QuadraticIntegrand::constant_case(a, nu);
    const OneHomogeneousMap u = OneHomogeneousMap::ncover(winding);
    const VectorField base = sample_map(u, grid);
    const PressureSolution lambda = reconstruct_lambda(compute_pressure_gradient(m, u, grid));

    ProbeReport report;
    report.N = winding;
    report.a = a;
    report.nu = nu;
    report.grid = grid.descriptor();
    report.count = count;
    report.amplitude = amplitude;
    report.seed = seed;
    report.certified = admissible_a_range(winding).contains(a);
    report.energy_base = energy(m, base);
    report.gap_tolerance = 1e-8 * (1.0 + std::abs(report.energy_base));
    report.probes.resize(static_cast<std::size_t>(count));

    parallel_for(static_cast<std::size_t>(count), [&](std::size_t p) {
        SplitMix64 rng(derive_seed(seed, p));
        const double amp = rng.uniform(-amplitude, amplitude);
        const int kind = rng.uniform_int(0, 2);
        TwistMap psi = TwistMap::identity();
        if (kind == 0) {
            psi = make_twist(TwistProfile::polynomial, amp, rng.next());
        } else if (kind == 1) {
            psi = make_twist(TwistProfile::bump, amp, rng.next());
        } else {
            const double second = rng.uniform(-amplitude, amplitude);
            psi = compose(make_twist(TwistProfile::polynomial, 0.5 * amp, rng.next()),
                          make_twist(TwistProfile::bump, 0.5 * second, rng.next()));
        }
        const VectorField v = compose(u, psi, grid);
        ProbeRecord rec;
        rec.probe_id = static_cast<int>(p);
        rec.amplitude = amp;
        rec.det_err = det_defect(v);
        if (rec.det_err > 1e-9)
            throw ConsistencyError("probe " + std::to_string(p) + ": twist competitor has det error " +
                                   format_double(rec.det_err));
        const GapResult g = gap_identity_check(m, base, lambda, v);
        rec.gap = g.gap;
        rec.predicted_gap = g.predicted_gap;
        rec.residual = g.residual;
        report.probes[p] = rec;
    });

    report.min_gap = report.probes.front().gap;
    report.max_gap = report.probes.front().gap;
    for (const ProbeRecord& rec : report.probes) {
        report.min_gap = std::min(report.min_gap, rec.gap);
        report.max_gap = std::max(report.max_gap, rec.gap);
        report.max_residual = std::max(report.max_residual, rec.residual);
        report.max_det_err = std::max(report.max_det_err, rec.det_err);
    }
    report.min_gap_ok = report.min_gap >= -report.gap_tolerance;
    return report;
}

std::vector<double> strict_gap_scaling(int winding, double a, double nu, const TwistMap& twist,
                                       const std::vector<double>& amplitudes, const PolarGrid& grid) {
    for (std::size_t n = 0; n < amplitudes.size(); ++n) {
        if (!(amplitudes[n] >= 0.0) || (n > 0 && !(amplitudes[n] > amplitudes[n - 1])))
            throw ParameterError("strict_gap_scaling: amplitudes must be nonnegative and increasing");
    }
    const QuadraticIntegrand m = QuadraticIntegrand::constant_case(a, nu);
    const OneHomogeneousMap u = OneHomogeneousMap::ncover(winding);
    const double base = energy(m, u, grid);
    std::vector<double> gaps(amplitudes.size());
    parallel_for(amplitudes.size(), [&](std::size_t n) {
        gaps[n] = energy(m, compose(u, twist.scaled(amplitudes[n]), grid)) - base;
    });
    return gaps;
}

void write_probe_csv(std::ostream& os, const ProbeReport& report) {
    os << "probe_id,amplitude,gap,predicted_gap,residual,det_err\n";
    for (const ProbeRecord& r : report.probes) {
        os << r.probe_id << ',';
        write_csv_row(os, {r.amplitude, r.gap, r.predicted_gap, r.residual, r.det_err});
    }
}

}  // namespace ncover
