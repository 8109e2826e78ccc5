#pragma once

#include <vector>

namespace ncover {

/// Trigonometric interpolant of samples taken at theta_k = 2 pi k / n.
///
/// For even n the Nyquist term is kept in the value (with half weight, so the
/// interpolant reproduces the samples) and dropped from derivatives.
class TrigInterpolant {
public:
    explicit TrigInterpolant(const std::vector<double>& samples);

    double value(double theta) const;
    double derivative(double theta) const;
    double second_derivative(double theta) const;

    /// Angular mean a_0.
    double mean() const { return mean_; }

    /// int_0^theta (f - a_0) dphi; the Nyquist term, if any, is ignored.
    double antiderivative(double theta) const;

    int sample_count() const { return n_; }

private:
    int n_;
    double mean_;
    std::vector<double> cos_coeff_;  // index j-1 for j = 1..jmax
    std::vector<double> sin_coeff_;
    double nyquist_ = 0.0;
};

/// Spectral theta-derivative of a uniformly sampled periodic sequence.
std::vector<double> spectral_derivative(const std::vector<double>& samples);

}  // namespace ncover
