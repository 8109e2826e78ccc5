#include "ncover/spectral.hpp"

#include "ncover/errors.hpp"
#include "ncover/geometry.hpp"

#include <cmath>

namespace ncover {

TrigInterpolant::TrigInterpolant(const std::vector<double>& samples) : n_(static_cast<int>(samples.size())) {
    if (n_ < 3) throw ParameterError("TrigInterpolant: need at least 3 samples");
    double sum = 0.0;
    for (double v : samples) sum += v;
    mean_ = sum / n_;
    const int jmax = (n_ - 1) / 2;
    cos_coeff_.assign(static_cast<std::size_t>(jmax), 0.0);
    sin_coeff_.assign(static_cast<std::size_t>(jmax), 0.0);
    for (int j = 1; j <= jmax; ++j) {
        double c = 0.0;
        double s = 0.0;
        for (int k = 0; k < n_; ++k) {
            // Reduce j*k mod n so the angle stays small and exact.
            const double angle = kTwoPi * static_cast<double>((static_cast<long long>(j) * k) % n_) / n_;
            c += samples[static_cast<std::size_t>(k)] * std::cos(angle);
            s += samples[static_cast<std::size_t>(k)] * std::sin(angle);
        }
        cos_coeff_[static_cast<std::size_t>(j - 1)] = 2.0 * c / n_;
        sin_coeff_[static_cast<std::size_t>(j - 1)] = 2.0 * s / n_;
    }
    if (n_ % 2 == 0) {
        double alt = 0.0;
        for (int k = 0; k < n_; ++k) alt += (k % 2 == 0 ? 1.0 : -1.0) * samples[static_cast<std::size_t>(k)];
        nyquist_ = alt / n_;
    }
}

double TrigInterpolant::value(double theta) const {
    double v = mean_;
    for (std::size_t j = 0; j < cos_coeff_.size(); ++j) {
        const double a = static_cast<double>(j + 1) * theta;
        v += cos_coeff_[j] * std::cos(a) + sin_coeff_[j] * std::sin(a);
    }
    if (n_ % 2 == 0) v += nyquist_ * std::cos(0.5 * n_ * theta);
    return v;
}

double TrigInterpolant::derivative(double theta) const {
    double v = 0.0;
    for (std::size_t j = 0; j < cos_coeff_.size(); ++j) {
        const double m = static_cast<double>(j + 1);
        v += m * (-cos_coeff_[j] * std::sin(m * theta) + sin_coeff_[j] * std::cos(m * theta));
    }
    return v;
}

double TrigInterpolant::second_derivative(double theta) const {
    double v = 0.0;
    for (std::size_t j = 0; j < cos_coeff_.size(); ++j) {
        const double m = static_cast<double>(j + 1);
        v -= m * m * (cos_coeff_[j] * std::cos(m * theta) + sin_coeff_[j] * std::sin(m * theta));
    }
    return v;
}

double TrigInterpolant::antiderivative(double theta) const {
    double v = 0.0;
    for (std::size_t j = 0; j < cos_coeff_.size(); ++j) {
        const double m = static_cast<double>(j + 1);
        v += (cos_coeff_[j] * std::sin(m * theta) - sin_coeff_[j] * (std::cos(m * theta) - 1.0)) / m;
    }
    return v;
}

std::vector<double> spectral_derivative(const std::vector<double>& samples) {
    const TrigInterpolant interp(samples);
    const int n = static_cast<int>(samples.size());
    std::vector<double> out(samples.size());
    for (int k = 0; k < n; ++k) out[static_cast<std::size_t>(k)] = interp.derivative(kTwoPi * k / n);
    return out;
}

}  // namespace ncover
