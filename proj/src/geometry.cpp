#include "ncover/geometry.hpp"

#include "ncover/errors.hpp"

#include <algorithm>
#include <sstream>

namespace ncover {

Frame Frame::at(double theta, int winding) {
    const double n_theta = winding * theta;
    return {e_radial(theta), e_angular(theta), e_radial(n_theta), e_angular(n_theta)};
}

RadialRule parse_radial_rule(const std::string& name) {
    if (name == "gauss") return RadialRule::gauss;
    if (name == "midpoint") return RadialRule::midpoint;
    throw ParameterError("unknown radial rule '" + name + "' (expected gauss or midpoint)");
}

std::string to_string(RadialRule rule) {
    return rule == RadialRule::gauss ? "gauss" : "midpoint";
}

RadialQuadrature gauss_legendre(int n, double lo, double hi) {
    if (n < 1) throw ParameterError("gauss_legendre: n must be >= 1");
    RadialQuadrature q;
    q.nodes.resize(static_cast<std::size_t>(n));
    q.weights.resize(static_cast<std::size_t>(n));
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    if (n == 1) {
        q.nodes[0] = mid;
        q.weights[0] = 2.0 * half;
        return q;
    }
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Newton on P_n starting from the Tricomi-type guess.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // Recompute derivative at the converged root for the weight.
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        const auto lo_idx = static_cast<std::size_t>(i);
        const auto hi_idx = static_cast<std::size_t>(n - 1 - i);
        q.nodes[lo_idx] = mid - half * x;
        q.nodes[hi_idx] = mid + half * x;
        q.weights[lo_idx] = half * w;
        q.weights[hi_idx] = half * w;
    }
    return q;
}

RadialQuadrature power_weighted_rule(int n, double power) {
    if (!(power > -1.0)) throw ParameterError("power_weighted_rule: power must exceed -1");
    const RadialQuadrature base = gauss_legendre(n, 0.0, 1.0);
    const double exponent = 1.0 / (power + 1.0);
    RadialQuadrature q;
    q.nodes.reserve(base.nodes.size());
    q.weights.reserve(base.nodes.size());
    for (std::size_t i = 0; i < base.nodes.size(); ++i) {
        q.nodes.push_back(std::pow(base.nodes[i], exponent));
        q.weights.push_back(base.weights[i] * exponent);
    }
    return q;
}

PolarGrid::PolarGrid(std::vector<double> radial_nodes, std::vector<double> radial_weights,
                     int angular_count, RadialRule rule)
    : radial_nodes_(std::move(radial_nodes)),
      radial_weights_(std::move(radial_weights)),
      angular_count_(angular_count),
      rule_(rule) {
    if (radial_nodes_.size() < 2 || radial_nodes_.size() != radial_weights_.size())
        throw ParameterError("PolarGrid: need >= 2 radial nodes with matching weights");
    if (angular_count_ < 4) throw ParameterError("PolarGrid: angular_count must be >= 4");
    for (std::size_t i = 0; i < radial_nodes_.size(); ++i) {
        if (!(radial_nodes_[i] > 0.0) || radial_nodes_[i] > 1.0)
            throw ParameterError("PolarGrid: radial nodes must lie in (0, 1]");
        if (i > 0 && !(radial_nodes_[i] > radial_nodes_[i - 1]))
            throw ParameterError("PolarGrid: radial nodes must be strictly increasing");
    }
}

std::string PolarGrid::descriptor() const {
    std::ostringstream os;
    os << radial_count() << "x" << angular_count_ << ":" << to_string(rule_);
    return os.str();
}

PolarGrid make_grid(int n_radial, int n_angular, RadialRule rule) {
    if (n_radial < 2 || n_angular < 4)
        throw ParameterError("make_grid: need n_radial >= 2 and n_angular >= 4");
    if (rule == RadialRule::gauss) {
        RadialQuadrature q = gauss_legendre(n_radial, 0.0, 1.0);
        return PolarGrid(std::move(q.nodes), std::move(q.weights), n_angular, rule);
    }
    std::vector<double> nodes(static_cast<std::size_t>(n_radial));
    std::vector<double> weights(static_cast<std::size_t>(n_radial), 1.0 / n_radial);
    for (int i = 0; i < n_radial; ++i) nodes[static_cast<std::size_t>(i)] = (i + 0.5) / n_radial;
    return PolarGrid(std::move(nodes), std::move(weights), n_angular, rule);
}

std::pair<int, int> parse_grid_spec(const std::string& spec) {
    const auto pos = spec.find_first_of("xX");
    if (pos == std::string::npos) throw ParameterError("grid spec must look like NRxNT, got '" + spec + "'");
    try {
        std::size_t used_r = 0;
        std::size_t used_t = 0;
        const std::string rs = spec.substr(0, pos);
        const std::string ts = spec.substr(pos + 1);
        const int nr = std::stoi(rs, &used_r);
        const int nt = std::stoi(ts, &used_t);
        if (used_r != rs.size() || used_t != ts.size()) throw ParameterError("trailing characters");
        return {nr, nt};
    } catch (const std::exception&) {
        throw ParameterError("grid spec must look like NRxNT, got '" + spec + "'");
    }
}

}  // namespace ncover
