#pragma once

#include <functional>
#include <vector>

namespace ptwa {

/// Gauss-Legendre nodes and weights on [a, b].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [a, b] (Newton iteration on Legendre roots).
GaussRule gauss_legendre(int n, double a, double b);

/// Composite rule: `panels` equal panels over [a, b], `per_panel` nodes each.
GaussRule composite_gauss_legendre(int panels, int per_panel, double a, double b);

inline double integrate(const GaussRule& rule, const std::function<double(double)>& f) {
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) acc += rule.weights[i] * f(rule.nodes[i]);
    return acc;
}

}  // namespace ptwa
