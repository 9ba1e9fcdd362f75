#include "ptwa/gauss_legendre.hpp"

#include <cmath>
#include <numbers>

#include "ptwa/common.hpp"

namespace ptwa {

GaussRule gauss_legendre(int n, double a, double b) {
    if (n < 1) throw ValidationError("gauss_legendre: need at least one node");
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double xm = 0.5 * (b + a);
    const double xl = 0.5 * (b - a);
    const int m = (n + 1) / 2;
    for (int i = 1; i <= m; ++i) {
        double z = std::cos(std::numbers::pi * (i - 0.25) / (n + 0.5));
        double z1, pp;
        do {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            z1 = z;
            z = z1 - p1 / pp;
        } while (std::abs(z - z1) > 1e-15);
        rule.nodes[i - 1] = xm - xl * z;
        rule.nodes[n - i] = xm + xl * z;
        rule.weights[i - 1] = 2.0 * xl / ((1.0 - z * z) * pp * pp);
        rule.weights[n - i] = rule.weights[i - 1];
    }
    return rule;
}

GaussRule composite_gauss_legendre(int panels, int per_panel, double a, double b) {
    if (panels < 1) throw ValidationError("composite_gauss_legendre: need at least one panel");
    GaussRule base = gauss_legendre(per_panel, 0.0, 1.0);
    GaussRule rule;
    rule.nodes.reserve(static_cast<std::size_t>(panels) * per_panel);
    rule.weights.reserve(static_cast<std::size_t>(panels) * per_panel);
    const double width = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * width;
        for (int i = 0; i < per_panel; ++i) {
            rule.nodes.push_back(lo + base.nodes[i] * width);
            rule.weights.push_back(base.weights[i] * width);
        }
    }
    return rule;
}

}  // namespace ptwa
