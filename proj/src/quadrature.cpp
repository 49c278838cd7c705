#include "matargs/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace matargs {

namespace {

constexpr int kMaxNodes = 256;
constexpr int kNewtonIters = 120;

}  // namespace

QuadRule gauss_laguerre(int n) {
    if (n < 1 || n > kMaxNodes)
        throw std::invalid_argument("gauss_laguerre: n out of range");
    QuadRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    double z = 0, z_prev1 = 0, z_prev2 = 0;
    for (int i = 1; i <= n; ++i) {
        // Stroud-Secrest style initial guesses, then Newton on L_n.
        if (i == 1) {
            z = 3.0 / (1.0 + 2.4 * n);
        } else if (i == 2) {
            z = z_prev1 + 15.0 / (1.0 + 2.5 * n);
        } else {
            const double ai = i - 2;
            z = z_prev1 +
                (1.0 + 2.55 * ai) / (1.9 * ai) * (z_prev1 - z_prev2);
        }
        double p1 = 0, p2 = 0;
        for (int it = 0; it < kNewtonIters; ++it) {
            p1 = 1.0;  // L_0
            p2 = 0.0;
            for (int k = 0; k < n; ++k) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2 * k + 1 - z) * p2 - k * p3) / (k + 1);
            }
            // L_n'(z) = n (L_n(z) - L_{n-1}(z)) / z
            const double pp = n * (p1 - p2) / z;
            const double dz = p1 / pp;
            z -= dz;
            if (std::abs(dz) <= 1e-15 * std::max(1.0, std::abs(z))) break;
        }
        // One recurrence pass up to L_{n+1} for the weight formula
        // w = z / ((n+1)^2 L_{n+1}(z)^2); computed via a square root first so
        // negligible tail weights underflow instead of overflowing.
        double l0 = 1.0, l1 = 1.0 - z;
        for (int k = 1; k <= n; ++k) {
            const double l2 = ((2 * k + 1 - z) * l1 - k * l0) / (k + 1);
            l0 = l1;
            l1 = l2;
        }
        const double t = std::sqrt(z) / ((n + 1) * std::abs(l1));
        rule.nodes[i - 1] = z;
        rule.weights[i - 1] = t * t;
        z_prev2 = z_prev1;
        z_prev1 = z;
    }
    for (int i = 0; i < n; ++i) {
        if (!(rule.nodes[i] > 0) || (i > 0 && !(rule.nodes[i] > rule.nodes[i - 1])))
            throw std::runtime_error("gauss_laguerre: node iteration failed to separate roots");
    }
    return rule;
}

QuadRule gauss_hermite(int n) {
    if (n < 1 || n > kMaxNodes)
        throw std::invalid_argument("gauss_hermite: n out of range");
    QuadRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int half = (n + 1) / 2;
    const double pim4 = 1.0 / std::pow(std::numbers::pi, 0.25);
    double z = 0, z_prev1 = 0, z_prev2 = 0;
    for (int i = 1; i <= half; ++i) {
        if (i == 1) {
            z = std::sqrt(2.0 * n + 1) - 1.85575 * std::pow(2.0 * n + 1, -1.0 / 6.0);
        } else if (i == 2) {
            z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
        } else if (i == 3) {
            z = 1.86 * z - 0.86 * z_prev2;
        } else if (i == 4) {
            z = 1.91 * z - 0.91 * z_prev2;
        } else {
            z = 2.0 * z - z_prev2;
        }
        double p1 = 0, p2 = 0;
        for (int it = 0; it < kNewtonIters; ++it) {
            p1 = pim4;  // orthonormal recurrence keeps magnitudes tame
            p2 = 0.0;
            for (int k = 0; k < n; ++k) {
                const double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / (k + 1)) * p2 -
                     std::sqrt(static_cast<double>(k) / (k + 1)) * p3;
            }
            const double pp = std::sqrt(2.0 * n) * p2;
            const double dz = p1 / pp;
            z -= dz;
            if (std::abs(dz) <= 1e-15 * std::max(1.0, std::abs(z))) break;
        }
        const double pp = std::sqrt(2.0 * n) * p2;
        // Largest roots first; mirror across zero.
        rule.nodes[i - 1] = z;
        rule.nodes[n - i] = -z;
        rule.weights[i - 1] = 2.0 / (pp * pp);
        rule.weights[n - i] = rule.weights[i - 1];
        z_prev2 = z_prev1;
        z_prev1 = z;
    }
    return rule;
}

double gamma_integral_laguerre(double alpha, int n) {
    if (!(alpha > 0))
        throw std::domain_error("gamma_integral_laguerre: requires alpha > 0");
    // Plain Gauss-Laguerre handles s^{alpha-1} poorly for small alpha, so raise
    // the exponent past 6 and divide out the rising factorial afterwards:
    //   Gamma(alpha) = [integral of s^{alpha-1+J} e^{-s} ds] / (alpha)_J.
    const int shift = std::max(0, static_cast<int>(std::ceil(7.0 - alpha)));
    const QuadRule rule = gauss_laguerre(n);
    double integral = 0;
    for (int i = n - 1; i >= 0; --i)
        integral += rule.weights[i] * std::pow(rule.nodes[i], alpha - 1 + shift);
    double divisor = 1;
    for (int j = 0; j < shift; ++j) divisor *= alpha + j;
    return integral / divisor;
}

}  // namespace matargs
