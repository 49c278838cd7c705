#pragma once

#include <vector>

namespace matargs {

struct QuadRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Weight e^{-s} on (0, inf). 1 <= n <= 256.
QuadRule gauss_laguerre(int n);

// Weight e^{-t^2} on the real line. 1 <= n <= 256.
QuadRule gauss_hermite(int n);

// Gamma(alpha) as an n-point Laguerre quadrature of the defining integral,
// preconditioned by an exponent shift for small alpha.
double gamma_integral_laguerre(double alpha, int n);

}  // namespace matargs
