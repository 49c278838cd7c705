#pragma once

#include "matargs/partition.hpp"

#include <span>
#include <stdexcept>
#include <utility>

namespace matargs {

// Lanczos (g = 7, 9 coefficients), reflection for arguments below 1/2.
// Non-positive integers are poles and throw.
double gamma_fn(double x);
double log_gamma(double x);  // requires x > 0

// prod_{i=1}^{q} (x + i - 1); the explicit product, valid for any real x.
double pochhammer_rising(double x, int q);

// prod_{i=1}^{q} (x - i + 1).
double pochhammer_falling(double x, int q);

// (-x)_q - (-1)^q (x - q + 1)_q, both sides by explicit products.
double neg_pochhammer_identity_residual(double x, int q);

enum class GammaForm { ascending, descending };

// pi^{m(m-1)/4} * prod Gamma(a - (i-1)/2)   (ascending), or
// pi^{m(m-1)/4} * prod Gamma(a - (m-i)/2)   (descending); requires a > (m-1)/2.
double multivariate_gamma(double a, int m, GammaForm form = GammaForm::ascending);
double multivariate_log_gamma(double a, int m, GammaForm form = GammaForm::ascending);

// (b)_kappa = prod_i (b - (i-1)/2)_{k_i}; kappa zero-padded to m parts.
double gen_pochhammer(double b, const Partition& kappa, int m);

enum class ConstantVariant { corrected, muirhead_incorrect };

// Normalizing constant of the matrix Laplace integral identity:
//   (-1)^k Gamma_m[a] / denominator,
// where the corrected denominator is (-a + (m+1)/2)_kappa and the incorrect
// variant uses prod_i (-a + (i+1)/2)_{k_i}. Requires a > k_1 + (m-1)/2.
double theorem1_constant(double a, int m, const Partition& kappa, ConstantVariant variant);
double theorem1_denominator(double a, int m, const Partition& kappa, ConstantVariant variant);

// True when the two denominator variants multiply the same factors, i.e. the
// zero-padded parts form a palindrome (k_i = k_{m+1-i} for all i).
bool theorem1_variants_coincide(const Partition& kappa, int m);

// Residuals of the two product reindexing identities for an arbitrary factor
// function g: first component compares prod g(x+i-1) with prod g(x+q-i);
// second compares prod g(x + s*k_{q+1-i} - i + 1) with prod g(x + s*k_i - q + i)
// for the shift sequence k and sign s. Both vanish up to rounding.
template <class G>
std::pair<double, double> reindex_product_residuals(G&& g, double x, int q,
                                                   std::span<const int> shifts,
                                                   int shift_sign = 1) {
    if (q < 1) throw std::invalid_argument("reindex_product_residuals: q must be >= 1");
    if (static_cast<int>(shifts.size()) != q)
        throw std::invalid_argument("reindex_product_residuals: need q shifts");
    if (shift_sign != 1 && shift_sign != -1)
        throw std::invalid_argument("reindex_product_residuals: sign must be +1 or -1");
    double asc = 1, desc = 1, shifted_rev = 1, shifted = 1;
    for (int i = 1; i <= q; ++i) {
        asc *= g(x + i - 1);
        desc *= g(x + q - i);
        shifted_rev *= g(x + shift_sign * shifts[q - i] - i + 1);
        shifted *= g(x + shift_sign * shifts[i - 1] - q + i);
    }
    return {asc - desc, shifted_rev - shifted};
}

}  // namespace matargs
