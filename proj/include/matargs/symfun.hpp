#pragma once

#include "matargs/partition.hpp"
#include "matargs/rational.hpp"

#include <map>
#include <span>
#include <vector>

namespace matargs {

// Homogeneous symmetric polynomial of degree k in the monomial basis {m_lambda},
// understood in n = k variables. Zero coefficients are never stored.
class SymPoly {
public:
    explicit SymPoly(int degree);

    int degree() const { return degree_; }
    const std::map<Partition, Rational>& terms() const { return terms_; }
    Rational coeff(const Partition& lambda) const;
    void set_coeff(const Partition& lambda, const Rational& c);
    void add_term(const Partition& lambda, const Rational& c);
    SymPoly& add_scaled(const SymPoly& g, const Rational& c);
    SymPoly& operator*=(const Rational& c);

    friend bool operator==(const SymPoly&, const SymPoly&) = default;

private:
    std::map<Partition, Rational> terms_;
    int degree_ = 0;
};

// Distinct rearrangements of lambda's exponents over n variable slots, in a
// fixed deterministic order. Empty when length(lambda) > n.
std::vector<std::vector<int>> distinct_exponent_vectors(const Partition& lambda, int n);

// m_lambda evaluated at x: sum over distinct permuted monomials.
double monomial_eval(const Partition& lambda, std::span<const double> x);
Rational monomial_eval(const Partition& lambda, std::span<const Rational> x);

// p_lambda = prod_i (sum_j x_j^{lambda_i}) expanded in the monomial basis,
// with n = |lambda| variables.
SymPoly power_sum_in_monomial_basis(const Partition& lambda);

// prod_j j^{m_j} * m_j!  (m_j = multiplicity of part j in lambda).
long long z_lambda(const Partition& lambda);

// Transition data between the monomial and power-sum bases at one degree.
// Partitions are indexed in ascending lexicographic order, under which the
// p-to-m matrix is triangular with positive diagonal.
class PowerSumBasis {
public:
    explicit PowerSumBasis(int degree);

    int degree() const { return degree_; }
    const std::vector<Partition>& partitions_ascending() const { return asc_; }

    // Coefficients of f (given in the m-basis) in the p-basis.
    std::vector<Rational> to_power_sums(const SymPoly& f) const;

    // Expand p-basis coefficients back into the m-basis.
    SymPoly to_monomials(std::span<const Rational> pc) const;

    // <p_i, p_i> under the alpha=2 inner product: 2^{length} * z_lambda.
    const std::vector<Rational>& weights() const { return w_; }

private:
    int degree_ = 0;
    std::vector<Partition> asc_;
    std::vector<std::vector<Rational>> m_of_p_;  // [i][j] = coeff of m_{asc[j]} in p_{asc[i]}
    std::vector<Rational> w_;
};

// alpha=2 inner product <f, g> = sum f_hat_lambda g_hat_lambda 2^{len} z_lambda
// over the shared p-basis expansion.
Rational inner_product_alpha2(const SymPoly& f, const SymPoly& g);

}  // namespace matargs
