#pragma once

#include "matargs/linalg.hpp"
#include "matargs/partition.hpp"
#include "matargs/symfun.hpp"

#include <iosfwd>
#include <map>
#include <span>
#include <vector>

namespace matargs {

// Zonal polynomials C_kappa in the monomial basis for all |kappa| <= K,
// normalized so that the degree-k slice sums to (tr)^k. C of the empty
// partition is fixed to 1.
class ZonalTable {
public:
    static ZonalTable build(int max_degree);

    int max_degree() const { return max_degree_; }
    bool contains(const Partition& kappa) const;
    const SymPoly& poly(const Partition& kappa) const;

    // Coefficient of m_kappa inside C_kappa; strictly positive.
    Rational d_kappa(const Partition& kappa) const;

    // Partitions of weight k in descending lexicographic order.
    const std::vector<Partition>& degree_partitions(int k) const;

    void write_json(std::ostream& out) const;
    void write_csv(std::ostream& out) const;

private:
    ZonalTable() = default;
    int max_degree_ = 0;
    std::map<Partition, SymPoly> polys_;
    std::vector<std::vector<Partition>> by_degree_;
};

// Precompiled evaluator: exact coefficients folded to double once, monomial
// orbits expanded once. All evaluation paths share its summation order.
class ZonalEvaluator {
public:
    ZonalEvaluator(const ZonalTable& table, const Partition& kappa, int num_vars);
    double operator()(std::span<const double> eigs) const;
    int num_vars() const { return num_vars_; }

private:
    struct Term {
        double coeff;
        std::vector<std::vector<int>> exponents;
    };
    std::vector<Term> terms_;
    int num_vars_ = 0;
};

double eval_eigs(const ZonalTable& table, const Partition& kappa,
                 std::span<const double> eigs);
double eval_matrix(const ZonalTable& table, const Partition& kappa, const SymMatrix& a);

// C_kappa(I_m) / C_{kappa*}(I_m) with kappa* = kappa_star(kappa, n, m).
double s_kappa_kappastar(const ZonalTable& table, const Partition& kappa, int n, int m);

// det(A)^n C_kappa(A^{-1}) / C_kappa(I_m)  -  C_{kappa*}(A) / C_{kappa*}(I_m).
double dual_identity_residual(const ZonalTable& table, const Partition& kappa, int n,
                              const SPDMatrix& a);

}  // namespace matargs
