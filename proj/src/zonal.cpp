#include "matargs/zonal.hpp"

#include "matargs/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace matargs {

ZonalTable ZonalTable::build(int max_degree) {
    if (max_degree < 1)
        throw std::invalid_argument("ZonalTable: max_degree must be >= 1");
    ZonalTable table;
    table.max_degree_ = max_degree;
    table.by_degree_.resize(max_degree + 1);
    for (int k = 0; k <= max_degree; ++k) {
        table.by_degree_[k] = enumerate_partitions(k, std::max(k, 1));
        const PowerSumBasis basis(k);
        const auto& asc = basis.partitions_ascending();
        const std::size_t p = asc.size();

        // Gram-Schmidt of the monomial basis vectors, ascending lexicographic
        // (dominance-smallest first), carried out in p-coordinates where the
        // inner product is diagonal.
        std::vector<std::vector<Rational>> j_vecs(p);
        std::vector<Rational> j_norms(p, Rational(0));
        for (std::size_t i = 0; i < p; ++i) {
            SymPoly mi(k);
            mi.set_coeff(asc[i], Rational(1));
            std::vector<Rational> v = basis.to_power_sums(mi);
            for (std::size_t l = 0; l < i; ++l) {
                Rational dot(0);
                for (std::size_t t = 0; t < p; ++t)
                    dot += v[t] * j_vecs[l][t] * basis.weights()[t];
                if (dot.is_zero()) continue;
                const Rational r = dot / j_norms[l];
                for (std::size_t t = 0; t < p; ++t) v[t] -= r * j_vecs[l][t];
            }
            Rational norm(0);
            for (std::size_t t = 0; t < p; ++t)
                norm += v[t] * v[t] * basis.weights()[t];
            if (norm.is_zero())
                throw std::logic_error("ZonalTable: orthogonal basis degenerated");
            j_vecs[i] = std::move(v);
            j_norms[i] = norm;
        }

        // (p_1)^k = p_{(1,...,1)}: a unit vector in p-coordinates. Expansion
        // coefficients in the orthogonal basis come straight from projections.
        std::vector<Rational> target(p, Rational(0));
        const Partition ones(std::vector<int>(k, 1));
        const auto it = std::find(asc.begin(), asc.end(), ones);
        const std::size_t ones_idx = static_cast<std::size_t>(it - asc.begin());
        target[ones_idx] = Rational(1);
        for (std::size_t i = 0; i < p; ++i) {
            Rational dot(0);
            for (std::size_t t = 0; t < p; ++t)
                dot += target[t] * j_vecs[i][t] * basis.weights()[t];
            const Rational e = dot / j_norms[i];
            std::vector<Rational> c(p);
            for (std::size_t t = 0; t < p; ++t) c[t] = e * j_vecs[i][t];
            table.polys_.emplace(asc[i], basis.to_monomials(c));
        }

        // Construction self-checks: triangular dominance support, positive
        // leading coefficient, and the exact normalization to (p_1)^k.
        SymPoly sum(k);
        for (const auto& kappa : asc) {
            const SymPoly& c = table.polys_.at(kappa);
            if (!(table.polys_.at(kappa).coeff(kappa).sign() > 0))
                throw std::logic_error("ZonalTable: leading coefficient not positive");
            for (const auto& [lambda, coeff] : c.terms()) {
                (void)coeff;
                if (!dominates(kappa, lambda))
                    throw std::logic_error("ZonalTable: support escapes dominance order");
            }
            sum.add_scaled(c, Rational(1));
        }
        if (sum != power_sum_in_monomial_basis(ones))
            throw std::logic_error("ZonalTable: degree slice does not sum to (tr)^k");
    }
    return table;
}

bool ZonalTable::contains(const Partition& kappa) const {
    return polys_.contains(kappa);
}

const SymPoly& ZonalTable::poly(const Partition& kappa) const {
    const auto it = polys_.find(kappa);
    if (it == polys_.end())
        throw std::invalid_argument("ZonalTable: partition " + kappa.str() +
                                    " not in table (degree cap " +
                                    std::to_string(max_degree_) + ")");
    return it->second;
}

Rational ZonalTable::d_kappa(const Partition& kappa) const {
    return poly(kappa).coeff(kappa);
}

const std::vector<Partition>& ZonalTable::degree_partitions(int k) const {
    if (k < 0 || k > max_degree_)
        throw std::invalid_argument("ZonalTable: degree out of range");
    return by_degree_[k];
}

void ZonalTable::write_json(std::ostream& out) const {
    out << "{";
    for (int k = 0; k <= max_degree_; ++k) {
        out << (k ? ",\n " : "\n ") << "\"" << k << "\": [";
        bool first_kappa = true;
        for (const auto& kappa : by_degree_[k]) {
            out << (first_kappa ? "" : ",") << "\n  {\"kappa\": \"" << kappa.str()
                << "\", \"coeffs\": [";
            first_kappa = false;
            const auto& poly = polys_.at(kappa);
            bool first_term = true;
            // Descending lexicographic term order, matching the listing order.
            for (auto it = poly.terms().rbegin(); it != poly.terms().rend(); ++it) {
                out << (first_term ? "" : ", ") << "{\"lambda\": \"" << it->first.str()
                    << "\", \"num\": \"" << it->second.numerator() << "\", \"den\": \""
                    << it->second.denominator() << "\"}";
                first_term = false;
            }
            out << "]}";
        }
        out << "\n ]";
    }
    out << "\n}\n";
}

void ZonalTable::write_csv(std::ostream& out) const {
    out << "kappa,lambda,numerator,denominator\n";
    for (int k = 0; k <= max_degree_; ++k) {
        for (const auto& kappa : by_degree_[k]) {
            const auto& poly = polys_.at(kappa);
            for (auto it = poly.terms().rbegin(); it != poly.terms().rend(); ++it) {
                out << "\"" << kappa.str() << "\",\"" << it->first.str() << "\","
                    << it->second.numerator() << "," << it->second.denominator() << "\n";
            }
        }
    }
}

ZonalEvaluator::ZonalEvaluator(const ZonalTable& table, const Partition& kappa,
                               int num_vars)
    : num_vars_(num_vars) {
    if (num_vars < 0) throw std::invalid_argument("ZonalEvaluator: negative variable count");
    const SymPoly& poly = table.poly(kappa);
    for (const auto& [lambda, coeff] : poly.terms()) {
        if (lambda.length() > num_vars) continue;  // those monomials vanish exactly
        Term t;
        t.coeff = coeff.to_double();
        t.exponents = distinct_exponent_vectors(lambda, num_vars);
        terms_.push_back(std::move(t));
    }
}

double ZonalEvaluator::operator()(std::span<const double> eigs) const {
    if (static_cast<int>(eigs.size()) != num_vars_)
        throw std::invalid_argument("ZonalEvaluator: wrong number of eigenvalues");
    CompensatedSum total;
    for (const auto& term : terms_) {
        CompensatedSum orbit;
        for (const auto& e : term.exponents) {
            double prod = 1;
            for (int i = 0; i < num_vars_; ++i) prod *= int_pow(eigs[i], e[i]);
            orbit.add(prod);
        }
        total.add(term.coeff * orbit.value());
    }
    return total.value();
}

double eval_eigs(const ZonalTable& table, const Partition& kappa,
                 std::span<const double> eigs) {
    const ZonalEvaluator ev(table, kappa, static_cast<int>(eigs.size()));
    return ev(eigs);
}

double eval_matrix(const ZonalTable& table, const Partition& kappa, const SymMatrix& a) {
    const auto eigs = sym_eigs(a);
    return eval_eigs(table, kappa, eigs);
}

double s_kappa_kappastar(const ZonalTable& table, const Partition& kappa, int n, int m) {
    const Partition ks = kappa_star(kappa, n, m);
    const std::vector<double> ones(m, 1.0);
    const double denom = eval_eigs(table, ks, ones);
    if (denom == 0)
        throw std::domain_error("s_kappa_kappastar: C_{kappa*}(I_m) vanished");
    return eval_eigs(table, kappa, ones) / denom;
}

double dual_identity_residual(const ZonalTable& table, const Partition& kappa, int n,
                              const SPDMatrix& a) {
    const int m = a.dim();
    const Partition ks = kappa_star(kappa, n, m);
    if (kappa.weight() > table.max_degree() || ks.weight() > table.max_degree())
        throw std::invalid_argument(
            "dual_identity_residual: need both |kappa| and n*m-k within the table");
    const std::vector<double> ones(m, 1.0);
    const double ck_id = eval_eigs(table, kappa, ones);
    const double cks_id = eval_eigs(table, ks, ones);
    const double detn = std::pow(a.determinant(), n);
    const double lhs = detn * eval_matrix(table, kappa, a.inverse()) / ck_id;
    const double rhs = eval_matrix(table, ks, a.matrix()) / cks_id;
    return lhs - rhs;
}

}  // namespace matargs
