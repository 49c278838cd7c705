#include "matargs/symfun.hpp"

#include "matargs/numeric.hpp"

#include <algorithm>
#include <stdexcept>

namespace matargs {

SymPoly::SymPoly(int degree) : degree_(degree) {
    if (degree < 0) throw std::invalid_argument("SymPoly: negative degree");
}

Rational SymPoly::coeff(const Partition& lambda) const {
    const auto it = terms_.find(lambda);
    return it == terms_.end() ? Rational(0) : it->second;
}

void SymPoly::set_coeff(const Partition& lambda, const Rational& c) {
    if (lambda.weight() != degree_)
        throw std::invalid_argument("SymPoly: term weight does not match degree");
    if (c.is_zero())
        terms_.erase(lambda);
    else
        terms_[lambda] = c;
}

void SymPoly::add_term(const Partition& lambda, const Rational& c) {
    if (lambda.weight() != degree_)
        throw std::invalid_argument("SymPoly: term weight does not match degree");
    auto [it, inserted] = terms_.try_emplace(lambda, c);
    if (!inserted) it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
}

SymPoly& SymPoly::add_scaled(const SymPoly& g, const Rational& c) {
    if (g.degree_ != degree_)
        throw std::invalid_argument("SymPoly: degree mismatch");
    for (const auto& [lambda, gc] : g.terms_) add_term(lambda, gc * c);
    return *this;
}

SymPoly& SymPoly::operator*=(const Rational& c) {
    if (c.is_zero()) {
        terms_.clear();
    } else {
        for (auto& [lambda, tc] : terms_) tc *= c;
    }
    return *this;
}

std::vector<std::vector<int>> distinct_exponent_vectors(const Partition& lambda, int n) {
    std::vector<std::vector<int>> out;
    if (lambda.length() > n) return out;
    std::vector<int> e(n, 0);
    for (int i = 0; i < lambda.length(); ++i) e[i] = lambda.parts()[i];
    std::sort(e.begin(), e.end());
    do {
        out.push_back(e);
    } while (std::next_permutation(e.begin(), e.end()));
    return out;
}

double monomial_eval(const Partition& lambda, std::span<const double> x) {
    const auto vecs = distinct_exponent_vectors(lambda, static_cast<int>(x.size()));
    CompensatedSum sum;
    for (const auto& e : vecs) {
        double term = 1;
        for (std::size_t i = 0; i < x.size(); ++i) term *= int_pow(x[i], e[i]);
        sum.add(term);
    }
    return sum.value();
}

Rational monomial_eval(const Partition& lambda, std::span<const Rational> x) {
    const auto vecs = distinct_exponent_vectors(lambda, static_cast<int>(x.size()));
    Rational sum(0);
    for (const auto& e : vecs) {
        Rational term(1);
        for (std::size_t i = 0; i < x.size(); ++i) term *= pow(x[i], e[i]);
        sum += term;
    }
    return sum;
}

SymPoly power_sum_in_monomial_basis(const Partition& lambda) {
    SymPoly f(0);
    f.set_coeff(Partition{}, Rational(1));
    int deg = 0;
    for (int r : lambda.parts()) {
        SymPoly g(deg + r);
        for (const auto& [mu, c] : f.terms()) {
            // p_r * m_mu: bump one occurrence of each distinct value v of mu
            // (v = 0 appends a new part r); the coefficient of the resulting
            // m_nu is the multiplicity of v + r in nu.
            std::vector<int> values = mu.parts();
            values.push_back(0);
            values.erase(std::unique(values.begin(), values.end()), values.end());
            for (int v : values) {
                std::vector<int> nu = mu.parts();
                if (v == 0) {
                    nu.push_back(r);
                } else {
                    *std::find(nu.begin(), nu.end(), v) += r;
                }
                std::sort(nu.begin(), nu.end(), std::greater<>());
                const int mult =
                    static_cast<int>(std::count(nu.begin(), nu.end(), v + r));
                g.add_term(Partition(nu), c * Rational(mult));
            }
        }
        f = std::move(g);
        deg += r;
    }
    return f;
}

long long z_lambda(const Partition& lambda) {
    long long z = 1;
    int i = 0;
    const auto& parts = lambda.parts();
    while (i < lambda.length()) {
        int j = i;
        while (j < lambda.length() && parts[j] == parts[i]) ++j;
        const int mult = j - i;
        for (int t = 0; t < mult; ++t) z *= parts[i];
        for (int t = 2; t <= mult; ++t) z *= t;
        i = j;
    }
    return z;
}

PowerSumBasis::PowerSumBasis(int degree) : degree_(degree) {
    if (degree < 0) throw std::invalid_argument("PowerSumBasis: negative degree");
    asc_ = enumerate_partitions(degree, std::max(degree, 1));
    std::reverse(asc_.begin(), asc_.end());
    const std::size_t p = asc_.size();
    std::map<Partition, std::size_t> index;
    for (std::size_t j = 0; j < p; ++j) index[asc_[j]] = j;
    m_of_p_.assign(p, std::vector<Rational>(p, Rational(0)));
    for (std::size_t i = 0; i < p; ++i) {
        const SymPoly pi = power_sum_in_monomial_basis(asc_[i]);
        for (const auto& [mu, c] : pi.terms()) m_of_p_[i][index.at(mu)] = c;
    }
    w_.reserve(p);
    for (const auto& lambda : asc_) {
        Rational w(1);
        for (int t = 0; t < lambda.length(); ++t) w *= Rational(2);
        w *= Rational(static_cast<long>(z_lambda(lambda)));
        w_.push_back(w);
    }
}

std::vector<Rational> PowerSumBasis::to_power_sums(const SymPoly& f) const {
    if (f.degree() != degree_)
        throw std::invalid_argument("PowerSumBasis: degree mismatch");
    const std::size_t p = asc_.size();
    std::vector<Rational> fm(p, Rational(0));
    for (std::size_t j = 0; j < p; ++j) fm[j] = f.coeff(asc_[j]);
    // m_of_p_ is triangular: p_i touches m_j only for j >= i (dominance-larger
    // partitions are lexicographically larger). Forward substitution.
    std::vector<Rational> x(p, Rational(0));
    for (std::size_t j = 0; j < p; ++j) {
        Rational s = fm[j];
        for (std::size_t i = 0; i < j; ++i) {
            if (!m_of_p_[i][j].is_zero()) s -= x[i] * m_of_p_[i][j];
        }
        x[j] = s / m_of_p_[j][j];
    }
    return x;
}

SymPoly PowerSumBasis::to_monomials(std::span<const Rational> pc) const {
    if (pc.size() != asc_.size())
        throw std::invalid_argument("PowerSumBasis: coefficient count mismatch");
    SymPoly f(degree_);
    for (std::size_t i = 0; i < asc_.size(); ++i) {
        if (pc[i].is_zero()) continue;
        for (std::size_t j = 0; j < asc_.size(); ++j) {
            if (!m_of_p_[i][j].is_zero()) f.add_term(asc_[j], pc[i] * m_of_p_[i][j]);
        }
    }
    return f;
}

Rational inner_product_alpha2(const SymPoly& f, const SymPoly& g) {
    if (f.degree() != g.degree())
        throw std::invalid_argument("inner_product_alpha2: degree mismatch");
    const PowerSumBasis basis(f.degree());
    const auto fp = basis.to_power_sums(f);
    const auto gp = basis.to_power_sums(g);
    Rational s(0);
    for (std::size_t i = 0; i < fp.size(); ++i) s += fp[i] * gp[i] * basis.weights()[i];
    return s;
}

}  // namespace matargs
