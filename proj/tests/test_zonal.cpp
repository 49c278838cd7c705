#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "matargs/partition.hpp"
#include "matargs/randmat.hpp"
#include "matargs/symfun.hpp"
#include "matargs/zonal.hpp"
#include "support/poly.hpp"

#include <json.hpp>

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

using matargs::Partition;
using matargs::Rational;
using matargs::RngStream;
using matargs::SymPoly;
using matargs::ZonalEvaluator;
using matargs::ZonalTable;
using matargs::distinct_exponent_vectors;
using matargs::dominates;
using matargs::enumerate_partitions;
using matargs::inner_product_alpha2;
using matargs::random_spd;

namespace {

const ZonalTable& table6() {
    static const ZonalTable t = ZonalTable::build(6);
    return t;
}

}  // namespace

TEST_CASE("exact coefficients through degree 4") {
    struct Entry {
        const char* kappa;
        const char* lambda;
        long num, den;
    };
    const Entry entries[] = {
        {"1", "1", 1, 1},
        {"2", "2", 1, 1},
        {"2", "1,1", 2, 3},
        {"1,1", "1,1", 4, 3},
        {"3", "3", 1, 1},
        {"3", "2,1", 3, 5},
        {"3", "1,1,1", 2, 5},
        {"2,1", "2,1", 12, 5},
        {"2,1", "1,1,1", 18, 5},
        {"1,1,1", "1,1,1", 2, 1},
        {"4", "4", 1, 1},
        {"4", "3,1", 4, 7},
        {"4", "2,2", 18, 35},
        {"4", "2,1,1", 12, 35},
        {"4", "1,1,1,1", 8, 35},
        {"3,1", "3,1", 24, 7},
        {"3,1", "2,2", 16, 7},
        {"3,1", "2,1,1", 88, 21},
        {"3,1", "1,1,1,1", 32, 7},
        {"2,2", "2,2", 16, 5},
        {"2,2", "2,1,1", 32, 15},
        {"2,2", "1,1,1,1", 16, 5},
        {"2,1,1", "2,1,1", 16, 3},
        {"2,1,1", "1,1,1,1", 64, 5},
        {"1,1,1,1", "1,1,1,1", 16, 5},
    };
    const ZonalTable& t = table6();
    for (const auto& e : entries) {
        const Partition kappa = Partition::parse(e.kappa);
        const Partition lambda = Partition::parse(e.lambda);
        CHECK_MESSAGE(t.poly(kappa).coeff(lambda) == Rational(e.num, e.den),
                      e.kappa, " at ", e.lambda);
    }
    // Term counts pin down that nothing extra appears.
    CHECK(t.poly(Partition(std::vector<int>{})).terms().size() == 1);
    CHECK(t.poly(Partition(std::vector<int>{})).coeff(Partition(std::vector<int>{})) == Rational(1));
    CHECK(t.poly(Partition({2})).terms().size() == 2);
    CHECK(t.poly(Partition({1, 1})).terms().size() == 1);
    CHECK(t.poly(Partition({3})).terms().size() == 3);
    CHECK(t.poly(Partition({2, 1})).terms().size() == 2);
    CHECK(t.poly(Partition({4})).terms().size() == 5);
    CHECK(t.poly(Partition({3, 1})).terms().size() == 4);
    CHECK(t.poly(Partition({2, 2})).terms().size() == 3);
}

TEST_CASE("leading coefficients") {
    const ZonalTable& t = table6();
    CHECK(t.d_kappa(Partition({2, 1})) == Rational(12, 5));
    CHECK(t.d_kappa(Partition({2, 2})) == Rational(16, 5));
    CHECK(t.d_kappa(Partition({2, 1, 1})) == Rational(16, 3));
    CHECK(t.d_kappa(Partition({4})) == Rational(1));
    for (int k = 1; k <= 6; ++k)
        for (const auto& kappa : t.degree_partitions(k)) {
            CHECK(t.d_kappa(kappa).sign() > 0);
            CHECK(t.d_kappa(kappa) == t.poly(kappa).coeff(kappa));
        }
}

TEST_CASE("support is dominance-triangular") {
    const ZonalTable& t = table6();
    for (int k = 1; k <= 6; ++k)
        for (const auto& kappa : t.degree_partitions(k))
            for (const auto& [lambda, c] : t.poly(kappa).terms()) {
                CHECK_FALSE(c.is_zero());
                CHECK(dominates(kappa, lambda));
            }
}

TEST_CASE("degree slices sum to the power of the trace") {
    const ZonalTable& t = table6();
    for (int k = 0; k <= 6; ++k) {
        SymPoly sum(k);
        for (const auto& kappa : t.degree_partitions(k))
            sum.add_scaled(t.poly(kappa), Rational(1));
        SymPoly expect(k);
        if (k == 0) {
            expect.set_coeff(Partition(std::vector<int>{}), Rational(1));
        } else {
            std::vector<int> ones(static_cast<std::size_t>(k), 1);
            expect = matargs::power_sum_in_monomial_basis(Partition(ones));
        }
        CHECK(sum == expect);
    }
}

TEST_CASE("pairwise orthogonality under the alpha=2 inner product") {
    const ZonalTable& t = table6();
    for (int k = 1; k <= 5; ++k) {
        const auto& parts = t.degree_partitions(k);
        for (std::size_t i = 0; i < parts.size(); ++i)
            for (std::size_t j = i; j < parts.size(); ++j) {
                const Rational ip = inner_product_alpha2(t.poly(parts[i]), t.poly(parts[j]));
                if (i == j)
                    CHECK(ip.sign() > 0);
                else
                    CHECK(ip == Rational(0));
            }
    }
}

namespace {

// C_kappa as an explicit polynomial in nvars variables, exact coefficients.
testpoly::Poly as_poly(const ZonalTable& t, const Partition& kappa, int nvars) {
    testpoly::Poly out(nvars);
    for (const auto& [mu, c] : t.poly(kappa).terms())
        for (const auto& e : distinct_exponent_vectors(mu, nvars)) out.add_term(e, c);
    return out;
}

// Sum_i x_i^2 d^2/dx_i^2  +  Sum_{i<j} (x_i^2 d_i - x_j^2 d_j) / (x_i - x_j),
// the pairwise-combined form of the radial part of the Laplace-Beltrami
// operator whose eigenfunctions these polynomials are.
testpoly::Poly apply_lb(const testpoly::Poly& f) {
    const int n = f.vars();
    std::vector<testpoly::Poly> grad;
    grad.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) grad.push_back(f.derivative(i));
    testpoly::Poly out(n);
    for (int i = 0; i < n; ++i) out += grad[i].derivative(i).times_power(i, 2);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            testpoly::Poly num = grad[i].times_power(i, 2) - grad[j].times_power(j, 2);
            out += num.divide_linear_diff(i, j);
        }
    return out;
}

}  // namespace

TEST_CASE("every table entry is a Laplace-Beltrami eigenfunction") {
    // Completely independent route: apply the differential operator with
    // exact rational arithmetic and compare against the known eigenvalue
    // rho(kappa) + k (nvars - 1). This determines the polynomials up to
    // scale, so together with the slice-sum normalization it pins the table.
    const ZonalTable& t = table6();
    for (int k = 1; k <= 5; ++k)
        for (const auto& kappa : t.degree_partitions(k))
            for (int nvars = kappa.length(); nvars <= std::min(k + 1, 5); ++nvars) {
                const testpoly::Poly c = as_poly(t, kappa, nvars);
                REQUIRE_FALSE(c.is_zero());
                const Rational eig(static_cast<long>(matargs::rho(kappa, nvars)) +
                                   static_cast<long>(k) * (nvars - 1));
                CHECK_MESSAGE(apply_lb(c) == c.scaled(eig), kappa.str(), " in ", nvars,
                              " variables");
            }
}

TEST_CASE("values at the identity") {
    const ZonalTable& t = table6();
    const std::vector<double> i2 = {1, 1};
    CHECK(eval_eigs(t, Partition({2}), i2) == doctest::Approx(8.0 / 3).epsilon(1e-14));
    CHECK(eval_eigs(t, Partition({1, 1}), i2) == doctest::Approx(4.0 / 3).epsilon(1e-14));
    CHECK(eval_eigs(t, Partition({2, 1}), i2) == doctest::Approx(24.0 / 5).epsilon(1e-14));

    const std::vector<double> i3 = {1, 1, 1};
    CHECK(eval_eigs(t, Partition({3}), i3) == doctest::Approx(7.0).epsilon(1e-14));
    CHECK(eval_eigs(t, Partition({2, 1}), i3) == doctest::Approx(18.0).epsilon(1e-14));
    CHECK(eval_eigs(t, Partition({1, 1, 1}), i3) == doctest::Approx(2.0).epsilon(1e-14));

    const std::vector<double> i4 = {1, 1, 1, 1};
    CHECK(eval_eigs(t, Partition({4}), i4) == doctest::Approx(128.0 / 7).epsilon(1e-13));
    CHECK(eval_eigs(t, Partition({3, 1}), i4) == doctest::Approx(768.0 / 7).epsilon(1e-13));
    CHECK(eval_eigs(t, Partition({2, 2}), i4) == doctest::Approx(48.0).epsilon(1e-13));
    CHECK(eval_eigs(t, Partition({2, 1, 1}), i4) == doctest::Approx(384.0 / 5).epsilon(1e-13));
    CHECK(eval_eigs(t, Partition({1, 1, 1, 1}), i4) == doctest::Approx(16.0 / 5).epsilon(1e-13));
}

TEST_CASE("degree slices reproduce powers of the trace numerically") {
    const ZonalTable& t = table6();
    RngStream rng(20240817, 0);
    for (int m = 1; m <= 4; ++m) {
        std::vector<double> x(static_cast<std::size_t>(m));
        double tr = 0;
        for (auto& xi : x) {
            xi = 0.2 + 2.3 * rng.next_uniform();
            tr += xi;
        }
        for (int k = 0; k <= 6; ++k) {
            double sum = 0;
            for (const auto& kappa : t.degree_partitions(k)) sum += eval_eigs(t, kappa, x);
            CHECK(sum == doctest::Approx(std::pow(tr, k)).epsilon(1e-11));
        }
    }
}

TEST_CASE("more eigenvalue slots than the partition length vanish or not as expected") {
    const ZonalTable& t = table6();
    const std::vector<double> two = {1.4, 0.6};
    CHECK(eval_eigs(t, Partition({1, 1, 1}), two) == 0.0);
    CHECK(eval_eigs(t, Partition({2, 1, 1}), two) == 0.0);
    CHECK(eval_eigs(t, Partition({2, 1}), two) != 0.0);
}

TEST_CASE("evaluator matches matrix evaluation and the plain path") {
    const ZonalTable& t = table6();
    RngStream rng(7, 0);
    for (int m = 2; m <= 3; ++m)
        for (int trial = 0; trial < 5; ++trial) {
            const auto a = random_spd(rng, m, 8.0);
            const auto eigs = matargs::sym_eigs(a.matrix());
            for (int k = 1; k <= 3; ++k)
                for (const auto& kappa : t.degree_partitions(k)) {
                    const double via_eigs = eval_eigs(t, kappa, eigs);
                    const double via_matrix = eval_matrix(t, kappa, a.matrix());
                    const ZonalEvaluator ev(t, kappa, m);
                    CHECK(ev(eigs) == via_eigs);
                    CHECK(via_matrix == doctest::Approx(via_eigs).epsilon(1e-12));
                }
        }
    const ZonalEvaluator ev(t, Partition({2, 1}), 2);
    CHECK(ev.num_vars() == 2);
}

TEST_CASE("identity value ratios") {
    const ZonalTable& t = table6();
    CHECK(s_kappa_kappastar(t, Partition({2, 1}), 2, 2) == doctest::Approx(12.0 / 5).epsilon(1e-13));
    CHECK(s_kappa_kappastar(t, Partition({1}), 1, 2) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("dual partition identity holds on random SPD matrices") {
    const ZonalTable& t = table6();
    RngStream rng(99, 0);
    for (int m = 2; m <= 3; ++m)
        for (int k = 0; k <= 3; ++k)
            for (const auto& kappa : enumerate_partitions(k, m)) {
                const int n = kappa.part(1);
                if (n == 0) continue;
                for (int trial = 0; trial < 8; ++trial) {
                    const auto a = random_spd(rng, m, 10.0);
                    CHECK(std::abs(dual_identity_residual(t, kappa, n, a)) <= 1e-8);
                }
            }
}

TEST_CASE("lookup and construction errors") {
    const ZonalTable& t = table6();
    CHECK(t.max_degree() == 6);
    CHECK(t.contains(Partition({3, 2, 1})));
    CHECK_FALSE(t.contains(Partition({7})));
    CHECK_THROWS_AS(t.poly(Partition({7})), std::invalid_argument);
    CHECK_THROWS_WITH_AS(t.poly(Partition({4, 3})), doctest::Contains("4,3"),
                         std::invalid_argument);
    CHECK_THROWS_AS(ZonalTable::build(0), std::invalid_argument);
    CHECK_THROWS_AS(t.degree_partitions(7), std::invalid_argument);
    CHECK_THROWS_AS(ZonalEvaluator(t, Partition({7}), 2), std::invalid_argument);
}

TEST_CASE("json export is well-formed and deterministic") {
    const ZonalTable t = ZonalTable::build(3);
    std::ostringstream s1, s2;
    t.write_json(s1);
    t.write_json(s2);
    CHECK(s1.str() == s2.str());
    const auto j = nlohmann::json::parse(s1.str());
    REQUIRE(j.contains("2"));
    REQUIRE(j["2"].size() == 2);
    CHECK(j["2"][0]["kappa"] == "2");
    CHECK(j["2"][0]["coeffs"][1]["lambda"] == "1,1");
    CHECK(j["2"][0]["coeffs"][1]["num"] == "2");
    CHECK(j["2"][0]["coeffs"][1]["den"] == "3");
    CHECK(j["3"][1]["kappa"] == "2,1");
    CHECK(j["3"][1]["coeffs"][0]["num"] == "12");
    CHECK(j["3"][1]["coeffs"][0]["den"] == "5");
}

TEST_CASE("csv export bytes") {
    const ZonalTable t = ZonalTable::build(2);
    std::ostringstream s;
    t.write_csv(s);
    CHECK(s.str() ==
          "kappa,lambda,numerator,denominator\n"
          "\"0\",\"0\",1,1\n"
          "\"1\",\"1\",1,1\n"
          "\"2\",\"2\",1,1\n"
          "\"2\",\"1,1\",2,3\n"
          "\"1,1\",\"1,1\",4,3\n");
}
