// Acceptance gate: one line per criterion, every criterion carries its own
// time budget, exit status is zero only when all of them hold.

#include "matargs/cli.hpp"
#include "matargs/linalg.hpp"
#include "matargs/partition.hpp"
#include "matargs/randmat.hpp"
#include "matargs/specfun.hpp"
#include "matargs/symfun.hpp"
#include "matargs/verify.hpp"
#include "matargs/zonal.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

using namespace matargs;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;
};

void fail(Outcome& o, const std::string& msg) {
    o.ok = false;
    if (!o.detail.empty()) o.detail += "; ";
    o.detail += msg;
}

std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", x);
    return buf;
}

const ZonalTable& table6() {
    static const ZonalTable t = ZonalTable::build(6);
    return t;
}

// 1. Exact structure of the polynomial table through degree 6.
Outcome c1_table() {
    Outcome o;
    const ZonalTable& t = table6();

    if (t.poly(Partition(std::vector<int>{})).coeff(Partition(std::vector<int>{})) != Rational(1) ||
        t.poly(Partition(std::vector<int>{})).terms().size() != 1)
        fail(o, "empty-partition polynomial is not the constant 1");

    for (int k = 0; k <= 6; ++k) {
        SymPoly sum(k);
        for (const auto& kappa : t.degree_partitions(k)) {
            const SymPoly& c = t.poly(kappa);
            if (!(t.d_kappa(kappa).sign() > 0))
                fail(o, "nonpositive leading coefficient at " + kappa.str());
            for (const auto& [lambda, coeff] : c.terms())
                if (!dominates(kappa, lambda))
                    fail(o, "support escapes dominance at " + kappa.str() + " -> " +
                                lambda.str());
            sum.add_scaled(c, Rational(1));
        }
        SymPoly expect(k);
        if (k == 0)
            expect.set_coeff(Partition(std::vector<int>{}), Rational(1));
        else
            expect = power_sum_in_monomial_basis(Partition(std::vector<int>(
                static_cast<std::size_t>(k), 1)));
        if (!(sum == expect)) fail(o, "degree " + std::to_string(k) + " slice sum is off");
    }

    const SymPoly& c2 = t.poly(Partition({2}));
    const SymPoly& c11 = t.poly(Partition({1, 1}));
    if (c2.coeff(Partition({2})) != Rational(1) ||
        c2.coeff(Partition({1, 1})) != Rational(2, 3) || c2.terms().size() != 2)
        fail(o, "degree-2 leading polynomial is wrong");
    if (c11.coeff(Partition({1, 1})) != Rational(4, 3) || c11.terms().size() != 1)
        fail(o, "degree-2 trailing polynomial is wrong");
    return o;
}

// 2. Dual-partition identity on seeded random SPD matrices.
Outcome c2_dual() {
    Outcome o;
    const ZonalTable& t = table6();
    RngStream rng(42, 0);
    int cases = 0;
    double worst = 0;
    for (int m = 2; m <= 3; ++m)
        for (int k = 1; k <= 3; ++k)
            for (const auto& kappa : enumerate_partitions(k, m)) {
                const int n = kappa.part(1);
                const Partition ks = kappa_star(kappa, n, m);
                for (int trial = 0; trial < 50; ++trial) {
                    const SPDMatrix a = random_spd(rng, m, 10.0);
                    const double rhs = eval_matrix(t, ks, a.matrix()) /
                                       eval_eigs(t, ks, std::vector<double>(
                                                            static_cast<std::size_t>(m), 1.0));
                    const double res = dual_identity_residual(t, kappa, n, a);
                    const double rel = std::abs(res) / std::max(1.0, std::abs(rhs));
                    worst = std::max(worst, rel);
                    ++cases;
                    if (!(rel <= 1e-8))
                        fail(o, "residual " + sci(rel) + " at m=" +
                                    std::to_string(m) + " kappa=" + kappa.str());
                }
            }
    if (o.ok)
        o.detail = std::to_string(cases) + " cases, worst relative residual " + sci(worst);
    return o;
}

// 3. Product forms of the multivariate gamma, and the defining integral.
Outcome c3_gamma() {
    Outcome o;
    for (int m = 1; m <= 6; ++m)
        for (int i = 0; i < 20; ++i) {
            const double a = (m - 1) / 2.0 + 0.3 + 0.45 * i;
            const double asc = multivariate_gamma(a, m, GammaForm::ascending);
            const double desc = multivariate_gamma(a, m, GammaForm::descending);
            if (!(std::abs(asc - desc) <= 1e-13 * std::abs(asc)))
                fail(o, "form mismatch at m=" + std::to_string(m) + " a=" +
                            std::to_string(a));
        }
    for (int m = 1; m <= 2; ++m)
        for (double a : {1.6, 2.0, 3.0, 3.5}) {
            const auto [quad, prod] = verify_gamma_integral(m, a);
            if (!(std::abs(quad - prod) <= 1e-6 * std::abs(prod)))
                fail(o, "quadrature off at m=" + std::to_string(m) + " a=" +
                            std::to_string(a));
        }
    return o;
}

// 4. Pochhammer identity battery.
Outcome c4_pochhammer() {
    Outcome o;
    RngStream rng(4242, 0);
    const auto g = [](double t) { return 0.5 * t * t + 0.3; };
    for (int trial = 0; trial < 1000; ++trial) {
        const double x = 9.0 * rng.next_uniform() - 4.0;
        const int q = 1 + static_cast<int>(6.0 * rng.next_uniform());

        if (x > 0.05) {
            const double p = pochhammer_rising(x, q);
            const double ratio = std::exp(log_gamma(x + q) - log_gamma(x));
            if (!(std::abs(p - ratio) <= 1e-12 * std::max(1.0, std::abs(p))))
                fail(o, "gamma-ratio form off at x=" + std::to_string(x) + " q=" +
                            std::to_string(q));
        }

        const double scale_neg = std::max(1.0, std::abs(pochhammer_rising(-x, q)));
        if (!(std::abs(neg_pochhammer_identity_residual(x, q)) <= 1e-12 * scale_neg))
            fail(o, "negative-argument identity off at x=" + std::to_string(x));

        std::vector<int> shifts(static_cast<std::size_t>(q));
        for (auto& s : shifts) s = static_cast<int>(4.0 * rng.next_uniform());
        std::sort(shifts.rbegin(), shifts.rend());
        const int sign = rng.next_uniform() < 0.5 ? 1 : -1;
        const auto [basic, shifted] = reindex_product_residuals(g, x, q, shifts, sign);
        double scale_basic = 1.0, scale_shift = 1.0;
        for (int i = 1; i <= q; ++i) {
            scale_basic *= std::abs(g(x + i - 1)) + 1.0;
            scale_shift *=
                std::abs(g(x + sign * shifts[static_cast<std::size_t>(i - 1)] - q + i)) + 1.0;
        }
        if (!(std::abs(basic) <= 1e-12 * scale_basic))
            fail(o, "plain reindexing off at x=" + std::to_string(x));
        if (!(std::abs(shifted) <= 1e-12 * scale_shift))
            fail(o, "shifted reindexing off at x=" + std::to_string(x));
    }
    return o;
}

// 5. Monte Carlo grid for the corrected normalizing constant.
Outcome c5_grid() {
    Outcome o;
    const ZonalTable& t = table6();

    // Closed-form oracle cases first, before any sampling.
    const SPDMatrix zi2 = cholesky(SymMatrix::identity(2));
    const double e1 = theorem1_expected(t, 2, 3.0, Partition({1}), zi2,
                                        ConstantVariant::corrected);
    if (!(std::abs(e1 - 4.0 / 3) <= 1e-12)) fail(o, "4/3 oracle is off");
    const SPDMatrix z23 = cholesky(SymMatrix(1, {2.3}));
    const double e2 = theorem1_expected(t, 1, 2.0, Partition({1}), z23,
                                        ConstantVariant::corrected);
    if (!(std::abs(e2 - 2.3) <= 1e-12)) fail(o, "scalar oracle is off");

    RngStream fixture_rng(42, 0);
    int cases = 0;
    double worst = 0;
    std::string worst_case;
    for (int m = 1; m <= 3; ++m)
        for (int k = 0; k <= 3; ++k)
            for (const auto& kappa : enumerate_partitions(k, m)) {
                const double a = kappa.part(1) + (m - 1) / 2.0 + 1.5;
                std::vector<std::pair<std::string, SPDMatrix>> zs;
                zs.emplace_back("identity", cholesky(SymMatrix::identity(m)));
                std::vector<double> d(static_cast<std::size_t>(m));
                for (int i = 0; i < m; ++i) d[static_cast<std::size_t>(i)] = i + 1.0;
                zs.emplace_back("diag", cholesky(SymMatrix::diag(d)));
                zs.emplace_back("random", random_spd(fixture_rng, m, 10.0));
                for (const auto& [zname, z] : zs) {
                    const MCReport rep =
                        verify_theorem1(t, m, a, kappa, z, 200000, 42);
                    ++cases;
                    const double zc = std::abs(rep.z_correct);
                    if (zc > worst) {
                        worst = zc;
                        worst_case = "m=" + std::to_string(m) + " kappa=" + kappa.str() +
                                     " z=" + zname;
                    }
                    if (!(zc <= 4.0))
                        fail(o, "|z_correct|=" + std::to_string(zc) + " at m=" +
                                    std::to_string(m) + " kappa=" + kappa.str() + " z=" +
                                    zname);
                }
            }
    if (o.ok)
        o.detail = std::to_string(cases) + " runs, worst |z_correct| " +
                   std::to_string(worst) + " (" + worst_case + ")";
    return o;
}

// 6. The corrected and incorrect constants separate cleanly.
Outcome c6_discrimination() {
    Outcome o;
    const ZonalTable& t = table6();
    const SPDMatrix zi = cholesky(SymMatrix::identity(2));
    const MCReport rep = verify_theorem1(t, 2, 4.0, Partition({2}), zi, 1000000, 42);
    if (rep.verdict != "pass") fail(o, "verdict " + rep.verdict);
    if (!(std::abs(rep.z_correct) <= 4.0))
        fail(o, "|z_correct|=" + std::to_string(std::abs(rep.z_correct)));
    if (!rep.z_incorrect || !(std::abs(*rep.z_incorrect) >= 10.0))
        fail(o, "|z_incorrect| below 10");
    if (o.ok)
        o.detail = "z_correct " + std::to_string(rep.z_correct) + ", z_incorrect " +
                   std::to_string(*rep.z_incorrect);
    return o;
}

// 7. Product-argument form: identity reduction and an indefinite case.
Outcome c7_product() {
    Outcome o;
    const ZonalTable& t = table6();

    const SymMatrix ti = SymMatrix::identity(2);
    const std::vector<SPDMatrix> vs = {cholesky(SymMatrix::identity(2)),
                                       cholesky(SymMatrix(2, {1, 0, 0, 2})),
                                       cholesky(SymMatrix(2, {4, 2, 2, 5}))};
    const std::vector<Partition> kappas = {Partition({1}), Partition({2}),
                                           Partition({1, 1})};
    for (const auto& v : vs)
        for (const auto& kappa : kappas) {
            const double via_t = corollary1_expected(t, 2, 4.0, kappa, v, ti,
                                                     ConstantVariant::corrected);
            const double plain = theorem1_expected(t, 2, 4.0, kappa, v,
                                                   ConstantVariant::corrected);
            if (via_t != plain)
                fail(o, "identity reduction not bit-exact at kappa=" + kappa.str());
        }

    // The estimates agree bit for bit as well, not just the targets.
    const MCReport mt = verify_theorem1(t, 2, 4.0, Partition({2}), vs[2], 20000, 42);
    const MCReport mc = verify_corollary1(t, 2, 4.0, Partition({2}), vs[2], ti, 20000, 42);
    if (mt.estimate != mc.estimate || mt.std_error != mc.std_error)
        fail(o, "identity-reduction estimates differ");

    const std::vector<double> vd = {1, 2}, td = {1, -1};
    const MCReport rep = verify_corollary1(t, 2, 4.0, Partition({1}),
                                           cholesky(SymMatrix::diag(vd)),
                                           SymMatrix::diag(td), 200000, 42);
    if (!(std::abs(rep.expected_correct - (-0.4)) <= 1e-12))
        fail(o, "indefinite target is not -2/5");
    if (!(std::abs(rep.z_correct) <= 4.0))
        fail(o, "indefinite case |z|=" + std::to_string(std::abs(rep.z_correct)));
    if (o.ok) o.detail = "indefinite z " + std::to_string(rep.z_correct);
    return o;
}

// 8. Coefficient extraction against the minor-product prediction.
Outcome c8_coefficients() {
    Outcome o;
    const ZonalTable& t = table6();
    RngStream rng(4242, 0);
    int cases = 0, controls = 0;
    double worst = 0;
    for (int m = 2; m <= 3; ++m) {
        std::vector<SPDMatrix> ys;
        for (int i = 0; i < 20; ++i) ys.push_back(random_spd(rng, m, 10.0));
        for (int k = 1; k <= 3; ++k)
            for (const auto& kappa : enumerate_partitions(k, m)) {
                bool unequal = false;
                for (int i = 1; i < m; ++i)
                    if (kappa.part(i) != kappa.part(i + 1)) unequal = true;
                for (const auto& y : ys) {
                    const CoeffReport rep =
                        verify_lemma2(t, m, kappa, y, kappa.weight() + 1);
                    ++cases;
                    worst = std::max(worst, rep.rel_error);
                    if (!(rep.rel_error <= 1e-8))
                        fail(o, "rel_error " + sci(rep.rel_error) + " at m=" +
                                    std::to_string(m) + " kappa=" + kappa.str());
                    if (unequal) {
                        ++controls;
                        if (rep.control_status != "mismatch")
                            fail(o, "control did not bite at m=" + std::to_string(m) +
                                        " kappa=" + kappa.str());
                    }
                }
            }
    }
    if (o.ok)
        o.detail = std::to_string(cases) + " extractions, " + std::to_string(controls) +
                   " controls, worst rel_error " + sci(worst);
    return o;
}

// 9. Byte-identical reports for identical invocations, any thread count.
Outcome c9_reproducibility() {
    Outcome o;
    const auto invoke = [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = run_cli(args, out, err);
        return std::pair<int, std::string>(code, out.str());
    };
    const std::vector<std::vector<std::string>> invocations = {
        {"verify-theorem1", "--m", "2", "--a", "3", "--kappa", "1", "--samples", "20000",
         "--seed", "42", "--chunk-size", "512"},
        {"verify-corollary1", "--m", "2", "--a", "4", "--kappa", "2", "--v", "diag:1,2",
         "--t", "diag:1,-1", "--samples", "20000", "--seed", "5"},
        {"verify-lemma2", "--m", "3", "--kappa", "2,1", "--y", "random", "--seed", "11"},
    };
    for (const auto& args : invocations) {
        const auto first = invoke(args);
        const auto second = invoke(args);
        if (first.second != second.second) fail(o, "repeat differs for " + args[0]);

        setenv("MATARGS_THREADS", "1", 1);
        const auto one = invoke(args);
        setenv("MATARGS_THREADS", "3", 1);
        const auto three = invoke(args);
        unsetenv("MATARGS_THREADS");
        if (one.second != three.second || one.second != first.second)
            fail(o, "thread count changes bytes for " + args[0]);
        if (first.first != 0 && first.first != 3)
            fail(o, args[0] + " exited " + std::to_string(first.first));
    }
    return o;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* what;
        double budget_s;
        Outcome (*fn)();
    };
    const Criterion criteria[] = {
        {1, "zonal table exact structure through degree 6", 30.0, c1_table},
        {2, "dual-partition identity on random SPD matrices", 10.0, c2_dual},
        {3, "multivariate gamma forms and defining integral", 5.0, c3_gamma},
        {4, "pochhammer identity battery", 1.0, c4_pochhammer},
        {5, "corrected-constant Monte Carlo grid", 180.0, c5_grid},
        {6, "discrimination from the incorrect constant", 60.0, c6_discrimination},
        {7, "product-argument reduction and indefinite case", 30.0, c7_product},
        {8, "coefficient extraction vs minor products", 30.0, c8_coefficients},
        {9, "byte-identical reports across repeats and threads", 30.0, c9_reproducibility},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.fn();
        } catch (const std::exception& e) {
            o.ok = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double dt =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_budget = dt < c.budget_s;
        const bool ok = o.ok && in_budget;
        std::printf("[%s] %d. %s (%.1fs)\n", ok ? "PASS" : "FAIL", c.id, c.what, dt);
        if (!o.detail.empty()) std::printf("       %s\n", o.detail.c_str());
        if (o.ok && !in_budget)
            std::printf("       over the %.0fs budget\n", c.budget_s);
        if (!ok) ++failures;
    }
    if (failures == 0) {
        std::printf("acceptance: all 9 criteria hold\n");
        return 0;
    }
    std::printf("acceptance: %d criterion(s) failing\n", failures);
    return 1;
}
