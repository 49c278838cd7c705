#pragma once

#include "matargs/linalg.hpp"
#include "matargs/partition.hpp"
#include "matargs/specfun.hpp"
#include "matargs/zonal.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace matargs {

// Streaming mean/second-moment accumulator. add() is Welford's update; merge()
// combines two disjoint chunks, so the fold over chunks in index order gives
// the same result for any worker count.
struct ChunkStats {
    long long n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x);
    static ChunkStats merge(const ChunkStats& a, const ChunkStats& b);
};

// (mean, standard error). Requires at least two values.
std::pair<double, double> mc_accumulate(const std::vector<double>& values);

enum class OutputFormat { json, csv, text };

struct MCOptions {
    long long chunk_size = 4096;
    int threads = 0;  // 0: MATARGS_THREADS if set, otherwise all cores
    double z_pass = 4.0;
    double z_reject = 10.0;
    // Echoed in the report; when empty the matrix entries are rendered instead.
    std::string z_desc;
    std::string v_desc;
    std::string t_desc;
};

struct MCReport {
    std::string claim;  // "theorem1" or "corollary1"
    int m = 0;
    double a = 0.0;
    Partition kappa;
    std::string z_desc;  // theorem1 only
    std::string v_desc;  // corollary1 only
    std::string t_desc;  // corollary1 only
    double estimate = 0.0;
    double std_error = 0.0;
    double expected_correct = 0.0;
    std::optional<double> expected_incorrect;  // absent when the variants coincide
    double z_correct = 0.0;
    std::optional<double> z_incorrect;
    long long n_samples = 0;
    std::uint64_t seed = 0;
    long long chunk_size = 0;
    bool degenerate = false;  // zero sample variance
    std::string verdict;      // "pass", "fail", "inconclusive"

    int exit_code() const;  // pass 0, fail 1, inconclusive 3
    void write(std::ostream& out, OutputFormat fmt) const;
};

// Expected value of the reduced estimator: (-1)^k C_kappa(Z) over the chosen
// denominator variant. This is the full closed form with the shared
// Gamma_m[a] det(Z)^{-a} factor divided out.
double theorem1_expected(const ZonalTable& table, int m, double a, const Partition& kappa,
                         const SPDMatrix& z, ConstantVariant variant);
double corollary1_expected(const ZonalTable& table, int m, double a, const Partition& kappa,
                           const SPDMatrix& v, const SymMatrix& t, ConstantVariant variant);

// Monte Carlo check of the Laplace-integral identity: averages C_kappa(X^{-1})
// over X ~ Wishart(2a, (2Z)^{-1}) and compares with both constant variants.
// Requires a > k_1 + (m-1)/2 and length(kappa) <= m.
MCReport verify_theorem1(const ZonalTable& table, int m, double a, const Partition& kappa,
                         const SPDMatrix& z, long long n_samples, std::uint64_t seed,
                         const MCOptions& opts = {});

// Same check for the two-matrix form: averages the polynomial at the
// eigenvalues of T X^{-1} under X ~ Wishart(2a, (2V)^{-1}) and compares with
// (-1)^k C_kappa(VT) over the denominator variants. T = I reduces exactly to
// verify_theorem1 with Z = V.
MCReport verify_corollary1(const ZonalTable& table, int m, double a, const Partition& kappa,
                           const SPDMatrix& v, const SymMatrix& t, long long n_samples,
                           std::uint64_t seed, const MCOptions& opts = {});

struct Lemma2Options {
    double tolerance = 1e-8;
    double control_match_tol = 1e-6;
    std::string y_desc;
};

struct CoeffReport {
    int m = 0;
    Partition kappa;
    std::string y_desc;
    int grid_size = 0;
    double extracted = 0.0;  // coefficient of z_1^{k_m} ... z_m^{k_1}
    double predicted = 0.0;  // d_kappa times the minor product
    double rel_error = 0.0;
    double control_extracted = 0.0;  // coefficient of z_1^{k_1} ... z_m^{k_m}
    std::string control_status;      // "degenerate", "mismatch", "match"
    std::string verdict;

    int exit_code() const;
    void write(std::ostream& out, OutputFormat fmt) const;
};

// Interpolates F(z) = C_kappa at the eigenvalues of Y^{-1} diag(z) exactly on
// the integer grid {0..grid_size-1}^m, extracts the coefficient of the
// reversed-exponent monomial z_1^{k_m} ... z_m^{k_1}, and compares it with
//   d_kappa * prod_j (leading principal minor_j of Y)^{-e_j},
// e_j = k_{m-j+1} - k_{m-j} (zero-padded), e_m = k_1. The same-order monomial
// z_1^{k_1} ... z_m^{k_m} is recorded as a negative control: for unequal parts
// and generic Y it must not match the minor product. Requires
// grid_size >= |kappa| + 1 and length(kappa) <= m.
CoeffReport verify_lemma2(const ZonalTable& table, int m, const Partition& kappa,
                          const SPDMatrix& y, int grid_size, const Lemma2Options& opts = {});

// Quadrature of the defining integral in its Cholesky-factorized form against
// the closed-form product. Returns (quadrature value, product value).
// Supports m in {1, 2}; requires a > (m-1)/2.
std::pair<double, double> verify_gamma_integral(int m, double a, int quad_points = 160);

}  // namespace matargs
