#include "matargs/randmat.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace matargs {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream)
    : base_(mix64(mix64(seed) + kGolden * (stream + 1))) {}

std::uint64_t RngStream::next_u64() {
    return mix64(base_ + kGolden * ++counter_);
}

double RngStream::next_uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::next_normal() {
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double RngStream::next_gamma(double shape) {
    if (!(shape > 0)) throw std::invalid_argument("next_gamma: shape must be > 0");
    if (shape < 1) {
        // Boost: draw at shape + 1, scale by U^{1/shape}.
        const double g = next_gamma(shape + 1);
        const double u = next_uniform();
        return g * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / (3.0 * std::sqrt(d));
    for (;;) {
        const double x = next_normal();
        const double f = 1.0 + c * x;
        if (f <= 0) continue;
        const double v = f * f * f;
        const double u = next_uniform();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
}

SPDMatrix wishart(RngStream& rng, const WishartSpec& spec) {
    const int m = spec.m;
    if (m < 1) throw std::invalid_argument("wishart: dimension must be >= 1");
    if (spec.scale.dim() != m)
        throw std::invalid_argument("wishart: scale dimension mismatch");
    if (!(spec.dof > m - 1))
        throw std::domain_error("wishart: requires dof > m - 1");
    // Bartlett factor, row by row: subdiagonal normals, then the chi diagonal.
    std::vector<double> bart(static_cast<std::size_t>(m) * m, 0.0);
    for (int r = 0; r < m; ++r) {
        for (int c = 0; c < r; ++c) bart[r * m + c] = rng.next_normal();
        bart[r * m + r] = std::sqrt(2.0 * rng.next_gamma((spec.dof - r) / 2.0));
    }
    // X = (L A)(L A)' with L the lower factor of the scale; the stored factor
    // is upper with scale = T'T, so L = T' and L(r, t) = T(t, r) for t <= r.
    std::vector<double> lower(static_cast<std::size_t>(m) * m, 0.0);
    for (int r = 0; r < m; ++r)
        for (int c = 0; c <= r; ++c) {
            double s = 0;
            for (int t = c; t <= r; ++t) s += spec.scale.t(t, r) * bart[t * m + c];
            lower[r * m + c] = s;
        }
    // Upper factor of X is (L A)'.
    std::vector<double> upper(static_cast<std::size_t>(m) * m, 0.0);
    for (int r = 0; r < m; ++r)
        for (int c = 0; c <= r; ++c) upper[c * m + r] = lower[r * m + c];
    return SPDMatrix::from_upper_factor(m, std::move(upper));
}

SPDMatrix random_spd(RngStream& rng, int m, double condition_cap) {
    if (m < 1) throw std::invalid_argument("random_spd: dimension must be >= 1");
    if (!(condition_cap >= 1))
        throw std::invalid_argument("random_spd: condition_cap must be >= 1");
    for (;;) {
        std::vector<double> g(static_cast<std::size_t>(m) * m);
        for (double& v : g) v = rng.next_normal();
        // Modified Gram-Schmidt by columns; retry the whole draw on a
        // numerically dependent column (probability ~ 0).
        std::vector<double> q(static_cast<std::size_t>(m) * m, 0.0);
        bool ok = true;
        for (int j = 0; j < m && ok; ++j) {
            std::vector<double> v(m);
            for (int r = 0; r < m; ++r) v[r] = g[r * m + j];
            for (int i = 0; i < j; ++i) {
                double dot = 0;
                for (int r = 0; r < m; ++r) dot += q[r * m + i] * v[r];
                for (int r = 0; r < m; ++r) v[r] -= dot * q[r * m + i];
            }
            double norm = 0;
            for (int r = 0; r < m; ++r) norm += v[r] * v[r];
            norm = std::sqrt(norm);
            if (!(norm > 1e-8)) {
                ok = false;
                break;
            }
            for (int r = 0; r < m; ++r) q[r * m + j] = v[r] / norm;
        }
        if (!ok) continue;
        std::vector<double> d(m);
        for (int i = 0; i < m; ++i)
            d[i] = std::pow(condition_cap, rng.next_uniform() - 0.5);
        std::vector<double> a(static_cast<std::size_t>(m) * m, 0.0);
        for (int i = 0; i < m; ++i)
            for (int j = i; j < m; ++j) {
                double s = 0;
                for (int r = 0; r < m; ++r) s += q[i * m + r] * d[r] * q[j * m + r];
                a[i * m + j] = a[j * m + i] = s;
            }
        return cholesky(SymMatrix(m, std::move(a)));
    }
}

}  // namespace matargs
