#pragma once

#include "matargs/linalg.hpp"

#include <cstdint>

namespace matargs {

// Counter-based generator: each output is a pure function of (seed, stream,
// counter), so sequences replay identically on any platform and independent
// streams can be handed to parallel chunks.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next_u64();
    double next_uniform();            // strictly inside (0, 1)
    double next_normal();             // Box-Muller, cosine branch
    double next_gamma(double shape);  // Marsaglia-Tsang, scale 1
    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t base_ = 0;
    std::uint64_t counter_ = 0;
};

struct WishartSpec {
    int m;
    double dof;        // must exceed m - 1
    SPDMatrix scale;
};

// Bartlett construction: lower-triangular A with chi diagonals and standard
// normal subdiagonals, X = (LA)(LA)' for scale = LL'.
SPDMatrix wishart(RngStream& rng, const WishartSpec& spec);

// Q diag(d) Q' with Q from the QR of a Gaussian matrix and d log-uniform on
// [cap^{-1/2}, cap^{1/2}], so the eigenvalue spread never exceeds cap.
SPDMatrix random_spd(RngStream& rng, int m, double condition_cap);

}  // namespace matargs
