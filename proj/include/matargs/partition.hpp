#pragma once

#include <compare>
#include <string>
#include <vector>

namespace matargs {

// Integer partition: weakly decreasing positive parts, trailing zeros trimmed.
// The empty partition is a valid value (weight 0).
class Partition {
public:
    Partition() = default;
    explicit Partition(std::vector<int> parts);

    // "2,1" -> (2,1); "0" or "" -> empty. Zero parts are accepted and trimmed.
    static Partition parse(const std::string& text);

    const std::vector<int>& parts() const { return parts_; }
    int weight() const { return weight_; }
    int length() const { return static_cast<int>(parts_.size()); }
    bool empty() const { return parts_.empty(); }

    // 1-based part accessor; returns 0 past the length, so formulas written
    // against zero-padded k_1..k_m transcribe directly.
    int part(int i) const {
        return (i >= 1 && i <= length()) ? parts_[i - 1] : 0;
    }

    std::string str() const;  // "2,1"; empty -> "0"

    friend bool operator==(const Partition&, const Partition&) = default;
    // Lexicographic on the canonical parts sequence; agrees with numeric
    // lexicographic order on zero-padded tuples.
    friend auto operator<=>(const Partition& a, const Partition& b) {
        return a.parts_ <=> b.parts_;
    }

private:
    std::vector<int> parts_;
    int weight_ = 0;
};

// All partitions of k with at most max_parts parts, descending lexicographic.
// k = 0 yields the single empty partition.
std::vector<Partition> enumerate_partitions(int k, int max_parts);

// Dominance order on equal-weight partitions: every prefix sum of mu is >=
// the matching prefix sum of lambda. Unequal weights are rejected.
bool dominates(const Partition& mu, const Partition& lambda);

Partition conjugate(const Partition& lambda);

// (n - k_m, ..., n - k_1) for kappa zero-padded to m parts; requires n >= k_1.
Partition kappa_star(const Partition& kappa, int n, int m);

// Sum of k_i * (k_i - i) over the zero-padded parts.
long long rho(const Partition& kappa, int m);

}  // namespace matargs
