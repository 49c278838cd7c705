#include "matargs/partition.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace matargs {

Partition::Partition(std::vector<int> parts) {
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (parts[i] < 0)
            throw std::invalid_argument("Partition: negative part");
        if (i > 0 && parts[i] > parts[i - 1])
            throw std::invalid_argument("Partition: parts must be weakly decreasing");
    }
    while (!parts.empty() && parts.back() == 0) parts.pop_back();
    parts_ = std::move(parts);
    weight_ = 0;
    for (int p : parts_) weight_ += p;
}

Partition Partition::parse(const std::string& text) {
    if (text.empty() || text == "0") return Partition{};
    std::vector<int> parts;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
            throw std::invalid_argument("Partition: cannot parse \"" + text +
                                        "\" (expected comma-separated non-negative parts)");
        parts.push_back(std::stoi(tok));
    }
    if (ss.eof() && !text.empty() && text.back() == ',')
        throw std::invalid_argument("Partition: trailing comma in \"" + text + "\"");
    return Partition(std::move(parts));
}

std::string Partition::str() const {
    if (parts_.empty()) return "0";
    std::string s;
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(parts_[i]);
    }
    return s;
}

std::vector<Partition> enumerate_partitions(int k, int max_parts) {
    if (k < 0) throw std::invalid_argument("enumerate_partitions: k must be >= 0");
    if (max_parts < 1) throw std::invalid_argument("enumerate_partitions: max_parts must be >= 1");
    std::vector<Partition> out;
    std::vector<int> cur;
    // Descending lexicographic: at each slot try the largest feasible part first.
    auto rec = [&](auto&& self, int rem, int max_next, int slots) -> void {
        if (rem == 0) {
            out.emplace_back(cur);
            return;
        }
        if (slots == 0) return;
        const int hi = std::min(rem, max_next);
        const int lo = (rem + slots - 1) / slots;  // need slots * part >= rem
        for (int p = hi; p >= lo; --p) {
            cur.push_back(p);
            self(self, rem - p, p, slots - 1);
            cur.pop_back();
        }
    };
    rec(rec, k, k, max_parts);
    return out;
}

bool dominates(const Partition& mu, const Partition& lambda) {
    if (mu.weight() != lambda.weight())
        throw std::invalid_argument("dominates: partitions must have equal weight");
    const int len = std::max(mu.length(), lambda.length());
    long long su = 0, sl = 0;
    for (int j = 1; j <= len; ++j) {
        su += mu.part(j);
        sl += lambda.part(j);
        if (su < sl) return false;
    }
    return true;
}

Partition conjugate(const Partition& lambda) {
    std::vector<int> t;
    for (int j = 1; j <= lambda.part(1); ++j) {
        int cnt = 0;
        for (int p : lambda.parts())
            if (p >= j) ++cnt;
        t.push_back(cnt);
    }
    return Partition(std::move(t));
}

Partition kappa_star(const Partition& kappa, int n, int m) {
    if (m < 1) throw std::invalid_argument("kappa_star: m must be >= 1");
    if (kappa.length() > m)
        throw std::invalid_argument("kappa_star: partition longer than m");
    if (n < kappa.part(1))
        throw std::domain_error("kappa_star: requires n >= k_1");
    std::vector<int> parts(m);
    for (int i = 1; i <= m; ++i) parts[i - 1] = n - kappa.part(m - i + 1);
    return Partition(std::move(parts));
}

long long rho(const Partition& kappa, int m) {
    if (m < 1) throw std::invalid_argument("rho: m must be >= 1");
    if (kappa.length() > m)
        throw std::invalid_argument("rho: partition longer than m");
    long long s = 0;
    for (int i = 1; i <= kappa.length(); ++i) {
        const long long ki = kappa.part(i);
        s += ki * (ki - i);
    }
    return s;
}

}  // namespace matargs
