#include "osr/combinatorics.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace osr {

namespace {

constexpr int kMaxN = 64;

struct PascalTable {
    // row n holds C(n, 0..n)
    std::vector<std::vector<std::int64_t>> rows;

    PascalTable() {
        rows.resize(kMaxN + 1);
        for (int n = 0; n <= kMaxN; ++n) {
            rows[n].resize(static_cast<std::size_t>(n) + 1);
            rows[n][0] = 1;
            rows[n][static_cast<std::size_t>(n)] = 1;
            for (int r = 1; r < n; ++r)
                rows[n][static_cast<std::size_t>(r)] =
                    rows[n - 1][static_cast<std::size_t>(r - 1)] + rows[n - 1][static_cast<std::size_t>(r)];
        }
    }
};

const PascalTable& pascal() {
    static const PascalTable table;
    return table;
}

// C(n, r) extended with the convention C(n, r) = 0 for r > n, which the
// colex rank formula relies on for its low positions.
std::int64_t binomial_ext(int n, int r) {
    if (r > n) return 0;
    return pascal().rows[static_cast<std::size_t>(n)][static_cast<std::size_t>(r)];
}

}  // namespace

std::int64_t binomial(int n, int r) {
    if (r < 0 || n < 0 || r > n)
        throw std::invalid_argument("binomial: require 0 <= r <= n, got n=" + std::to_string(n) +
                                    " r=" + std::to_string(r));
    if (n > kMaxN)
        throw std::overflow_error("binomial: n=" + std::to_string(n) + " r=" + std::to_string(r) +
                                  " exceeds the exact 64-bit range (n <= 64)");
    return pascal().rows[static_cast<std::size_t>(n)][static_cast<std::size_t>(r)];
}

void SubsetLex::validate() const {
    if (k != static_cast<int>(members.size()))
        throw std::invalid_argument("SubsetLex: member count " + std::to_string(members.size()) +
                                    " does not equal k=" + std::to_string(k));
    if (k < 0 || k > d)
        throw std::invalid_argument("SubsetLex: require 0 <= k <= d, got k=" + std::to_string(k) +
                                    " d=" + std::to_string(d));
    for (std::size_t i = 0; i < members.size(); ++i) {
        if (members[i] < 0 || members[i] >= d)
            throw std::invalid_argument("SubsetLex: member " + std::to_string(members[i]) +
                                        " outside [0, " + std::to_string(d) + ")");
        if (i > 0 && members[i] <= members[i - 1])
            throw std::invalid_argument("SubsetLex: members not strictly increasing at position " +
                                        std::to_string(i));
    }
}

SubsetId rank(const SubsetLex& subset) {
    subset.validate();
    std::int64_t r = 0;
    for (int i = 0; i < subset.k; ++i) r += binomial_ext(subset.members[static_cast<std::size_t>(i)], i + 1);
    return SubsetId{r, subset.d, subset.k};
}

SubsetLex unrank(const SubsetId& id) {
    if (id.k < 0 || id.k > id.d)
        throw std::invalid_argument("unrank: require 0 <= k <= d, got k=" + std::to_string(id.k) +
                                    " d=" + std::to_string(id.d));
    const std::int64_t total = binomial(id.d, id.k);
    if (id.rank < 0 || id.rank >= total)
        throw std::out_of_range("unrank: rank " + std::to_string(id.rank) + " outside [0, " +
                                std::to_string(total) + ") for d=" + std::to_string(id.d) +
                                " k=" + std::to_string(id.k));
    SubsetLex out;
    out.d = id.d;
    out.k = id.k;
    out.members.resize(static_cast<std::size_t>(id.k));
    std::int64_t remaining = id.rank;
    int ceiling = id.d;
    for (int i = id.k - 1; i >= 0; --i) {
        // largest m < ceiling with C(m, i+1) <= remaining
        int m = i;  // C(i, i+1) = 0 <= remaining always holds
        for (int cand = ceiling - 1; cand > i; --cand) {
            if (binomial_ext(cand, i + 1) <= remaining) {
                m = cand;
                break;
            }
        }
        out.members[static_cast<std::size_t>(i)] = m;
        remaining -= binomial_ext(m, i + 1);
        ceiling = m;
    }
    return out;
}

SubsetLex sample_uniform_subset(int d, int r, Rng& rng) {
    if (r < 0 || r > d)
        throw std::invalid_argument("sample_uniform_subset: require 0 <= r <= d, got r=" +
                                    std::to_string(r) + " d=" + std::to_string(d));
    std::vector<int> pool(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) pool[static_cast<std::size_t>(i)] = i;
    for (int i = 0; i < r; ++i) {
        const int j = i + rng.uniform_int(d - i);
        std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
    }
    SubsetLex out;
    out.d = d;
    out.k = r;
    out.members.assign(pool.begin(), pool.begin() + r);
    std::sort(out.members.begin(), out.members.end());
    return out;
}

void for_each_subset(int d, int k, const std::function<void(const std::vector<int>&)>& fn) {
    if (k < 0 || k > d)
        throw std::invalid_argument("for_each_subset: require 0 <= k <= d");
    std::vector<int> members(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) members[static_cast<std::size_t>(i)] = i;
    while (true) {
        fn(members);
        // next subset in colex order: bump the lowest member that can move
        int i = 0;
        while (i < k) {
            const int limit = (i + 1 < k) ? members[static_cast<std::size_t>(i + 1)] : d;
            if (members[static_cast<std::size_t>(i)] + 1 < limit) break;
            ++i;
        }
        if (i == k) return;
        ++members[static_cast<std::size_t>(i)];
        for (int j = 0; j < i; ++j) members[static_cast<std::size_t>(j)] = j;
    }
}

std::vector<int> subset_union(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

}  // namespace osr
