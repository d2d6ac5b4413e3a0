#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "osr/rng.hpp"

namespace osr {

// Exact binomial coefficient C(n, r). Values are precomputed once into a
// Pascal triangle capped at n = 64, the largest n for which every C(n, r)
// fits in a signed 64-bit integer. Larger n throws.
std::int64_t binomial(int n, int r);

// A size-k subset of [0, d), stored as strictly increasing members.
struct SubsetLex {
    std::vector<int> members;
    int d = 0;
    int k = 0;

    // Throws std::invalid_argument naming the violated invariant.
    void validate() const;
};

// Dense index of a size-k subset under colexicographic order, in [0, C(d,k)).
struct SubsetId {
    std::int64_t rank = 0;
    int d = 0;
    int k = 0;
};

// Colexicographic rank: subsets ordered by comparing largest members first.
SubsetId rank(const SubsetLex& subset);

// Inverse of rank.
SubsetLex unrank(const SubsetId& id);

// Uniform draw over all size-r subsets of [0, d), via partial Fisher-Yates.
SubsetLex sample_uniform_subset(int d, int r, Rng& rng);

// Visits every size-k subset of [0, d) in colexicographic order, i.e. the
// i-th call receives unrank({i, d, k}).members.
void for_each_subset(int d, int k, const std::function<void(const std::vector<int>&)>& fn);

// Sorted union of two member lists.
std::vector<int> subset_union(const std::vector<int>& a, const std::vector<int>& b);

}  // namespace osr
