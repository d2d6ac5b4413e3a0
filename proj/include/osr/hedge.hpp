#pragma once

#include <cstdint>
#include <vector>

#include "osr/combinatorics.hpp"
#include "osr/estimator.hpp"
#include "osr/rng.hpp"

namespace osr {

// Exponential-weights distribution over all C(d, k) subset-experts, indexed
// by colex rank. Weights live in log space; normalization is a max-shifted
// log-sum-exp so the probabilities stay a distribution no matter how large
// the per-round costs get.
struct ExpertDistribution {
    int d = 0;
    int k = 0;
    double eta = 0.0;
    std::vector<double> log_weights;  // length C(d, k), kept normalized

    std::int64_t size() const { return static_cast<std::int64_t>(log_weights.size()); }
};

// Uniform initial distribution with the given learning rate.
ExpertDistribution init_uniform(int d, int k, double eta);

// Probabilities exp(log_weights) / Z.
std::vector<double> probabilities(const ExpertDistribution& dist);

// Surrogate square-loss cost of one expert under the shared moment estimates:
//   w^T xxt w - 2 yx . w + y^2
// With exact moments this equals (w . x - y)^2. Values are bounded in
// magnitude by 3/q + 1 whenever ||w|| <= 1, ||x|| <= 1, |y| <= 1.
double surrogate_cost(const std::vector<double>& w, const MomentEstimate& moments, double y);

// Same cost for a sparse expert: `members` are the expert's coordinates and
// `w_vals` the matching weights; coordinates off the subset are zero.
double surrogate_cost_sparse(const std::vector<int>& members, const std::vector<double>& w_vals,
                             const MomentEstimate& moments, double y);

// Multiplicative-weights step: log_weights[i] -= eta * costs[i], then
// renormalize. Throws if any cost is not finite, naming the expert.
void hedge_update(ExpertDistribution& dist, const std::vector<double>& costs);

// Draws an expert index with its current probability (linear scan over the
// cumulative distribution).
SubsetId sample_expert(const ExpertDistribution& dist, Rng& rng);

}  // namespace osr
