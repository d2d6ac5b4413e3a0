#include "osr/hedge.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace osr {

namespace {

// log(sum exp(v_i)), shifted by the max so nothing overflows
double log_sum_exp(const std::vector<double>& v) {
    const double m = *std::max_element(v.begin(), v.end());
    double s = 0.0;
    for (double e : v) s += std::exp(e - m);
    return m + std::log(s);
}

}  // namespace

ExpertDistribution init_uniform(int d, int k, double eta) {
    const std::int64_t n = binomial(d, k);  // throws if not representable
    ExpertDistribution dist;
    dist.d = d;
    dist.k = k;
    dist.eta = eta;
    dist.log_weights.assign(static_cast<std::size_t>(n), -std::log(static_cast<double>(n)));
    return dist;
}

std::vector<double> probabilities(const ExpertDistribution& dist) {
    const double lse = log_sum_exp(dist.log_weights);
    std::vector<double> probs(dist.log_weights.size());
    for (std::size_t i = 0; i < probs.size(); ++i) probs[i] = std::exp(dist.log_weights[i] - lse);
    return probs;
}

double surrogate_cost(const std::vector<double>& w, const MomentEstimate& moments, double y) {
    double quad = 0.0;
    double lin = 0.0;
    const int d = moments.d;
    for (int i = 0; i < d; ++i) {
        const double wi = w[static_cast<std::size_t>(i)];
        if (wi == 0.0) continue;
        lin += moments.yx_at(i) * wi;
        for (int j = 0; j < d; ++j) quad += wi * moments.xxt_at(i, j) * w[static_cast<std::size_t>(j)];
    }
    return quad - 2.0 * lin + y * y;
}

double surrogate_cost_sparse(const std::vector<int>& members, const std::vector<double>& w_vals,
                             const MomentEstimate& moments, double y) {
    double quad = 0.0;
    double lin = 0.0;
    for (std::size_t a = 0; a < members.size(); ++a) {
        const double wa = w_vals[a];
        lin += moments.yx_at(members[a]) * wa;
        for (std::size_t b = 0; b < members.size(); ++b)
            quad += wa * moments.xxt_at(members[a], members[b]) * w_vals[b];
    }
    return quad - 2.0 * lin + y * y;
}

void hedge_update(ExpertDistribution& dist, const std::vector<double>& costs) {
    if (costs.size() != dist.log_weights.size())
        throw std::invalid_argument("hedge_update: got " + std::to_string(costs.size()) +
                                    " costs for " + std::to_string(dist.log_weights.size()) +
                                    " experts");
    for (std::size_t i = 0; i < costs.size(); ++i) {
        if (!std::isfinite(costs[i]))
            throw std::invalid_argument("hedge_update: non-finite cost for expert " + std::to_string(i));
    }
    for (std::size_t i = 0; i < costs.size(); ++i) dist.log_weights[i] -= dist.eta * costs[i];
    const double lse = log_sum_exp(dist.log_weights);
    for (double& lw : dist.log_weights) lw -= lse;
}

SubsetId sample_expert(const ExpertDistribution& dist, Rng& rng) {
    const std::vector<double> probs = probabilities(dist);
    const double u = rng.uniform_unit();
    double cum = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        cum += probs[i];
        if (u < cum) return SubsetId{static_cast<std::int64_t>(i), dist.d, dist.k};
    }
    return SubsetId{static_cast<std::int64_t>(probs.size()) - 1, dist.d, dist.k};
}

}  // namespace osr
