#include "osr/expert_sgd.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "osr/types.hpp"

namespace osr {

std::vector<double> project_unit_ball(const std::vector<double>& w) {
    const double n2 = squared_norm(w);
    if (n2 <= 1.0) return w;
    const double inv = 1.0 / std::sqrt(n2);
    std::vector<double> out(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) out[i] = w[i] * inv;
    return out;
}

ExpertWeights::ExpertWeights(int d, int k, double eta_sgd)
    : d_(d), k_(k), eta_(eta_sgd), num_experts_(binomial(d, k)) {
    members_.resize(static_cast<std::size_t>(num_experts_) * k_);
    table_.assign(static_cast<std::size_t>(num_experts_) * k_, 0.0);
    std::int64_t id = 0;
    for_each_subset(d_, k_, [&](const std::vector<int>& members) {
        int* row = members_.data() + static_cast<std::size_t>(id) * k_;
        for (int i = 0; i < k_; ++i) row[i] = members[static_cast<std::size_t>(i)];
        ++id;
    });
}

std::vector<double> ExpertWeights::dense_weights(std::int64_t id) const {
    std::vector<double> w(static_cast<std::size_t>(d_), 0.0);
    const int* mem = members_of(id);
    const double* vals = weights_of(id);
    for (int i = 0; i < k_; ++i) w[static_cast<std::size_t>(mem[i])] = vals[i];
    return w;
}

void ExpertWeights::set_dense_weights(std::int64_t id, const std::vector<double>& w) {
    const int* mem = members_of(id);
    double* vals = mutable_weights_of(id);
    for (std::size_t i = 0; i < w.size(); ++i) {
        const int coord = static_cast<int>(i);
        bool on_subset = false;
        for (int j = 0; j < k_; ++j) on_subset |= (mem[j] == coord);
        if (!on_subset && w[i] != 0.0)
            throw std::invalid_argument("set_dense_weights: nonzero weight off the subset at coordinate " +
                                        std::to_string(coord));
    }
    for (int i = 0; i < k_; ++i) vals[i] = w[static_cast<std::size_t>(mem[i])];
}

std::vector<double> stochastic_gradient(const SubsetLex& S, const std::vector<double>& w,
                                        const MomentEstimate& moments) {
    S.validate();
    std::vector<double> g(static_cast<std::size_t>(S.d), 0.0);
    for (int i : S.members) {
        double acc = -moments.yx_at(i);
        for (int j : S.members) acc += moments.xxt_at(i, j) * w[static_cast<std::size_t>(j)];
        g[static_cast<std::size_t>(i)] = 2.0 * acc;
    }
    return g;
}

std::vector<double> sgd_step(const SubsetLex& S, const std::vector<double>& w,
                             const MomentEstimate& moments, double eta_sgd) {
    const std::vector<double> g = stochastic_gradient(S, w, moments);
    std::vector<double> next(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) next[i] = w[i] - eta_sgd * g[i];
    return project_unit_ball(next);
}

void update_all(ExpertWeights& experts, const MomentEstimate& moments) {
    const int k = experts.k();
    const double eta = experts.eta();
    std::vector<double> g(static_cast<std::size_t>(k));
    for (std::int64_t id = 0; id < experts.num_experts(); ++id) {
        const int* mem = experts.members_of(id);
        double* w = experts.mutable_weights_of(id);
        for (int a = 0; a < k; ++a) {
            double acc = -moments.yx_at(mem[a]);
            for (int b = 0; b < k; ++b) acc += moments.xxt_at(mem[a], mem[b]) * w[b];
            g[static_cast<std::size_t>(a)] = 2.0 * acc;
        }
        double n2 = 0.0;
        for (int a = 0; a < k; ++a) {
            w[a] -= eta * g[static_cast<std::size_t>(a)];
            n2 += w[a] * w[a];
        }
        if (n2 > 1.0) {
            const double inv = 1.0 / std::sqrt(n2);
            for (int a = 0; a < k; ++a) w[a] *= inv;
        }
    }
}

}  // namespace osr
