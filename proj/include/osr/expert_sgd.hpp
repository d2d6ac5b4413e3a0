#pragma once

#include <cstdint>
#include <vector>

#include "osr/combinatorics.hpp"
#include "osr/estimator.hpp"

namespace osr {

// Euclidean projection onto the unit ball: identity when ||w|| <= 1, radial
// scaling to norm 1 otherwise.
std::vector<double> project_unit_ball(const std::vector<double>& w);

// One projected-SGD parameter vector per subset-expert. Each expert stores
// only the k weights on its own coordinates; everything off the subset is
// zero by representation. Member lists are cached flat so the per-round sweep
// over all C(d, k) experts does no unranking.
class ExpertWeights {
public:
    ExpertWeights(int d, int k, double eta_sgd);

    int d() const { return d_; }
    int k() const { return k_; }
    double eta() const { return eta_; }
    std::int64_t num_experts() const { return num_experts_; }

    const int* members_of(std::int64_t id) const { return members_.data() + static_cast<std::size_t>(id) * k_; }
    const double* weights_of(std::int64_t id) const { return table_.data() + static_cast<std::size_t>(id) * k_; }
    double* mutable_weights_of(std::int64_t id) { return table_.data() + static_cast<std::size_t>(id) * k_; }

    // Expert weights expanded to a d-vector (zeros off the subset).
    std::vector<double> dense_weights(std::int64_t id) const;
    void set_dense_weights(std::int64_t id, const std::vector<double>& w);

private:
    int d_;
    int k_;
    double eta_;
    std::int64_t num_experts_;
    std::vector<int> members_;    // num_experts * k, colex order
    std::vector<double> table_;   // num_experts * k, starts at zero
};

// Stochastic gradient of the surrogate square loss restricted to subset S:
//   g = 2 I_S (xxt w - yx)
// w must be supported on S; the result is zero off S. In expectation over the
// extra probe set this is the true gradient 2 I_S (x x^T w - y x), and its
// norm is deterministically at most 4/q.
std::vector<double> stochastic_gradient(const SubsetLex& S, const std::vector<double>& w,
                                        const MomentEstimate& moments);

// One projected-SGD update: w <- project_unit_ball(w - eta * g).
std::vector<double> sgd_step(const SubsetLex& S, const std::vector<double>& w,
                             const MomentEstimate& moments, double eta_sgd);

// Advances every expert by one sgd_step with the same shared moments.
void update_all(ExpertWeights& experts, const MomentEstimate& moments);

}  // namespace osr
