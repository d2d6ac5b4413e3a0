#pragma once

#include <vector>

#include "osr/combinatorics.hpp"
#include "osr/types.hpp"

namespace osr {

// Probe budget split. The learner queries k' coordinates per round: k for the
// sampled expert and k'-k extra uniform coordinates that feed the moment
// estimates. p and q are the single- and pair-inclusion probabilities of the
// extra probe set.
struct ProbeParameters {
    int d = 0;
    int k = 0;
    int k_prime = 0;
    double p = 0.0;  // (k'-k)/d
    double q = 0.0;  // (k'-k)(k'-k-1)/(d(d-1))
};

// Validates 1 <= k, k+2 <= k' <= d and fills in p, q.
ProbeParameters make_probe_parameters(int d, int k, int k_prime);

// Unbiased estimates of x x^T and y x assembled from the extra probed
// coordinates. Dense d x d storage; entries outside the probed set are zero.
struct MomentEstimate {
    int d = 0;
    std::vector<double> xxt;  // row-major d*d, symmetric
    std::vector<double> yx;   // length d

    double xxt_at(int i, int j) const { return xxt[static_cast<std::size_t>(i) * d + j]; }
    double yx_at(int i) const { return yx[static_cast<std::size_t>(i)]; }

    static MomentEstimate zeros(int d) {
        MomentEstimate m;
        m.d = d;
        m.xxt.assign(static_cast<std::size_t>(d) * d, 0.0);
        m.yx.assign(static_cast<std::size_t>(d), 0.0);
        return m;
    }

    // Exact moments x x^T and y x; the degenerate full-information case used
    // by tests and identities.
    static MomentEstimate exact(const std::vector<double>& x, double y);
};

// Step that turns one round's probed coordinates into moment estimates:
//   xxt(i,i) = x_i^2 / p            for i in extra_probe
//   xxt(i,j) = x_i x_j / q          for i != j, both in extra_probe
//   yx(i)    = y x_i / p            for i in extra_probe
// Everything else is zero. x_probed must supply every coordinate of
// extra_probe; the label must lie in [-1, 1].
MomentEstimate build_moments(const ProbedVector& x_probed, double y, const SubsetLex& extra_probe,
                             const ProbeParameters& params);

}  // namespace osr
