#include "osr/estimator.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace osr {

ProbeParameters make_probe_parameters(int d, int k, int k_prime) {
    if (k < 1)
        throw std::invalid_argument("make_probe_parameters: k must be >= 1, got " + std::to_string(k));
    if (k_prime > d)
        throw std::invalid_argument("make_probe_parameters: k'=" + std::to_string(k_prime) +
                                    " exceeds dimension d=" + std::to_string(d));
    if (k_prime < k + 2)
        throw std::invalid_argument(
            "make_probe_parameters: k'=" + std::to_string(k_prime) + " with k=" + std::to_string(k) +
            " leaves fewer than 2 extra probes, so the pair-inclusion probability q would vanish; "
            "require k' >= k+2");
    ProbeParameters out;
    out.d = d;
    out.k = k;
    out.k_prime = k_prime;
    const double extra = static_cast<double>(k_prime - k);
    out.p = extra / static_cast<double>(d);
    out.q = extra * (extra - 1.0) / (static_cast<double>(d) * (d - 1.0));
    return out;
}

MomentEstimate MomentEstimate::exact(const std::vector<double>& x, double y) {
    MomentEstimate m = MomentEstimate::zeros(static_cast<int>(x.size()));
    for (int i = 0; i < m.d; ++i) {
        for (int j = 0; j < m.d; ++j)
            m.xxt[static_cast<std::size_t>(i) * m.d + j] = x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(j)];
        m.yx[static_cast<std::size_t>(i)] = y * x[static_cast<std::size_t>(i)];
    }
    return m;
}

MomentEstimate build_moments(const ProbedVector& x_probed, double y, const SubsetLex& extra_probe,
                             const ProbeParameters& params) {
    extra_probe.validate();
    if (extra_probe.d != params.d)
        throw std::invalid_argument("build_moments: probe set dimension " + std::to_string(extra_probe.d) +
                                    " does not match parameters d=" + std::to_string(params.d));
    if (!(std::fabs(y) <= 1.0))
        throw std::invalid_argument("build_moments: label " + std::to_string(y) + " outside [-1, 1]");
    double probed_norm2 = 0.0;
    for (int i : extra_probe.members) {
        const double xi = x_probed.at(i);
        probed_norm2 += xi * xi;
    }
    if (!(probed_norm2 <= 1.0 + 1e-9))
        throw std::invalid_argument("build_moments: probed feature norm " +
                                    std::to_string(std::sqrt(probed_norm2)) + " exceeds 1");

    MomentEstimate m = MomentEstimate::zeros(params.d);
    const auto& probe = extra_probe.members;
    for (std::size_t a = 0; a < probe.size(); ++a) {
        const int i = probe[a];
        const double xi = x_probed.at(i);  // throws naming the missing coordinate
        m.xxt[static_cast<std::size_t>(i) * params.d + i] = xi * xi / params.p;
        m.yx[static_cast<std::size_t>(i)] = y * xi / params.p;
        for (std::size_t b = a + 1; b < probe.size(); ++b) {
            const int j = probe[b];
            const double v = xi * x_probed.at(j) / params.q;
            m.xxt[static_cast<std::size_t>(i) * params.d + j] = v;
            m.xxt[static_cast<std::size_t>(j) * params.d + i] = v;
        }
    }
    return m;
}

}  // namespace osr
