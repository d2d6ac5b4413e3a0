#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "osr/combinatorics.hpp"
#include "osr/estimator.hpp"
#include "osr/expert_sgd.hpp"
#include "osr/hedge.hpp"
#include "osr/rng.hpp"
#include "osr/types.hpp"

namespace osr {

// Run parameters for the subset-expert learner. The learning rates default to
// q*sqrt(ln(d)/T) for the expert distribution and q*sqrt(1/T) for the
// per-expert SGD; the overrides exist for experiments.
struct OsrConfig {
    int d = 0;
    int k = 0;
    int k_prime = 0;
    long long T = 0;
    std::uint64_t seed = 0;
    std::optional<double> eta_hedge_override;
    std::optional<double> eta_sgd_override;

    void validate() const;
    double eta_hedge(const ProbeParameters& params) const;
    double eta_sgd(const ProbeParameters& params) const;
};

// One round's coordinate request: the sampled expert subset, the extra probe
// set, and their union (the at-most-k' coordinates actually revealed).
struct RoundQuery {
    SubsetId chosen_expert;
    SubsetLex probe_extra;
    SubsetLex query_set;
};

// Outcome of a completed round.
struct RoundRecord {
    long long t = 0;  // 1-based round index
    double prediction = 0.0;
    double label = 0.0;
    double loss = 0.0;
    SubsetLex query_set;
};

// The per-round protocol: sample an expert subset and an extra probe set,
// request exactly their union, predict with the sampled expert's weights,
// then use the extra probes to build moment estimates that update the expert
// distribution and every expert's SGD vector.
//
// The learner only ever touches feature values through ProbedVector, so
// coordinates outside the announced query set are structurally unreadable.
class SparseRegressionLearner {
public:
    explicit SparseRegressionLearner(const OsrConfig& config);

    // Samples the round's subsets. Throws once the horizon is reached.
    RoundQuery begin_round();

    // Prediction of the sampled expert: dot product of its weights with the
    // probed features, restricted to the expert's subset. Pure.
    double predict(const RoundQuery& query, const ProbedVector& x_probed) const;

    // Completes the round: builds moments from the extra probe coordinates,
    // charges every expert its surrogate cost (computed on pre-update
    // weights), updates the distribution, then advances every expert's SGD.
    RoundRecord finish_round(const RoundQuery& query, const ProbedVector& x_probed, double y);

    long long rounds_done() const { return rounds_done_; }
    const OsrConfig& config() const { return config_; }
    const ProbeParameters& probe_parameters() const { return params_; }
    const ExpertDistribution& distribution() const { return dist_; }
    const ExpertWeights& experts() const { return experts_; }

private:
    OsrConfig config_;
    ProbeParameters params_;
    ExpertDistribution dist_;
    ExpertWeights experts_;
    Rng rng_;
    long long rounds_done_ = 0;
    bool round_open_ = false;
};

// Drives a learner for config.T rounds over the stream, slicing each example
// down to the announced query set. Throws if the stream runs out, naming the
// failing round.
std::vector<RoundRecord> run(const OsrConfig& config, ExampleStream& stream);

}  // namespace osr
