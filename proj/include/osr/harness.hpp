#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "osr/distinguisher.hpp"
#include "osr/learner.hpp"
#include "osr/streams.hpp"

namespace osr {

// Minimizer of sum_t (w . x_t - y_t)^2 over the unit ball restricted to a
// fixed coordinate subset. Solved through the regularized normal equations
// (A + lambda I) w = b: if the lambda -> 0 solution fits in the ball it is
// optimal, otherwise ||w(lambda)|| decreases monotonically in lambda and a
// bisection places the solution on the boundary to 1e-10.
std::vector<double> solve_ball_constrained_ls(const std::vector<double>& gram, const std::vector<double>& rhs,
                                              int n);

struct ComparatorResult {
    std::vector<double> weights;  // d-dense, k-sparse
    double loss = 0.0;
    SubsetLex subset;
};

// Exact best k-sparse unit-norm comparator in hindsight: enumerates all
// C(d, k) subsets and solves the norm-constrained least squares on each.
// Harness-side only; requires the full examples.
ComparatorResult comparator_loss(const std::vector<LabeledExample>& examples, int d, int k);

// -- Baseline learners --------------------------------------------------------

// Always predicts zero and reveals nothing.
class ZeroLearner : public OnlineLearner {
public:
    std::vector<int> announce_query() override { return {}; }
    double predict(const ProbedVector&) override { return 0.0; }
    void receive_label(double) override {}
};

// Predicts the true label by replaying its own copy of the (deterministic)
// example stream. Harness testing only: shows the experiment measures the
// learner, not the instance.
class CheatOracleLearner : public OnlineLearner {
public:
    explicit CheatOracleLearner(std::unique_ptr<ExampleStream> replay) : replay_(std::move(replay)) {}

    std::vector<int> announce_query() override { return {}; }
    double predict(const ProbedVector&) override;
    void receive_label(double label) override;

private:
    std::unique_ptr<ExampleStream> replay_;
    double pending_label_ = 0.0;
};

// Plays one fixed weight vector forever, probing exactly its support.
class FixedWeightLearner : public OnlineLearner {
public:
    explicit FixedWeightLearner(std::vector<double> weights);

    std::vector<int> announce_query() override { return support_; }
    double predict(const ProbedVector& features) override;
    void receive_label(double) override {}

private:
    std::vector<double> weights_;
    std::vector<int> support_;
};

// Uniform-random-subset baseline: samples a fresh uniform size-k subset each
// round instead of learning the distribution, but runs the same per-subset
// SGD machinery from shared moment estimates.
class RandomSubsetLearner : public OnlineLearner {
public:
    explicit RandomSubsetLearner(const OsrConfig& config);

    std::vector<int> announce_query() override;
    double predict(const ProbedVector& features) override;
    void receive_label(double label) override;
    std::int64_t chosen_subset_rank() const override { return chosen_.rank; }
    const ExpertWeights& experts() const { return experts_; }

private:
    OsrConfig config_;
    ProbeParameters params_;
    ExpertWeights experts_;
    Rng rng_;
    SubsetId chosen_;
    SubsetLex probe_extra_;
    ProbedVector features_;
};

// -- Experiments --------------------------------------------------------------

struct StreamSpec {
    enum class Kind { kStochastic, kZeros, kHardness };
    Kind kind = Kind::kStochastic;
    std::uint64_t seed = 0;
    double noise_level = 0.0;        // stochastic
    std::uint64_t model_seed = 0;    // stochastic: draws the k-sparse model
    std::string instance_path;      // hardness
};

struct LearnerSpec {
    enum class Kind { kAlgorithm1, kZero, kCheatOracle, kRandomSubset };
    Kind kind = Kind::kAlgorithm1;
};

struct ExperimentConfig {
    StreamSpec stream;
    LearnerSpec learner;
    OsrConfig osr;
    std::string out_path;      // per-round CSV; empty skips the file
    std::string summary_path;  // summary CSV; empty skips the file
};

struct RegretReport {
    std::vector<DrivenRound> rounds;
    std::vector<double> cum_loss;
    double total_loss = 0.0;
    double comparator_loss = 0.0;
    std::vector<double> comparator_weights;
    double final_regret = 0.0;
    int max_coords_revealed = 0;
};

// Runs the configured learner over the configured stream, retaining a
// full-information copy harness-side for the exact comparator, and writes the
// per-round and summary CSVs. Regret is total loss minus comparator loss.
RegretReport run_experiment(const ExperimentConfig& config);

// Entry point behind the CLI binary; returns the process exit status.
int cli_main(int argc, const char* const* argv);

}  // namespace osr
