#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "osr/learner.hpp"
#include "osr/streams.hpp"
#include "osr/types.hpp"

namespace osr {

// Minimal protocol any learner must speak to be driven by the harness:
// announce the coordinates to reveal, predict from exactly those values,
// then receive the true label.
class OnlineLearner {
public:
    virtual ~OnlineLearner() = default;
    virtual std::vector<int> announce_query() = 0;
    virtual double predict(const ProbedVector& features) = 0;
    virtual void receive_label(double label) = 0;

    // Colex rank of the subset-expert behind the current prediction, or -1
    // for learners without one.
    virtual std::int64_t chosen_subset_rank() const { return -1; }
};

// The subset-expert algorithm behind the OnlineLearner protocol.
class Algorithm1Learner : public OnlineLearner {
public:
    explicit Algorithm1Learner(const OsrConfig& config) : learner_(config) {}

    std::vector<int> announce_query() override {
        query_ = learner_.begin_round();
        return query_.query_set.members;
    }
    double predict(const ProbedVector& features) override {
        features_ = features;
        return learner_.predict(query_, features_);
    }
    void receive_label(double label) override { learner_.finish_round(query_, features_, label); }
    std::int64_t chosen_subset_rank() const override { return query_.chosen_expert.rank; }

    const SparseRegressionLearner& inner() const { return learner_; }

private:
    SparseRegressionLearner learner_;
    RoundQuery query_;
    ProbedVector features_;
};

// One completed round as seen by the driver.
struct DrivenRound {
    long long t = 0;  // 1-based
    double prediction = 0.0;
    double label = 0.0;
    double loss = 0.0;
    int coords_revealed = 0;
    std::int64_t subset_rank = -1;
};

// Runs the announce/reveal/predict/label loop for `rounds` rounds. Each
// example is sliced down to the announced coordinates before the learner sees
// it, and any round announcing more than `budget` coordinates is an error.
std::vector<DrivenRound> drive(OnlineLearner& learner, ExampleStream& stream, long long rounds,
                               int budget);

struct DistinguisherConfig {
    long long T = 0;
    double threshold = 0.0;  // <= 0 selects the default T / (2 m d k)
    OsrConfig learner;       // learner.T is overridden by T above
    SetCoverInstance instance;
    std::uint64_t seed = 0;
};

struct Verdict {
    enum class Label { kSatisfiable, kUnsatisfiable };
    Label label = Label::kUnsatisfiable;
    double total_loss = 0.0;
    double threshold = 0.0;
};

inline const char* to_string(Verdict::Label label) {
    return label == Verdict::Label::kSatisfiable ? "satisfiable" : "unsatisfiable";
}

// Builds a learner for a distinguisher trial; the default factory constructs
// Algorithm1Learner, and tests plug in oracles and baselines.
using LearnerFactory = std::function<std::unique_ptr<OnlineLearner>(const OsrConfig&)>;

// Feeds the instance's hardness stream to the learner for T rounds and
// compares the accumulated square loss against the threshold: at most the
// threshold means "satisfiable".
Verdict run_distinguisher(const DistinguisherConfig& config);
Verdict run_distinguisher(const DistinguisherConfig& config, const LearnerFactory& factory);

struct SeparationRow {
    int trial = 0;
    std::string instance_kind;  // "planted" or "uncoverable"
    double total_loss = 0.0;
    double threshold = 0.0;
    Verdict::Label verdict = Verdict::Label::kUnsatisfiable;
};

struct SeparationReport {
    std::vector<SeparationRow> rows;
    int trials = 0;
    double satisfiable_freq_planted = 0.0;
    double satisfiable_freq_uncoverable = 0.0;
    double mean_loss_planted = 0.0;
    double mean_loss_uncoverable = 0.0;
};

// Runs the distinguisher on a planted and an uncoverable instance across
// `trials` independent seeds each and tallies verdict frequencies.
SeparationReport separation_experiment(const SetCoverInstance& planted,
                                       const SetCoverInstance& uncoverable,
                                       const DistinguisherConfig& config, int trials);
SeparationReport separation_experiment(const SetCoverInstance& planted,
                                       const SetCoverInstance& uncoverable,
                                       const DistinguisherConfig& config, int trials,
                                       const LearnerFactory& factory);

// CSV with header trial,instance_kind,total_loss,threshold,verdict.
void write_separation_csv(const std::string& path, const SeparationReport& report);

}  // namespace osr
