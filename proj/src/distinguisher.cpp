#include "osr/distinguisher.hpp"

#include <cstdio>
#include <stdexcept>

namespace osr {

std::vector<DrivenRound> drive(OnlineLearner& learner, ExampleStream& stream, long long rounds,
                               int budget) {
    std::vector<DrivenRound> out;
    out.reserve(static_cast<std::size_t>(rounds));
    LabeledExample ex;
    for (long long t = 1; t <= rounds; ++t) {
        if (!stream.next(ex))
            throw std::runtime_error("drive: example stream exhausted at round " + std::to_string(t));
        const std::vector<int> coords = learner.announce_query();
        if (static_cast<int>(coords.size()) > budget)
            throw std::runtime_error("drive: round " + std::to_string(t) + " announced " +
                                     std::to_string(coords.size()) + " coordinates, budget is " +
                                     std::to_string(budget));
        const ProbedVector probed = ProbedVector::from_dense(ex.x, coords);
        DrivenRound round;
        round.t = t;
        round.prediction = learner.predict(probed);
        round.label = ex.y;
        round.loss = (round.prediction - ex.y) * (round.prediction - ex.y);
        round.coords_revealed = static_cast<int>(coords.size());
        round.subset_rank = learner.chosen_subset_rank();
        learner.receive_label(ex.y);
        out.push_back(round);
    }
    return out;
}

namespace {

double default_threshold(const DistinguisherConfig& config) {
    return static_cast<double>(config.T) /
           (2.0 * config.instance.m * config.instance.d * config.learner.k);
}

}  // namespace

Verdict run_distinguisher(const DistinguisherConfig& config) {
    return run_distinguisher(config, [](const OsrConfig& cfg) {
        return std::make_unique<Algorithm1Learner>(cfg);
    });
}

Verdict run_distinguisher(const DistinguisherConfig& config, const LearnerFactory& factory) {
    if (config.T < 1) throw std::invalid_argument("run_distinguisher: T must be >= 1");
    if (config.instance.d != config.learner.d)
        throw std::invalid_argument("run_distinguisher: instance has d=" + std::to_string(config.instance.d) +
                                    " but learner is configured for d=" + std::to_string(config.learner.d));
    OsrConfig learner_cfg = config.learner;
    learner_cfg.T = config.T;
    learner_cfg.seed = derive_seed(config.seed, 2);
    learner_cfg.validate();

    HardnessStream stream(config.instance, learner_cfg.k, Rng(derive_seed(config.seed, 1)));
    std::unique_ptr<OnlineLearner> learner = factory(learner_cfg);

    const std::vector<DrivenRound> rounds = drive(*learner, stream, config.T, learner_cfg.k_prime);
    Verdict verdict;
    verdict.threshold = config.threshold > 0.0 ? config.threshold : default_threshold(config);
    verdict.total_loss = 0.0;
    for (const DrivenRound& r : rounds) verdict.total_loss += r.loss;
    verdict.label = verdict.total_loss <= verdict.threshold ? Verdict::Label::kSatisfiable
                                                            : Verdict::Label::kUnsatisfiable;
    return verdict;
}

SeparationReport separation_experiment(const SetCoverInstance& planted,
                                       const SetCoverInstance& uncoverable,
                                       const DistinguisherConfig& config, int trials) {
    return separation_experiment(planted, uncoverable, config, trials, [](const OsrConfig& cfg) {
        return std::make_unique<Algorithm1Learner>(cfg);
    });
}

SeparationReport separation_experiment(const SetCoverInstance& planted,
                                       const SetCoverInstance& uncoverable,
                                       const DistinguisherConfig& config, int trials,
                                       const LearnerFactory& factory) {
    if (trials < 1) throw std::invalid_argument("separation_experiment: trials must be >= 1");
    SeparationReport report;
    report.trials = trials;
    int satisfiable_planted = 0;
    int satisfiable_uncoverable = 0;
    for (int trial = 0; trial < trials; ++trial) {
        for (int side = 0; side < 2; ++side) {
            const bool is_planted = (side == 0);
            DistinguisherConfig trial_cfg = config;
            trial_cfg.instance = is_planted ? planted : uncoverable;
            trial_cfg.seed = derive_seed(config.seed, 1000ULL + 2ULL * static_cast<std::uint64_t>(trial) +
                                                          (is_planted ? 0ULL : 1ULL));
            const Verdict verdict = run_distinguisher(trial_cfg, factory);
            SeparationRow row;
            row.trial = trial;
            row.instance_kind = is_planted ? "planted" : "uncoverable";
            row.total_loss = verdict.total_loss;
            row.threshold = verdict.threshold;
            row.verdict = verdict.label;
            report.rows.push_back(row);
            if (verdict.label == Verdict::Label::kSatisfiable) {
                if (is_planted)
                    ++satisfiable_planted;
                else
                    ++satisfiable_uncoverable;
            }
            if (is_planted)
                report.mean_loss_planted += verdict.total_loss;
            else
                report.mean_loss_uncoverable += verdict.total_loss;
        }
    }
    report.satisfiable_freq_planted = static_cast<double>(satisfiable_planted) / trials;
    report.satisfiable_freq_uncoverable = static_cast<double>(satisfiable_uncoverable) / trials;
    report.mean_loss_planted /= trials;
    report.mean_loss_uncoverable /= trials;
    return report;
}

void write_separation_csv(const std::string& path, const SeparationReport& report) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw std::runtime_error("write_separation_csv: cannot open " + path);
    std::fprintf(f, "trial,instance_kind,total_loss,threshold,verdict\n");
    for (const SeparationRow& row : report.rows)
        std::fprintf(f, "%d,%s,%.17g,%.17g,%s\n", row.trial, row.instance_kind.c_str(), row.total_loss,
                     row.threshold, to_string(row.verdict));
    if (std::fclose(f) != 0) throw std::runtime_error("write_separation_csv: failed writing " + path);
}

}  // namespace osr
