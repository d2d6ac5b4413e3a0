#include "osr/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace osr {

namespace {

constexpr std::int64_t kComparatorBudget = 1000000;

// Cholesky solve of an SPD n x n system; returns false on a non-positive
// pivot (singular or indefinite input).
bool cholesky_solve(std::vector<double> a, std::vector<double> b, int n, std::vector<double>& out) {
    for (int j = 0; j < n; ++j) {
        double diag = a[static_cast<std::size_t>(j) * n + j];
        for (int p = 0; p < j; ++p) diag -= a[static_cast<std::size_t>(j) * n + p] * a[static_cast<std::size_t>(j) * n + p];
        if (!(diag > 0.0)) return false;
        const double root = std::sqrt(diag);
        a[static_cast<std::size_t>(j) * n + j] = root;
        for (int i = j + 1; i < n; ++i) {
            double v = a[static_cast<std::size_t>(i) * n + j];
            for (int p = 0; p < j; ++p) v -= a[static_cast<std::size_t>(i) * n + p] * a[static_cast<std::size_t>(j) * n + p];
            a[static_cast<std::size_t>(i) * n + j] = v / root;
        }
    }
    // forward then backward substitution
    for (int i = 0; i < n; ++i) {
        double v = b[static_cast<std::size_t>(i)];
        for (int p = 0; p < i; ++p) v -= a[static_cast<std::size_t>(i) * n + p] * b[static_cast<std::size_t>(p)];
        b[static_cast<std::size_t>(i)] = v / a[static_cast<std::size_t>(i) * n + i];
    }
    for (int i = n - 1; i >= 0; --i) {
        double v = b[static_cast<std::size_t>(i)];
        for (int p = i + 1; p < n; ++p) v -= a[static_cast<std::size_t>(p) * n + i] * b[static_cast<std::size_t>(p)];
        b[static_cast<std::size_t>(i)] = v / a[static_cast<std::size_t>(i) * n + i];
    }
    out = std::move(b);
    return true;
}

std::vector<double> ridge_solution(const std::vector<double>& gram, const std::vector<double>& rhs, int n,
                                   double lambda) {
    std::vector<double> a = gram;
    for (int i = 0; i < n; ++i) a[static_cast<std::size_t>(i) * n + i] += lambda;
    std::vector<double> w;
    if (!cholesky_solve(std::move(a), rhs, n, w))
        throw std::runtime_error("solve_ball_constrained_ls: regularized system not positive definite");
    return w;
}

double norm_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double e : v) s += e * e;
    return std::sqrt(s);
}

}  // namespace

std::vector<double> solve_ball_constrained_ls(const std::vector<double>& gram, const std::vector<double>& rhs,
                                              int n) {
    if (n == 0) return {};
    double trace = 0.0;
    for (int i = 0; i < n; ++i) trace += gram[static_cast<std::size_t>(i) * n + i];

    // interior case: unregularized solution inside the ball
    {
        std::vector<double> w;
        std::vector<double> a = gram;
        if (cholesky_solve(std::move(a), rhs, n, w) && norm_of(w) <= 1.0) return w;
    }
    // near-singular gram: the tiny-ridge solution approximates the minimum
    // norm minimizer, which is what the limit lambda -> 0 gives
    const double eps_lambda = 1e-13 * (1.0 + trace);
    {
        std::vector<double> w = ridge_solution(gram, rhs, n, eps_lambda);
        if (norm_of(w) <= 1.0) return w;
    }
    // boundary case: bisect on lambda, ||w(lambda)|| is monotone decreasing
    double lo = eps_lambda;
    double hi = std::max(1.0, norm_of(rhs));  // ||w(hi)|| <= ||rhs||/hi <= 1
    while (norm_of(ridge_solution(gram, rhs, n, hi)) > 1.0) hi *= 2.0;
    std::vector<double> w;
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        w = ridge_solution(gram, rhs, n, mid);
        const double norm = norm_of(w);
        if (std::fabs(norm - 1.0) <= 1e-10) return w;
        if (norm > 1.0)
            lo = mid;
        else
            hi = mid;
    }
    return ridge_solution(gram, rhs, n, hi);  // guaranteed inside the ball
}

ComparatorResult comparator_loss(const std::vector<LabeledExample>& examples, int d, int k) {
    if (binomial(d, k) > kComparatorBudget)
        throw std::invalid_argument("comparator_loss: C(" + std::to_string(d) + ", " + std::to_string(k) +
                                    ") subsets exceed the enumeration budget of " +
                                    std::to_string(kComparatorBudget) + "; use smaller d or k");
    for (const LabeledExample& ex : examples)
        if (static_cast<int>(ex.x.size()) != d)
            throw std::invalid_argument("comparator_loss: example dimension mismatch");

    double label_energy = 0.0;
    for (const LabeledExample& ex : examples) label_energy += ex.y * ex.y;

    ComparatorResult best;
    best.weights.assign(static_cast<std::size_t>(d), 0.0);
    best.loss = label_energy;  // the empty predictor w = 0
    bool first = true;

    std::vector<double> gram(static_cast<std::size_t>(k) * k);
    std::vector<double> rhs(static_cast<std::size_t>(k));
    for_each_subset(d, k, [&](const std::vector<int>& members) {
        std::fill(gram.begin(), gram.end(), 0.0);
        std::fill(rhs.begin(), rhs.end(), 0.0);
        for (const LabeledExample& ex : examples) {
            for (int a = 0; a < k; ++a) {
                const double xa = ex.x[static_cast<std::size_t>(members[static_cast<std::size_t>(a)])];
                rhs[static_cast<std::size_t>(a)] += ex.y * xa;
                for (int b = a; b < k; ++b)
                    gram[static_cast<std::size_t>(a) * k + b] += xa * ex.x[static_cast<std::size_t>(members[static_cast<std::size_t>(b)])];
            }
        }
        for (int a = 0; a < k; ++a)
            for (int b = 0; b < a; ++b) gram[static_cast<std::size_t>(a) * k + b] = gram[static_cast<std::size_t>(b) * k + a];

        const std::vector<double> w = solve_ball_constrained_ls(gram, rhs, k);
        double loss = label_energy;
        for (int a = 0; a < k; ++a) {
            loss -= 2.0 * rhs[static_cast<std::size_t>(a)] * w[static_cast<std::size_t>(a)];
            for (int b = 0; b < k; ++b)
                loss += w[static_cast<std::size_t>(a)] * gram[static_cast<std::size_t>(a) * k + b] * w[static_cast<std::size_t>(b)];
        }
        loss = std::max(loss, 0.0);  // a sum of squares; rounding can dip a few ulp below zero
        if (first || loss < best.loss) {
            first = false;
            best.loss = loss;
            best.subset.d = d;
            best.subset.k = k;
            best.subset.members = members;
            std::fill(best.weights.begin(), best.weights.end(), 0.0);
            for (int a = 0; a < k; ++a)
                best.weights[static_cast<std::size_t>(members[static_cast<std::size_t>(a)])] = w[static_cast<std::size_t>(a)];
        }
    });
    return best;
}

// -- Baselines ---------------------------------------------------------------

double CheatOracleLearner::predict(const ProbedVector&) {
    LabeledExample ex;
    if (!replay_->next(ex)) throw std::runtime_error("CheatOracleLearner: replay stream exhausted");
    pending_label_ = ex.y;
    return ex.y;
}

void CheatOracleLearner::receive_label(double label) {
    if (label != pending_label_)
        throw std::runtime_error("CheatOracleLearner: replay diverged from the live stream");
}

FixedWeightLearner::FixedWeightLearner(std::vector<double> weights) : weights_(std::move(weights)) {
    for (std::size_t i = 0; i < weights_.size(); ++i)
        if (weights_[i] != 0.0) support_.push_back(static_cast<int>(i));
}

double FixedWeightLearner::predict(const ProbedVector& features) {
    double yhat = 0.0;
    for (int i : support_) yhat += weights_[static_cast<std::size_t>(i)] * features.at(i);
    return yhat;
}

RandomSubsetLearner::RandomSubsetLearner(const OsrConfig& config)
    : config_(config),
      params_(make_probe_parameters(config.d, config.k, config.k_prime)),
      experts_(config.d, config.k, config.eta_sgd(params_)),
      rng_(derive_seed(config.seed, 0x72616e64ULL)) {
    config_.validate();
}

std::vector<int> RandomSubsetLearner::announce_query() {
    const SubsetLex chosen = sample_uniform_subset(config_.d, config_.k, rng_);
    chosen_ = rank(chosen);
    probe_extra_ = sample_uniform_subset(config_.d, config_.k_prime - config_.k, rng_);
    return subset_union(chosen.members, probe_extra_.members);
}

double RandomSubsetLearner::predict(const ProbedVector& features) {
    features_ = features;
    const int* mem = experts_.members_of(chosen_.rank);
    const double* w = experts_.weights_of(chosen_.rank);
    double yhat = 0.0;
    for (int i = 0; i < config_.k; ++i) yhat += w[i] * features.at(mem[i]);
    return yhat;
}

void RandomSubsetLearner::receive_label(double label) {
    const MomentEstimate moments = build_moments(features_, label, probe_extra_, params_);
    update_all(experts_, moments);
}

// -- Experiments --------------------------------------------------------------

namespace {

// wraps a stream and keeps a full copy of everything emitted
class RecordingStream : public ExampleStream {
public:
    RecordingStream(ExampleStream& inner, std::vector<LabeledExample>& sink)
        : inner_(inner), sink_(sink) {}
    bool next(LabeledExample& out) override {
        if (!inner_.next(out)) return false;
        sink_.push_back(out);
        return true;
    }

private:
    ExampleStream& inner_;
    std::vector<LabeledExample>& sink_;
};

std::unique_ptr<ExampleStream> make_stream(const StreamSpec& spec, int d, int k) {
    switch (spec.kind) {
        case StreamSpec::Kind::kZeros:
            return std::make_unique<ZeroStream>(d);
        case StreamSpec::Kind::kStochastic: {
            Rng model_rng(derive_seed(spec.model_seed, 0x6d6f64ULL));
            StochasticModel model = make_sparse_model(d, k, spec.noise_level, model_rng);
            return std::make_unique<StochasticStream>(std::move(model), Rng(derive_seed(spec.seed, 0x73ULL)));
        }
        case StreamSpec::Kind::kHardness: {
            InstanceFile file = read_instance(spec.instance_path);
            if (file.inst.d != d)
                throw std::invalid_argument("stream: instance d=" + std::to_string(file.inst.d) +
                                            " does not match configured d=" + std::to_string(d));
            return std::make_unique<HardnessStream>(file.inst, k, Rng(derive_seed(spec.seed, 0x73ULL)));
        }
    }
    throw std::logic_error("make_stream: unknown stream kind");
}

std::unique_ptr<OnlineLearner> make_learner(const ExperimentConfig& config) {
    switch (config.learner.kind) {
        case LearnerSpec::Kind::kAlgorithm1:
            return std::make_unique<Algorithm1Learner>(config.osr);
        case LearnerSpec::Kind::kZero:
            return std::make_unique<ZeroLearner>();
        case LearnerSpec::Kind::kCheatOracle:
            return std::make_unique<CheatOracleLearner>(make_stream(config.stream, config.osr.d, config.osr.k));
        case LearnerSpec::Kind::kRandomSubset:
            return std::make_unique<RandomSubsetLearner>(config.osr);
    }
    throw std::logic_error("make_learner: unknown learner kind");
}

void write_rounds_csv(const std::string& path, const std::vector<DrivenRound>& rounds,
                      const std::vector<double>& cum_loss) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw std::runtime_error("run_experiment: cannot open " + path);
    std::fprintf(f, "t,loss,cum_loss,subset_rank\n");
    for (std::size_t i = 0; i < rounds.size(); ++i)
        std::fprintf(f, "%lld,%.17g,%.17g,%lld\n", rounds[i].t, rounds[i].loss, cum_loss[i],
                     static_cast<long long>(rounds[i].subset_rank));
    if (std::fclose(f) != 0) throw std::runtime_error("run_experiment: failed writing " + path);
}

void write_summary_csv(const std::string& path, const ExperimentConfig& config, const RegretReport& report) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw std::runtime_error("run_experiment: cannot open " + path);
    std::fprintf(f, "comparator_loss,final_regret,seed,d,k,kprime,T\n");
    std::fprintf(f, "%.17g,%.17g,%llu,%d,%d,%d,%lld\n", report.comparator_loss, report.final_regret,
                 static_cast<unsigned long long>(config.osr.seed), config.osr.d, config.osr.k,
                 config.osr.k_prime, config.osr.T);
    if (std::fclose(f) != 0) throw std::runtime_error("run_experiment: failed writing " + path);
}

}  // namespace

RegretReport run_experiment(const ExperimentConfig& config) {
    config.osr.validate();
    std::unique_ptr<ExampleStream> stream = make_stream(config.stream, config.osr.d, config.osr.k);
    std::vector<LabeledExample> full_copy;  // harness-side; the learner never sees it
    RecordingStream recording(*stream, full_copy);
    std::unique_ptr<OnlineLearner> learner = make_learner(config);

    RegretReport report;
    report.rounds = drive(*learner, recording, config.osr.T, config.osr.k_prime);
    report.cum_loss.resize(report.rounds.size());
    double cum = 0.0;
    for (std::size_t i = 0; i < report.rounds.size(); ++i) {
        cum += report.rounds[i].loss;
        report.cum_loss[i] = cum;
        report.max_coords_revealed = std::max(report.max_coords_revealed, report.rounds[i].coords_revealed);
    }
    report.total_loss = cum;

    const ComparatorResult comp = comparator_loss(full_copy, config.osr.d, config.osr.k);
    report.comparator_loss = comp.loss;
    report.comparator_weights = comp.weights;
    report.final_regret = report.total_loss - comp.loss;

    if (!config.out_path.empty()) write_rounds_csv(config.out_path, report.rounds, report.cum_loss);
    if (!config.summary_path.empty()) write_summary_csv(config.summary_path, config, report);
    return report;
}

}  // namespace osr
