#include "osr/learner.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace osr {

void OsrConfig::validate() const {
    if (k < 1 || k > k_prime || k_prime > d)
        throw std::invalid_argument("OsrConfig: require 1 <= k <= k' <= d, got d=" + std::to_string(d) +
                                    " k=" + std::to_string(k) + " k'=" + std::to_string(k_prime));
    if (k_prime < k + 2)
        throw std::invalid_argument("OsrConfig: k'=" + std::to_string(k_prime) +
                                    " must be at least k+2=" + std::to_string(k + 2));
    if (T < 0) throw std::invalid_argument("OsrConfig: negative horizon T=" + std::to_string(T));
    if (eta_hedge_override && *eta_hedge_override <= 0.0)
        throw std::invalid_argument("OsrConfig: eta_hedge_override must be positive");
    if (eta_sgd_override && *eta_sgd_override <= 0.0)
        throw std::invalid_argument("OsrConfig: eta_sgd_override must be positive");
}

double OsrConfig::eta_hedge(const ProbeParameters& params) const {
    if (eta_hedge_override) return *eta_hedge_override;
    return params.q * std::sqrt(std::log(static_cast<double>(d)) / static_cast<double>(T));
}

double OsrConfig::eta_sgd(const ProbeParameters& params) const {
    if (eta_sgd_override) return *eta_sgd_override;
    return params.q * std::sqrt(1.0 / static_cast<double>(T));
}

namespace {
const OsrConfig& validated(const OsrConfig& config) {
    config.validate();
    return config;
}
}  // namespace

SparseRegressionLearner::SparseRegressionLearner(const OsrConfig& config)
    : config_(validated(config)),
      params_(make_probe_parameters(config.d, config.k, config.k_prime)),
      dist_(init_uniform(config.d, config.k, config.eta_hedge(params_))),
      experts_(config.d, config.k, config.eta_sgd(params_)),
      rng_(derive_seed(config.seed, 0x6c6561726eULL)) {
    if (config_.T < 1)
        throw std::invalid_argument("SparseRegressionLearner: horizon T must be >= 1");
}

RoundQuery SparseRegressionLearner::begin_round() {
    if (rounds_done_ >= config_.T)
        throw std::logic_error("begin_round: horizon of " + std::to_string(config_.T) +
                               " rounds already completed");
    if (round_open_) throw std::logic_error("begin_round: previous round not finished");
    RoundQuery query;
    query.chosen_expert = sample_expert(dist_, rng_);
    query.probe_extra = sample_uniform_subset(config_.d, config_.k_prime - config_.k, rng_);
    const SubsetLex chosen = unrank(query.chosen_expert);
    std::vector<int> united = subset_union(chosen.members, query.probe_extra.members);
    query.query_set.d = config_.d;
    query.query_set.k = static_cast<int>(united.size());
    query.query_set.members = std::move(united);
    round_open_ = true;
    return query;
}

double SparseRegressionLearner::predict(const RoundQuery& query, const ProbedVector& x_probed) const {
    const int* mem = experts_.members_of(query.chosen_expert.rank);
    const double* w = experts_.weights_of(query.chosen_expert.rank);
    double yhat = 0.0;
    for (int i = 0; i < config_.k; ++i) yhat += w[i] * x_probed.at(mem[i]);
    return yhat;
}

RoundRecord SparseRegressionLearner::finish_round(const RoundQuery& query, const ProbedVector& x_probed,
                                                  double y) {
    if (!round_open_) throw std::logic_error("finish_round: no round in progress");
    if (!(std::fabs(y) <= 1.0))
        throw std::invalid_argument("finish_round: label " + std::to_string(y) + " outside [-1, 1]");

    const double prediction = predict(query, x_probed);
    const MomentEstimate moments = build_moments(x_probed, y, query.probe_extra, params_);

    // costs of all experts on their pre-update weight vectors
    std::vector<double> costs(static_cast<std::size_t>(experts_.num_experts()));
    for (std::int64_t id = 0; id < experts_.num_experts(); ++id) {
        const int* mem = experts_.members_of(id);
        const double* w = experts_.weights_of(id);
        double quad = 0.0;
        double lin = 0.0;
        for (int a = 0; a < config_.k; ++a) {
            lin += moments.yx_at(mem[a]) * w[a];
            for (int b = 0; b < config_.k; ++b) quad += w[a] * moments.xxt_at(mem[a], mem[b]) * w[b];
        }
        costs[static_cast<std::size_t>(id)] = quad - 2.0 * lin + y * y;
    }
    hedge_update(dist_, costs);
    update_all(experts_, moments);

    RoundRecord record;
    record.t = ++rounds_done_;
    record.prediction = prediction;
    record.label = y;
    record.loss = (prediction - y) * (prediction - y);
    record.query_set = query.query_set;
    round_open_ = false;
    return record;
}

std::vector<RoundRecord> run(const OsrConfig& config, ExampleStream& stream) {
    config.validate();
    std::vector<RoundRecord> records;
    if (config.T == 0) return records;
    SparseRegressionLearner learner(config);
    records.reserve(static_cast<std::size_t>(config.T));
    LabeledExample ex;
    for (long long t = 1; t <= config.T; ++t) {
        if (!stream.next(ex))
            throw std::runtime_error("run: example stream exhausted at round " + std::to_string(t) +
                                     " of " + std::to_string(config.T));
        const RoundQuery query = learner.begin_round();
        const ProbedVector probed = ProbedVector::from_dense(ex.x, query.query_set.members);
        records.push_back(learner.finish_round(query, probed, ex.y));
    }
    return records;
}

}  // namespace osr
