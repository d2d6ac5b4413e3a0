#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "osr/harness.hpp"

namespace osr {

namespace {

// Relative output paths land in OSR_OUT_DIR when it is set.
std::string resolve_out(const std::string& path) {
    if (path.empty() || path.front() == '/') return path;
    const char* dir = std::getenv("OSR_OUT_DIR");
    if (!dir || !*dir) return path;
    std::string out(dir);
    if (out.back() != '/') out += '/';
    return out + path;
}

std::string default_summary_path(const std::string& out_path) {
    const std::string suffix = ".csv";
    if (out_path.size() > suffix.size() &&
        out_path.compare(out_path.size() - suffix.size(), suffix.size(), suffix) == 0)
        return out_path.substr(0, out_path.size() - suffix.size()) + ".summary.csv";
    return out_path + ".summary.csv";
}

LearnerSpec::Kind parse_learner_kind(const std::string& name) {
    if (name == "algorithm1") return LearnerSpec::Kind::kAlgorithm1;
    if (name == "zero") return LearnerSpec::Kind::kZero;
    if (name == "cheat") return LearnerSpec::Kind::kCheatOracle;
    if (name == "random-subset") return LearnerSpec::Kind::kRandomSubset;
    throw CLI::ValidationError("--learner", "unknown learner '" + name + "'");
}

struct GenInstanceArgs {
    std::string kind;
    int m = 0;
    int k = 2;
    int extra = 0;
    int d = 0;
    int k_prime = 0;
    int max_tries = 100;
    int pad = 0;
    std::uint64_t seed = 0;
    std::string out;
};

int run_gen_instance(const GenInstanceArgs& args) {
    Rng rng(derive_seed(args.seed, 0x67656eULL));
    SetCoverInstance inst;
    std::optional<SubsetLex> witness;
    if (args.kind == "planted") {
        auto [generated, cert] = gen_planted_exact_cover(args.m, args.k, args.extra, rng);
        inst = std::move(generated);
        witness = cert.witness;
    } else if (args.kind == "uncoverable") {
        auto [generated, cert] = gen_uncoverable(args.m, args.d, args.k_prime, rng, args.max_tries);
        inst = std::move(generated);
    } else {
        std::fprintf(stderr, "error: --kind must be planted or uncoverable\n");
        return 1;
    }
    if (args.pad > 0) {
        inst = pad_zero_columns(inst, args.pad);
        if (witness) witness->d = inst.d;  // witness columns keep their positions
    }
    write_instance(resolve_out(args.out), inst, witness);
    std::printf("wrote %s: m=%d d=%d%s\n", resolve_out(args.out).c_str(), inst.m, inst.d,
                witness ? " (with witness)" : "");
    return 0;
}

struct VerifyInstanceArgs {
    std::string path;
    bool exact_cover = false;
    bool no_cover = false;
    int k_prime = 0;
};

int run_verify_instance(const VerifyInstanceArgs& args) {
    const InstanceFile file = read_instance(args.path);
    if (args.exact_cover) {
        if (!file.witness) {
            std::fprintf(stderr, "error: %s carries no witness line to verify\n", args.path.c_str());
            return 1;
        }
        if (!verify_exact_cover(file.inst, *file.witness)) {
            std::printf("exact-cover: FAIL\n");
            return 1;
        }
        std::printf("exact-cover: OK\n");
    }
    if (args.no_cover) {
        if (!verify_no_cover(file.inst, args.k_prime)) {
            std::printf("no-cover(k'=%d): FAIL\n", args.k_prime);
            return 1;
        }
        std::printf("no-cover(k'=%d): OK\n", args.k_prime);
    }
    return 0;
}

struct RegretArgs {
    OsrConfig osr;
    std::string stream = "stochastic";
    std::string learner = "algorithm1";
    double noise = 0.0;
    std::uint64_t model_seed = 0;
    bool model_seed_set = false;
    std::string instance_path;
    std::string out;
    std::string summary_out;
    double eta_hedge = 0.0;
    double eta_sgd = 0.0;
    int seeds = 1;
};

std::string with_seed_suffix(const std::string& path, int index) {
    const std::string suffix = ".csv";
    if (path.size() > suffix.size() &&
        path.compare(path.size() - suffix.size(), suffix.size(), suffix) == 0)
        return path.substr(0, path.size() - suffix.size()) + "_seed" + std::to_string(index) + ".csv";
    return path + "_seed" + std::to_string(index);
}

int run_regret(RegretArgs& args) {
    if (args.seeds < 1) {
        std::fprintf(stderr, "error: --seeds must be >= 1\n");
        return 1;
    }
    ExperimentConfig config;
    config.osr = args.osr;
    if (args.eta_hedge > 0.0) config.osr.eta_hedge_override = args.eta_hedge;
    if (args.eta_sgd > 0.0) config.osr.eta_sgd_override = args.eta_sgd;
    config.learner.kind = parse_learner_kind(args.learner);

    config.stream.noise_level = args.noise;
    if (args.stream == "stochastic") {
        config.stream.kind = StreamSpec::Kind::kStochastic;
    } else if (args.stream == "zeros") {
        config.stream.kind = StreamSpec::Kind::kZeros;
    } else if (args.stream == "hardness") {
        config.stream.kind = StreamSpec::Kind::kHardness;
        config.stream.instance_path = args.instance_path;
    } else {
        std::fprintf(stderr, "error: --stream must be stochastic, zeros, or hardness\n");
        return 1;
    }
    const std::string out_base = resolve_out(args.out);
    const std::string summary_base = resolve_out(args.summary_out.empty() ? default_summary_path(args.out)
                                                                          : args.summary_out);

    std::vector<double> regrets;
    for (int s = 0; s < args.seeds; ++s) {
        config.osr.seed = args.osr.seed + static_cast<std::uint64_t>(s);
        config.stream.seed = derive_seed(config.osr.seed, 0x737472ULL);
        config.stream.model_seed =
            args.model_seed_set ? args.model_seed : derive_seed(config.osr.seed, 0x6d646cULL);
        config.out_path = args.seeds == 1 ? out_base : with_seed_suffix(out_base, s);
        config.summary_path = args.seeds == 1 ? summary_base : with_seed_suffix(summary_base, s);
        const RegretReport report = run_experiment(config);
        regrets.push_back(report.final_regret);
        std::printf("seed=%llu rounds=%lld total_loss=%.17g comparator_loss=%.17g regret=%.17g\n",
                    static_cast<unsigned long long>(config.osr.seed), args.osr.T, report.total_loss,
                    report.comparator_loss, report.final_regret);
        std::printf("wrote %s and %s\n", config.out_path.c_str(), config.summary_path.c_str());
    }
    if (args.seeds > 1) {
        double mean = 0.0;
        for (double r : regrets) mean += r;
        mean /= regrets.size();
        double var = 0.0;
        for (double r : regrets) var += (r - mean) * (r - mean);
        const double stderr_mean = std::sqrt(var / (regrets.size() - 1.0) / regrets.size());
        std::printf("regret over %d seeds: mean=%.6g stderr=%.6g\n", args.seeds, mean, stderr_mean);
    }
    return 0;
}

struct DistinguishArgs {
    std::string instance_path;
    std::string instance_b_path;
    long long T = 0;
    double threshold = 0.0;
    int k = 0;
    int k_prime = 0;
    std::uint64_t seed = 0;
    int trials = 1;
    std::string learner = "algorithm1";
    std::string out;
    double eta_hedge = 0.0;
    double eta_sgd = 0.0;
};

int run_distinguish(DistinguishArgs& args) {
    const InstanceFile file = read_instance(args.instance_path);
    int k = args.k;
    if (k == 0) {
        if (!file.witness) {
            std::fprintf(stderr, "error: %s has no witness; pass --k explicitly\n",
                         args.instance_path.c_str());
            return 1;
        }
        k = file.witness->k;
    }
    const int k_prime = args.k_prime == 0 ? k + 2 : args.k_prime;

    DistinguisherConfig config;
    config.T = args.T;
    config.threshold = args.threshold;
    config.seed = args.seed;
    config.instance = file.inst;
    config.learner.d = file.inst.d;
    config.learner.k = k;
    config.learner.k_prime = k_prime;
    config.learner.T = args.T;
    config.learner.seed = args.seed;
    if (args.eta_hedge > 0.0) config.learner.eta_hedge_override = args.eta_hedge;
    if (args.eta_sgd > 0.0) config.learner.eta_sgd_override = args.eta_sgd;

    if (args.instance_b_path.empty()) {
        // cheat oracle needs the stream seed, which run_distinguisher derives
        DistinguisherConfig cfg = config;
        const Verdict verdict =
            args.learner == "algorithm1"
                ? run_distinguisher(cfg)
                : run_distinguisher(cfg, [&](const OsrConfig& learner_cfg) {
                      const LearnerSpec::Kind kind = parse_learner_kind(args.learner);
                      if (kind == LearnerSpec::Kind::kZero) return std::unique_ptr<OnlineLearner>(new ZeroLearner());
                      if (kind == LearnerSpec::Kind::kRandomSubset)
                          return std::unique_ptr<OnlineLearner>(new RandomSubsetLearner(learner_cfg));
                      return std::unique_ptr<OnlineLearner>(new CheatOracleLearner(
                          std::make_unique<HardnessStream>(cfg.instance, learner_cfg.k,
                                                           Rng(derive_seed(cfg.seed, 1)))));
                  });
        std::printf("verdict=%s total_loss=%.17g threshold=%.17g\n", to_string(verdict.label),
                    verdict.total_loss, verdict.threshold);
        return 0;
    }

    const InstanceFile file_b = read_instance(args.instance_b_path);
    if (file_b.inst.d != file.inst.d) {
        std::fprintf(stderr, "error: instances have different d (%d vs %d)\n", file.inst.d,
                     file_b.inst.d);
        return 1;
    }
    const SeparationReport report =
        separation_experiment(file.inst, file_b.inst, config, args.trials);
    std::printf("planted: satisfiable %.3f of %d trials, mean loss %.6g\n",
                report.satisfiable_freq_planted, report.trials, report.mean_loss_planted);
    std::printf("uncoverable: satisfiable %.3f of %d trials, mean loss %.6g\n",
                report.satisfiable_freq_uncoverable, report.trials, report.mean_loss_uncoverable);
    if (!args.out.empty()) {
        write_separation_csv(resolve_out(args.out), report);
        std::printf("wrote %s\n", resolve_out(args.out).c_str());
    }
    return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"online sparse regression experiments"};
    app.require_subcommand(1);
    app.set_config("--config");

    GenInstanceArgs gen;
    CLI::App* gen_cmd = app.add_subcommand("gen-instance", "generate a set-cover instance file");
    gen_cmd->add_option("--kind", gen.kind, "planted | uncoverable")->required();
    gen_cmd->add_option("--m", gen.m, "ground-set elements")->required();
    gen_cmd->add_option("--k", gen.k, "planted cover size (planted)");
    gen_cmd->add_option("--extra", gen.extra, "decoy columns (planted)");
    gen_cmd->add_option("--d", gen.d, "total columns (uncoverable)");
    gen_cmd->add_option("--kprime", gen.k_prime, "cover budget to rule out (uncoverable)");
    gen_cmd->add_option("--max-tries", gen.max_tries, "generation attempts (uncoverable)");
    gen_cmd->add_option("--pad", gen.pad, "append this many all-zero columns");
    gen_cmd->add_option("--seed", gen.seed, "random seed");
    gen_cmd->add_option("--out", gen.out, "output path")->required();

    VerifyInstanceArgs verify;
    CLI::App* verify_cmd = app.add_subcommand("verify-instance", "check cover properties of an instance file");
    verify_cmd->add_option("file", verify.path, "instance file")->required();
    verify_cmd->add_flag("--exact-cover", verify.exact_cover, "verify the witness covers each element exactly once");
    verify_cmd->add_flag("--no-cover", verify.no_cover, "verify no k' columns cover all elements");
    verify_cmd->add_option("--kprime", verify.k_prime, "budget for --no-cover");

    RegretArgs regret;
    CLI::App* regret_cmd = app.add_subcommand("regret", "run a learner and measure regret");
    regret_cmd->add_option("--d", regret.osr.d)->required();
    regret_cmd->add_option("--k", regret.osr.k)->required();
    regret_cmd->add_option("--kprime", regret.osr.k_prime)->required();
    regret_cmd->add_option("--T", regret.osr.T)->required();
    regret_cmd->add_option("--seed", regret.osr.seed);
    regret_cmd->add_option("--stream", regret.stream, "stochastic | zeros | hardness");
    regret_cmd->add_option("--learner", regret.learner, "algorithm1 | zero | cheat | random-subset");
    regret_cmd->add_option("--noise", regret.noise, "label noise sigma (stochastic)");
    regret_cmd->add_option("--model-seed", regret.model_seed)->each([&](const std::string&) {
        regret.model_seed_set = true;
    });
    regret_cmd->add_option("--instance", regret.instance_path, "instance file (hardness stream)");
    regret_cmd->add_option("--out", regret.out, "per-round CSV path")->required();
    regret_cmd->add_option("--summary-out", regret.summary_out, "summary CSV path");
    regret_cmd->add_option("--eta-hedge", regret.eta_hedge, "override the distribution learning rate");
    regret_cmd->add_option("--eta-sgd", regret.eta_sgd, "override the SGD learning rate");
    regret_cmd->add_option("--seeds", regret.seeds, "run this many consecutive seeds and report mean regret");

    DistinguishArgs dist;
    CLI::App* dist_cmd = app.add_subcommand("distinguish", "loss-threshold experiment on hardness streams");
    dist_cmd->add_option("--instance", dist.instance_path, "instance file")->required();
    dist_cmd->add_option("--instance-b", dist.instance_b_path, "second instance: run the separation experiment");
    dist_cmd->add_option("--T", dist.T, "rounds")->required();
    dist_cmd->add_option("--threshold", dist.threshold, "loss threshold (default T/(2mdk))");
    dist_cmd->add_option("--k", dist.k, "sparsity (default: witness size)");
    dist_cmd->add_option("--kprime", dist.k_prime, "probe budget (default k+2)");
    dist_cmd->add_option("--seed", dist.seed);
    dist_cmd->add_option("--trials", dist.trials, "trials per instance (separation)");
    dist_cmd->add_option("--learner", dist.learner, "algorithm1 | zero | cheat | random-subset");
    dist_cmd->add_option("--out", dist.out, "separation report CSV");
    dist_cmd->add_option("--eta-hedge", dist.eta_hedge);
    dist_cmd->add_option("--eta-sgd", dist.eta_sgd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (gen_cmd->parsed()) return run_gen_instance(gen);
        if (verify_cmd->parsed()) return run_verify_instance(verify);
        if (regret_cmd->parsed()) return run_regret(regret);
        if (dist_cmd->parsed()) return run_distinguish(dist);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}

}  // namespace osr
