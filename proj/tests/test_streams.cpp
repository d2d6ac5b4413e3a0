#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "osr/streams.hpp"
#include "osr/types.hpp"

using namespace osr;

namespace {

SubsetLex make_subset(std::vector<int> members, int d) {
    SubsetLex s;
    s.d = d;
    s.k = static_cast<int>(members.size());
    s.members = std::move(members);
    return s;
}

SetCoverInstance from_columns(int m, const std::vector<std::vector<int>>& cols) {
    SetCoverInstance inst = SetCoverInstance::zeros(m, static_cast<int>(cols.size()));
    for (int c = 0; c < inst.d; ++c)
        for (int r = 0; r < m; ++r) inst.set(r, c, static_cast<std::uint8_t>(cols[static_cast<std::size_t>(c)][static_cast<std::size_t>(r)]));
    return inst;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

}  // namespace

TEST_CASE("hand instance from the planted family behaves like the algebra says") {
    // planted columns (1,0), (0,1); decoys (1,1), (0,0)
    const SetCoverInstance inst = from_columns(2, {{1, 0}, {0, 1}, {1, 1}, {0, 0}});
    const SubsetLex witness = make_subset({0, 1}, 4);
    CHECK(verify_exact_cover(inst, witness));

    // M . (1/sqrt2, 1/sqrt2, 0, 0) = (1/sqrt2, 1/sqrt2)
    const std::vector<double> w = witness_weight_vector(inst, witness);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int row = 0; row < inst.m; ++row) {
        double acc = 0.0;
        for (int col = 0; col < inst.d; ++col) acc += inst.at(row, col) * w[static_cast<std::size_t>(col)];
        CHECK(acc == doctest::Approx(inv_sqrt2).epsilon(1e-15));
    }

    // pairing a planted column with the all-ones decoy double-covers row 0
    CHECK_FALSE(verify_exact_cover(inst, make_subset({0, 2}, 4)));
    // the all-ones decoy plus the empty decoy happens to cover exactly once
    CHECK(verify_exact_cover(inst, make_subset({2, 3}, 4)));
    CHECK_FALSE(verify_exact_cover(inst, make_subset({}, 4)));
}

TEST_CASE("planted generator output always verifies") {
    Rng rng(2);
    for (int trial = 0; trial < 40; ++trial) {
        const int m = 2 + rng.uniform_int(9);
        const int k = 1 + rng.uniform_int(std::min(m, 4));
        const int extra = rng.uniform_int(5);
        auto [inst, cert] = gen_planted_exact_cover(m, k, extra, rng);
        CHECK(inst.d == k + extra);
        REQUIRE(cert.witness.has_value());
        CHECK(cert.kind == CoverCertificate::Kind::kExactCover);
        CHECK(cert.witness->k == k);
        CHECK(verify_exact_cover(inst, *cert.witness));
    }
    CHECK_THROWS_AS(gen_planted_exact_cover(2, 3, 0, rng), std::invalid_argument);
}

TEST_CASE("planted generator with m = k plants a permuted identity") {
    Rng rng(5);
    auto [inst, cert] = gen_planted_exact_cover(4, 4, 2, rng);
    REQUIRE(cert.witness.has_value());
    // every witness column is a distinct singleton indicator
    std::vector<bool> covered(4, false);
    for (int col : cert.witness->members) {
        int ones = 0, where = -1;
        for (int r = 0; r < 4; ++r)
            if (inst.at(r, col)) {
                ++ones;
                where = r;
            }
        CHECK(ones == 1);
        covered[static_cast<std::size_t>(where)] = true;
    }
    for (bool c : covered) CHECK(c);
}

TEST_CASE("uncoverable generator certifies within its try budget") {
    Rng rng(7);
    for (int trial = 0; trial < 15; ++trial) {
        const int m = 3 + rng.uniform_int(4);
        const int d = 5 + rng.uniform_int(5);
        const int k_prime = 2 + rng.uniform_int(3);
        auto [inst, cert] = gen_uncoverable(m, d, k_prime, rng, 50);
        CHECK(cert.kind == CoverCertificate::Kind::kNoCover);
        CHECK(cert.budget == k_prime);
        CHECK(verify_no_cover(inst, k_prime));
    }
    CHECK_THROWS_WITH_AS(gen_uncoverable(3, 5, 2, rng, 0), doctest::Contains("0 tries"),
                         std::runtime_error);
}

TEST_CASE("verify_no_cover closed cases") {
    CHECK(verify_no_cover(SetCoverInstance::zeros(2, 3), 2));

    // identity: the full column set covers everything
    const SetCoverInstance identity = from_columns(3, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
    CHECK_FALSE(verify_no_cover(identity, 3));

    // the pair {(0,0,1), (1,1,0)} covers everything here
    const SetCoverInstance coverable = from_columns(3, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 0}});
    CHECK_FALSE(verify_no_cover(coverable, 2));

    // singleton columns only: all three rows need three distinct columns
    const SetCoverInstance tri = from_columns(3, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0, 0, 0}});
    CHECK(verify_no_cover(tri, 2));
    CHECK_FALSE(verify_no_cover(tri, 3));

    // all columns equal: second row never covered
    const SetCoverInstance degenerate = from_columns(2, {{1, 0}, {1, 0}, {1, 0}});
    CHECK(verify_no_cover(degenerate, 3));

    CHECK_THROWS_WITH_AS(verify_no_cover(SetCoverInstance::zeros(2, 50), 25),
                         doctest::Contains("budget"), std::invalid_argument);
}

TEST_CASE("zero-column padding preserves both properties") {
    Rng rng(11);
    auto [planted, cert] = gen_planted_exact_cover(6, 2, 3, rng);
    const SetCoverInstance same = pad_zero_columns(planted, 0);
    CHECK(same.cells == planted.cells);
    CHECK(same.d == planted.d);

    const SetCoverInstance padded = pad_zero_columns(planted, 3);
    CHECK(padded.d == planted.d + 3);
    SubsetLex witness = *cert.witness;
    witness.d = padded.d;
    CHECK(verify_exact_cover(padded, witness));

    auto [uncov, cert2] = gen_uncoverable(4, 6, 3, rng, 50);
    const SetCoverInstance padded2 = pad_zero_columns(uncov, 5);
    CHECK(verify_no_cover(padded2, 3));
}

TEST_CASE("hardness stream emits signed scaled rows") {
    SUBCASE("single-row instance") {
        const SetCoverInstance inst = from_columns(1, {{1}, {1}});
        HardnessStream stream(inst, 1, Rng(3));
        const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
        LabeledExample ex;
        bool saw_plus = false, saw_minus = false;
        for (int t = 0; t < 200; ++t) {
            stream.next(ex);
            const double sign = ex.y > 0 ? 1.0 : -1.0;
            CHECK(ex.x[0] == sign * inv_sqrt2);
            CHECK(ex.x[1] == sign * inv_sqrt2);
            CHECK(ex.y == sign * inv_sqrt2);  // k = 1 so y = sigma/sqrt(d)
            (sign > 0 ? saw_plus : saw_minus) = true;
        }
        CHECK(saw_plus);
        CHECK(saw_minus);
    }
    SUBCASE("all-zero rows still carry labels") {
        SetCoverInstance inst = SetCoverInstance::zeros(1, 4);
        HardnessStream stream(inst, 2, Rng(4));
        const double want = 1.0 / std::sqrt(4.0) * (1.0 / std::sqrt(2.0));
        LabeledExample ex;
        for (int t = 0; t < 50; ++t) {
            stream.next(ex);
            for (double v : ex.x) CHECK(v == 0.0);
            CHECK(std::fabs(ex.y) == want);
        }
    }
}

TEST_CASE("hardness stream law: uniform rows and signs, bounded examples") {
    Rng gen(13);
    auto [inst, cert] = gen_planted_exact_cover(4, 2, 2, gen);
    HardnessStream stream(inst, 2, Rng(14));
    LabeledExample ex;
    const int draws = 100000;
    int positive = 0;
    std::vector<int> row_counts(4, 0);
    for (int t = 0; t < draws; ++t) {
        stream.next(ex);
        if (ex.y > 0) ++positive;
        CHECK(squared_norm(ex.x) <= 1.0 + 1e-12);
        CHECK(std::fabs(ex.y) <= 1.0);
        // identify the sampled row by matching the support pattern
        int match = -1;
        for (int r = 0; r < inst.m; ++r) {
            bool same = true;
            for (int c = 0; c < inst.d; ++c) same &= ((ex.x[static_cast<std::size_t>(c)] != 0.0) == (inst.at(r, c) != 0));
            if (same) {
                match = r;
                break;
            }
        }
        REQUIRE(match >= 0);
        ++row_counts[static_cast<std::size_t>(match)];
    }
    CHECK(std::fabs(static_cast<double>(positive) / draws - 0.5) <= 0.01);
    // row identification can alias identical support patterns; bucket by pattern
    std::vector<double> expected(4, 0.0);
    for (int r = 0; r < inst.m; ++r) {
        int first_same = r;
        for (int r2 = 0; r2 < r; ++r2) {
            bool same = true;
            for (int c = 0; c < inst.d; ++c) same &= (inst.at(r, c) == inst.at(r2, c));
            if (same) {
                first_same = r2;
                break;
            }
        }
        expected[static_cast<std::size_t>(first_same)] += 1.0 / inst.m;
    }
    for (int r = 0; r < inst.m; ++r) {
        if (expected[static_cast<std::size_t>(r)] > 0.0)
            CHECK(std::fabs(static_cast<double>(row_counts[static_cast<std::size_t>(r)]) / draws -
                            expected[static_cast<std::size_t>(r)]) <= 0.01);
    }
}

TEST_CASE("witness predictor has exactly zero loss on the hardness stream") {
    Rng gen(17);
    for (int trial = 0; trial < 5; ++trial) {
        const int m = 3 + gen.uniform_int(6);
        const int k = 1 + gen.uniform_int(3 < m ? 3 : m);
        auto [inst, cert] = gen_planted_exact_cover(m, k, 2 + gen.uniform_int(3), gen);
        const std::vector<double> w = witness_weight_vector(inst, *cert.witness);
        HardnessStream stream(inst, k, Rng(18 + trial));
        LabeledExample ex;
        for (int t = 0; t < 2000; ++t) {
            stream.next(ex);
            const double prediction = dot(w, ex.x);
            CHECK((prediction - ex.y) * (prediction - ex.y) == 0.0);
        }
    }
}

TEST_CASE("uncovered-probe fraction is at least 1/m for every query set") {
    Rng gen(23);
    auto [inst, cert] = gen_uncoverable(5, 7, 3, gen, 50);
    bool all_ok = true;
    for_each_subset(inst.d, 3, [&](const std::vector<int>& S) {
        int zero_rows = 0;
        for (int r = 0; r < inst.m; ++r) {
            bool all_zero = true;
            for (int c : S) all_zero &= (inst.at(r, c) == 0);
            if (all_zero) ++zero_rows;
        }
        all_ok &= (static_cast<double>(zero_rows) / inst.m >= 1.0 / inst.m - 1e-15);
        all_ok &= (zero_rows >= 1);
    });
    CHECK(all_ok);
}

TEST_CASE("stochastic stream degenerate and realizable cases") {
    SUBCASE("zero weights, zero noise") {
        StochasticModel model;
        model.true_weights = {0.0, 0.0, 0.0};
        StochasticStream stream(model, Rng(31));
        LabeledExample ex;
        for (int t = 0; t < 100; ++t) {
            stream.next(ex);
            CHECK(ex.y == 0.0);
            CHECK(squared_norm(ex.x) <= 1.0 + 1e-12);
        }
    }
    SUBCASE("noiseless labels are exactly the model's dot product") {
        Rng model_rng(33);
        const StochasticModel model = make_sparse_model(5, 2, 0.0, model_rng);
        StochasticStream stream(model, Rng(34));
        LabeledExample ex;
        for (int t = 0; t < 500; ++t) {
            stream.next(ex);
            CHECK(ex.y == dot(model.true_weights, ex.x));
        }
    }
}

TEST_CASE("noise level calibrates against a direct simulation") {
    Rng model_rng(41);
    StochasticModel model = make_sparse_model(6, 2, 0.1, model_rng);
    StochasticStream stream(model, Rng(42));
    LabeledExample ex;
    const int draws = 100000;
    double mean_sq = 0.0;
    for (int t = 0; t < draws; ++t) {
        stream.next(ex);
        const double resid = ex.y - dot(model.true_weights, ex.x);
        mean_sq += resid * resid;
    }
    mean_sq /= draws;

    // independent simulation of the same law
    Rng sim(43);
    double oracle = 0.0;
    for (int t = 0; t < draws; ++t) {
        // clipping happens at |w.x + n| > 1, which needs |w.x| close to 1
        const double noise = 0.1 * sim.normal();
        oracle += noise * noise;
    }
    oracle /= draws;
    CHECK(std::fabs(mean_sq - oracle) <= 0.15 * oracle);
}

TEST_CASE("instance files round-trip bit-exactly") {
    Rng gen(51);
    auto [inst, cert] = gen_planted_exact_cover(5, 2, 3, gen);
    const std::string path_a = "roundtrip_a.txt";
    const std::string path_b = "roundtrip_b.txt";

    write_instance(path_a, inst, cert.witness);
    const InstanceFile loaded = read_instance(path_a);
    CHECK(loaded.inst.m == inst.m);
    CHECK(loaded.inst.d == inst.d);
    CHECK(loaded.inst.cells == inst.cells);
    REQUIRE(loaded.witness.has_value());
    CHECK(loaded.witness->members == cert.witness->members);
    write_instance(path_b, loaded.inst, loaded.witness);
    CHECK(slurp(path_a) == slurp(path_b));

    // no witness line
    write_instance(path_a, inst, std::nullopt);
    const InstanceFile bare = read_instance(path_a);
    CHECK_FALSE(bare.witness.has_value());
    CHECK(bare.inst.cells == inst.cells);

    std::remove(path_a.c_str());
    std::remove(path_b.c_str());
}

TEST_CASE("instance file parse errors carry the path") {
    const std::string path = "bad_instance.txt";
    std::ofstream(path) << "2 2\n1 0\n";
    CHECK_THROWS_WITH_AS(read_instance(path), doctest::Contains(path.c_str()), std::runtime_error);
    std::ofstream(path) << "2 2\n1 0\n0 7\n";
    CHECK_THROWS_AS(read_instance(path), std::runtime_error);
    CHECK_THROWS_AS(read_instance("no_such_file_here.txt"), std::runtime_error);
    std::remove(path.c_str());
}
