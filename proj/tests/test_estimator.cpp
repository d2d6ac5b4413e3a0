#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "osr/estimator.hpp"
#include "osr/rng.hpp"

using namespace osr;

namespace {

SubsetLex make_subset(std::vector<int> members, int d) {
    SubsetLex s;
    s.d = d;
    s.k = static_cast<int>(members.size());
    s.members = std::move(members);
    return s;
}

ProbedVector probe(const std::vector<double>& x, const std::vector<int>& coords) {
    return ProbedVector::from_dense(x, coords);
}

// relative comparison; exact zeros must stay exact
void check_close_rel(double got, double want, double rel_tol) {
    if (want == 0.0) {
        CHECK(got == 0.0);
    } else {
        CHECK(std::fabs(got - want) <= rel_tol * std::fabs(want));
    }
}

std::vector<double> random_ball_vector(int d, Rng& rng) {
    std::vector<double> x(static_cast<std::size_t>(d));
    double n2 = 0.0;
    for (double& v : x) {
        v = rng.uniform_pm();
        n2 += v * v;
    }
    if (n2 > 1.0) {
        const double inv = 0.99 / std::sqrt(n2);
        for (double& v : x) v *= inv;
    }
    return x;
}

}  // namespace

TEST_CASE("probe parameters from the budget split") {
    const ProbeParameters a = make_probe_parameters(3, 1, 3);
    CHECK(a.p == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(a.q == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

    const ProbeParameters b = make_probe_parameters(4, 1, 3);
    CHECK(b.p == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(b.q == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK(b.q <= b.p);
    CHECK(b.p <= 1.0);
}

TEST_CASE("probe parameters reject starved budgets") {
    CHECK_THROWS_WITH_AS(make_probe_parameters(4, 1, 2), doctest::Contains("q would vanish"),
                         std::invalid_argument);
    CHECK_THROWS_AS(make_probe_parameters(4, 2, 5), std::invalid_argument);
    CHECK_THROWS_AS(make_probe_parameters(4, 0, 2), std::invalid_argument);
}

TEST_CASE("build_moments hand-checked example") {
    const ProbeParameters params = make_probe_parameters(3, 1, 3);  // p = 2/3, q = 1/3
    const std::vector<double> x = {0.5, 0.2, 123.0};  // third coordinate never probed
    const MomentEstimate m = build_moments(probe(x, {0, 1}), 1.0, make_subset({0, 1}, 3), params);

    CHECK(m.xxt_at(0, 0) == doctest::Approx(0.375).epsilon(1e-15));
    CHECK(m.xxt_at(1, 1) == doctest::Approx(0.06).epsilon(1e-15));
    CHECK(m.xxt_at(0, 1) == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(m.xxt_at(1, 0) == m.xxt_at(0, 1));
    CHECK(m.yx_at(0) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(m.yx_at(1) == doctest::Approx(0.3).epsilon(1e-15));
    for (int i = 0; i < 3; ++i) {
        CHECK(m.xxt_at(i, 2) == 0.0);
        CHECK(m.xxt_at(2, i) == 0.0);
    }
    CHECK(m.yx_at(2) == 0.0);
}

TEST_CASE("zero probed values give zero moments") {
    const ProbeParameters params = make_probe_parameters(4, 1, 3);
    const std::vector<double> x = {0.0, 0.0, 0.0, 0.9};
    const MomentEstimate m = build_moments(probe(x, {0, 1}), 0.5, make_subset({0, 1}, 4), params);
    for (double v : m.xxt) CHECK(v == 0.0);
    for (double v : m.yx) CHECK(v == 0.0);
}

TEST_CASE("missing probed coordinate is named") {
    const ProbeParameters params = make_probe_parameters(4, 1, 3);
    const std::vector<double> x = {0.1, 0.2, 0.3, 0.4};
    CHECK_THROWS_WITH_AS(build_moments(probe(x, {0}), 0.5, make_subset({0, 2}, 4), params),
                         doctest::Contains("2"), std::out_of_range);
}

TEST_CASE("label outside [-1,1] rejected") {
    const ProbeParameters params = make_probe_parameters(4, 1, 3);
    const std::vector<double> x = {0.1, 0.2, 0.3, 0.4};
    CHECK_THROWS_AS(build_moments(probe(x, {0, 1}), 1.5, make_subset({0, 1}, 4), params),
                    std::invalid_argument);
}

TEST_CASE("exact unbiasedness over all probe sets") {
    Rng rng(99);
    for (int trial = 0; trial < 60; ++trial) {
        const int d = 3 + rng.uniform_int(6);        // 3..8
        const int extra = 2 + rng.uniform_int(3);    // 2..4
        if (extra + 1 > d) continue;
        const int k = 1;
        const int k_prime = k + extra;
        const ProbeParameters params = make_probe_parameters(d, k, k_prime);
        const std::vector<double> x = random_ball_vector(d, rng);
        const double y = rng.uniform_pm();

        MomentEstimate mean = MomentEstimate::zeros(d);
        std::int64_t count = 0;
        for_each_subset(d, extra, [&](const std::vector<int>& members) {
            SubsetLex R = make_subset(members, d);
            const MomentEstimate m = build_moments(probe(x, members), y, R, params);
            for (std::size_t i = 0; i < mean.xxt.size(); ++i) mean.xxt[i] += m.xxt[i];
            for (std::size_t i = 0; i < mean.yx.size(); ++i) mean.yx[i] += m.yx[i];
            ++count;
        });
        for (double& v : mean.xxt) v /= static_cast<double>(count);
        for (double& v : mean.yx) v /= static_cast<double>(count);

        for (int i = 0; i < d; ++i) {
            check_close_rel(mean.yx_at(i), y * x[static_cast<std::size_t>(i)], 1e-12);
            for (int j = 0; j < d; ++j)
                check_close_rel(mean.xxt_at(i, j),
                                x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(j)], 1e-12);
        }
    }
}

TEST_CASE("entries bounded by 1/q and supported on the probe set") {
    Rng rng(512);
    for (int trial = 0; trial < 500; ++trial) {
        const int d = 3 + rng.uniform_int(6);
        const int extra = 2 + rng.uniform_int(3);
        if (extra + 1 > d) continue;
        const ProbeParameters params = make_probe_parameters(d, 1, 1 + extra);
        const std::vector<double> x = random_ball_vector(d, rng);
        const double y = rng.uniform_pm();
        const SubsetLex R = sample_uniform_subset(d, extra, rng);
        const MomentEstimate m = build_moments(probe(x, R.members), y, R, params);

        const double bound = 1.0 / params.q + 1e-12;
        std::vector<bool> in_probe(static_cast<std::size_t>(d), false);
        for (int i : R.members) in_probe[static_cast<std::size_t>(i)] = true;
        for (int i = 0; i < d; ++i) {
            CHECK(std::fabs(m.yx_at(i)) <= bound);
            if (!in_probe[static_cast<std::size_t>(i)]) CHECK(m.yx_at(i) == 0.0);
            for (int j = 0; j < d; ++j) {
                CHECK(std::fabs(m.xxt_at(i, j)) <= bound);
                if (!in_probe[static_cast<std::size_t>(i)] || !in_probe[static_cast<std::size_t>(j)])
                    CHECK(m.xxt_at(i, j) == 0.0);
            }
        }
    }
}
