#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "driftbench/stats.hpp"

namespace {

using driftbench::stats::SampleVector;

// Independent KS oracle: evaluate |ECDF_a - ECDF_b| at every merged value.
double ks_oracle(SampleVector a, SampleVector b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    auto ecdf = [](const SampleVector& s, double x) {
        return double(std::upper_bound(s.begin(), s.end(), x) - s.begin()) / double(s.size());
    };
    SampleVector merged = a;
    merged.insert(merged.end(), b.begin(), b.end());
    double best = 0.0;
    for (double x : merged) best = std::max(best, std::abs(ecdf(a, x) - ecdf(b, x)));
    return best;
}

// Independent Wasserstein oracle: integrate |Qa(q) - Qb(q)| dq over the unit
// interval, where Q is the left-continuous empirical quantile function.
double w1_oracle(SampleVector a, SampleVector b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::vector<double> cuts{0.0, 1.0};
    for (std::size_t i = 1; i < a.size(); ++i) cuts.push_back(double(i) / double(a.size()));
    for (std::size_t j = 1; j < b.size(); ++j) cuts.push_back(double(j) / double(b.size()));
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    auto quantile = [](const SampleVector& s, double q) {
        auto idx = std::size_t(std::ceil(q * double(s.size()))) - 1;
        return s[std::min(idx, s.size() - 1)];
    };
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        double mid = 0.5 * (cuts[k] + cuts[k + 1]);
        total += std::abs(quantile(a, mid) - quantile(b, mid)) * (cuts[k + 1] - cuts[k]);
    }
    return total;
}

SampleVector random_sample(std::mt19937_64& gen, std::size_t n) {
    std::normal_distribution<double> dist(0.0, 1.0);
    SampleVector out(n);
    for (double& v : out) v = dist(gen);
    return out;
}

}  // namespace

TEST_SUITE("stats") {

using namespace driftbench::stats;

TEST_CASE("ecdf counts the fraction of values at or below x") {
    CHECK(ecdf_eval({1, 2, 3}, 2) == doctest::Approx(2.0 / 3.0));
    CHECK(ecdf_eval({5}, 4.9) == 0.0);
    CHECK(ecdf_eval({1, 1, 2, 4}, 1) == 0.5);
    CHECK_THROWS(ecdf_eval({}, 0.0));
}

TEST_CASE("ks statistic on fixed examples") {
    CHECK(ks_two_sample({1, 2, 3}, {1, 2, 3}, 0.05).statistic == 0.0);
    CHECK(ks_two_sample({1, 2, 3}, {1, 2, 3}, 0.05).p_value.value() == 1.0);
    CHECK(ks_two_sample({0, 0, 0}, {1, 1, 1}, 0.05).statistic == 1.0);
    CHECK(ks_two_sample({1, 2, 3, 4}, {2, 3, 4, 5}, 0.05).statistic == doctest::Approx(0.25));
    CHECK_THROWS(ks_two_sample({}, {1.0}, 0.05));
}

TEST_CASE("ks statistic matches the brute-force ecdf oracle on random pairs") {
    std::mt19937_64 gen(1234);
    std::uniform_int_distribution<std::size_t> size_dist(1, 120);
    for (int trial = 0; trial < 250; ++trial) {
        auto a = random_sample(gen, size_dist(gen));
        auto b = random_sample(gen, size_dist(gen));
        // Inject ties to exercise grouped scanning.
        if (trial % 3 == 0 && a.size() > 2) a[1] = a[0];
        if (trial % 4 == 0 && !b.empty()) b.push_back(a[0]);
        CHECK(ks_two_sample(a, b, 0.05).statistic == ks_oracle(a, b));
    }
}

TEST_CASE("ks statistic is symmetric and invariant under increasing transforms") {
    std::mt19937_64 gen(77);
    auto a = random_sample(gen, 40);
    auto b = random_sample(gen, 55);
    double d = ks_two_sample(a, b, 0.05).statistic;
    CHECK(ks_two_sample(b, a, 0.05).statistic == d);
    auto stretch = [](SampleVector v) {
        for (double& x : v) x = std::exp(2.0 * x + 1.0);
        return v;
    };
    CHECK(ks_two_sample(stretch(a), stretch(b), 0.05).statistic == doctest::Approx(d));
}

TEST_CASE("ks p-value series") {
    CHECK(ks_p_value(0.0, 10, 20) == 1.0);
    CHECK(ks_p_value(1.0, 50, 50) < 1e-6);
    double d = 1.358 * std::sqrt((100.0 + 100.0) / (100.0 * 100.0));
    CHECK(ks_p_value(d, 100, 100) == doctest::Approx(0.050).epsilon(0.02));
    CHECK(std::abs(ks_p_value(d, 100, 100) - 0.050) < 0.001);
}

TEST_CASE("ks p-value is non-increasing in the statistic") {
    double prev = 1.0;
    for (int i = 0; i <= 50; ++i) {
        double p = ks_p_value(i / 50.0, 80, 60);
        CHECK(p <= prev + 1e-15);
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
        prev = p;
    }
}

TEST_CASE("wasserstein distance on fixed examples") {
    CHECK(wasserstein_1d({4, 5, 6}, {4, 5, 6}) == 0.0);
    CHECK(wasserstein_1d({0}, {3}) == doctest::Approx(3.0));
    CHECK(wasserstein_1d({0, 1}, {0, 1, 2}) == doctest::Approx(0.5));
    CHECK_THROWS(wasserstein_1d({1.0}, {}));
}

TEST_CASE("wasserstein matches the quantile-integration oracle on random pairs") {
    std::mt19937_64 gen(4321);
    std::uniform_int_distribution<std::size_t> size_dist(1, 120);
    for (int trial = 0; trial < 250; ++trial) {
        auto a = random_sample(gen, size_dist(gen));
        auto b = random_sample(gen, size_dist(gen));
        CHECK(wasserstein_1d(a, b) == doctest::Approx(w1_oracle(a, b)).epsilon(1e-9));
    }
}

TEST_CASE("wasserstein equals mean sorted gap for equal sizes and shifts by constants") {
    std::mt19937_64 gen(9);
    auto a = random_sample(gen, 64);
    auto b = random_sample(gen, 64);
    auto sa = a, sb = b;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    double mean_gap = 0.0;
    for (std::size_t i = 0; i < sa.size(); ++i) mean_gap += std::abs(sa[i] - sb[i]);
    mean_gap /= double(sa.size());
    CHECK(wasserstein_1d(a, b) == doctest::Approx(mean_gap).epsilon(1e-12));

    auto shifted = a;
    for (double& v : shifted) v += 2.5;
    CHECK(wasserstein_1d(a, shifted) == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("wasserstein satisfies the triangle inequality") {
    std::mt19937_64 gen(5150);
    for (int trial = 0; trial < 50; ++trial) {
        auto a = random_sample(gen, 30);
        auto b = random_sample(gen, 45);
        auto c = random_sample(gen, 20);
        CHECK(wasserstein_1d(a, c) <=
              wasserstein_1d(a, b) + wasserstein_1d(b, c) + 1e-12);
    }
}

TEST_CASE("normalized wasserstein scales by the reference spread") {
    auto same = normalized_wasserstein({1, 2, 3}, {1, 2, 3}, 0.05);
    CHECK(same.statistic == 0.0);
    CHECK_FALSE(same.drifted);

    auto shifted = normalized_wasserstein({0, 2}, {3, 5}, 0.05);
    CHECK(shifted.statistic == doctest::Approx(3.0));
    CHECK(shifted.drifted);
    CHECK_FALSE(shifted.degenerate_scale);

    auto flat = normalized_wasserstein({1, 1, 1}, {2, 2, 2}, 0.05);
    CHECK(flat.degenerate_scale);
    CHECK(flat.statistic == doctest::Approx(1.0));
}

}  // TEST_SUITE
