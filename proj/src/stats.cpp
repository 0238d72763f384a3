#include "driftbench/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace driftbench::stats {

namespace {

void require_non_empty(const SampleVector& v) {
    if (v.empty()) throw std::invalid_argument("empty sample");
}

double population_stddev(const SampleVector& v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) {
        const double d = x - mean;
        ss += d * d;
    }
    return std::sqrt(ss / static_cast<double>(v.size()));
}

}  // namespace

double ecdf_eval(const SampleVector& sample, double x) {
    require_non_empty(sample);
    std::size_t count = 0;
    for (double v : sample) {
        if (v <= x) ++count;
    }
    return static_cast<double>(count) / static_cast<double>(sample.size());
}

TestOutcome ks_two_sample(const SampleVector& a, const SampleVector& b, double alpha) {
    require_non_empty(a);
    require_non_empty(b);

    SampleVector sa(a), sb(b);
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());

    const double na = static_cast<double>(sa.size());
    const double nb = static_cast<double>(sb.size());

    double d_max = 0.0;
    std::size_t ia = 0, ib = 0;
    while (ia < sa.size() || ib < sb.size()) {
        double v;
        if (ia == sa.size()) v = sb[ib];
        else if (ib == sb.size()) v = sa[ia];
        else v = std::min(sa[ia], sb[ib]);

        // consume the whole tie group in both samples before comparing ECDFs
        while (ia < sa.size() && sa[ia] == v) ++ia;
        while (ib < sb.size() && sb[ib] == v) ++ib;

        // plain division keeps each ECDF value correctly rounded
        const double diff = std::abs(static_cast<double>(ia) / na -
                                     static_cast<double>(ib) / nb);
        if (diff > d_max) d_max = diff;
    }

    TestOutcome out;
    out.statistic = d_max;
    out.p_value = ks_p_value(d_max, a.size(), b.size());
    out.drifted = *out.p_value < alpha;
    return out;
}

double ks_p_value(double d_statistic, std::size_t n1, std::size_t n2) {
    const double n1d = static_cast<double>(n1);
    const double n2d = static_cast<double>(n2);
    const double n_eff = n1d * n2d / (n1d + n2d);
    const double lambda = d_statistic * std::sqrt(n_eff);
    if (lambda <= 0.0) return 1.0;

    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
        const double kd = static_cast<double>(k);
        const double term = std::exp(-2.0 * kd * kd * lambda * lambda);
        sum += sign * term;
        sign = -sign;
        if (term < 1e-10) break;
    }
    const double p = 2.0 * sum;
    return std::clamp(p, 0.0, 1.0);
}

double wasserstein_1d(const SampleVector& a, const SampleVector& b) {
    require_non_empty(a);
    require_non_empty(b);

    SampleVector sa(a), sb(b);
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());

    const double na = static_cast<double>(sa.size());
    const double nb = static_cast<double>(sb.size());

    double area = 0.0;
    double prev = 0.0;
    bool have_prev = false;
    std::size_t ia = 0, ib = 0;
    while (ia < sa.size() || ib < sb.size()) {
        double v;
        if (ia == sa.size()) v = sb[ib];
        else if (ib == sb.size()) v = sa[ia];
        else v = std::min(sa[ia], sb[ib]);

        if (have_prev) {
            const double fa = static_cast<double>(ia) / na;
            const double fb = static_cast<double>(ib) / nb;
            area += std::abs(fa - fb) * (v - prev);
        }

        while (ia < sa.size() && sa[ia] == v) ++ia;
        while (ib < sb.size() && sb[ib] == v) ++ib;
        prev = v;
        have_prev = true;
    }
    return area;
}

TestOutcome normalized_wasserstein(const SampleVector& ref, const SampleVector& cur, double tau) {
    const double w1 = wasserstein_1d(ref, cur);
    const double sigma = population_stddev(ref);

    TestOutcome out;
    if (sigma < 1e-12) {
        out.statistic = w1;
        out.degenerate_scale = true;
    } else {
        out.statistic = w1 / sigma;
    }
    out.drifted = out.statistic > tau;
    return out;
}

}  // namespace driftbench::stats
