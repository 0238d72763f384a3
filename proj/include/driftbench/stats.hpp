#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace driftbench::stats {

// Single-feature value vector consumed by the two-sample tests.
using SampleVector = std::vector<double>;

// Result of one two-sample test. `p_value` is present for the KS test only;
// distance-based tests carry the (normalized) distance in `statistic`.
struct TestOutcome {
    double statistic = 0.0;
    std::optional<double> p_value;
    bool drifted = false;
    // Reference spread fell below tolerance; `statistic` is the raw distance.
    bool degenerate_scale = false;
};

// Fraction of sample values <= x (right-continuous step function).
double ecdf_eval(const SampleVector& sample, double x);

// Exact two-sample KS statistic D = sup_x |ECDF_a(x) - ECDF_b(x)|, computed by
// scanning the merged sorted values with ties processed in one group.
// drifted = (p_value < alpha).
TestOutcome ks_two_sample(const SampleVector& a, const SampleVector& b, double alpha);

// Asymptotic Kolmogorov p-value: with n_e = n1*n2/(n1+n2) and
// lambda = D*sqrt(n_e), p = 2 * sum_{k>=1} (-1)^(k-1) exp(-2 k^2 lambda^2),
// clamped to [0,1]. The series is truncated when a term drops below 1e-10
// or k exceeds 100. lambda = 0 yields p = 1.
double ks_p_value(double d_statistic, std::size_t n1, std::size_t n2);

// Exact 1-D Wasserstein distance: the area between the two ECDFs over the
// merged support. Equals the mean absolute difference of sorted pairs for
// equal-size samples.
double wasserstein_1d(const SampleVector& a, const SampleVector& b);

// Wasserstein distance divided by the population standard deviation of `ref`.
// drifted = (statistic > tau). A reference spread below 1e-12 sets the
// degenerate-scale flag and leaves the raw distance unscaled.
TestOutcome normalized_wasserstein(const SampleVector& ref, const SampleVector& cur, double tau);

}  // namespace driftbench::stats
