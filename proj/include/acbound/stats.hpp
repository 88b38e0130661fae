#ifndef ACBOUND_STATS_HPP
#define ACBOUND_STATS_HPP

#include <cstdint>
#include <span>
#include <vector>

namespace acbound::stats {

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
};

// Exact (Clopper-Pearson) two-sided binomial confidence interval for k
// successes out of m trials. k = 0 and k = m use the standard one-sided forms
// (lo = 0 resp. hi = 1).
Interval clopper_pearson(long k, long m, double confidence = 0.95);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    long n_points = 0;
};

// Ordinary least squares y = slope*x + intercept. Requires >= 2 points.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

// Binomial pmf / upper tail, computed in the log domain so large n is safe.
double binom_pmf(long n, double p, long k);
double binom_tail_ge(long n, double p, long k);

} // namespace acbound::stats

#endif
