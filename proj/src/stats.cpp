#include "acbound/stats.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/beta.hpp>

namespace acbound::stats {

Interval clopper_pearson(long k, long m, double confidence) {
    if (m < 1 || k < 0 || k > m) throw std::invalid_argument("clopper_pearson: need 0 <= k <= m, m >= 1");
    const double tail = 0.5 * (1.0 - confidence);
    Interval ci;
    if (k == 0) {
        ci.lo = 0.0;
    } else {
        boost::math::beta_distribution<double> lower(static_cast<double>(k), static_cast<double>(m - k + 1));
        ci.lo = boost::math::quantile(lower, tail);
    }
    if (k == m) {
        ci.hi = 1.0;
    } else {
        boost::math::beta_distribution<double> upper(static_cast<double>(k + 1), static_cast<double>(m - k));
        ci.hi = boost::math::quantile(upper, 1.0 - tail);
    }
    return ci;
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("linear_fit: need >= 2 matched points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
        syy += y[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw std::invalid_argument("linear_fit: degenerate abscissae");
    LinearFit fit;
    fit.n_points = static_cast<long>(x.size());
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    const double sst = n * syy - sy * sy;
    fit.r2 = sst == 0.0 ? 1.0 : (n * sxy - sx * sy) * (n * sxy - sx * sy) / (denom * sst);
    return fit;
}

double binom_pmf(long n, double p, long k) {
    if (k < 0 || k > n) return 0.0;
    if (p <= 0.0) return k == 0 ? 1.0 : 0.0;
    if (p >= 1.0) return k == n ? 1.0 : 0.0;
    const double lp = std::lgamma(static_cast<double>(n + 1)) - std::lgamma(static_cast<double>(k + 1)) -
                      std::lgamma(static_cast<double>(n - k + 1)) + static_cast<double>(k) * std::log(p) +
                      static_cast<double>(n - k) * std::log1p(-p);
    return std::exp(lp);
}

double binom_tail_ge(long n, double p, long k) {
    if (k <= 0) return 1.0;
    if (k > n) return 0.0;
    // Sum the smaller side for accuracy.
    const double mean = static_cast<double>(n) * p;
    double acc = 0.0;
    if (static_cast<double>(k) > mean) {
        for (long i = k; i <= n; ++i) {
            const double term = binom_pmf(n, p, i);
            acc += term;
            if (term < 1e-18 * acc && i > static_cast<long>(mean)) break;
        }
        return acc;
    }
    for (long i = 0; i < k; ++i) acc += binom_pmf(n, p, i);
    return 1.0 - acc;
}

} // namespace acbound::stats
