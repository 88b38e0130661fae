#ifndef ACBOUND_MC_HPP
#define ACBOUND_MC_HPP

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "acbound/classifiers.hpp"
#include "acbound/lb_family.hpp"
#include "acbound/stats.hpp"

namespace acbound {

// Per-task stream seed: SplitMix64 avalanche of the master seed xored with
// rotations of the indices. Deterministic and scheduling-independent; distinct
// (sigma, rep) pairs give distinct streams with overwhelming probability.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t sigma_index, std::uint64_t rep_index);

struct ClassifierSpec {
    enum class Kind { class_erm, net_erm };
    enum class NetKind { family, holder };

    Kind kind = Kind::class_erm;
    NetKind net_kind = NetKind::family;
    // holder net parameters; epsilon <= 0 means "use the schedule n^{-1/(2+alpha+r)}"
    double beta = 1.0;
    double L = 1.0;
    double epsilon = 0.0;
    double schedule_r = 1.0;

    static ClassifierSpec class_erm() { return {}; }
    static ClassifierSpec net_erm_family();
    static ClassifierSpec net_erm_holder(double beta, double L, double epsilon, double schedule_r = 0.0);
};

// Monte Carlo estimate of the AC-function lambda |-> P(R(f_n) - R* >= lambda)
// for each code in the sigma subset, plus the worst case over the subset.
struct ACEstimate {
    std::string family_id;
    long n = 0;
    long m = 0;
    std::vector<double> lambda_grid;  // ascending
    std::vector<int> sigma_indices;   // code indices into the family
    std::vector<std::vector<long>> exceed; // [sigma][lambda] tallies
    std::vector<double> mean_excess;       // per sigma

    double p_hat(std::size_t si, std::size_t li) const;
    stats::Interval ci(std::size_t si, std::size_t li) const;
    // index into sigma_indices of the worst (largest) p_hat at lambda li
    std::size_t worst_sigma(std::size_t li) const;
    double worst_p_hat(std::size_t li) const;
    stats::Interval worst_ci(std::size_t li) const;
};

// Default sigma subset: greedy max-min Hamming selection (a deterministic
// lower bound on the sup over all codes), starting from code 0.
std::vector<int> default_sigma_subset(const LowerBoundFamily& family, int size);

// For each (sigma, rep): sample a dataset with derive_seed(master, sigma, rep),
// train, compute the exact excess, and tally exceedances for every lambda from
// the same excess value. Tallies are bitwise independent of the worker count.
ACEstimate run_ac(const LowerBoundFamily& family, std::span<const int> sigma_subset,
                  const ClassifierSpec& classifier, long n, long m, std::span<const double> lambda_grid,
                  std::uint64_t master_seed, int workers = 1);

struct RateFit {
    std::string kind; // lambda_exponent | n_rate | concentration_slope
    std::vector<std::pair<double, double>> points;
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    std::vector<std::size_t> excluded; // grid indices with p_hat in {0,1}
};

// Regress log(-log p_hat) on log lambda over the worst-case curve; the slope
// estimates (2+alpha)/(1+alpha). Points with p_hat in {0,1} are excluded and
// reported; needs >= 3 usable points.
RateFit fit_lambda_exponent(const ACEstimate& estimate, double alpha);

// Regress log p_hat on n lambda^{(2+alpha)/(1+alpha)} across estimates at a
// fixed lambda index: the slope is the negated empirical rate constant
// (negative when the exponential law holds; c = -slope).
RateFit fit_concentration_slope(std::span<const ACEstimate> estimates, std::size_t lambda_index,
                                double alpha);

// Slope of log mean-excess against log n; compare with n_rate_theory(alpha, r').
// Zero means are dropped with a warning; needs >= 4 values of n spanning >= 16x.
RateFit fit_n_rate(std::span<const std::pair<double, double>> mean_excess_by_n, double alpha,
                   double r_prime, std::vector<std::string>* warnings = nullptr);

// Semi-analytic oracle for the product-class ERM on a family: per-cell flip
// probabilities under occupancy ~ Binomial(n, w) (plus-sign and minus-sign
// cells differ through the tie convention), and the induced exceedance
// probability P(excess >= lambda) for a given code.
struct FlipProbs {
    double plus = 0.0;
    double minus = 0.0;
};
FlipProbs erm_flip_probs(const LowerBoundFamily& family, long n);
double oracle_exceed_prob(const LowerBoundFamily& family, int code, long n, double lambda);

} // namespace acbound

#endif
