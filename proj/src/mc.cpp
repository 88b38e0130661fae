#include "acbound/mc.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "acbound/rng.hpp"

namespace acbound {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t sigma_index, std::uint64_t rep_index) {
    std::uint64_t h = master ^ std::rotl(sigma_index + 0x9e3779b97f4a7c15ULL, 20);
    h = splitmix64(h);
    h ^= std::rotl(rep_index + 0x2545f4914f6cdd1dULL, 40);
    h = splitmix64(h);
    return splitmix64(h);
}

ClassifierSpec ClassifierSpec::net_erm_family() {
    ClassifierSpec spec;
    spec.kind = Kind::net_erm;
    spec.net_kind = NetKind::family;
    return spec;
}

ClassifierSpec ClassifierSpec::net_erm_holder(double beta, double L, double epsilon, double schedule_r) {
    ClassifierSpec spec;
    spec.kind = Kind::net_erm;
    spec.net_kind = NetKind::holder;
    spec.beta = beta;
    spec.L = L;
    spec.epsilon = epsilon;
    spec.schedule_r = schedule_r;
    return spec;
}

double ACEstimate::p_hat(std::size_t si, std::size_t li) const {
    return static_cast<double>(exceed[si][li]) / static_cast<double>(m);
}

stats::Interval ACEstimate::ci(std::size_t si, std::size_t li) const {
    return stats::clopper_pearson(exceed[si][li], m);
}

std::size_t ACEstimate::worst_sigma(std::size_t li) const {
    std::size_t best = 0;
    for (std::size_t si = 1; si < exceed.size(); ++si)
        if (exceed[si][li] > exceed[best][li]) best = si;
    return best;
}

double ACEstimate::worst_p_hat(std::size_t li) const {
    return p_hat(worst_sigma(li), li);
}

stats::Interval ACEstimate::worst_ci(std::size_t li) const {
    return ci(worst_sigma(li), li);
}

std::vector<int> default_sigma_subset(const LowerBoundFamily& family, int size) {
    const long total = family.num_codes();
    const int want = static_cast<int>(std::min<long>(size, total));
    std::vector<int> subset{0};
    std::vector<int> min_dist(total, 0);
    for (long i = 0; i < total; ++i) min_dist[i] = family.hamming(static_cast<int>(i), 0);
    while (static_cast<int>(subset.size()) < want) {
        int best = -1;
        for (long i = 0; i < total; ++i) {
            if (min_dist[i] == 0) continue; // already selected (or duplicate)
            if (best < 0 || min_dist[i] > min_dist[best]) best = static_cast<int>(i);
        }
        if (best < 0) break;
        subset.push_back(best);
        for (long i = 0; i < total; ++i)
            min_dist[i] = std::min(min_dist[i], family.hamming(static_cast<int>(i), best));
    }
    return subset;
}

namespace {

// Per-replication training + exact excess, shared by every worker.
struct RepRunner {
    const LowerBoundFamily& family;
    const ClassifierSpec& spec;
    const CompiledNet* net = nullptr; // compiled once for net_erm
    RuleClass product_class;
    long n;

    double operator()(int code, long rep, std::uint64_t master) const {
        const std::uint64_t seed = derive_seed(master, static_cast<std::uint64_t>(code),
                                               static_cast<std::uint64_t>(rep));
        const Dataset D = family.sample_dataset(code, n, seed);
        ErmResult fit = spec.kind == ClassifierSpec::Kind::class_erm ? class_erm(product_class, D)
                                                                     : net->erm(D);
        if (const auto* g = fit.rule.grid_repr()) return family.exact_excess_grid_rule(code, *g);
        return family.exact_excess_cellwise(code, fit.rule);
    }
};

} // namespace

ACEstimate run_ac(const LowerBoundFamily& family, std::span<const int> sigma_subset,
                  const ClassifierSpec& classifier, long n, long m, std::span<const double> lambda_grid,
                  std::uint64_t master_seed, int workers) {
    if (m < 1) throw std::invalid_argument("run_ac: m must be >= 1");
    if (n < 1) throw std::invalid_argument("run_ac: n must be >= 1");
    if (sigma_subset.empty()) throw std::invalid_argument("run_ac: empty sigma subset");
    if (!std::is_sorted(lambda_grid.begin(), lambda_grid.end()))
        throw std::invalid_argument("run_ac: lambda grid must be sorted ascending");
    for (int code : sigma_subset)
        if (code < 0 || code >= family.num_codes()) throw std::invalid_argument("run_ac: code index out of range");
    if (workers < 1) workers = 1;

    RepRunner runner{family, classifier, nullptr, RuleClass::cellwise_product(family.grid()), n};
    NetDictionary net;
    CompiledNet compiled;
    if (classifier.kind == ClassifierSpec::Kind::net_erm) {
        if (classifier.net_kind == ClassifierSpec::NetKind::family) {
            net = family_net(family);
        } else {
            if (family.d != 1)
                throw std::invalid_argument("run_ac: holder-net classifier incompatible with family (d != 1)");
            double eps = classifier.epsilon;
            if (eps <= 0.0) eps = epsilon_schedule(n, family.alpha, classifier.schedule_r);
            net = build_holder_net(family.d, classifier.beta, classifier.L, eps);
            if (!net.materialized)
                throw std::invalid_argument("run_ac: holder net too large to materialize at this epsilon");
        }
        compiled = CompiledNet::compile(net);
        runner.net = &compiled;
    }

    const std::size_t num_sigma = sigma_subset.size();
    // Every (sigma, rep) excess is stored and reduced sequentially afterwards,
    // so tallies and means are bitwise identical for any worker count.
    std::vector<double> excess(num_sigma * static_cast<std::size_t>(m));
    const long tasks = static_cast<long>(num_sigma) * m;
    auto work = [&](long lo, long hi) {
        for (long task = lo; task < hi; ++task) {
            const std::size_t si = static_cast<std::size_t>(task / m);
            const long rep = task % m;
            excess[si * m + rep] = runner(sigma_subset[si], rep, master_seed);
        }
    };
    if (workers == 1) {
        work(0, tasks);
    } else {
        std::vector<std::thread> pool;
        const long chunk = (tasks + workers - 1) / workers;
        for (int t = 0; t < workers; ++t) {
            const long lo = t * chunk;
            const long hi = std::min(tasks, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back(work, lo, hi);
        }
        for (auto& th : pool) th.join();
    }

    ACEstimate est;
    est.family_id = family.id;
    est.n = n;
    est.m = m;
    est.lambda_grid.assign(lambda_grid.begin(), lambda_grid.end());
    est.sigma_indices.assign(sigma_subset.begin(), sigma_subset.end());
    est.exceed.assign(num_sigma, std::vector<long>(lambda_grid.size(), 0));
    est.mean_excess.assign(num_sigma, 0.0);
    for (std::size_t si = 0; si < num_sigma; ++si) {
        double sum = 0.0;
        for (long rep = 0; rep < m; ++rep) {
            const double e = excess[si * m + rep];
            sum += e;
            for (std::size_t li = 0; li < est.lambda_grid.size(); ++li) {
                if (e >= est.lambda_grid[li]) ++est.exceed[si][li];
                else break; // ascending grid: later thresholds cannot be met
            }
        }
        est.mean_excess[si] = sum / static_cast<double>(m);
    }
    return est;
}

RateFit fit_lambda_exponent(const ACEstimate& est, double alpha) {
    (void)alpha; // the theoretical exponent (2+alpha)/(1+alpha) is the comparison target
    RateFit fit;
    fit.kind = "lambda_exponent";
    std::vector<double> xs, ys;
    for (std::size_t li = 0; li < est.lambda_grid.size(); ++li) {
        const long count = est.exceed[est.worst_sigma(li)][li];
        if (count == 0 || count == est.m) {
            fit.excluded.push_back(li);
            continue;
        }
        const double p = static_cast<double>(count) / static_cast<double>(est.m);
        xs.push_back(std::log(est.lambda_grid[li]));
        ys.push_back(std::log(-std::log(p)));
        fit.points.emplace_back(xs.back(), ys.back());
    }
    if (xs.size() < 3) throw std::runtime_error("fit_lambda_exponent: fewer than 3 usable grid points");
    const auto lf = stats::linear_fit(xs, ys);
    fit.slope = lf.slope;
    fit.intercept = lf.intercept;
    fit.r2 = lf.r2;
    return fit;
}

RateFit fit_concentration_slope(std::span<const ACEstimate> estimates, std::size_t lambda_index,
                                double alpha) {
    RateFit fit;
    fit.kind = "concentration_slope";
    const double exponent = std::isinf(alpha) ? 1.0 : (2.0 + alpha) / (1.0 + alpha);
    std::vector<double> xs, ys;
    for (std::size_t ei = 0; ei < estimates.size(); ++ei) {
        const auto& est = estimates[ei];
        if (lambda_index >= est.lambda_grid.size())
            throw std::invalid_argument("fit_concentration_slope: lambda index out of range");
        const long count = est.exceed[est.worst_sigma(lambda_index)][lambda_index];
        if (count == 0 || count == est.m) {
            fit.excluded.push_back(ei);
            continue;
        }
        const double p = static_cast<double>(count) / static_cast<double>(est.m);
        xs.push_back(static_cast<double>(est.n) * std::pow(est.lambda_grid[lambda_index], exponent));
        ys.push_back(std::log(p));
        fit.points.emplace_back(xs.back(), ys.back());
    }
    if (xs.size() < 3) throw std::runtime_error("fit_concentration_slope: fewer than 3 usable points");
    const auto lf = stats::linear_fit(xs, ys);
    fit.slope = lf.slope;
    fit.intercept = lf.intercept;
    fit.r2 = lf.r2;
    return fit;
}

RateFit fit_n_rate(std::span<const std::pair<double, double>> mean_excess_by_n, double alpha,
                   double r_prime, std::vector<std::string>* warnings) {
    (void)alpha;
    (void)r_prime; // theory comparison happens via n_rate_theory at the call site
    RateFit fit;
    fit.kind = "n_rate";
    std::vector<double> xs, ys;
    double n_min = std::numeric_limits<double>::infinity();
    double n_max = 0.0;
    for (std::size_t i = 0; i < mean_excess_by_n.size(); ++i) {
        const auto& [nv, mean] = mean_excess_by_n[i];
        if (mean <= 0.0) {
            if (warnings) warnings->push_back("fit_n_rate: dropped n with zero mean excess");
            fit.excluded.push_back(i);
            continue;
        }
        n_min = std::min(n_min, nv);
        n_max = std::max(n_max, nv);
        xs.push_back(std::log(nv));
        ys.push_back(std::log(mean));
        fit.points.emplace_back(xs.back(), ys.back());
    }
    if (xs.size() < 4) throw std::invalid_argument("fit_n_rate: need >= 4 usable values of n");
    if (n_max < 16.0 * n_min) throw std::invalid_argument("fit_n_rate: n range must span >= 16x");
    const auto lf = stats::linear_fit(xs, ys);
    fit.slope = lf.slope;
    fit.intercept = lf.intercept;
    fit.r2 = lf.r2;
    return fit;
}

FlipProbs erm_flip_probs(const LowerBoundFamily& family, long n) {
    const double w = family.w;
    const double a = family.a;
    const double p_correct = 0.5 * (1.0 + a);
    FlipProbs fp;
    // Occupancy c ~ Binomial(n, w); conditional on c the cell's labels are a
    // Bernoulli sample biased toward the correct side. Ties (even c) break to
    // label 1, which is correct for plus cells and wrong for minus cells.
    const double sd = std::sqrt(static_cast<double>(n) * w * (1.0 - w));
    const long c_hi = std::min<long>(n, static_cast<long>(static_cast<double>(n) * w + 14.0 * sd + 24.0));
    for (long c = 0; c <= c_hi; ++c) {
        const double pc = stats::binom_pmf(n, w, c);
        if (pc == 0.0) continue;
        double flip_plus, flip_minus;
        if (c == 0) {
            flip_plus = 0.0; // empty cell labels 1 = correct for sigma_j = +1
            flip_minus = 1.0;
        } else {
            // plus cell: majority says 0 iff #ones < c/2 (strict)
            const long tie_up = (c % 2 == 0) ? c / 2 : (c + 1) / 2;
            flip_plus = 1.0 - stats::binom_tail_ge(c, p_correct, tie_up);
            // minus cell: label 1 wins iff #ones >= c/2 (ties included)
            flip_minus = stats::binom_tail_ge(c, 1.0 - p_correct, tie_up);
        }
        fp.plus += pc * flip_plus;
        fp.minus += pc * flip_minus;
    }
    return fp;
}

double oracle_exceed_prob(const LowerBoundFamily& family, int code, long n, double lambda) {
    const FlipProbs fp = erm_flip_probs(family, n);
    const auto& sigma = family.codes[code];
    long n_plus = 0;
    for (auto s : sigma)
        if (s > 0) ++n_plus;
    const long b = family.b;
    const long n_minus = b - n_plus;
    // Exact convolution of Binomial(n_plus, p+) and Binomial(n_minus, p-).
    std::vector<double> pmf(b + 1, 0.0);
    for (long i = 0; i <= n_plus; ++i) {
        const double pi = stats::binom_pmf(n_plus, fp.plus, i);
        for (long j = 0; j <= n_minus; ++j) pmf[i + j] += pi * stats::binom_pmf(n_minus, fp.minus, j);
    }
    const long k = static_cast<long>(std::ceil(lambda / family.cell_excess - 1e-9));
    double tail = 0.0;
    for (long i = std::max<long>(k, 0); i <= b; ++i) tail += pmf[i];
    return std::min(tail, 1.0);
}

} // namespace acbound
