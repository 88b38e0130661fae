#ifndef ACBOUND_CLASSIFIERS_HPP
#define ACBOUND_CLASSIFIERS_HPP

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "acbound/core.hpp"
#include "acbound/lb_family.hpp"

namespace acbound {

// Sup-norm epsilon-net over a regression-function class. A canonical
// (non-minimal) net: minimality is infeasible and the upper-bound mechanism
// only needs the entropy-order cardinality, so the measured log-cardinality is
// recorded instead. Members are materialized only while the full net fits the
// budget; log_cardinality always refers to the full net.
struct NetDictionary {
    std::vector<RegressionFn> members;
    double epsilon = 0.0;
    bool materialized = true;
    double log_cardinality = 0.0;
    struct Meta {
        std::string kind;
        int d = 1;
        double beta = 0.0;
        double L = 0.0;
        double h = 0.0; // grid step (holder nets)
        long cells = 1;
        long values = 1;
    } meta;
};

// Piecewise-constant epsilon-net for the Hoelder ball Sigma(beta, L) with
// range [0,1], beta <= 1: grid step h = (eps/2L)^{1/beta}, values on the eps/2
// lattice, axis-adjacent jumps bounded by L h^beta + eps. Every class member
// has a net member within eps in sup norm.
NetDictionary build_holder_net(int d, double beta, double L, double epsilon,
                               long materialize_budget = 200000);

// The family's regression functions {eta_sigma} as a dictionary.
NetDictionary family_net(const LowerBoundFamily& family);

// eps_n = n^{-1/(2+alpha+r)}. Degenerate exponents (r -> infinity) yield 1
// and set *warning when provided.
double epsilon_schedule(long n, double alpha, double r, std::string* warning = nullptr);

// Either an explicit rule list or the full cellwise product class over a grid
// (all 2^b per-cell label assignments plus the null-set label; never
// materialized).
class RuleClass {
public:
    static RuleClass explicit_list(std::vector<PredictionRule> rules);
    static RuleClass cellwise_product(CellGrid grid);

    const std::vector<PredictionRule>* rules() const;
    const CellGrid* product_grid() const;

private:
    RuleClass() = default;
    std::variant<std::vector<PredictionRule>, CellGrid> repr_;
};

struct ErmResult {
    PredictionRule rule;
    long mismatches = 0;
    double empirical_risk = 0.0;
    long member_index = -1; // index into the dictionary/class; -1 for product classes
};

// Dictionary compiled for repeated ERM calls: members are deduplicated by
// induced rule once, and cellwise/grid dictionaries get a histogram-based risk
// scan. Results are identical to the naive per-member evaluation.
class CompiledNet {
public:
    CompiledNet() = default; // empty; call compile() to populate
    static CompiledNet compile(const NetDictionary& net);
    ErmResult erm(const Dataset& D) const;
    long distinct_rules() const { return static_cast<long>(rules_.size()); }

private:
    std::vector<PredictionRule> rules_;     // distinct induced rules
    std::vector<long> first_index_;         // smallest original member index per rule
    // fast paths
    bool cellwise_mode_ = false;            // all rules cellwise on common_grid_
    CellGrid common_grid_{};
    bool grid_mode_ = false;                // all rules piecewise on an even grid
    int grid_cells_ = 1;
    int dim_ = 1;
};

// argmin of the empirical risk over the net's induced rules f_{eta'}; ties by
// smallest original index. Throws on an empty dataset or a non-materialized net.
ErmResult net_erm(const NetDictionary& net, const Dataset& D);

// argmin of the empirical risk over the class. Product classes use the exact
// decomposition: per-cell majority vote over the plateau samples (ties and
// empty cells -> 1) and majority over the null-set samples for the default
// label; the empirical risk is separable across the partition, so this attains
// the global minimum over all 2^{b+1} assignments.
ErmResult class_erm(const RuleClass& rules, const Dataset& D);

// Greedy cover size at radius epsilon (an upper bound on the covering number):
// scan members in index order, keep any member farther than epsilon from all
// kept centers. dist(i, j) must be a pseudometric.
long covering_number_greedy(long count, const std::function<double(long, long)>& dist, double epsilon);

// Exact minimal cover via set-cover DP; count <= 20.
long covering_number_exact(long count, const std::function<double(long, long)>& dist, double epsilon);

} // namespace acbound

#endif
