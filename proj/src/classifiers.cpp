#include "acbound/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace acbound {

namespace {

std::vector<double> value_lattice(double epsilon) {
    const long top = static_cast<long>(std::ceil(2.0 / epsilon));
    std::vector<double> values;
    values.reserve(top + 1);
    for (long i = 0; i <= top; ++i) values.push_back(std::min(1.0, 0.5 * epsilon * static_cast<double>(i)));
    return values;
}

// log(sum exp) of per-value DP rows; keeps the d = 1 transfer-matrix count
// stable out to nets of size e^3000.
double chain_log_count(long cells, long num_values, long max_jump) {
    std::vector<double> logw(num_values, 0.0);
    for (long step = 1; step < cells; ++step) {
        std::vector<double> next(num_values, -std::numeric_limits<double>::infinity());
        for (long v = 0; v < num_values; ++v) {
            const long lo = std::max<long>(0, v - max_jump);
            const long hi = std::min<long>(num_values - 1, v + max_jump);
            double peak = -std::numeric_limits<double>::infinity();
            for (long u = lo; u <= hi; ++u) peak = std::max(peak, logw[u]);
            double acc = 0.0;
            for (long u = lo; u <= hi; ++u) acc += std::exp(logw[u] - peak);
            next[v] = peak + std::log(acc);
        }
        logw = std::move(next);
    }
    double peak = *std::max_element(logw.begin(), logw.end());
    double acc = 0.0;
    for (double lw : logw) acc += std::exp(lw - peak);
    return peak + std::log(acc);
}

} // namespace

NetDictionary build_holder_net(int d, double beta, double L, double epsilon, long materialize_budget) {
    if (d < 1) throw std::invalid_argument("build_holder_net: d must be >= 1");
    if (beta > 1.0) throw std::invalid_argument("build_holder_net: beta > 1 not supported");
    if (!(beta > 0.0)) throw std::invalid_argument("build_holder_net: beta must be positive");
    if (L < 0.0) throw std::invalid_argument("build_holder_net: L must be nonnegative");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("build_holder_net: epsilon must lie in (0,1)");

    NetDictionary net;
    net.epsilon = epsilon;
    net.meta.kind = "holder";
    net.meta.d = d;
    net.meta.beta = beta;
    net.meta.L = L;

    const std::vector<double> values = value_lattice(epsilon);
    const long k = static_cast<long>(values.size());
    net.meta.values = k;

    long cells_per_axis = 1;
    long max_jump = k; // unconstrained within the lattice
    if (L > 0.0) {
        const double h = std::pow(epsilon / (2.0 * L), 1.0 / beta);
        net.meta.h = std::min(h, 1.0);
        cells_per_axis = h >= 1.0 ? 1 : static_cast<long>(std::ceil(1.0 / h));
        // Adjacent-cell jump bound L h^beta + eps on the eps/2 lattice.
        max_jump = static_cast<long>((L * std::pow(net.meta.h, beta) + epsilon) / (0.5 * epsilon) + 1e-9);
    } else {
        net.meta.h = 1.0;
    }
    long cells = 1;
    for (int j = 0; j < d; ++j) cells *= cells_per_axis;
    net.meta.cells = cells;

    if (d == 1) {
        net.log_cardinality = chain_log_count(cells, k, max_jump);
    }

    // Materialize by DFS over cells in row-major order; each cell must stay
    // within max_jump of its already-assigned axis neighbors.
    std::vector<long> strides(d);
    {
        long s = 1;
        for (int j = 0; j < d; ++j) {
            strides[j] = s;
            s *= cells_per_axis;
        }
    }
    std::vector<long> assign(cells, 0);
    std::vector<long> coord(d, 0);
    bool overflow = false;
    std::vector<RegressionFn> members;

    auto emit = [&]() {
        if (static_cast<long>(members.size()) >= materialize_budget) {
            overflow = true;
            return;
        }
        RegressionFn::Tabulated tab;
        tab.dim = d;
        tab.cells_per_axis = static_cast<int>(cells_per_axis);
        tab.values.resize(cells);
        for (long c = 0; c < cells; ++c) tab.values[c] = values[assign[c]];
        members.push_back(RegressionFn::tabulated(std::move(tab)));
    };

    std::function<void(long)> dfs = [&](long cell) {
        if (overflow) return;
        if (cell == cells) {
            emit();
            return;
        }
        // decode the cell's coordinates to find assigned neighbors
        long rest = cell;
        for (int j = 0; j < d; ++j) {
            coord[j] = rest % cells_per_axis;
            rest /= cells_per_axis;
        }
        for (long v = 0; v < k; ++v) {
            bool ok = true;
            for (int j = 0; j < d && ok; ++j)
                if (coord[j] > 0 && std::labs(v - assign[cell - strides[j]]) > max_jump) ok = false;
            if (!ok) continue;
            assign[cell] = v;
            dfs(cell + 1);
            if (overflow) return;
        }
    };
    dfs(0);

    if (overflow) {
        members.clear();
        net.materialized = false;
        if (d > 1) throw std::invalid_argument("build_holder_net: net too large to materialize for d > 1");
    } else {
        net.materialized = true;
        if (d > 1) net.log_cardinality = std::log(static_cast<double>(members.size()));
    }
    net.members = std::move(members);
    return net;
}

NetDictionary family_net(const LowerBoundFamily& family) {
    NetDictionary net;
    net.epsilon = 0.0;
    net.meta.kind = "family";
    net.meta.d = family.d;
    net.meta.cells = family.b;
    net.members.reserve(family.num_codes());
    for (long i = 0; i < family.num_codes(); ++i) net.members.push_back(family.eta(static_cast<int>(i)));
    net.log_cardinality = std::log(static_cast<double>(family.num_codes()));
    return net;
}

double epsilon_schedule(long n, double alpha, double r, std::string* warning) {
    if (n < 1) throw std::invalid_argument("epsilon_schedule: n must be >= 1");
    if (!(alpha > 0.0)) throw std::invalid_argument("epsilon_schedule: alpha must be positive");
    if (!(r > 0.0)) throw std::invalid_argument("epsilon_schedule: r must be positive");
    const double exponent = 1.0 / (2.0 + alpha + r);
    if (exponent < 1e-9 && warning) *warning = "degenerate schedule: exponent ~ 0, epsilon ~ 1";
    return std::pow(static_cast<double>(n), -exponent);
}

RuleClass RuleClass::explicit_list(std::vector<PredictionRule> rules) {
    if (rules.empty()) throw std::invalid_argument("RuleClass: empty explicit class");
    RuleClass c;
    c.repr_ = std::move(rules);
    return c;
}

RuleClass RuleClass::cellwise_product(CellGrid grid) {
    RuleClass c;
    c.repr_ = grid;
    return c;
}

const std::vector<PredictionRule>* RuleClass::rules() const {
    return std::get_if<std::vector<PredictionRule>>(&repr_);
}

const CellGrid* RuleClass::product_grid() const {
    return std::get_if<CellGrid>(&repr_);
}

CompiledNet CompiledNet::compile(const NetDictionary& net) {
    if (!net.materialized || net.members.empty())
        throw std::invalid_argument("net_erm: net has no materialized members");
    CompiledNet cn;
    cn.dim_ = net.members.front().dim();

    // Deduplicate members by induced rule; the representative keeps the
    // smallest original index, so tie-breaking matches the undeduplicated scan.
    std::map<std::vector<std::uint8_t>, std::size_t> seen;
    bool all_cellwise = true;
    bool all_grid = true;
    for (std::size_t i = 0; i < net.members.size(); ++i) {
        PredictionRule rule = bayes_rule(net.members[i]);
        std::vector<std::uint8_t> key;
        if (const auto* cw = rule.cellwise_repr()) {
            key = cw->labels;
            key.push_back(cw->null_label);
            all_grid = false;
        } else if (const auto* g = rule.grid_repr()) {
            key = g->labels;
            all_cellwise = false;
        } else {
            // Opaque rules cannot be keyed: keep every member.
            all_cellwise = all_grid = false;
            cn.rules_.push_back(std::move(rule));
            cn.first_index_.push_back(static_cast<long>(i));
            continue;
        }
        auto [it, inserted] = seen.emplace(std::move(key), cn.rules_.size());
        if (inserted) {
            cn.rules_.push_back(std::move(rule));
            cn.first_index_.push_back(static_cast<long>(i));
        }
    }

    if (all_cellwise && !cn.rules_.empty()) {
        cn.common_grid_ = cn.rules_.front().cellwise_repr()->grid;
        cn.cellwise_mode_ = true;
        for (const auto& r : cn.rules_)
            if (!(r.cellwise_repr()->grid == cn.common_grid_)) { cn.cellwise_mode_ = false; break; }
    }
    if (!cn.cellwise_mode_ && all_grid && !cn.rules_.empty()) {
        cn.grid_cells_ = cn.rules_.front().grid_repr()->cells_per_axis;
        cn.grid_mode_ = true;
        for (const auto& r : cn.rules_)
            if (r.grid_repr()->cells_per_axis != cn.grid_cells_ || r.grid_repr()->dim != cn.dim_)
                { cn.grid_mode_ = false; break; }
    }
    return cn;
}

ErmResult CompiledNet::erm(const Dataset& D) const {
    if (D.size() == 0) throw std::invalid_argument("empty sample");
    const long n = static_cast<long>(D.size());

    long best = -1;
    long best_mismatches = n + 1;
    long best_first = std::numeric_limits<long>::max();

    if (cellwise_mode_) {
        const long b = common_grid_.cells();
        std::vector<long> ones(b, 0), zeros(b, 0);
        long null_ones = 0, null_zeros = 0;
        for (std::size_t i = 0; i < D.size(); ++i) {
            const Coords x = D.x(i);
            if (common_grid_.in_plateau(x)) {
                const long c = common_grid_.cell_of(x);
                D.y(i) ? ++ones[c] : ++zeros[c];
            } else {
                D.y(i) ? ++null_ones : ++null_zeros;
            }
        }
        for (std::size_t r = 0; r < rules_.size(); ++r) {
            const auto& cw = *rules_[r].cellwise_repr();
            long mism = cw.null_label ? null_zeros : null_ones;
            for (long c = 0; c < b; ++c) mism += cw.labels[c] ? zeros[c] : ones[c];
            if (mism < best_mismatches || (mism == best_mismatches && first_index_[r] < best_first)) {
                best = static_cast<long>(r);
                best_mismatches = mism;
                best_first = first_index_[r];
            }
        }
    } else if (grid_mode_) {
        long cells = 1;
        for (int j = 0; j < dim_; ++j) cells *= grid_cells_;
        std::vector<long> ones(cells, 0), zeros(cells, 0);
        const auto& proto = *rules_.front().grid_repr();
        for (std::size_t i = 0; i < D.size(); ++i) {
            const long c = proto.cell_of(D.x(i));
            D.y(i) ? ++ones[c] : ++zeros[c];
        }
        for (std::size_t r = 0; r < rules_.size(); ++r) {
            const auto& g = *rules_[r].grid_repr();
            long mism = 0;
            for (long c = 0; c < cells; ++c) mism += g.labels[c] ? zeros[c] : ones[c];
            if (mism < best_mismatches || (mism == best_mismatches && first_index_[r] < best_first)) {
                best = static_cast<long>(r);
                best_mismatches = mism;
                best_first = first_index_[r];
            }
        }
    } else {
        for (std::size_t r = 0; r < rules_.size(); ++r) {
            const long mism = empirical_mismatches(rules_[r], D);
            if (mism < best_mismatches || (mism == best_mismatches && first_index_[r] < best_first)) {
                best = static_cast<long>(r);
                best_mismatches = mism;
                best_first = first_index_[r];
            }
        }
    }

    return ErmResult{rules_[best], best_mismatches,
                     static_cast<double>(best_mismatches) / static_cast<double>(n), first_index_[best]};
}

ErmResult net_erm(const NetDictionary& net, const Dataset& D) {
    return CompiledNet::compile(net).erm(D);
}

ErmResult class_erm(const RuleClass& rules, const Dataset& D) {
    if (D.size() == 0) throw std::invalid_argument("empty sample");
    const long n = static_cast<long>(D.size());

    if (const auto* grid = rules.product_grid()) {
        const long b = grid->cells();
        std::vector<long> ones(b, 0), zeros(b, 0);
        long null_ones = 0, null_zeros = 0;
        for (std::size_t i = 0; i < D.size(); ++i) {
            const Coords x = D.x(i);
            if (grid->in_plateau(x)) {
                const long c = grid->cell_of(x);
                D.y(i) ? ++ones[c] : ++zeros[c];
            } else {
                D.y(i) ? ++null_ones : ++null_zeros;
            }
        }
        PredictionRule::Cellwise cw;
        cw.grid = *grid;
        cw.labels.resize(b);
        long mism = 0;
        for (long c = 0; c < b; ++c) {
            cw.labels[c] = ones[c] >= zeros[c] ? 1 : 0; // ties and empty cells -> 1
            mism += cw.labels[c] ? zeros[c] : ones[c];
        }
        cw.null_label = null_ones >= null_zeros ? 1 : 0;
        mism += cw.null_label ? null_zeros : null_ones;
        return ErmResult{PredictionRule::cellwise(std::move(cw)), mism,
                         static_cast<double>(mism) / static_cast<double>(n), -1};
    }

    const auto& list = *rules.rules();
    long best = 0;
    long best_mismatches = n + 1;
    for (std::size_t r = 0; r < list.size(); ++r) {
        const long mism = empirical_mismatches(list[r], D);
        if (mism < best_mismatches) {
            best = static_cast<long>(r);
            best_mismatches = mism;
        }
    }
    return ErmResult{list[best], best_mismatches,
                     static_cast<double>(best_mismatches) / static_cast<double>(n), best};
}

long covering_number_greedy(long count, const std::function<double(long, long)>& dist, double epsilon) {
    if (count <= 0) return 0;
    std::vector<long> centers;
    for (long i = 0; i < count; ++i) {
        bool covered = false;
        for (long c : centers) {
            if (dist(i, c) <= epsilon) { covered = true; break; }
        }
        if (!covered) centers.push_back(i);
    }
    return static_cast<long>(centers.size());
}

long covering_number_exact(long count, const std::function<double(long, long)>& dist, double epsilon) {
    if (count <= 0) return 0;
    if (count > 20) throw std::invalid_argument("covering_number_exact: class too large (> 20)");
    const long full = (1L << count) - 1;
    std::vector<long> ball(count, 0);
    for (long c = 0; c < count; ++c)
        for (long i = 0; i < count; ++i)
            if (dist(i, c) <= epsilon) ball[c] |= 1L << i;
    std::vector<int> dp(full + 1, count + 1);
    dp[0] = 0;
    for (long mask = 0; mask < full; ++mask) {
        if (dp[mask] > count) continue;
        long i = 0;
        while (mask & (1L << i)) ++i; // first uncovered member
        for (long c = 0; c < count; ++c) {
            if (!(ball[c] & (1L << i))) continue;
            const long next = mask | ball[c];
            dp[next] = std::min(dp[next], dp[mask] + 1);
        }
    }
    return dp[full];
}

} // namespace acbound
