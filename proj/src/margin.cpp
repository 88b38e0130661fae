#include "acbound/margin.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace acbound {

namespace {

constexpr double kExactTol = 1e-12;
constexpr double kQuadTol = 1e-6;

double ratio_of(double violating, double bounding) {
    if (violating <= 0.0) return 0.0;
    if (bounding <= 0.0) return std::numeric_limits<double>::infinity();
    return violating / bounding;
}

// Visit the midpoint grid of every positive-density support box; fn receives
// the point and the mass it carries.
template <typename Fn>
void for_each_support_point(const Distribution& P, int resolution, Fn&& fn) {
    if (P.boxes.empty()) throw std::invalid_argument("unsupported distribution: no support decomposition");
    const int d = P.dim;
    std::vector<double> x(d);
    std::vector<int> idx(d);
    for (const auto& box : P.boxes) {
        if (box.density == 0.0) continue;
        double vol = 1.0;
        for (int j = 0; j < d; ++j) vol *= box.hi[j] - box.lo[j];
        if (vol <= 0.0) continue;
        long points = 1;
        for (int j = 0; j < d; ++j) points *= resolution;
        const double point_mass = box.density * vol / static_cast<double>(points);
        std::fill(idx.begin(), idx.end(), 0);
        for (long p = 0; p < points; ++p) {
            for (int j = 0; j < d; ++j)
                x[j] = box.lo[j] + (box.hi[j] - box.lo[j]) * (idx[j] + 0.5) / resolution;
            fn(Coords{x.data(), x.size()}, point_mass);
            for (int j = 0; j < d; ++j) {
                if (++idx[j] < resolution) break;
                idx[j] = 0;
            }
        }
    }
}

template <typename Fn>
double indicator_mass(const Distribution& P, int resolution, Fn&& pred) {
    double total = 0.0;
    for_each_support_point(P, resolution, [&](Coords x, double mass) {
        if (pred(x)) total += mass;
    });
    return total;
}

} // namespace

double kappa_of_alpha(double alpha) {
    if (std::isinf(alpha)) return 1.0;
    if (!(alpha > 0.0)) throw std::invalid_argument("kappa_of_alpha: alpha must be positive");
    return (1.0 + alpha) / alpha;
}

double c_M_of(double C_M, double alpha) {
    if (!(C_M > 0.0)) throw std::invalid_argument("c_M_of: C_M must be positive");
    if (std::isinf(alpha)) return 1.0;
    if (!(alpha > 0.0)) throw std::invalid_argument("c_M_of: alpha must be positive");
    return std::pow(2.0 * C_M, -1.0 / alpha);
}

double margin_mass(const Distribution& P, double t, int resolution) {
    if (P.cells) {
        const auto& cs = *P.cells;
        const double total_cell_mass = static_cast<double>(cs.grid.cells()) * cs.cell_mass;
        return (cs.cell_gap > 0.0 && cs.cell_gap <= 2.0 * t) ? total_cell_mass : 0.0;
    }
    return indicator_mass(P, resolution, [&](Coords x) {
        const double gap = std::abs(2.0 * P.eta(x) - 1.0);
        return gap > 0.0 && gap <= 2.0 * t;
    });
}

MarginReport check_margin_2_15(const Distribution& P, double alpha, double C_M,
                               std::span<const double> t_grid, int resolution) {
    if (t_grid.empty()) throw std::invalid_argument("check_margin_2_15: empty t-grid");
    MarginReport report;
    if (C_M < 0.5)
        report.warnings.push_back("C_M < 1/2: below the paper's remark for null zero-margin sets");
    const double tol = P.cells ? kExactTol : kQuadTol;
    for (double t : t_grid) {
        if (!(t > 0.0 && t < 1.0)) throw std::invalid_argument("check_margin_2_15: t must lie in (0,1)");
        const double lhs = margin_mass(P, t, resolution);
        // std::pow(t, +inf) = 0 for t in (0,1), which is the alpha = infinity reading.
        const double rhs = C_M * std::pow(t, alpha);
        const bool pass = lhs <= rhs + tol;
        report.checks.push_back({"t=" + std::to_string(t), lhs, rhs, pass});
        report.worst_ratio = std::max(report.worst_ratio, ratio_of(lhs, rhs));
        report.verdict = report.verdict && pass;
    }
    return report;
}

MarginReport check_margin_2_12(const Distribution& P, double kappa, double c_M,
                               std::span<const CellSet> sets) {
    if (!P.cells) throw std::invalid_argument("unsupported distribution: no cell structure");
    const auto& cs = *P.cells;
    MarginReport report;
    for (const auto& set : sets) {
        if (set.include_null && cs.null_mass > 0.0)
            throw std::invalid_argument("zero-margin set: eta = 1/2 with positive mass");
        std::set<long> cells(set.cells.begin(), set.cells.end());
        for (long c : cells)
            if (c < 0 || c >= cs.grid.cells()) throw std::invalid_argument("check_margin_2_12: cell index out of range");
        const double count = static_cast<double>(cells.size());
        const double lhs = count * cs.cell_gap * cs.cell_mass; // int_G |2 eta - 1| dmu
        const double mu_g = count * cs.cell_mass;
        const double rhs = c_M * std::pow(mu_g, kappa);
        const bool pass = lhs >= rhs - kExactTol;
        report.checks.push_back({"cells=" + std::to_string(cells.size()), lhs, rhs, pass});
        report.worst_ratio = std::max(report.worst_ratio, ratio_of(rhs, lhs));
        report.verdict = report.verdict && pass;
    }
    return report;
}

Lemma23Result lemma23_check(const PredictionRule& f, const Distribution& P, const MarginSpec& margin,
                            int resolution) {
    Lemma23Result result;
    result.l1 = l1_disagreement(f, P.bayes, P, /*exclude_zero_margin=*/true, resolution);
    result.excess = excess_risk_quadrature(f, P, resolution);
    result.bound = margin.c_M() * std::pow(result.l1, margin.kappa());
    const double tol = P.cells ? kExactTol : kQuadTol;
    result.pass = result.excess >= result.bound - tol;
    return result;
}

SupnormTransferResult supnorm_transfer_check(const RegressionFn& eta_bar, const Distribution& P,
                                             const MarginSpec& margin, int resolution) {
    SupnormTransferResult result;
    const auto* bar_cw = eta_bar.cellwise_repr();
    const auto* eta_cw = P.eta.cellwise_repr();
    bool exact = false;
    if (bar_cw && eta_cw && bar_cw->grid == eta_cw->grid) {
        // Essential sup over the marginal's support: plateau values differ by
        // |s_bar*a_bar - s*a|/2 per cell, both equal 1/2 on A0.
        double sup = 0.0;
        for (std::size_t j = 0; j < bar_cw->signs.size(); ++j) {
            const double diff = 0.5 * std::abs(bar_cw->signs[j] * bar_cw->amplitude -
                                               eta_cw->signs[j] * eta_cw->amplitude);
            sup = std::max(sup, diff);
        }
        result.sup_dist = sup;
        exact = true;
    } else {
        // Dense midpoint grid over the support boxes, `resolution` points per axis.
        double sup = 0.0;
        for_each_support_point(P, resolution, [&](Coords x, double) {
            sup = std::max(sup, std::abs(eta_bar(x) - P.eta(x)));
        });
        result.sup_dist = sup;
    }

    const PredictionRule f_bar = bayes_rule(eta_bar);
    result.l1 = l1_disagreement(f_bar, P.bayes, P, /*exclude_zero_margin=*/true, resolution);
    result.excess = excess_risk_quadrature(f_bar, P, resolution);
    result.l1_bound = 2.0 * margin.C_M * std::pow(result.sup_dist, margin.alpha);
    result.excess_bound = 2.0 * margin.C_M * std::pow(result.sup_dist, 1.0 + margin.alpha);
    const double tol = exact && P.cells ? kExactTol : kQuadTol;
    result.l1_bound_pass = result.l1 <= result.l1_bound + tol;
    result.excess_bound_pass = result.excess <= result.excess_bound + tol;
    return result;
}

} // namespace acbound
