#ifndef ACBOUND_MARGIN_HPP
#define ACBOUND_MARGIN_HPP

#include <span>
#include <string>
#include <vector>

#include "acbound/core.hpp"

namespace acbound {

struct MarginCheck {
    std::string label;
    double lhs = 0.0;
    double rhs = 0.0;
    bool pass = true;
};

struct MarginReport {
    std::vector<MarginCheck> checks;
    double worst_ratio = 0.0; // max over checks of (violating side)/(bounding side); <= 1 iff verdict
    bool verdict = true;
    std::vector<std::string> warnings;
};

// kappa = (1+alpha)/alpha; 1 for alpha = +infinity. Throws for alpha <= 0.
double kappa_of_alpha(double alpha);

// c_M = (2 C_M)^{-1/alpha}; 1 for alpha = +infinity. Throws for C_M <= 0.
double c_M_of(double C_M, double alpha);

// mu(0 < |eta(X) - 1/2| <= t). Exact for cell-structured distributions
// (b*w on {cell_gap <= 2t}), midpoint quadrature otherwise.
double margin_mass(const Distribution& P, double t, int resolution = 512);

// Margin condition (2.15): mu(0 < |eta-1/2| <= t) <= C_M t^alpha on a t-grid.
// Warns (never rejects) when C_M < 1/2.
MarginReport check_margin_2_15(const Distribution& P, double alpha, double C_M,
                               std::span<const double> t_grid, int resolution = 512);

// Measurable set restricted to {eta != 1/2}: a union of plateau subcubes.
// Sets touching the positive-mass zero-margin region are rejected.
struct CellSet {
    std::vector<long> cells;
    bool include_null = false;
};

// Integral form (2.12): int_G |2 eta - 1| dmu >= c_M mu(G)^kappa for each set.
MarginReport check_margin_2_12(const Distribution& P, double kappa, double c_M,
                               std::span<const CellSet> sets);

struct Lemma23Result {
    double l1 = 0.0;     // ||f - f*||_{L1}, zero-margin set excluded
    double bound = 0.0;  // c_M * l1^kappa
    double excess = 0.0; // R(f) - R*
    bool pass = true;
};

// Lemma 2.3: R(f) - R* >= (2 C_M)^{-1/alpha} ||f - f*||_1^{(1+alpha)/alpha}.
Lemma23Result lemma23_check(const PredictionRule& f, const Distribution& P, const MarginSpec& margin,
                            int resolution = 256);

struct SupnormTransferResult {
    double sup_dist = 0.0;   // ||eta_bar - eta||_{L_inf(mu)} over the support
    double l1 = 0.0;         // ||f_{eta_bar} - f*||_1, zero-margin set excluded
    double l1_bound = 0.0;   // 2 C_M sup^alpha
    double excess = 0.0;     // R(f_{eta_bar}) - R*
    double excess_bound = 0.0; // 2 C_M sup^{1+alpha}
    bool l1_bound_pass = true;
    bool excess_bound_pass = true;
};

// Prop 2.2 and the Audibert-Tsybakov transfer: both inequalities evaluated.
SupnormTransferResult supnorm_transfer_check(const RegressionFn& eta_bar, const Distribution& P,
                                             const MarginSpec& margin, int resolution = 256);

} // namespace acbound

#endif
