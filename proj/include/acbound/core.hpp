#ifndef ACBOUND_CORE_HPP
#define ACBOUND_CORE_HPP

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace acbound {

using Coords = std::span<const double>;

// Cell geometry shared by the lower-bound construction and cellwise
// representations. In cell-local coordinates u = q*x - k the bump plateau is
// [1/4,3/4]^d and the bump support is (1/8,7/8)^d.
inline constexpr double kPlateauLo = 0.25;
inline constexpr double kPlateauHi = 0.75;
inline constexpr double kSupportLo = 0.125;
inline constexpr double kSupportHi = 0.875;

struct Point {
    std::vector<double> coords;
};

struct LabeledSample {
    Point x;
    int y = 0; // in {0,1}
};

struct Provenance {
    std::string family_id;
    int code_index = -1;
    std::uint64_t seed = 0;
};

// Ordered labeled sample, stored flat (row-major coordinates). Order is the
// generation order and is significant for reproducibility; estimators must be
// order-independent.
class Dataset {
public:
    Dataset(int dim, Provenance prov = {});

    void reserve(std::size_t n);
    void push_back(Coords x, int y);

    std::size_t size() const { return ys_.size(); }
    int dim() const { return dim_; }
    Coords x(std::size_t i) const { return {xs_.data() + i * dim_, static_cast<std::size_t>(dim_)}; }
    int y(std::size_t i) const { return ys_[i]; }
    LabeledSample sample(std::size_t i) const;
    const Provenance& provenance() const { return prov_; }

private:
    int dim_;
    std::vector<double> xs_;
    std::vector<std::uint8_t> ys_;
    Provenance prov_;
};

// Regular grid of q^d cells over [0,1]^d; axis 0 is the fastest-varying index.
struct CellGrid {
    int dim = 1;
    int q = 1;

    long cells() const;
    long cell_of(Coords x) const;
    // Cell index plus local coordinates u = q*x - k (u in [0,1]^d up to rounding).
    long local(Coords x, double* u) const;
    bool in_plateau(Coords x) const;

    friend bool operator==(const CellGrid&, const CellGrid&) = default;
};

// Regression function X -> [0,1] with an optional structured representation
// for exact risk arithmetic.
class RegressionFn {
public:
    // mu*-essential version of the construction's eta_sigma: (1 +- amplitude)/2
    // on the plateau subcubes, 1/2 elsewhere (the marginal puts no mass there).
    struct Cellwise {
        CellGrid grid;
        double amplitude = 0.0;            // |2*eta - 1| on the plateau subcubes
        std::vector<std::int8_t> signs;    // one of {-1,+1} per cell
    };
    // Piecewise constant on an even grid with `cells_per_axis` cells per axis.
    struct Tabulated {
        int dim = 1;
        int cells_per_axis = 1;
        std::vector<double> values;
        long cell_of(Coords x) const;
    };

    static RegressionFn constant(int dim, double value);
    static RegressionFn cellwise(Cellwise cw);
    static RegressionFn tabulated(Tabulated tab);
    static RegressionFn from_fn(int dim, std::function<double(Coords)> f);

    double operator()(Coords x) const;
    int dim() const { return dim_; }
    const Cellwise* cellwise_repr() const { return std::get_if<Cellwise>(&repr_); }
    const Tabulated* tabulated_repr() const { return std::get_if<Tabulated>(&repr_); }

private:
    RegressionFn() = default;
    int dim_ = 1;
    std::variant<double, Cellwise, Tabulated, std::function<double(Coords)>> repr_;
};

// Prediction rule X -> {0,1}.
class PredictionRule {
public:
    // Per-cell label on the plateau subcubes, default label elsewhere (the
    // null set A0 plus the zero-mass transition region).
    struct Cellwise {
        CellGrid grid;
        std::vector<std::uint8_t> labels;
        std::uint8_t null_label = 1;
    };
    // Piecewise constant on an even grid (rules induced by tabulated nets).
    struct Grid {
        int dim = 1;
        int cells_per_axis = 1;
        std::vector<std::uint8_t> labels;
        long cell_of(Coords x) const;
    };

    static PredictionRule constant(int dim, int label);
    static PredictionRule cellwise(Cellwise cw);
    static PredictionRule grid(Grid g);
    static PredictionRule from_fn(int dim, std::function<int(Coords)> f);

    int operator()(Coords x) const;
    int dim() const { return dim_; }
    const Cellwise* cellwise_repr() const { return std::get_if<Cellwise>(&repr_); }
    const Grid* grid_repr() const { return std::get_if<Grid>(&repr_); }

private:
    PredictionRule() = default;
    int dim_ = 1;
    std::variant<int, Cellwise, Grid, std::function<int(Coords)>> repr_;
};

// Margin-condition parameters. alpha = +infinity is admitted and carried as
// the IEEE infinity with dedicated code paths (kappa = 1, c_M = 1).
struct MarginSpec {
    double alpha = 1.0;
    double C_M = 1.0;

    double kappa() const;
    double c_M() const;

    static MarginSpec make(double alpha, double C_M);
};

// Distribution descriptor: a support decomposition into axis-aligned boxes of
// constant marginal density plus the regression function. Closed-form hooks
// are attached by the lower-bound family so that risk arithmetic on cellwise
// rules is quadrature-free.
struct Distribution {
    struct Box {
        std::vector<double> lo;
        std::vector<double> hi;
        double density = 0.0;
    };
    // Present when the marginal lives on plateau subcubes plus a null set:
    // each subcube has mass `cell_mass` and |2*eta-1| = cell_gap there;
    // eta = 1/2 on the null set of mass null_mass.
    struct CellStructure {
        CellGrid grid;
        double cell_mass = 0.0;
        double cell_gap = 0.0;
        double null_mass = 0.0;
    };

    int dim = 1;
    std::vector<Box> boxes;
    RegressionFn eta = RegressionFn::constant(1, 0.5);
    PredictionRule bayes = PredictionRule::constant(1, 1);
    std::optional<CellStructure> cells;
    std::function<double(const PredictionRule&)> exact_excess; // set by lb_family

    double total_mass() const;
};

// f*(x) = 1{eta(x) >= 1/2}; ties map to label 1 everywhere in this library.
PredictionRule bayes_rule(const RegressionFn& eta);

// Number of label mismatches of f on D; the empirical risk is the same count
// divided by n. Throws on an empty sample.
long empirical_mismatches(const PredictionRule& f, const Dataset& D);
double empirical_risk(const PredictionRule& f, const Dataset& D);

// R(f) - R* = integral of |2*eta-1| over {f != f*}. Uses the distribution's
// exact hook when available (cellwise/grid rules on lb_family distributions),
// otherwise a midpoint rule with `resolution` points per axis per box.
double excess_risk_quadrature(const PredictionRule& f, const Distribution& P, int resolution = 256);

// L1(mu) distance of the rules compared as +-1-valued functions, i.e.
// 2 mu({f != g}) — the scale of the code-distance display ||sigma-sigma'|| w
// that the comparison lemmas and the margin constant C(2/c2)^alpha are
// calibrated against. With exclude_zero_margin the set {eta = 1/2} is removed
// from the disagreement region first (needed on the null set A0, where every
// rule is Bayes-optimal).
double l1_disagreement(const PredictionRule& f, const PredictionRule& g, const Distribution& P,
                       bool exclude_zero_margin, int resolution = 256);

} // namespace acbound

#endif
