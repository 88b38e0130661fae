#include "acbound/core.hpp"

#include <cmath>
#include <stdexcept>

namespace acbound {

Dataset::Dataset(int dim, Provenance prov) : dim_(dim), prov_(std::move(prov)) {
    if (dim < 1) throw std::invalid_argument("Dataset: dimension must be >= 1");
}

void Dataset::reserve(std::size_t n) {
    xs_.reserve(n * dim_);
    ys_.reserve(n);
}

void Dataset::push_back(Coords x, int y) {
    if (static_cast<int>(x.size()) != dim_) throw std::invalid_argument("Dataset: coordinate dimension mismatch");
    if (y != 0 && y != 1) throw std::invalid_argument("Dataset: label must be 0 or 1");
    xs_.insert(xs_.end(), x.begin(), x.end());
    ys_.push_back(static_cast<std::uint8_t>(y));
}

LabeledSample Dataset::sample(std::size_t i) const {
    Coords c = x(i);
    return {Point{{c.begin(), c.end()}}, y(i)};
}

long CellGrid::cells() const {
    long b = 1;
    for (int j = 0; j < dim; ++j) b *= q;
    return b;
}

long CellGrid::cell_of(Coords x) const {
    long idx = 0;
    long stride = 1;
    for (int j = 0; j < dim; ++j) {
        long k = static_cast<long>(x[j] * q);
        if (k < 0) k = 0;
        if (k >= q) k = q - 1;
        idx += k * stride;
        stride *= q;
    }
    return idx;
}

long CellGrid::local(Coords x, double* u) const {
    long idx = 0;
    long stride = 1;
    for (int j = 0; j < dim; ++j) {
        long k = static_cast<long>(x[j] * q);
        if (k < 0) k = 0;
        if (k >= q) k = q - 1;
        u[j] = x[j] * q - static_cast<double>(k);
        idx += k * stride;
        stride *= q;
    }
    return idx;
}

bool CellGrid::in_plateau(Coords x) const {
    for (int j = 0; j < dim; ++j) {
        long k = static_cast<long>(x[j] * q);
        if (k < 0) k = 0;
        if (k >= q) k = q - 1;
        const double u = x[j] * q - static_cast<double>(k);
        if (u < kPlateauLo || u > kPlateauHi) return false;
    }
    return true;
}

long RegressionFn::Tabulated::cell_of(Coords x) const {
    long idx = 0;
    long stride = 1;
    for (int j = 0; j < dim; ++j) {
        long k = static_cast<long>(x[j] * cells_per_axis);
        if (k < 0) k = 0;
        if (k >= cells_per_axis) k = cells_per_axis - 1;
        idx += k * stride;
        stride *= cells_per_axis;
    }
    return idx;
}

RegressionFn RegressionFn::constant(int dim, double value) {
    RegressionFn f;
    f.dim_ = dim;
    f.repr_ = value;
    return f;
}

RegressionFn RegressionFn::cellwise(Cellwise cw) {
    if (static_cast<long>(cw.signs.size()) != cw.grid.cells())
        throw std::invalid_argument("RegressionFn: sign vector size must equal cell count");
    RegressionFn f;
    f.dim_ = cw.grid.dim;
    f.repr_ = std::move(cw);
    return f;
}

RegressionFn RegressionFn::tabulated(Tabulated tab) {
    long expect = 1;
    for (int j = 0; j < tab.dim; ++j) expect *= tab.cells_per_axis;
    if (static_cast<long>(tab.values.size()) != expect)
        throw std::invalid_argument("RegressionFn: value table size mismatch");
    RegressionFn f;
    f.dim_ = tab.dim;
    f.repr_ = std::move(tab);
    return f;
}

RegressionFn RegressionFn::from_fn(int dim, std::function<double(Coords)> fn) {
    RegressionFn f;
    f.dim_ = dim;
    f.repr_ = std::move(fn);
    return f;
}

double RegressionFn::operator()(Coords x) const {
    if (const auto* c = std::get_if<double>(&repr_)) return *c;
    if (const auto* cw = std::get_if<Cellwise>(&repr_)) {
        if (!cw->grid.in_plateau(x)) return 0.5;
        const long k = cw->grid.cell_of(x);
        return 0.5 * (1.0 + cw->signs[k] * cw->amplitude);
    }
    if (const auto* tab = std::get_if<Tabulated>(&repr_)) return tab->values[tab->cell_of(x)];
    return std::get<std::function<double(Coords)>>(repr_)(x);
}

long PredictionRule::Grid::cell_of(Coords x) const {
    long idx = 0;
    long stride = 1;
    for (int j = 0; j < dim; ++j) {
        long k = static_cast<long>(x[j] * cells_per_axis);
        if (k < 0) k = 0;
        if (k >= cells_per_axis) k = cells_per_axis - 1;
        idx += k * stride;
        stride *= cells_per_axis;
    }
    return idx;
}

PredictionRule PredictionRule::constant(int dim, int label) {
    if (label != 0 && label != 1) throw std::invalid_argument("PredictionRule: label must be 0 or 1");
    PredictionRule f;
    f.dim_ = dim;
    f.repr_ = label;
    return f;
}

PredictionRule PredictionRule::cellwise(Cellwise cw) {
    if (static_cast<long>(cw.labels.size()) != cw.grid.cells())
        throw std::invalid_argument("PredictionRule: label vector size must equal cell count");
    PredictionRule f;
    f.dim_ = cw.grid.dim;
    f.repr_ = std::move(cw);
    return f;
}

PredictionRule PredictionRule::grid(Grid g) {
    long expect = 1;
    for (int j = 0; j < g.dim; ++j) expect *= g.cells_per_axis;
    if (static_cast<long>(g.labels.size()) != expect)
        throw std::invalid_argument("PredictionRule: label table size mismatch");
    PredictionRule f;
    f.dim_ = g.dim;
    f.repr_ = std::move(g);
    return f;
}

PredictionRule PredictionRule::from_fn(int dim, std::function<int(Coords)> fn) {
    PredictionRule f;
    f.dim_ = dim;
    f.repr_ = std::move(fn);
    return f;
}

int PredictionRule::operator()(Coords x) const {
    if (const auto* c = std::get_if<int>(&repr_)) return *c;
    if (const auto* cw = std::get_if<Cellwise>(&repr_)) {
        if (!cw->grid.in_plateau(x)) return cw->null_label;
        return cw->labels[cw->grid.cell_of(x)];
    }
    if (const auto* g = std::get_if<Grid>(&repr_)) return g->labels[g->cell_of(x)];
    return std::get<std::function<int(Coords)>>(repr_)(x);
}

double MarginSpec::kappa() const {
    if (std::isinf(alpha)) return 1.0;
    return (1.0 + alpha) / alpha;
}

double MarginSpec::c_M() const {
    if (std::isinf(alpha)) return 1.0;
    return std::pow(2.0 * C_M, -1.0 / alpha);
}

MarginSpec MarginSpec::make(double alpha, double C_M) {
    if (!(alpha > 0.0)) throw std::invalid_argument("MarginSpec: alpha must be positive (or +infinity)");
    if (!(C_M > 0.0)) throw std::invalid_argument("MarginSpec: C_M must be positive");
    return MarginSpec{alpha, C_M};
}

double Distribution::total_mass() const {
    double mass = 0.0;
    for (const auto& box : boxes) {
        double vol = 1.0;
        for (std::size_t j = 0; j < box.lo.size(); ++j) vol *= box.hi[j] - box.lo[j];
        mass += vol * box.density;
    }
    return mass;
}

PredictionRule bayes_rule(const RegressionFn& eta) {
    if (const auto* cw = eta.cellwise_repr()) {
        PredictionRule::Cellwise rule;
        rule.grid = cw->grid;
        rule.labels.resize(cw->signs.size());
        for (std::size_t j = 0; j < cw->signs.size(); ++j) {
            const double value = 0.5 * (1.0 + cw->signs[j] * cw->amplitude);
            rule.labels[j] = value >= 0.5 ? 1 : 0;
        }
        rule.null_label = 1; // eta = 1/2 there, ties map to 1
        return PredictionRule::cellwise(std::move(rule));
    }
    if (const auto* tab = eta.tabulated_repr()) {
        PredictionRule::Grid rule;
        rule.dim = tab->dim;
        rule.cells_per_axis = tab->cells_per_axis;
        rule.labels.resize(tab->values.size());
        for (std::size_t j = 0; j < tab->values.size(); ++j) rule.labels[j] = tab->values[j] >= 0.5 ? 1 : 0;
        return PredictionRule::grid(std::move(rule));
    }
    return PredictionRule::from_fn(eta.dim(), [eta](Coords x) { return eta(x) >= 0.5 ? 1 : 0; });
}

long empirical_mismatches(const PredictionRule& f, const Dataset& D) {
    if (D.size() == 0) throw std::invalid_argument("empirical_risk: empty sample");
    long mismatches = 0;
    for (std::size_t i = 0; i < D.size(); ++i)
        if (f(D.x(i)) != D.y(i)) ++mismatches;
    return mismatches;
}

double empirical_risk(const PredictionRule& f, const Dataset& D) {
    return static_cast<double>(empirical_mismatches(f, D)) / static_cast<double>(D.size());
}

namespace {

// Midpoint-rule sum of `weight(x)` over the box decomposition.
template <typename Fn>
double box_quadrature(const Distribution& P, int resolution, Fn&& weight) {
    if (P.boxes.empty()) throw std::invalid_argument("unsupported distribution: no support decomposition");
    if (resolution < 2) throw std::invalid_argument("quadrature resolution must be >= 2");
    const int d = P.dim;
    std::vector<double> x(d);
    std::vector<int> idx(d);
    double total = 0.0;
    for (const auto& box : P.boxes) {
        if (box.density == 0.0) continue;
        double vol = 1.0;
        for (int j = 0; j < d; ++j) vol *= box.hi[j] - box.lo[j];
        if (vol <= 0.0) continue;
        long points = 1;
        for (int j = 0; j < d; ++j) points *= resolution;
        const double point_mass = box.density * vol / static_cast<double>(points);
        std::fill(idx.begin(), idx.end(), 0);
        double acc = 0.0;
        for (long p = 0; p < points; ++p) {
            for (int j = 0; j < d; ++j)
                x[j] = box.lo[j] + (box.hi[j] - box.lo[j]) * (idx[j] + 0.5) / resolution;
            acc += weight(Coords{x.data(), x.size()});
            for (int j = 0; j < d; ++j) {
                if (++idx[j] < resolution) break;
                idx[j] = 0;
            }
        }
        total += acc * point_mass;
    }
    return total;
}

bool grids_match(const PredictionRule& f, const Distribution& P) {
    const auto* cw = f.cellwise_repr();
    return cw && P.cells && cw->grid == P.cells->grid;
}

} // namespace

double excess_risk_quadrature(const PredictionRule& f, const Distribution& P, int resolution) {
    if (P.exact_excess && (f.cellwise_repr() || f.grid_repr())) {
        // Exact closed form supplied by the family; quadrature-free.
        return P.exact_excess(f);
    }
    return box_quadrature(P, resolution, [&](Coords x) {
        const double gap = std::abs(2.0 * P.eta(x) - 1.0);
        return (gap > 0.0 && f(x) != P.bayes(x)) ? gap : 0.0;
    });
}

double l1_disagreement(const PredictionRule& f, const PredictionRule& g, const Distribution& P,
                       bool exclude_zero_margin, int resolution) {
    if (grids_match(f, P) && grids_match(g, P)) {
        const auto& fs = *f.cellwise_repr();
        const auto& gs = *g.cellwise_repr();
        const auto& cs = *P.cells;
        long differing = 0;
        for (std::size_t j = 0; j < fs.labels.size(); ++j)
            if (fs.labels[j] != gs.labels[j]) ++differing;
        double mass = static_cast<double>(differing) * cs.cell_mass;
        if (!exclude_zero_margin && fs.null_label != gs.null_label) mass += cs.null_mass;
        return 2.0 * mass;
    }
    return box_quadrature(P, resolution, [&](Coords x) {
        if (f(x) == g(x)) return 0.0;
        if (exclude_zero_margin && P.eta(x) == 0.5) return 0.0;
        return 2.0;
    });
}

} // namespace acbound
