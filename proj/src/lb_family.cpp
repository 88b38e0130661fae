#include "acbound/lb_family.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include "acbound/margin.hpp"
#include "acbound/rng.hpp"

namespace acbound {

double BumpProfile::ramp(double v) {
    if (v <= 0.0) return 0.0;
    if (v >= 1.0) return 1.0;
    // s(v) = e^{-1/v} / (e^{-1/v} + e^{-1/(1-v)}) = 1 / (1 + e^{1/v - 1/(1-v)})
    const double t = 1.0 / v - 1.0 / (1.0 - v);
    if (t > 700.0) return 0.0;
    if (t < -700.0) return 1.0;
    return 1.0 / (1.0 + std::exp(t));
}

double BumpProfile::axis(double v) {
    if (v <= kSupportLo || v >= kSupportHi) return 0.0;
    if (v >= kPlateauLo && v <= kPlateauHi) return 1.0;
    if (v < kPlateauLo) return ramp(8.0 * (v - kSupportLo));
    return ramp(8.0 * (kSupportHi - v));
}

double BumpProfile::operator()(Coords u) const {
    double value = c2;
    for (double uj : u) {
        if (uj < 0.0 || uj > 1.0) throw std::invalid_argument("BumpProfile: point outside [0,1]^d");
        value *= axis(uj);
        if (value == 0.0) return 0.0;
    }
    return value;
}

namespace {

int popcount_words(const std::uint64_t* a, const std::uint64_t* b, int words) {
    int h = 0;
    for (int w = 0; w < words; ++w) h += std::popcount(a[w] ^ b[w]);
    return h;
}

std::vector<std::int8_t> unpack_code(std::uint64_t bits, int b) {
    std::vector<std::int8_t> code(b);
    for (int j = 0; j < b; ++j) code[j] = (bits >> j) & 1 ? 1 : -1;
    return code;
}

std::string format_double(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

} // namespace

std::vector<std::vector<std::int8_t>> vg_greedy(int b, int min_hamming, const VgOptions& opts) {
    if (b < 1) throw std::invalid_argument("vg_greedy: b must be >= 1");
    if (min_hamming < 0) throw std::invalid_argument("vg_greedy: min_hamming must be >= 0");
    std::vector<std::vector<std::int8_t>> codes;
    if (min_hamming <= 1) {
        // No constraint: every vector qualifies.
        if (opts.mode == VgOptions::Mode::exhaustive) {
            if (b > 24) throw std::invalid_argument("vg_greedy: enumeration too large (b > 24)");
            const std::uint64_t total = 1ULL << b;
            codes.reserve(total);
            for (std::uint64_t v = 0; v < total; ++v) codes.push_back(unpack_code(v, b));
            return codes;
        }
    }
    if (opts.mode == VgOptions::Mode::exhaustive) {
        if (b > 24) throw std::invalid_argument("vg_greedy: enumeration too large (b > 24)");
        const std::uint64_t total = 1ULL << b;
        std::vector<std::uint64_t> kept;
        // Membership bitmap of kept codes lets us test "any kept vector within
        // distance < min_hamming" by enumerating the Hamming ball when it is
        // small; otherwise fall back to a linear scan with early exit.
        std::vector<std::uint64_t> is_kept((total + 63) / 64, 0);
        double ball = 1.0;
        double binom = 1.0;
        for (int r = 1; r <= min_hamming - 1; ++r) {
            binom = binom * (b - r + 1) / r;
            ball += binom;
        }
        const bool use_ball = ball <= 4096.0;

        std::vector<std::uint64_t> sphere; // offsets at each radius, built incrementally
        for (std::uint64_t v = 0; v < total; ++v) {
            bool ok = true;
            if (use_ball) {
                // radius 0..min_hamming-1 around v
                sphere.clear();
                sphere.push_back(0);
                std::size_t lo = 0, hi = 1;
                for (int r = 1; r <= min_hamming - 1 && ok; ++r) {
                    for (std::size_t s = lo; s < hi && ok; ++s) {
                        const std::uint64_t base = sphere[s];
                        const int top = base == 0 ? -1 : 63 - std::countl_zero(base);
                        for (int j = top + 1; j < b; ++j) sphere.push_back(base | (1ULL << j));
                    }
                    lo = hi;
                    hi = sphere.size();
                }
                for (std::size_t s = 0; s < sphere.size() && ok; ++s) {
                    const std::uint64_t u = v ^ sphere[s];
                    if (is_kept[u >> 6] & (1ULL << (u & 63))) ok = false;
                }
            } else {
                for (std::uint64_t k : kept) {
                    if (std::popcount(v ^ k) < min_hamming) { ok = false; break; }
                }
            }
            if (ok) {
                kept.push_back(v);
                is_kept[v >> 6] |= 1ULL << (v & 63);
            }
        }
        codes.reserve(kept.size());
        for (std::uint64_t v : kept) codes.push_back(unpack_code(v, b));
        return codes;
    }

    // Randomized greedy: sample candidates, keep those far from all kept.
    const int words = (b + 63) / 64;
    std::vector<std::uint64_t> kept; // flattened, `words` per code
    Xoshiro256pp rng(opts.seed);
    std::vector<std::uint64_t> cand(words);
    for (long it = 0; it < opts.budget; ++it) {
        for (int w = 0; w < words; ++w) cand[w] = rng.next();
        if (b % 64 != 0) cand[words - 1] &= (1ULL << (b % 64)) - 1;
        bool ok = true;
        for (std::size_t c = 0; c + words <= kept.size() && ok; c += words)
            if (popcount_words(cand.data(), kept.data() + c, words) < min_hamming) ok = false;
        if (!ok) continue;
        kept.insert(kept.end(), cand.begin(), cand.end());
        std::vector<std::int8_t> code(b);
        for (int j = 0; j < b; ++j) code[j] = (cand[j >> 6] >> (j & 63)) & 1 ? 1 : -1;
        codes.push_back(std::move(code));
    }
    return codes;
}

LowerBoundFamily assemble_family(const FamilyParams& p, std::vector<std::vector<std::int8_t>> codes) {
    if (p.d < 1) throw std::invalid_argument("build_family: d must be >= 1");
    if (p.q < 1) throw std::invalid_argument("build_family: q must be >= 1");
    if (!(p.delta > 0.0 && p.delta < 1.0)) throw std::invalid_argument("build_family: delta must lie in (0,1)");
    if (!(p.alpha > 0.0) || std::isinf(p.alpha))
        throw std::invalid_argument("build_family: alpha must be positive and finite");
    if (!(p.C > 0.0 && p.C <= 1.0)) throw std::invalid_argument("build_family: C must lie in (0,1]");
    if (!(p.c2 > 0.0 && p.c2 < 0.5)) throw std::invalid_argument("build_family: c2 must lie in (0,1/2)");

    LowerBoundFamily fam;
    fam.d = p.d;
    fam.q = p.q;
    fam.b = 1;
    for (int j = 0; j < p.d; ++j) fam.b *= p.q;
    fam.delta = p.delta;
    fam.alpha = p.alpha;
    fam.C = p.C;
    fam.c2 = p.c2;
    fam.a = p.c2 * std::pow(p.delta, 1.0 / (1.0 + p.alpha));
    fam.bw = p.C * std::pow(p.delta, p.alpha / (1.0 + p.alpha));
    fam.w = fam.bw / static_cast<double>(fam.b);
    fam.cell_excess = fam.a * fam.w;
    fam.null_volume = 1.0 - std::pow(0.75, p.d);
    fam.lambda0 = std::pow(16.0, -(1.0 + p.alpha) / p.alpha) * p.C * p.c2;
    fam.bump.c2 = p.c2;
    if (fam.b < 16) fam.warnings.push_back("b < 16: below the construction's standing assumption");

    if (codes.empty()) throw std::invalid_argument("build_family: empty code set");
    for (const auto& code : codes) {
        if (static_cast<long>(code.size()) != fam.b)
            throw std::invalid_argument("build_family: code length must equal b");
        for (auto s : code)
            if (s != 1 && s != -1) throw std::invalid_argument("build_family: code entries must be +-1");
    }
    fam.codes = std::move(codes);

    fam.words_per_code_ = static_cast<int>((fam.b + 63) / 64);
    fam.packed_.assign(fam.codes.size() * fam.words_per_code_, 0);
    for (std::size_t i = 0; i < fam.codes.size(); ++i)
        for (long j = 0; j < fam.b; ++j)
            if (fam.codes[i][j] > 0) fam.packed_[i * fam.words_per_code_ + (j >> 6)] |= 1ULL << (j & 63);

    fam.id = "lb_d" + std::to_string(p.d) + "_q" + std::to_string(p.q) +
             "_delta" + format_double(p.delta) + "_alpha" + format_double(p.alpha) +
             "_C" + format_double(p.C) + "_c2" + format_double(p.c2);
    return fam;
}

LowerBoundFamily build_family(const FamilyParams& p) {
    long b = 1;
    for (int j = 0; j < p.d; ++j) b *= p.q;
    const int min_hamming = p.min_hamming >= 0 ? p.min_hamming : static_cast<int>((b + 7) / 8);
    VgOptions vg;
    vg.budget = p.code_budget;
    vg.seed = p.code_seed;
    if (p.code_mode == "exhaustive") {
        vg.mode = VgOptions::Mode::exhaustive;
    } else if (p.code_mode == "randomized") {
        vg.mode = VgOptions::Mode::randomized;
    } else {
        throw std::invalid_argument("build_family: code_mode must be 'exhaustive' or 'randomized'");
    }
    return assemble_family(p, vg_greedy(static_cast<int>(b), min_hamming, vg));
}

int LowerBoundFamily::hamming(int i, int j) const {
    return popcount_words(packed_.data() + static_cast<std::size_t>(i) * words_per_code_,
                          packed_.data() + static_cast<std::size_t>(j) * words_per_code_, words_per_code_);
}

double LowerBoundFamily::eta_sigma(int code, Coords x) const {
    std::vector<double> u(d);
    const long k = grid().local(x, u.data());
    const double psi = bump(Coords{u.data(), u.size()});
    const double amp = std::pow(delta, 1.0 / (1.0 + alpha));
    return 0.5 * (1.0 + codes[code][k] * amp * psi);
}

RegressionFn LowerBoundFamily::eta(int code) const {
    RegressionFn::Cellwise cw;
    cw.grid = grid();
    cw.amplitude = a;
    cw.signs = codes[code];
    return RegressionFn::cellwise(std::move(cw));
}

PredictionRule LowerBoundFamily::bayes(int code) const {
    return bayes_rule(eta(code));
}

Distribution LowerBoundFamily::distribution(int code) const {
    Distribution P;
    P.dim = d;
    P.eta = eta(code);
    P.bayes = bayes(code);
    P.cells = Distribution::CellStructure{grid(), w, a, 1.0 - bw};

    const double plateau_density = std::pow(2.0, d) * static_cast<double>(b) * w;
    const double null_density = (1.0 - bw) / null_volume;
    const double h = 1.0 / q;
    std::vector<int> k(d, 0);
    for (long cell = 0; cell < b; ++cell) {
        Distribution::Box plateau;
        plateau.density = plateau_density;
        for (int j = 0; j < d; ++j) {
            plateau.lo.push_back((k[j] + kPlateauLo) * h);
            plateau.hi.push_back((k[j] + kPlateauHi) * h);
        }
        P.boxes.push_back(std::move(plateau));
        // Slab decomposition of (cell minus the open support cube): for axis i
        // the two slabs have u_j in (1/8,7/8) for j < i and u_i outside.
        for (int i = 0; i < d; ++i) {
            for (int side = 0; side < 2; ++side) {
                Distribution::Box slab;
                slab.density = null_density;
                for (int j = 0; j < d; ++j) {
                    double lo = 0.0, hi = 1.0;
                    if (j < i) { lo = kSupportLo; hi = kSupportHi; }
                    if (j == i) {
                        if (side == 0) { lo = 0.0; hi = kSupportLo; }
                        else { lo = kSupportHi; hi = 1.0; }
                    }
                    slab.lo.push_back((k[j] + lo) * h);
                    slab.hi.push_back((k[j] + hi) * h);
                }
                P.boxes.push_back(std::move(slab));
            }
        }
        for (int j = 0; j < d; ++j) {
            if (++k[j] < q) break;
            k[j] = 0;
        }
    }

    // Closed-form excess hook: cellwise rules on this grid, and (d = 1)
    // piecewise-constant grid rules via interval overlap.
    const LowerBoundFamily* self = this;
    P.exact_excess = [self, code](const PredictionRule& rule) {
        if (rule.cellwise_repr()) return self->exact_excess_cellwise(code, rule);
        if (const auto* g = rule.grid_repr()) return self->exact_excess_grid_rule(code, *g);
        throw std::invalid_argument("use quadrature");
    };
    return P;
}

Dataset LowerBoundFamily::sample_dataset(int code, long n, std::uint64_t seed) const {
    if (n < 1) throw std::invalid_argument("sample_dataset: n must be >= 1");
    Dataset D(d, Provenance{id, code, seed});
    D.reserve(n);
    Xoshiro256pp rng(seed);
    std::vector<double> x(d);
    const auto& sigma = codes[code];
    for (long i = 0; i < n; ++i) {
        double etax;
        if (rng.uniform01() < bw) {
            const long cell = static_cast<long>(rng.below(static_cast<std::uint64_t>(b)));
            long rest = cell;
            for (int j = 0; j < d; ++j) {
                const long kj = rest % q;
                rest /= q;
                x[j] = (static_cast<double>(kj) + kPlateauLo + 0.5 * rng.uniform01()) / q;
            }
            etax = 0.5 * (1.0 + sigma[cell] * a);
        } else {
            // Uniform on A0: rejection from the unit cube, accepting when some
            // local coordinate leaves the open support interval.
            for (;;) {
                bool in_a0 = false;
                for (int j = 0; j < d; ++j) {
                    x[j] = rng.uniform01();
                    const double frac = x[j] * q - std::floor(x[j] * q);
                    if (frac <= kSupportLo || frac >= kSupportHi) in_a0 = true;
                }
                if (in_a0) break;
            }
            etax = 0.5;
        }
        const int y = rng.uniform01() < etax ? 1 : 0;
        D.push_back(Coords{x.data(), x.size()}, y);
    }
    return D;
}

double LowerBoundFamily::exact_bayes_risk() const {
    return 0.5 - 0.5 * C * c2 * delta;
}

double LowerBoundFamily::exact_excess_cellwise(int code, const PredictionRule& rule) const {
    const auto* cw = rule.cellwise_repr();
    if (!cw || !(cw->grid == grid())) throw std::invalid_argument("use quadrature");
    const auto& sigma = codes[code];
    long flips = 0;
    for (long j = 0; j < b; ++j) {
        const std::uint8_t bayes_label = sigma[j] > 0 ? 1 : 0;
        if (cw->labels[j] != bayes_label) ++flips;
    }
    // The A0 default label contributes nothing: |2 eta - 1| = 0 there.
    return static_cast<double>(flips) * cell_excess;
}

double LowerBoundFamily::exact_excess_grid_rule(int code, const PredictionRule::Grid& rule) const {
    if (d != 1 || rule.dim != 1) throw std::invalid_argument("exact_excess_grid_rule: d = 1 only");
    const auto& sigma = codes[code];
    const long m = rule.cells_per_axis;
    const double plateau_density = 2.0 * static_cast<double>(b) * w;
    double excess = 0.0;
    for (long j = 0; j < b; ++j) {
        const std::uint8_t bayes_label = sigma[j] > 0 ? 1 : 0;
        const double lo = (static_cast<double>(j) + kPlateauLo) / q;
        const double hi = (static_cast<double>(j) + kPlateauHi) / q;
        // Walk the net cells overlapping [lo, hi) and add the length where the
        // rule disagrees with the Bayes label.
        long i = static_cast<long>(lo * m);
        if (i < 0) i = 0;
        if (i >= m) i = m - 1;
        double pos = lo;
        double disagree_len = 0.0;
        while (pos < hi && i < m) {
            const double cell_hi = static_cast<double>(i + 1) / m;
            const double seg_hi = std::min(hi, cell_hi);
            if (rule.labels[i] != bayes_label) disagree_len += seg_hi - pos;
            pos = seg_hi;
            ++i;
        }
        excess += a * plateau_density * disagree_len;
    }
    return excess;
}

LowerBoundFamily::PairStats LowerBoundFamily::pairwise_stats(int i, int j) const {
    PairStats s;
    if (i == j) return s;
    s.hamming = hamming(i, j);
    const double hw = static_cast<double>(s.hamming) * w;
    s.l2_eta_sq = hw * a * a;
    s.l1_bayes = 2.0 * hw;
    s.chi2 = hw * a * a * 4.0 / (1.0 - a * a);
    s.kl = hw * a * std::log((1.0 + a) / (1.0 - a));
    return s;
}

int holder_q(double delta, double alpha, double beta, double c5) {
    if (!(delta > 0.0) || !(alpha > 0.0) || !(beta > 0.0) || !(c5 > 0.0))
        throw std::invalid_argument("holder_q: all arguments must be positive");
    const double value = c5 * std::pow(delta, -1.0 / ((1.0 + alpha) * beta));
    return static_cast<int>(std::ceil(value - 1e-9));
}

namespace {

void add_check(FamilyReport& report, std::string name, double lhs, double rhs, bool pass) {
    report.checks.push_back({std::move(name), lhs, rhs, pass});
    report.verdict = report.verdict && report.checks.back().pass;
}

// Numeric Hoelder-beta seminorm of eta over a dense 1-d-per-axis grid. Signs
// alternate in the checkerboard pattern so both same-sign and opposite-sign
// cell adjacencies are covered; any code's increments are bounded by the worst
// of the two patterns.
double grid_holder_seminorm(const LowerBoundFamily& fam, const std::vector<std::int8_t>& signs, double beta,
                            int points_per_axis) {
    const int d = fam.d;
    std::vector<long> idx(d, 0);
    long total = 1;
    for (int j = 0; j < d; ++j) total *= points_per_axis;
    std::vector<double> values(total);
    std::vector<std::vector<double>> coords(total, std::vector<double>(d));
    const double amp = std::pow(fam.delta, 1.0 / (1.0 + fam.alpha));
    std::vector<double> x(d), u(d);
    for (long p = 0; p < total; ++p) {
        for (int j = 0; j < d; ++j) x[j] = static_cast<double>(idx[j]) / (points_per_axis - 1);
        const long cell = fam.grid().local(Coords{x.data(), x.size()}, u.data());
        const double psi = fam.bump(Coords{u.data(), u.size()});
        values[p] = 0.5 * (1.0 + signs[cell] * amp * psi);
        coords[p] = x;
        for (int j = 0; j < d; ++j) {
            if (++idx[j] < points_per_axis) break;
            idx[j] = 0;
        }
    }
    double seminorm = 0.0;
    for (long p = 0; p < total; ++p) {
        for (long r = p + 1; r < total; ++r) {
            double dist2 = 0.0;
            for (int j = 0; j < d; ++j) {
                const double diff = coords[p][j] - coords[r][j];
                dist2 += diff * diff;
            }
            if (dist2 == 0.0) continue;
            const double ratio = std::abs(values[p] - values[r]) / std::pow(std::sqrt(dist2), beta);
            seminorm = std::max(seminorm, ratio);
        }
    }
    return seminorm;
}

} // namespace

FamilyReport verify_family(const LowerBoundFamily& fam, const MarginSpec& target,
                           const std::optional<HolderSpec>& holder) {
    FamilyReport report;
    report.warnings = fam.warnings;

    // eta range: analytic, since |phi_sigma| <= a everywhere.
    add_check(report, "eta_upper", 0.5 * (1.0 + fam.a), 0.75, 0.5 * (1.0 + fam.a) <= 0.75);
    add_check(report, "eta_lower", 0.25, 0.5 * (1.0 - fam.a), 0.25 <= 0.5 * (1.0 - fam.a));

    // Dense pointwise range check on the first code.
    {
        const int pts = fam.d == 1 ? 4096 : (fam.d == 2 ? 96 : 24);
        std::vector<long> idx(fam.d, 0);
        long total = 1;
        for (int j = 0; j < fam.d; ++j) total *= pts;
        double lo = 1.0, hi = 0.0;
        std::vector<double> x(fam.d);
        for (long p = 0; p < total; ++p) {
            for (int j = 0; j < fam.d; ++j) x[j] = static_cast<double>(idx[j]) / (pts - 1);
            const double v = fam.eta_sigma(0, Coords{x.data(), x.size()});
            lo = std::min(lo, v);
            hi = std::max(hi, v);
            for (int j = 0; j < fam.d; ++j) {
                if (++idx[j] < pts) break;
                idx[j] = 0;
            }
        }
        add_check(report, "eta_grid_range", lo, hi, lo >= 0.25 && hi <= 0.75);
    }

    // Code separation and pairwise bounds in one sweep.
    const long ncodes = fam.num_codes();
    int min_h = (ncodes > 1) ? static_cast<int>(fam.b) : 0;
    int max_h = 0;
    for (long i = 0; i < ncodes; ++i) {
        for (long j = i + 1; j < ncodes; ++j) {
            const int h = fam.hamming(static_cast<int>(i), static_cast<int>(j));
            min_h = std::min(min_h, h);
            max_h = std::max(max_h, h);
        }
    }
    const int required = static_cast<int>((fam.b + 7) / 8);
    add_check(report, "code_separation", static_cast<double>(min_h), static_cast<double>(required),
              ncodes <= 1 || min_h >= required);

    const double l2_max = static_cast<double>(max_h) * fam.w * fam.a * fam.a;
    const double l2_bound = fam.C * std::pow(fam.delta, (2.0 + fam.alpha) / (1.0 + fam.alpha));
    add_check(report, "pair_l2_bound", l2_max, l2_bound, l2_max <= l2_bound + 1e-12);

    const double l1_min = 2.0 * static_cast<double>(min_h) * fam.w;
    const double l1_bound = 0.25 * fam.C * std::pow(fam.delta, fam.alpha / (1.0 + fam.alpha));
    add_check(report, "pair_l1_separation", l1_min, l1_bound, ncodes <= 1 || l1_min >= l1_bound - 1e-12);

    // Margin condition with the construction's constant, against the target.
    const double family_C_M = fam.C * std::pow(2.0 / fam.c2, fam.alpha);
    add_check(report, "margin_constant", family_C_M, target.C_M, family_C_M <= target.C_M + 1e-12);
    {
        std::vector<double> t_grid(100);
        for (int i = 0; i < 100; ++i) t_grid[i] = (i + 1) / 101.0;
        const auto margin = check_margin_2_15(fam.distribution(0), target.alpha, target.C_M,
                                              std::span<const double>(t_grid));
        double worst_lhs = 0.0, worst_rhs = 0.0;
        for (const auto& c : margin.checks) {
            if (!c.pass || worst_rhs == 0.0) { worst_lhs = c.lhs; worst_rhs = c.rhs; }
        }
        add_check(report, "margin_2_15_grid", worst_lhs, worst_rhs, margin.verdict);
        for (const auto& warn : margin.warnings) report.warnings.push_back(warn);
    }

    if (holder) {
        if (holder->beta <= 1.0) {
            std::vector<std::int8_t> uniform(fam.b, 1);
            std::vector<std::int8_t> checker(fam.b);
            {
                std::vector<int> k(fam.d, 0);
                for (long cell = 0; cell < fam.b; ++cell) {
                    int parity = 0;
                    for (int j = 0; j < fam.d; ++j) parity += k[j];
                    checker[cell] = parity % 2 == 0 ? 1 : -1;
                    for (int j = 0; j < fam.d; ++j) {
                        if (++k[j] < fam.q) break;
                        k[j] = 0;
                    }
                }
            }
            const int pts = fam.d == 1 ? std::min<long>(2400L, 48L * fam.q) : 40;
            const double seminorm = std::max(grid_holder_seminorm(fam, uniform, holder->beta, pts),
                                             grid_holder_seminorm(fam, checker, holder->beta, pts));
            add_check(report, "holder_seminorm", seminorm, holder->L, seminorm <= holder->L);
        } else {
            // beta > 1: no seminorm check, only the scaling identity
            // L(psi) * q^beta * delta^{1/(1+alpha)} / 2 with a numeric Lipschitz
            // constant for the axis profile. Informational, never gating.
            double lip_psi = 0.0;
            const int pts = 4096;
            double prev = fam.c2 * BumpProfile::axis(0.0);
            for (int i = 1; i < pts; ++i) {
                const double v = static_cast<double>(i) / (pts - 1);
                const double cur = fam.c2 * BumpProfile::axis(v);
                lip_psi = std::max(lip_psi, std::abs(cur - prev) * (pts - 1));
                prev = cur;
            }
            const double scaling = 0.5 * std::pow(fam.delta, 1.0 / (1.0 + fam.alpha)) *
                                   std::pow(static_cast<double>(fam.q), holder->beta) * lip_psi;
            add_check(report, "holder_scaling_identity", scaling, holder->L, true);
        }
    }
    return report;
}

} // namespace acbound
